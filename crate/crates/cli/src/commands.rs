use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rauzy_core::analysis::{
    balance_check, complexity_profile, first_difference_bound, periodicity_probe, recurrence_exponent, special_factors,
    uniform_recurrence_probe, BalanceVerdict, ComplexityProfile, PeriodicityVerdict, RecurrenceProfile,
    SpecialFactorReport, UniformRecurrenceVerdict,
};
use rauzy_core::evolution::{detect_period, run_protocol, PeriodDetection, ProtocolStep, StepStats};
use rauzy_core::rauzy_graph::{build_rauzy_graph, path_of_word, to_dot, word_of_path, GraphReport, RauzyGraph};
use rauzy_core::scheme::{
    build_scheme_from_rauzy, find_clean_order, scheme_to_dot, validate_scheme, Scheme, ValidationBounds,
    ValidationReport, Verdict,
};
use rauzy_core::words::{factor_query, perron_estimate, FactorAnswer, FactorOracle, FactorQuery, Letter, WordSource};

use crate::source::{builtin, load};
use crate::{Format, Options};

/// How a command ended, mapped onto the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Undecided,
    Failed,
}

impl Status {
    fn worst(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (Undecided, _) | (_, Undecided) => Undecided,
            _ => Success,
        }
    }
}

pub struct Output {
    pub body: String,
    pub status: Status,
}

/// A sub-result that may be unavailable without failing the command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome<T> {
    Value(T),
    Undecided(String),
    Error(String),
}

impl<T> Outcome<T> {
    fn of(r: rauzy_core::Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Value(v),
            Err(e) if e.is_horizon() => Outcome::Undecided(e.to_string()),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }

    fn status(&self) -> Status {
        match self {
            Outcome::Value(_) => Status::Success,
            Outcome::Undecided(_) => Status::Undecided,
            Outcome::Error(_) => Status::Failed,
        }
    }

    fn value(&self) -> Option<&T> {
        match self {
            Outcome::Value(v) => Some(v),
            _ => None,
        }
    }
}

fn require_format(cmd: &str, f: Format, allowed: &[Format]) -> Result<()> {
    if !allowed.contains(&f) {
        let names: Vec<String> = allowed.iter().map(|a| a.to_string()).collect();
        bail!("`{cmd}` does not support --format {f}; use one of {}", names.join(", "));
    }
    Ok(())
}

fn open(opts: &Options) -> Result<(String, FactorOracle)> {
    let arg = opts.source.as_deref().context("--source is required")?;
    let oracle = FactorOracle::new(load(arg)?)?;
    Ok((arg.to_string(), oracle))
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordReport {
    pub schema: String,
    pub source: String,
    pub length: usize,
    pub word: String,
}

pub fn word(opts: &Options) -> Result<Output> {
    let format = opts.format.unwrap_or(Format::Text);
    require_format("word", format, &[Format::Text, Format::Json])?;
    let (source, mut oracle) = open(opts)?;
    let n = opts.horizon.unwrap_or(100);
    let w = oracle.prefix(n)?;
    let word = oracle.render(&w);
    let body = match format {
        Format::Json => json(&WordReport { schema: "rauzy.word/1".into(), source, length: n, word })?,
        _ => word + "\n",
    };
    Ok(Output { body, status: Status::Success })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub source: String,
    pub horizon: usize,
    pub complexity: Outcome<ComplexityProfile>,
    pub first_difference_bound: Option<u64>,
    pub recurrence: RecurrenceProfile,
    pub special_factors: Outcome<SpecialFactorReport>,
    pub balance: Outcome<BalanceVerdict>,
    pub periodicity: PeriodicityVerdict,
    pub uniform_recurrence: UniformRecurrenceVerdict,
    pub perron_eigenvalue: Option<f64>,
}

pub fn analyze(opts: &Options) -> Result<Output> {
    let format = opts.format.unwrap_or(Format::Json);
    require_format("analyze", format, &[Format::Json, Format::Csv, Format::Text])?;
    let (source, mut oracle) = open(opts)?;
    let horizon = opts.horizon.unwrap_or(50);
    let complexity = Outcome::of(complexity_profile(&mut oracle, horizon));
    let report = AnalysisReport {
        schema: "rauzy.analyze/1".into(),
        source,
        horizon,
        first_difference_bound: complexity.value().and_then(first_difference_bound),
        complexity,
        recurrence: recurrence_exponent(&mut oracle, horizon),
        special_factors: Outcome::of(special_factors(&mut oracle, opts.k0)),
        balance: Outcome::of(balance_check(&mut oracle, opts.bound_factors)),
        periodicity: periodicity_probe(&mut oracle, horizon),
        uniform_recurrence: uniform_recurrence_probe(&mut oracle, 8, 8),
        perron_eigenvalue: match oracle.source() {
            WordSource::PurelyMorphic { morphism, .. } | WordSource::Morphic { morphism, .. } => {
                perron_estimate(morphism, 1e-12).ok()
            }
            _ => None,
        },
    };
    let mut status = report.complexity.status().worst(report.balance.status());
    if matches!(report.periodicity, PeriodicityVerdict::Undecided { .. }) {
        status = status.worst(Status::Undecided);
    }
    let body = match format {
        Format::Csv => match &report.complexity {
            Outcome::Value(p) => p.to_csv(),
            Outcome::Undecided(m) | Outcome::Error(m) => bail!("complexity profile unavailable: {m}"),
        },
        Format::Text => analysis_text(&report, &oracle),
        _ => json(&report)?,
    };
    Ok(Output { body, status })
}

fn analysis_text(r: &AnalysisReport, oracle: &FactorOracle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "source: {}", r.source);
    match &r.complexity {
        Outcome::Value(p) => {
            let first: Vec<String> = (1..=p.max_length().min(12)).map(|n| p.p(n).to_string()).collect();
            let _ = writeln!(s, "complexity p(1..): {} ...", first.join(" "));
        }
        Outcome::Undecided(m) | Outcome::Error(m) => {
            let _ = writeln!(s, "complexity: unavailable ({m})");
        }
    }
    if let Some(d) = r.first_difference_bound {
        let _ = writeln!(s, "max first difference: {d}");
    }
    if let Some(x) = r.recurrence.max_ratio() {
        let _ = writeln!(s, "max P2(n)/n: {x:.3}");
    }
    if let Outcome::Value(b) = &r.balance {
        let _ = writeln!(s, "balanced: {}", b.is_balanced());
    }
    let per = match &r.periodicity {
        PeriodicityVerdict::Periodic { preperiod, period } => {
            format!("periodic, preperiod {preperiod}, period {period}")
        }
        PeriodicityVerdict::NotPeriodicUpTo { horizon } => format!("not periodic up to {horizon}"),
        PeriodicityVerdict::Undecided { reason } => format!("undecided ({reason})"),
    };
    let _ = writeln!(s, "periodicity: {per}");
    let ur = match &r.uniform_recurrence {
        UniformRecurrenceVerdict::UniformlyRecurrent { reason } => format!("uniformly recurrent ({reason})"),
        UniformRecurrenceVerdict::NotUniformlyRecurrent { witness, power } => {
            format!("not uniformly recurrent: ({})^{power} occurs", oracle.render(witness))
        }
        UniformRecurrenceVerdict::Undecided { reason } => format!("undecided ({reason})"),
    };
    let _ = writeln!(s, "uniform recurrence: {ur}");
    if let Some(l) = r.perron_eigenvalue {
        let _ = writeln!(s, "Perron eigenvalue: {l:.9}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphOutput {
    pub schema: String,
    pub source: String,
    pub graph: RauzyGraph,
    pub report: GraphReport,
}

pub fn graph(opts: &Options) -> Result<Output> {
    let format = opts.format.unwrap_or(Format::Json);
    require_format("graph", format, &[Format::Json, Format::Dot, Format::Text])?;
    let (source, mut oracle) = open(opts)?;
    let g = build_rauzy_graph(&mut oracle, opts.k0)?;
    let report = g.report();
    let body = match format {
        Format::Dot => to_dot(&g, oracle.alphabet()),
        Format::Text => format!(
            "order {}: {} vertices, {} edges, {} collecting, {} distributing, strongly connected: {}, cycle: {}\n",
            g.k,
            g.vertices.len(),
            g.edges.len(),
            report.collecting.len(),
            report.distributing.len(),
            report.strongly_connected,
            report.is_cycle
        ),
        _ => json(&GraphOutput { schema: "rauzy.graph/1".into(), source, graph: g, report })?,
    };
    Ok(Output { body, status: Status::Success })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeOutput {
    pub schema: String,
    pub source: String,
    pub requested_k: usize,
    pub k: usize,
    pub scheme: Scheme,
    pub validation: ValidationReport,
}

fn bounds(opts: &Options) -> ValidationBounds {
    ValidationBounds { max_path_edges: opts.bound_paths, max_factor_len: opts.bound_factors, ..Default::default() }
}

fn validation_status(r: &ValidationReport) -> Status {
    if !r.passed() {
        Status::Failed
    } else if !r.fully_verified() {
        Status::Undecided
    } else {
        Status::Success
    }
}

pub fn scheme(opts: &Options) -> Result<Output> {
    let format = opts.format.unwrap_or(Format::Json);
    require_format("scheme", format, &[Format::Json, Format::Dot, Format::Text])?;
    let (source, mut oracle) = open(opts)?;
    let k = find_clean_order(&mut oracle, opts.k0)?;
    if k != opts.k0 {
        eprintln!("note: order {} is not clean, using order {k}", opts.k0);
    }
    let s = build_scheme_from_rauzy(&mut oracle, k)?;
    let validation = validate_scheme(&s, &mut oracle, bounds(opts));
    let status = validation_status(&validation);
    let body = match format {
        Format::Dot => scheme_to_dot(&s, &oracle),
        Format::Text => {
            let mut t = format!("order {k}: {} vertices, {} edges\n", s.vertex_count(), s.edge_count());
            for p in &validation.properties {
                let v = match &p.verdict {
                    Verdict::Pass => "pass".to_string(),
                    Verdict::Fail(m) => format!("FAIL: {m}"),
                    Verdict::Unverified(m) => format!("unverified: {m}"),
                };
                let _ = writeln!(t, "property {}: {v}", p.property);
            }
            t
        }
        _ => json(&SchemeOutput {
            schema: "rauzy.scheme/1".into(),
            source,
            requested_k: opts.k0,
            k,
            scheme: s,
            validation,
        })?,
    };
    Ok(Output { body, status })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOutput {
    pub schema: String,
    pub source: String,
    pub requested_k: usize,
    pub k: usize,
    pub requested_steps: usize,
    pub steps: Vec<ProtocolStep>,
    pub stats: Vec<StepStats>,
    pub distinct_entries: usize,
    pub period: Option<PeriodDetection>,
    pub stopped_early: Option<String>,
}

pub fn protocol(opts: &Options) -> Result<Output> {
    let format = opts.format.unwrap_or(Format::Json);
    require_format("protocol", format, &[Format::Json, Format::Csv])?;
    let (source, mut oracle) = open(opts)?;
    let steps = opts.steps.unwrap_or(40);
    let p = run_protocol(&mut oracle, opts.k0, steps);
    let Some(k) = p.k else {
        return Err(p.error.map(anyhow::Error::from).unwrap_or_else(|| anyhow::anyhow!("no scheme was built")));
    };
    if let Some(dir) = &opts.dump_dot {
        dump_dot(dir, &p.schemes, &oracle)?;
    }
    let period = detect_period(&p.entries, 3);
    let mut status = if period.is_some() { Status::Success } else { Status::Undecided };
    if let Some(e) = &p.error {
        if !e.is_horizon() {
            status = Status::Failed;
        }
        eprintln!("note: protocol stopped after {} steps: {e}", p.entries.len());
    }
    let body = match format {
        Format::Csv => {
            let mut s = String::from("step,support_edge,scale,vertices,edges,max_word,rejected_pairs\n");
            for (i, (e, st)) in p.entries.iter().zip(&p.stats).enumerate() {
                let rej: Vec<String> = e.rejected_pairs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                let _ = writeln!(
                    s,
                    "{i},{},{},{},{},{},{}",
                    e.support_edge,
                    st.scale,
                    st.vertices,
                    st.edges,
                    st.max_word,
                    rej.join(" ")
                );
            }
            s
        }
        _ => json(&ProtocolOutput {
            schema: "rauzy.protocol/1".into(),
            source,
            requested_k: opts.k0,
            k,
            requested_steps: steps,
            steps: p.steps(),
            stats: p.stats.clone(),
            distinct_entries: p.distinct_entries(p.entries.len()),
            period,
            stopped_early: p.error.as_ref().map(|e| e.to_string()),
        })?,
    };
    Ok(Output { body, status })
}

fn dump_dot(dir: &Path, schemes: &[Scheme], oracle: &FactorOracle) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (i, s) in schemes.iter().enumerate() {
        let path = dir.join(format!("step_{i:03}.dot"));
        std::fs::write(&path, scheme_to_dot(s, oracle)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub source: String,
    pub check: String,
    pub verdict: CheckVerdict,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub schema: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Expect {
    /// Uniformly recurrent and aperiodic: schemes are built and validated.
    Scheme,
    /// Periodic: scheme construction must refuse.
    Refused,
    /// Not uniformly recurrent: only the probes apply.
    Probes,
}

const CORPUS: &[(&str, Expect)] = &[
    ("fibonacci", Expect::Scheme),
    ("tribonacci", Expect::Scheme),
    ("thue-morse", Expect::Scheme),
    ("sturmian-golden", Expect::Scheme),
    ("sturmian-thue-morse", Expect::Scheme),
    ("periodic-ab", Expect::Refused),
    ("ab-b", Expect::Probes),
];

pub fn verify(opts: &Options) -> Result<Output> {
    let format = opts.format.unwrap_or(Format::Text);
    require_format("verify", format, &[Format::Json, Format::Text])?;
    let steps = opts.steps.unwrap_or(8);
    let mut checks = Vec::new();
    for &(name, expect) in CORPUS {
        let mut oracle = FactorOracle::new(builtin(name)?)?;
        let mut push = |check: &str, r: rauzy_core::Result<(bool, String)>| {
            let (verdict, detail) = match r {
                Ok((true, d)) => (CheckVerdict::Pass, d),
                Ok((false, d)) => (CheckVerdict::Fail, d),
                Err(e) if e.is_horizon() => (CheckVerdict::Undecided, e.to_string()),
                Err(e) => (CheckVerdict::Fail, e.to_string()),
            };
            checks.push(CheckResult { source: name.into(), check: check.into(), verdict, detail });
        };
        if expect == Expect::Probes {
            push("probes", non_recurrent_probes(&mut oracle));
            continue;
        }
        push("oracle-equivalence", oracle_equivalence(&mut oracle, opts.seed, 200));
        push("path-round-trip", path_round_trip(&mut oracle));
        if name.starts_with("sturmian") {
            push("sturmian-complexity", sturmian_complexity(&mut oracle, 30));
        }
        match expect {
            Expect::Scheme => push("scheme-validation", scheme_validation(&mut oracle, steps, bounds(opts))),
            _ => push("scheme-refused", scheme_refused(&mut oracle)),
        }
    }
    let status = checks.iter().fold(Status::Success, |acc, c| {
        acc.worst(match c.verdict {
            CheckVerdict::Pass => Status::Success,
            CheckVerdict::Fail => Status::Failed,
            CheckVerdict::Undecided => Status::Undecided,
        })
    });
    let body = match format {
        Format::Json => json(&VerifyOutput { schema: "rauzy.verify/1".into(), seed: opts.seed, checks })?,
        _ => {
            let mut s = String::new();
            for c in &checks {
                let tag = match c.verdict {
                    CheckVerdict::Pass => "PASS",
                    CheckVerdict::Fail => "FAIL",
                    CheckVerdict::Undecided => "UNDECIDED",
                };
                let _ = writeln!(s, "{tag} {} {}: {}", c.source, c.check, c.detail);
            }
            s
        }
    };
    Ok(Output { body, status })
}

/// Random factors of the buffer plus random words, checked against a plain scan.
fn oracle_equivalence(oracle: &mut FactorOracle, seed: u64, samples: usize) -> rauzy_core::Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len_max = 12usize;
    let buffer = oracle.prefix(4096)?;
    let sigma = oracle.alphabet().len() as u8;
    for i in 0..samples {
        let len = rng.gen_range(1..=len_max);
        let u: Vec<Letter> = if i % 2 == 0 {
            let p = rng.gen_range(0..buffer.len() - len);
            buffer[p..p + len].to_vec()
        } else {
            (0..len).map(|_| rng.gen_range(0..sigma)).collect()
        };
        let FactorAnswer::Member(fast) = factor_query(oracle, &u, FactorQuery::Membership)? else {
            return Ok((false, "membership query returned a count".into()));
        };
        let horizon = oracle.prefix_certificate(len)?.unwrap_or(buffer.len() as u64) as usize;
        let scan = oracle.prefix(horizon)?;
        let slow = scan.windows(len).any(|w| w == u.as_slice());
        if fast != slow {
            return Ok((false, format!("disagreement on {}", oracle.render(&u))));
        }
    }
    Ok((true, format!("{samples} queries agree")))
}

fn path_round_trip(oracle: &mut FactorOracle) -> rauzy_core::Result<(bool, String)> {
    let mut checked = 0usize;
    for k in 1..=4 {
        let g = build_rauzy_graph(oracle, k)?;
        for len in k..=k + 6 {
            for w in oracle.factor_set(len)?.iter() {
                let p = path_of_word(&g, w)?;
                if &word_of_path(&g, &p)? != w {
                    return Ok((false, format!("order {k}: {} does not round-trip", oracle.render(w))));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} factors round-trip at orders 1..4")))
}

fn sturmian_complexity(oracle: &mut FactorOracle, n: usize) -> rauzy_core::Result<(bool, String)> {
    let p = complexity_profile(oracle, n)?;
    match (1..=n).find(|&i| p.p(i) != i as u64 + 1) {
        Some(i) => Ok((false, format!("p({i}) = {}", p.p(i)))),
        None => Ok((true, format!("p(n) = n + 1 for n <= {n}"))),
    }
}

fn scheme_validation(
    oracle: &mut FactorOracle,
    steps: usize,
    b: ValidationBounds,
) -> rauzy_core::Result<(bool, String)> {
    let p = run_protocol(oracle, 1, steps);
    if let Some(e) = p.error {
        return Err(e);
    }
    let mut unverified = 0usize;
    for (i, s) in p.schemes.iter().enumerate() {
        let r = validate_scheme(s, oracle, b);
        if let Some(f) = r.failures().first() {
            return Ok((false, format!("step {i}, property {}: {:?}", f.property, f.verdict)));
        }
        if !r.fully_verified() {
            unverified += 1;
        }
    }
    Ok((true, format!("{} schemes validated, {unverified} with unverified properties", p.schemes.len())))
}

fn non_recurrent_probes(oracle: &mut FactorOracle) -> rauzy_core::Result<(bool, String)> {
    let ur = uniform_recurrence_probe(oracle, 8, 4);
    let per = periodicity_probe(oracle, 200);
    let ok = matches!(ur, UniformRecurrenceVerdict::NotUniformlyRecurrent { .. })
        && matches!(per, PeriodicityVerdict::Periodic { .. });
    Ok((ok, format!("{ur:?}; {per:?}")))
}

fn scheme_refused(oracle: &mut FactorOracle) -> rauzy_core::Result<(bool, String)> {
    match find_clean_order(oracle, 1).and_then(|k| build_scheme_from_rauzy(oracle, k)) {
        Ok(_) => Ok((false, "a scheme was built for a word that is not uniformly recurrent".into())),
        Err(e) => Ok((true, format!("construction refused: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use serde::de::DeserializeOwned;

    use super::*;

    fn opts(source: &str) -> Options {
        Options {
            source: Some(source.into()),
            k0: 1,
            steps: Some(6),
            horizon: Some(20),
            bound_paths: 6,
            bound_factors: 20,
            format: Some(Format::Json),
            out: None,
            seed: 3,
            dump_dot: None,
        }
    }

    fn fixpoint<T: Serialize + DeserializeOwned>(body: &str) {
        let parsed: T = serde_json::from_str(body).unwrap();
        assert_eq!(json(&parsed).unwrap(), body);
    }

    #[test]
    fn json_outputs_round_trip() {
        let o = opts("builtin:fibonacci");
        fixpoint::<WordReport>(&word(&o).unwrap().body);
        fixpoint::<AnalysisReport>(&analyze(&o).unwrap().body);
        fixpoint::<GraphOutput>(&graph(&o).unwrap().body);
        fixpoint::<SchemeOutput>(&scheme(&o).unwrap().body);
        fixpoint::<ProtocolOutput>(&protocol(&o).unwrap().body);
        let mut v = opts("builtin:fibonacci");
        v.steps = Some(2);
        fixpoint::<VerifyOutput>(&verify(&v).unwrap().body);
        fixpoint::<AnalysisReport>(&analyze(&opts("builtin:sturmian-champernowne")).unwrap().body);
    }

    #[test]
    fn worst_status_wins() {
        assert_eq!(Status::Success.worst(Status::Undecided), Status::Undecided);
        assert_eq!(Status::Undecided.worst(Status::Failed), Status::Failed);
        assert_eq!(Status::Success.worst(Status::Success), Status::Success);
    }
}
