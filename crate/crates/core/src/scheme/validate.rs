use std::collections::{BTreeSet, HashMap, HashSet};

use memchr::memmem;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::hash::Hashed;
use crate::words::oracle::count_overlapping;
use crate::words::{FactorOracle, Letter, Rope, Word};

use super::model::Scheme;
use super::paths::{back, count_subpath, front, path_word, path_words, symmetric_closure, symmetric_paths, SchemePath};
use super::trace::{trace, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationBounds {
    /// Longest symmetric path checked, in edges.
    pub max_path_edges: usize,
    /// Longest factor checked.
    pub max_factor_len: usize,
    /// Longest word materialized.
    pub word_budget: u64,
}

impl Default for ValidationBounds {
    fn default() -> Self {
        ValidationBounds { max_path_edges: 6, max_factor_len: 20, word_budget: 1 << 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail(String),
    Unverified(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub property: u8,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub bounds: ValidationBounds,
    pub properties: Vec<PropertyResult>,
}

impl ValidationReport {
    /// No property failed.
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| !matches!(p.verdict, Verdict::Fail(_)))
    }

    /// Every property passed.
    pub fn fully_verified(&self) -> bool {
        self.properties.iter().all(|p| p.verdict == Verdict::Pass)
    }

    pub fn verdict(&self, property: u8) -> &Verdict {
        &self.properties[property as usize - 1].verdict
    }

    pub fn failures(&self) -> Vec<&PropertyResult> {
        self.properties.iter().filter(|p| matches!(p.verdict, Verdict::Fail(_))).collect()
    }
}

/// Total letters the validator will materialize across all paths.
const TOTAL_BUDGET_FACTOR: u64 = 64;

struct Ctx<'a> {
    s: &'a Scheme,
    oracle: &'a mut FactorOracle,
    bounds: ValidationBounds,
    paths: Vec<SchemePath>,
    trace: std::result::Result<Trace, Error>,
    words: HashMap<SchemePath, Option<Word>>,
    spent: u64,
}

impl Ctx<'_> {
    fn word(&mut self, path: &SchemePath) -> Option<Word> {
        if let Some(w) = self.words.get(path) {
            return w.clone();
        }
        let r = path_word(self.s, path);
        let fits =
            r.len() <= self.bounds.word_budget && self.spent + r.len() <= self.bounds.word_budget * TOTAL_BUDGET_FACTOR;
        let w = if fits { self.oracle.materialize_rope(&r, self.bounds.word_budget).ok() } else { None };
        if let Some(w) = &w {
            self.spent += w.len() as u64;
        }
        self.words.insert(path.clone(), w.clone());
        w
    }
}

/// Bounded check of the seven scheme properties against the word.
pub fn validate_scheme(s: &Scheme, oracle: &mut FactorOracle, bounds: ValidationBounds) -> ValidationReport {
    let paths = symmetric_paths(s, bounds.max_path_edges);
    let longest = paths.iter().map(|p| path_word(s, p).len()).max().unwrap_or(0);
    let longest_edge = s.edges().iter().map(|e| e.word.len).max().unwrap_or(0);
    let need = longest.max(bounds.max_factor_len as u64).max(2 * longest_edge);
    let trace = match oracle.window_certificate(need as usize) {
        Ok(Some(wc)) => trace(s, oracle, wc.saturating_mul(2).saturating_add(4 * longest_edge)),
        Ok(None) => Err(Error::HorizonExceeded { needed: u64::MAX, cap: oracle.config().position_cap }),
        Err(e) => Err(e),
    };
    let mut ctx = Ctx { s, oracle, bounds, paths, trace, words: HashMap::new(), spent: 0 };
    let properties = vec![
        PropertyResult { property: 1, verdict: property1(&ctx) },
        PropertyResult { property: 2, verdict: property2(&mut ctx) },
        PropertyResult { property: 3, verdict: property3(&mut ctx) },
        PropertyResult { property: 4, verdict: property4(&mut ctx) },
        PropertyResult { property: 5, verdict: property5(&mut ctx) },
        PropertyResult { property: 6, verdict: property6(&mut ctx) },
        PropertyResult { property: 7, verdict: property7(&mut ctx) },
    ];
    ValidationReport { bounds, properties }
}

fn property1(ctx: &Ctx) -> Verdict {
    let s = ctx.s;
    if s.edge_count() < 2 {
        return Verdict::Fail("fewer than two edges".into());
    }
    if !s.is_strongly_connected() {
        return Verdict::Fail("not strongly connected".into());
    }
    match s.check_degrees() {
        Ok(()) => Verdict::Pass,
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

fn property2(ctx: &mut Ctx) -> Verdict {
    let s = ctx.s;
    let mut unverified = None;
    for v in 0..s.vertex_count() {
        let distributing = s.is_distributing(v);
        let edges = if distributing { s.out_edges(v) } else { s.in_edges(v) };
        let mut seen = BTreeSet::new();
        for &n in edges {
            let r = if distributing { front(s, n) } else { back(s, n) };
            let r = match r {
                Ok(r) => r,
                Err(e) => return Verdict::Fail(format!("vertex {v}: {e}")),
            };
            if r.is_empty() {
                return Verdict::Fail(format!("vertex {v}: edge {n} has an empty word"));
            }
            let at = if distributing { 0 } else { r.len() - 1 };
            match ctx.oracle.rope_letter(&r, at) {
                Ok(l) => {
                    if !seen.insert(l) {
                        let side = if distributing { "first letters of fronts" } else { "last letters of backs" };
                        return Verdict::Fail(format!("vertex {v}: repeated {side}"));
                    }
                }
                Err(e) => unverified = Some(e.to_string()),
            }
        }
    }
    unverified.map_or(Verdict::Pass, Verdict::Unverified)
}

fn property3(ctx: &mut Ctx) -> Verdict {
    let mut unverified = None;
    for p in &ctx.paths {
        let (f, b) = match path_words(ctx.s, p) {
            Ok(fb) => fb,
            Err(e) => return Verdict::Fail(e.to_string()),
        };
        if f.len() != b.len() {
            return Verdict::Fail(format!("path {p:?}: front and back lengths differ"));
        }
        match (ctx.oracle.hash_rope(&f), ctx.oracle.hash_rope(&b)) {
            (Ok(hf), Ok(hb)) if hf != hb => return Verdict::Fail(format!("path {p:?}: front and back words differ")),
            (Ok(_), Ok(_)) => {}
            (Err(e), _) | (_, Err(e)) => unverified = Some(e.to_string()),
        }
    }
    unverified.map_or(Verdict::Pass, Verdict::Unverified)
}

fn property4(ctx: &mut Ctx) -> Verdict {
    let paths = ctx.paths.clone();
    let words: Vec<Option<Word>> = paths.iter().map(|p| ctx.word(p)).collect();
    let mut skipped = 0usize;
    for (i, p1) in paths.iter().enumerate() {
        for (j, p2) in paths.iter().enumerate() {
            let (Some(w1), Some(w2)) = (&words[i], &words[j]) else {
                skipped += 1;
                continue;
            };
            if w1.len() > w2.len() {
                continue;
            }
            let by_word = count_overlapping(w2, w1);
            let by_path = count_subpath(p1, p2);
            if by_word > by_path {
                return Verdict::Fail(format!(
                    "front of {p1:?} occurs {by_word} times in front of {p2:?}, the path only {by_path} times"
                ));
            }
        }
    }
    if skipped > 0 {
        Verdict::Unverified(format!("{skipped} path pairs exceed the word budget"))
    } else {
        Verdict::Pass
    }
}

/// Whether a rope is a factor: by hash at a known occurrence, else by search.
fn rope_is_factor(ctx: &mut Ctx, r: &Rope, hint: Option<u64>) -> Result<Option<bool>> {
    let h = ctx.oracle.hash_rope(r)?;
    if let Some(pos) = hint {
        if ctx.oracle.hash(crate::words::Factor::new(pos, r.len()))? == h {
            return Ok(Some(true));
        }
    }
    if r.len() <= ctx.bounds.word_budget && ctx.oracle.prefix_certificate(r.len() as usize)?.is_some() {
        let w = ctx.oracle.materialize_rope(r, ctx.bounds.word_budget)?;
        return ctx.oracle.contains(&w).map(Some);
    }
    Ok(None)
}

fn property5(ctx: &mut Ctx) -> Verdict {
    let s = ctx.s;
    let visits = ctx.trace.as_ref().map(|t| t.visits.clone()).unwrap_or_default();
    let first_visit = |n: u32, back_steps: usize| {
        visits
            .iter()
            .enumerate()
            .find(|(i, v)| v.edge == n && *i >= back_steps)
            .map(|(i, _)| visits[i - back_steps].pos)
    };
    let mut unverified = None;
    for e in s.edges() {
        let n = e.number;
        let (f, b) = match (front(s, n), back(s, n)) {
            (Ok(f), Ok(b)) => (f, b),
            (Err(err), _) | (_, Err(err)) => return Verdict::Fail(err.to_string()),
        };
        let front_hint = first_visit(n, 0).map(|p| if s.is_distributing(e.tail) { p + s.label(e.tail).len } else { p });
        let back_len = super::paths::natural_extension(s, &[n], crate::rauzy_graph::Direction::Left)
            .map(|x| x.len() - 1)
            .unwrap_or(0);
        let back_hint = first_visit(n, back_len);
        for (what, r, hint) in [("front", &f, front_hint), ("back", &b, back_hint)] {
            match rope_is_factor(ctx, r, hint) {
                Ok(Some(true)) => {}
                Ok(Some(false)) => return Verdict::Fail(format!("{what} word of edge {n} is not a factor")),
                Ok(None) => unverified = Some(format!("{what} word of edge {n} could not be checked")),
                Err(err) => unverified = Some(err.to_string()),
            }
        }
    }
    unverified.map_or(Verdict::Pass, Verdict::Unverified)
}

fn property6(ctx: &mut Ctx) -> Verdict {
    let m = ctx.bounds.max_factor_len;
    let t = match &ctx.trace {
        Ok(t) => t.clone(),
        Err(e @ Error::TraceMismatch(_)) => return Verdict::Fail(e.to_string()),
        Err(e) => return Verdict::Unverified(e.to_string()),
    };
    let s = ctx.s;
    let wc = match ctx.oracle.window_certificate(m) {
        Ok(Some(wc)) => wc,
        Ok(None) => return Verdict::Unverified("no window certificate".into()),
        Err(e) => return Verdict::Unverified(e.to_string()),
    };
    let factors = match ctx.oracle.factor_set(m) {
        Ok(f) => f,
        Err(e) => return Verdict::Unverified(e.to_string()),
    };
    // occurrences are located after the first visit to a collecting vertex
    let Some(i0) = t.visits.iter().position(|v| s.is_collecting(s.e(v.edge).tail)) else {
        return Verdict::Fail("trace never visits a collecting vertex".into());
    };
    let r0 = t.visits[i0].pos;
    if wc + m as u64 > ctx.bounds.word_budget {
        return Verdict::Unverified("factor window exceeds the word budget".into());
    }
    let region = match ctx.oracle.materialize(crate::words::Factor::new(r0, wc + m as u64)) {
        Ok(w) => w,
        Err(e) => return Verdict::Unverified(e.to_string()),
    };
    for u in factors.iter() {
        let Some(off) = memmem::find(&region, u) else {
            return Verdict::Unverified("factor missing from the certified window".into());
        };
        let p = r0 + off as u64;
        let mut i = match t.visits.iter().rposition(|v| v.pos <= p) {
            Some(i) => i,
            None => return Verdict::Fail("occurrence before the trace".into()),
        };
        while !s.is_collecting(s.e(t.visits[i].edge).tail) {
            if i == 0 {
                return Verdict::Unverified("trace too short on the left".into());
            }
            i -= 1;
        }
        let mut j = i;
        loop {
            let v = t.visits[j];
            let e = s.e(v.edge);
            if v.pos + e.word.len >= p + m as u64 && s.is_distributing(e.head) {
                break;
            }
            j += 1;
            if j >= t.visits.len() {
                return Verdict::Unverified("trace too short on the right".into());
            }
        }
        let path: Vec<u32> = t.visits[i..=j].iter().map(|v| v.edge).collect();
        let f = path_word(s, &path);
        let off = p - t.visits[i].pos;
        let piece = f.slice(off, m as u64);
        match ctx.oracle.hash_rope(&piece) {
            Ok(h) if h == Hashed::of_letters(u) => {}
            Ok(_) => return Verdict::Fail(format!("factor at {p} is not inside the front word of {path:?}")),
            Err(e) => return Verdict::Unverified(e.to_string()),
        }
    }
    Verdict::Pass
}

fn property7(ctx: &mut Ctx) -> Verdict {
    let s = ctx.s;
    let observed = match &ctx.trace {
        Ok(t) => t.observed_paths(ctx.bounds.max_path_edges),
        Err(e) => return Verdict::Unverified(e.to_string()),
    };
    let admissible: Vec<SchemePath> = ctx.paths.iter().filter(|p| observed.contains(*p)).cloned().collect();
    let mut words: Vec<(SchemePath, Word)> = Vec::new();
    let mut incomplete = false;
    for p in &admissible {
        match ctx.word(p) {
            Some(w) => words.push((p.clone(), w)),
            None => incomplete = true,
        }
    }
    words.sort_by_key(|(_, w)| w.len());
    let mut missing = Vec::new();
    for e in s.edges() {
        let n = e.number;
        let closure = match symmetric_closure(s, n) {
            Ok(c) => c,
            Err(err) => return Verdict::Fail(err.to_string()),
        };
        let Some(cw) = ctx.word(&closure) else {
            missing.push(n);
            continue;
        };
        let avoids =
            |u: &[Letter]| words.iter().filter(|(p, _)| !p.contains(&n)).all(|(_, w)| memmem::find(w, u).is_none());
        let found = (1..=ctx.bounds.max_factor_len.min(cw.len())).any(|len| {
            let cands: HashSet<&[Letter]> = cw.windows(len).collect();
            let mut cands: Vec<&[Letter]> = cands.into_iter().collect();
            cands.sort_unstable();
            cands.into_iter().any(avoids)
        }) || avoids(&cw);
        if !found {
            missing.push(n);
        }
    }
    if !missing.is_empty() {
        Verdict::Unverified(format!("no distinguishing factor within the bound for edges {missing:?}"))
    } else if incomplete {
        Verdict::Unverified("some admissible paths exceed the word budget".into())
    } else {
        Verdict::Pass
    }
}
