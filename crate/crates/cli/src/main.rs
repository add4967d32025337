use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod source;

use commands::{Output, Status};

#[derive(Parser)]
#[command(name = "rauzy", version, about = "Rauzy graphs, schemes and evolution protocols of infinite words")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Print a prefix of the word.
    Word,
    /// Complexity and recurrence profiles, balance, periodicity and recurrence probes.
    Analyze,
    /// The Rauzy graph of order `--k0`.
    Graph,
    /// Build the scheme at the first clean order from `--k0` on and validate it.
    Scheme,
    /// Run the evolution protocol and look for a period.
    Protocol,
    /// Run the invariant suite over the built-in corpus.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Args, Clone, Debug)]
pub struct Options {
    /// Source file (morphism or `key = value` config) or `builtin:NAME`.
    #[arg(long, global = true)]
    pub source: Option<String>,

    /// Order of the Rauzy graph, or the smallest order tried for a scheme.
    #[arg(long, global = true, default_value_t = 1)]
    pub k0: usize,

    /// Evolution steps.
    #[arg(long, global = true, value_parser = positive)]
    pub steps: Option<usize>,

    /// Prefix length for `word`, longest factor length for `analyze`.
    #[arg(long, global = true, value_parser = positive)]
    pub horizon: Option<usize>,

    /// Longest symmetric path checked by the validator, in edges.
    #[arg(long, global = true, default_value_t = 6, value_parser = positive)]
    pub bound_paths: usize,

    /// Longest factor checked by the validator and the balance check.
    #[arg(long, global = true, default_value_t = 20, value_parser = positive)]
    pub bound_factors: usize,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory receiving one DOT file per protocol step.
    #[arg(long, global = true)]
    pub dump_dot: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let o = &cli.options;
    match cli.command {
        Command::Word => commands::word(o),
        Command::Analyze => commands::analyze(o),
        Command::Graph => commands::graph(o),
        Command::Scheme => commands::scheme(o),
        Command::Protocol => commands::protocol(o),
        Command::Verify => commands::verify(o),
    }
}

fn emit(out: &Option<PathBuf>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| emit(&cli.options.out, &o.body).map(|_| o.status));
    match result {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Undecided) => ExitCode::from(2),
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let horizon = e.chain().any(|c| c.downcast_ref::<rauzy_core::Error>().is_some_and(|e| e.is_horizon()));
            ExitCode::from(if horizon { 2 } else { 1 })
        }
    }
}
