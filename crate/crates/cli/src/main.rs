use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use kappalift_cli::{run_text, Options, Outcome, Verb};

/// Exact Satake-level automorphic induction and base change, JSON in and out.
#[derive(Parser, Debug)]
#[command(name = "kappalift", version)]
struct Cli {
    verb: Verb,
    /// Input document; stdin when omitted.
    #[arg(short, long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = kappalift::verify::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = kappalift::verify::DEFAULT_CASES)]
    cases: usize,
    /// Suite for `verify`: arith, satake, hecke, reps, global or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = kappalift::hecke::DEFAULT_DEGREE_BUDGET)]
    degree_budget: u32,
    #[arg(long, default_value_t = kappalift::satake::DEFAULT_MAX_RANK)]
    max_rank: usize,
}

fn read_input(cli: &Cli) -> std::io::Result<String> {
    match &cli.input {
        Some(p) => std::fs::read_to_string(p),
        None if cli.verb == Verb::Verify => Ok(String::new()),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        seed: cli.seed,
        cases: cli.cases,
        suite: cli.suite.clone(),
        degree_budget: cli.degree_budget,
        max_rank: cli.max_rank,
    };
    let outcome = match read_input(&cli) {
        Ok(text) => run_text(cli.verb, &text, &opts),
        Err(e) => Outcome::malformed(format!("cannot read input: {e}")),
    };
    println!("{}", outcome.output);
    ExitCode::from(outcome.code as u8)
}
