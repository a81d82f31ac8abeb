//! `pmtopo`: batch front end emitting newline-delimited JSON reports.
//!
//! Exit status: 0 every check passed, 1 a violation was found, 2 a
//! precondition or construction was infeasible, 3 configuration error.

mod config;
mod ops;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pmtopo_core::{exit_code, Family, MutationKind, ReportRecord};

use crate::config::{resolve_budget, BudgetFlags, Config};
use crate::ops::Records;

const CONFIG_ERROR: u8 = 3;
const THREADS_ENV: &str = "PM_TOPOLOGY_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "pmtopo",
    version,
    about = "Sampled checks and witness constructions for probabilistic modular spaces"
)]
struct Cli {
    #[command(subcommand)]
    op: Op,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config with instance, budget, operation and params.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Vector draws for pointwise checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Evaluation grid as "min,max,count" (log spaced).
    #[arg(long = "t-grid", global = true)]
    t_grid: Option<String>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
}

#[derive(Subcommand, Debug, Clone)]
enum Op {
    /// PM1 to PM4.
    CheckAxioms,
    /// A declared Delta2 constant, or the smallest passing candidate.
    CheckDelta2,
    /// Beta-homogeneity.
    CheckHomogeneous,
    /// Continuity and strict monotonicity on the transition band.
    CheckUpsilon,
    /// The four ball identities plus balancedness and convexity.
    BallIdentities,
    /// Basis refinement, intersection and local base witnesses.
    WitnessRefine,
    /// Hausdorff separation witnesses.
    WitnessSeparate,
    /// Continuity witnesses for addition and scalar multiplication.
    WitnessContinuity,
    /// Sequence convergence by both criteria.
    CheckConvergence,
    /// Full predicate registry on given or generated instances.
    Falsify {
        /// Consecutive seeds to run from --seed.
        #[arg(long)]
        runs: Option<u64>,
        /// Restrict generated instances to one family.
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
        #[arg(long, value_parser = parse_mutation)]
        mutation: Option<MutationKind>,
    },
}

impl Op {
    fn name(&self) -> &'static str {
        match self {
            Op::CheckAxioms => "check-axioms",
            Op::CheckDelta2 => "check-delta2",
            Op::CheckHomogeneous => "check-homogeneous",
            Op::CheckUpsilon => "check-upsilon",
            Op::BallIdentities => "ball-identities",
            Op::WitnessRefine => "witness-refine",
            Op::WitnessSeparate => "witness-separate",
            Op::WitnessContinuity => "witness-continuity",
            Op::CheckConvergence => "check-convergence",
            Op::Falsify { .. } => "falsify",
        }
    }
}

fn parse_snake<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    parse_snake(s)
}

fn parse_mutation(s: &str) -> Result<MutationKind, String> {
    parse_snake(s)
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn execute(cli: Cli) -> Result<(Vec<ReportRecord>, Option<PathBuf>), String> {
    configure_threads()?;
    let op_name = cli.op.name();
    let mut config = match &cli.common.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(declared) = &config.operation {
        if declared != op_name {
            return Err(format!(
                "config operation '{declared}' does not match subcommand '{op_name}'"
            ));
        }
    }
    if let Op::Falsify {
        runs,
        family,
        mutation,
    } = &cli.op
    {
        config.params.runs = runs.or(config.params.runs);
        config.params.family = family.or(config.params.family);
        config.params.mutation = mutation.or(config.params.mutation);
    }
    let flags = BudgetFlags {
        seed: cli.common.seed,
        samples: cli.common.samples,
        t_grid: cli.common.t_grid.clone(),
        epsilon: cli.common.epsilon,
    };
    let budget = resolve_budget(&config, &flags)?;
    let out = cli.common.out.clone().or_else(|| config.out.clone());

    let mut rec = Records::new(op_name, &budget, config.instance.as_ref());
    let p = &config.params;
    match &cli.op {
        Op::Falsify { .. } => ops::falsify_op(&mut rec, &config, &budget)?,
        op => {
            let space = config.require_instance()?;
            match op {
                Op::CheckAxioms => ops::check_axioms_op(&mut rec, space, &budget)?,
                Op::CheckDelta2 => ops::check_delta2_op(&mut rec, space, p, &budget)?,
                Op::CheckHomogeneous => ops::check_homogeneous_op(&mut rec, space, p, &budget)?,
                Op::CheckUpsilon => ops::check_upsilon_op(&mut rec, space, p, &budget)?,
                Op::BallIdentities => ops::ball_identities_op(&mut rec, space, p, &budget)?,
                Op::WitnessRefine => ops::witness_refine_op(&mut rec, space, p, &budget)?,
                Op::WitnessSeparate => ops::witness_separate_op(&mut rec, space, p, &budget)?,
                Op::WitnessContinuity => ops::witness_continuity_op(&mut rec, space, p, &budget)?,
                Op::CheckConvergence => ops::check_convergence_op(&mut rec, space, p, &budget)?,
                Op::Falsify { .. } => unreachable!(),
            }
        }
    }
    Ok((rec.out, out))
}

fn write_report(records: &[ReportRecord], out: Option<&PathBuf>) -> Result<(), String> {
    let mut text = String::new();
    for r in records {
        text.push_str(&r.to_line());
        text.push('\n');
    }
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { CONFIG_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = execute(cli).and_then(|(records, out)| {
        write_report(&records, out.as_ref())?;
        Ok(records)
    });
    match result {
        Ok(records) => ExitCode::from(exit_code(&records) as u8),
        Err(msg) => {
            eprintln!("pmtopo: {msg}");
            ExitCode::from(CONFIG_ERROR)
        }
    }
}
