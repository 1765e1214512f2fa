//! Command-line front end.
//!
//! Five subcommands: `enumerate` lists symmetric strategies, `payoff`
//! evaluates one matchup, `matrix` builds and saves a payoff matrix, `solve`
//! computes an equilibrium, `bench` sweeps game sizes and emits CSV timings.
//!
//! Exit codes are a stable contract: 0 success, 2 usage problems, 3
//! computation failures (non-convergence, oversized builds, broken files).

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::matrix::{build_matrix, PayoffMatrix};
use crate::model::{
    enumerate_symmetric_strategies, AggregationKind, GameSpec, MixedStrategy, SymmetricStrategy,
};
use crate::oracle::{naive_payoff, NAIVE_PAYOFF_MAX_N};
use crate::solver::{
    solve_doa, solve_doa_with, solve_lp, solve_mwu, DoaOptions, Equilibrium, SolveError,
};

const EXIT_USAGE: i32 = 2;
const EXIT_COMPUTATION: i32 = 3;

/// Parses `std::env::args` and runs one command, returning the process exit
/// code. The one-line `main` calls this and exits with the result.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap already uses 0 for --help/--version and 2 for misuse.
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        // Only fails if a pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let result = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Payoff(args) => cmd_payoff(args),
        Command::Matrix(args) => cmd_matrix(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            EXIT_USAGE
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            EXIT_COMPUTATION
        }
    }
}

#[derive(Parser)]
#[command(
    name = "battlefields",
    version,
    about = "Exact payoffs and equilibria for discrete resource-allocation games",
    propagate_version = true
)]
struct Cli {
    /// Cap the worker threads used by parallel scans (default: all cores)
    #[arg(long, global = true, value_name = "COUNT")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every symmetric strategy for one budget
    Enumerate(EnumerateArgs),
    /// Exact expected payoff of one strategy pair
    Payoff(PayoffArgs),
    /// Build the full payoff matrix and save it to a file
    Matrix(MatrixArgs),
    /// Compute an equilibrium and print a JSON report
    Solve(SolveArgs),
    /// Sweep game sizes and print CSV timings
    Bench(BenchArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Budget to split across battlefields
    #[arg(long)]
    d: u32,
    /// Number of battlefields (at least 2)
    #[arg(long)]
    n: usize,
    /// Output format
    #[arg(long, value_enum, default_value_t = ListFormat::Plain)]
    format: ListFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Plain,
    Json,
}

#[derive(Args)]
struct PayoffArgs {
    /// First player's assignment, comma-separated (sorted if needed)
    #[arg(long)]
    a: String,
    /// Second player's assignment, comma-separated (sorted if needed)
    #[arg(long)]
    b: String,
    /// Aggregation rule: blotto, mto, or majoritarian
    #[arg(long)]
    agg: AggregationKind,
    /// Cross-check the result against brute-force permutation counting
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct MatrixArgs {
    /// First player's budget
    #[arg(long)]
    da: u32,
    /// Second player's budget
    #[arg(long)]
    db: u32,
    /// Number of battlefields
    #[arg(long)]
    n: usize,
    /// Aggregation rule: blotto, mto, or majoritarian
    #[arg(long)]
    agg: AggregationKind,
    /// Output file
    #[arg(short, long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lp,
    Doa,
    Mwu,
}

#[derive(Args)]
struct SolveArgs {
    /// First player's budget
    #[arg(long, required_unless_present = "matrix", conflicts_with = "matrix")]
    da: Option<u32>,
    /// Second player's budget
    #[arg(long, required_unless_present = "matrix", conflicts_with = "matrix")]
    db: Option<u32>,
    /// Number of battlefields
    #[arg(long, required_unless_present = "matrix", conflicts_with = "matrix")]
    n: Option<usize>,
    /// Aggregation rule: blotto, mto, or majoritarian
    #[arg(long, required_unless_present = "matrix", conflicts_with = "matrix")]
    agg: Option<AggregationKind>,
    /// Load a previously saved matrix instead of building one
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
    /// Solution method
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Convergence / certificate tolerance (lp and doa)
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Prune best-response scans by the tallest-assignment bound (doa)
    #[arg(long)]
    heuristic: bool,
    /// Iteration cap (doa); default scales with the game size
    #[arg(long, value_name = "COUNT")]
    max_iterations: Option<u64>,
    /// Weight decay multiplier in (0, 0.5] (mwu)
    #[arg(long, required_if_eq("method", "mwu"))]
    phi: Option<f64>,
    /// Update steps to run (mwu)
    #[arg(long, required_if_eq("method", "mwu"))]
    steps: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Smallest battlefield count
    #[arg(long)]
    n_min: usize,
    /// Largest battlefield count
    #[arg(long)]
    n_max: usize,
    /// Budget excess over n: both players spend d = n + offset
    #[arg(long, allow_negative_numbers = true)]
    offset: i64,
    /// Aggregation rule: blotto, mto, or majoritarian
    #[arg(long)]
    agg: AggregationKind,
    /// Per-stage budget in seconds; a stage that overruns it is marked
    /// "timeout" and skipped on later rows (stages are never interrupted
    /// mid-flight)
    #[arg(long, default_value_t = 10.0)]
    timeout_secs: f64,
    /// Write the CSV here instead of stdout
    #[arg(short, long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Computation(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

// Library errors surfacing mid-command are computation failures; argument
// digestion has already happened by then.
fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), CliError> {
    if args.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let strategies = enumerate_symmetric_strategies(args.d, args.n);
    match args.format {
        ListFormat::Plain => {
            let mut out = String::new();
            for s in &strategies {
                let _ = writeln!(out, "{s}");
            }
            let _ = writeln!(out, "count: {}", strategies.len());
            print!("{out}");
        }
        ListFormat::Json => {
            let doc = serde_json::json!({
                "d": args.d,
                "n": args.n,
                "count": strategies.len(),
                "strategies": strategies.iter().map(|s| s.parts().to_vec()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("plain data"));
        }
    }
    Ok(())
}

// Comma-separated u32 list; `label` names the flag in diagnostics.
fn parse_assignment(raw: &str, label: &str) -> Result<Vec<u32>, CliError> {
    let parts: Result<Vec<u32>, _> = raw.split(',').map(|p| p.trim().parse::<u32>()).collect();
    match parts {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(usage(format!(
            "--{label} expects comma-separated non-negative integers, got {raw:?}"
        ))),
    }
}

// Symmetric strategies ignore ordering, so unsorted input is accepted but
// flagged on stderr rather than rejected.
fn canonical_strategy(raw: &str, label: &str) -> Result<SymmetricStrategy, CliError> {
    let parts = parse_assignment(raw, label)?;
    let strategy = SymmetricStrategy::from_unsorted(parts.clone()).map_err(computation)?;
    if strategy.parts() != parts.as_slice() {
        eprintln!("note: --{label} reordered to {strategy}");
    }
    Ok(strategy)
}

fn cmd_payoff(args: PayoffArgs) -> Result<(), CliError> {
    let a = canonical_strategy(&args.a, "a")?;
    let b = canonical_strategy(&args.b, "b")?;
    if a.n() != b.n() {
        return Err(usage(format!(
            "assignments must have the same length, got {} and {}",
            a.n(),
            b.n()
        )));
    }
    if a.n() < 2 {
        return Err(usage("assignments need at least 2 battlefields"));
    }
    let value = crate::clash::payoff(&a, &b, args.agg).map_err(computation)?;
    let approx = num_traits::ToPrimitive::to_f64(&value).expect("payoff fits in f64");
    println!("{}/{} ({:?})", value.numer(), value.denom(), approx);
    if args.check {
        if a.n() <= 8 {
            let brute = naive_payoff(&a, &b, args.agg).map_err(computation)?;
            if brute != value {
                return Err(CliError::Computation(format!(
                    "check failed: permutation count gives {brute}, fast path gives {value}"
                )));
            }
            println!("check: ok");
        } else {
            println!("check: skipped (n > 8)");
        }
    }
    Ok(())
}

fn cmd_matrix(args: MatrixArgs) -> Result<(), CliError> {
    let spec = GameSpec::new(args.da, args.db, args.n, args.agg)
        .map_err(|e| usage(e.to_string()))?;
    let start = Instant::now();
    let matrix = build_matrix(&spec).map_err(computation)?;
    let built = start.elapsed();
    matrix.save(&args.out).map_err(computation)?;
    println!(
        "wrote {}x{} matrix to {} in {:.1} ms",
        matrix.n_rows(),
        matrix.n_cols(),
        args.out.display(),
        built.as_secs_f64() * 1e3
    );
    Ok(())
}

#[derive(Serialize)]
struct SupportEntry {
    parts: Vec<u32>,
    weight: f64,
}

#[derive(Serialize)]
struct SolveReport {
    method: String,
    value: f64,
    strategy_a: Vec<SupportEntry>,
    strategy_b: Vec<SupportEntry>,
    iterations: u64,
    exploitability: f64,
    wall_time_ms: f64,
}

fn support_entries(mixed: &MixedStrategy) -> Vec<SupportEntry> {
    mixed
        .support()
        .iter()
        .map(|(s, w)| SupportEntry {
            parts: s.parts().to_vec(),
            weight: *w,
        })
        .collect()
}

fn print_report(eq: &Equilibrium) {
    let report = SolveReport {
        method: eq.method.to_string(),
        value: eq.value,
        strategy_a: support_entries(&eq.strategy_a),
        strategy_b: support_entries(&eq.strategy_b),
        iterations: eq.iterations,
        exploitability: eq.exploitability,
        wall_time_ms: eq.wall_time.as_secs_f64() * 1e3,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("plain data")
    );
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    // Either a full spec on the command line or a saved matrix file; clap
    // guarantees exactly one of the two.
    let matrix = match &args.matrix {
        Some(path) => PayoffMatrix::load(path).map_err(computation)?,
        None => {
            let spec = GameSpec::new(
                args.da.expect("clap enforces presence"),
                args.db.expect("clap enforces presence"),
                args.n.expect("clap enforces presence"),
                args.agg.expect("clap enforces presence"),
            )
            .map_err(|e| usage(e.to_string()))?;
            match args.method {
                // The double oracle builds payoffs on demand; handing it a
                // full matrix would defeat the point.
                MethodArg::Doa => return run_doa(&spec, &args),
                _ => build_matrix(&spec).map_err(computation)?,
            }
        }
    };
    match args.method {
        MethodArg::Lp => {
            let eq = solve_lp(&matrix, args.tol).map_err(computation)?;
            print_report(&eq);
            Ok(())
        }
        MethodArg::Mwu => {
            let phi = args.phi.expect("clap enforces presence");
            let steps = args.steps.expect("clap enforces presence");
            if !(phi > 0.0 && phi <= 0.5) {
                return Err(usage(format!("--phi must lie in (0, 0.5], got {phi}")));
            }
            if steps == 0 {
                return Err(usage("--steps must be at least 1"));
            }
            let eq = solve_mwu(&matrix, phi, steps).map_err(computation)?;
            print_report(&eq);
            Ok(())
        }
        MethodArg::Doa => run_doa(&matrix.spec().clone(), &args),
    }
}

fn run_doa(spec: &GameSpec, args: &SolveArgs) -> Result<(), CliError> {
    let options = DoaOptions {
        tol: args.tol,
        use_heuristic: args.heuristic,
        max_iterations: args.max_iterations,
    };
    match solve_doa_with(spec, options).map(|outcome| outcome.equilibrium) {
        Ok(eq) => {
            print_report(&eq);
            Ok(())
        }
        // Per contract the report is still emitted, with the best pair found
        // and its measured gaps, before the nonzero exit.
        Err(SolveError::NonConvergence {
            iterations,
            gap_a,
            gap_b,
            best,
        }) => {
            print_report(&best);
            Err(CliError::Computation(format!(
                "double oracle stopped after {iterations} iterations with \
                 best-response gaps {gap_a:.3e} / {gap_b:.3e}"
            )))
        }
        Err(e) => Err(computation(e)),
    }
}

// One bench stage: a cell value plus a disable flag for later rows.
struct Stage {
    name: &'static str,
    disabled: bool,
}

impl Stage {
    fn new(name: &'static str) -> Stage {
        Stage {
            name,
            disabled: false,
        }
    }

    // Runs `work` unless disabled, formats the cell, and disables the stage
    // once it overruns the budget.
    fn run(
        &mut self,
        budget: Duration,
        work: impl FnOnce() -> Result<(), String>,
    ) -> String {
        if self.disabled {
            return "skipped".to_string();
        }
        let start = Instant::now();
        let outcome = work();
        let elapsed = start.elapsed();
        if let Err(e) = outcome {
            eprintln!("note: {} failed: {e}", self.name);
            self.disabled = true;
            return "error".to_string();
        }
        if elapsed > budget {
            self.disabled = true;
            return "timeout".to_string();
        }
        format!("{:.6}", elapsed.as_secs_f64())
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.n_min < 2 {
        return Err(usage("--n-min must be at least 2"));
    }
    if args.n_min > args.n_max {
        return Err(usage(format!(
            "empty sweep: --n-min {} exceeds --n-max {}",
            args.n_min, args.n_max
        )));
    }
    if args.n_min as i64 + args.offset < 0 {
        return Err(usage(format!(
            "negative budget: n = {} with offset {}",
            args.n_min, args.offset
        )));
    }
    if !(args.timeout_secs > 0.0) {
        return Err(usage("--timeout-secs must be positive"));
    }
    let budget = Duration::from_secs_f64(args.timeout_secs);

    let mut csv = String::from("n,d,naive_matrix_s,clash_matrix_s,doa_s,doa_heuristic_s\n");
    let mut naive = Stage::new("naive matrix");
    let mut clash = Stage::new("clash matrix");
    let mut doa_plain = Stage::new("doa");
    let mut doa_heur = Stage::new("doa with heuristic");

    for n in args.n_min..=args.n_max {
        let d = (n as i64 + args.offset) as u32;
        let spec = GameSpec::new(d, d, n, args.agg).map_err(|e| usage(e.to_string()))?;

        let naive_cell = if spec.n() > NAIVE_PAYOFF_MAX_N {
            "skipped".to_string()
        } else {
            naive.run(budget, || naive_matrix(&spec))
        };
        let clash_cell = clash.run(budget, || {
            build_matrix(&spec).map(|_| ()).map_err(|e| e.to_string())
        });
        let doa_cell = doa_plain.run(budget, || {
            solve_doa(&spec, false, 1e-9).map(|_| ()).map_err(|e| e.to_string())
        });
        let heur_cell = doa_heur.run(budget, || {
            solve_doa(&spec, true, 1e-9).map(|_| ()).map_err(|e| e.to_string())
        });
        let _ = writeln!(
            csv,
            "{n},{d},{naive_cell},{clash_cell},{doa_cell},{heur_cell}"
        );
    }

    match &args.out {
        Some(path) => {
            let mut f = File::create(path)
                .map_err(|e| computation(format!("cannot create {}: {e}", path.display())))?;
            f.write_all(csv.as_bytes())
                .map_err(|e| computation(format!("cannot write {}: {e}", path.display())))?;
            eprintln!(
                "wrote {} rows to {}",
                args.n_max - args.n_min + 1,
                path.display()
            );
        }
        None => print!("{csv}"),
    }
    Ok(())
}

// Full payoff matrix through the permutation-counting oracle, for timing
// comparisons only; the resulting entries are dropped.
fn naive_matrix(spec: &GameSpec) -> Result<(), String> {
    let rows = enumerate_symmetric_strategies(spec.d_a(), spec.n());
    let cols = enumerate_symmetric_strategies(spec.d_b(), spec.n());
    let agg = spec.aggregation();
    (0..rows.len() * cols.len())
        .into_par_iter()
        .try_for_each(|idx| {
            naive_payoff(&rows[idx / cols.len()], &cols[idx % cols.len()], agg)
                .map(|_| ())
                .map_err(|e| e.to_string())
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::count_symmetric_strategies;
    use clap::CommandFactory;

    #[test]
    fn assignment_parsing_accepts_spaces_and_rejects_junk() {
        assert_eq!(parse_assignment("3, 1,0", "a").unwrap(), vec![3, 1, 0]);
        assert!(parse_assignment("", "a").is_err());
        assert!(parse_assignment("1,x", "a").is_err());
        assert!(parse_assignment("1,-2", "a").is_err());
    }

    #[test]
    fn unsorted_input_is_canonicalized() {
        let s = canonical_strategy("0,3,1", "a").unwrap();
        assert_eq!(s.parts(), &[3, 1, 0]);
    }

    #[test]
    fn enumeration_and_count_agree_on_a_bench_sized_game() {
        let listed = enumerate_symmetric_strategies(13, 8).len() as u128;
        assert_eq!(listed, count_symmetric_strategies(13, 8));
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
