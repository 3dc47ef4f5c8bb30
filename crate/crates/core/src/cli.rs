//! The `dloglift` command line.
//!
//! Exit codes: 0 success, 1 contract or usage error, 2 no solution,
//! 3 verification mismatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::bach::bach_lift;
use crate::bench::{format_summary, run_suite, summarize, BenchSuite};
use crate::error::{Error, Result};
use crate::lift::{lift, lift_p_divides_a, lift_with_order, LiftInstance, LiftOutcome, OrderCheck};
use crate::oracle::{mult_order, DEFAULT_BOUND};
use crate::ring::{floor_mod, OpCounter, PrimePowerModulus};
use crate::verify::{sweep, BachSolver, OrderedLiftSolver, Solver, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dloglift",
    version,
    about = "Lift discrete logarithms modulo prime powers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a^x = b (mod p^k) given a^z = b (mod p).
    #[command(allow_negative_numbers = true)]
    Lift(LiftArgs),
    /// Same problem with the baseline method (odd p).
    #[command(allow_negative_numbers = true)]
    Bach(BachArgs),
    /// Multiplicative order of a modulo m, by enumeration.
    #[command(allow_negative_numbers = true)]
    Order { a: BigInt, m: BigUint },
    /// Multiplication counts of both methods on random instances.
    Bench(BenchArgs),
    /// Compare every solver with brute force on small prime powers.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    pub a: BigInt,
    pub z: BigInt,
    pub b: BigInt,
    pub p: BigUint,
    pub k: u32,
    /// ord_p(a); returns the least non-negative solution.
    #[arg(long)]
    pub order: Option<BigUint>,
    /// Print multiplication tallies after the solution.
    #[arg(long)]
    pub count: bool,
    /// Allow p | a (z is ignored).
    #[arg(long)]
    pub p_divides: bool,
}

#[derive(Debug, Args)]
pub struct BachArgs {
    pub a: BigInt,
    pub z: BigInt,
    pub b: BigInt,
    pub p: BigUint,
    pub k: u32,
    #[arg(long)]
    pub count: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ks: Vec<u32>,
    /// Instances per grid point.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Share of instances without a solution.
    #[arg(long, default_value_t = 0.0)]
    pub unsolvable_fraction: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub max_modulus: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 5, 7, 11, 13])]
    pub primes: Vec<u64>,
    /// Moduli above this are sampled instead of swept; defaults to
    /// `--max-modulus`.
    #[arg(long)]
    pub exhaustive_limit: Option<u64>,
    /// Bases per sampled modulus.
    #[arg(long, default_value_t = 32)]
    pub bases: usize,
    /// Targets per sampled base.
    #[arg(long, default_value_t = 128)]
    pub targets: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_lift_solver(args, out, err, &mut crate::verify::LiftSolver::default())
}

/// [`run`], with `verify` checking `lift_solver` in place of the lifting
/// algorithm.
pub fn run_with_lift_solver<I, S>(
    args: I,
    out: &mut dyn Write,
    err: &mut dyn Write,
    lift_solver: &mut dyn Solver,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Lift(args) => cmd_lift(&args, out),
        Command::Bach(args) => cmd_bach(&args, out),
        Command::Order { a, m } => cmd_order(&a, &m, out),
        Command::Bench(args) => cmd_bench(&args, out),
        Command::Verify(args) => cmd_verify(&args, out, err, lift_solver),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn report(out: &mut dyn Write, solution: Option<&BigUint>) -> Result<i32> {
    match solution {
        Some(x) => {
            writeln!(out, "{x}").map_err(io)?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "no solution").map_err(io)?;
            Ok(EXIT_NO_SOLUTION)
        }
    }
}

fn tallies(out: &mut dyn Write, c: &OpCounter) -> Result<()> {
    writeln!(
        out,
        "mults_mod_pk={} mults_mod_p2k1={} mults_mod_p={} mults_by_digit={}",
        c.mults_mod_m(),
        c.mults_mod_wide(),
        c.mults_mod_small(),
        c.mults_by_digit()
    )
    .map_err(io)
}

fn cmd_lift(args: &LiftArgs, out: &mut dyn Write) -> Result<i32> {
    let ctx = PrimePowerModulus::new(args.p.clone(), args.k)?;
    if args.p_divides && floor_mod(&args.a, ctx.p()).is_zero() {
        let x = lift_p_divides_a(args.a.clone(), args.b.clone(), &ctx)?;
        return report(out, x.as_ref());
    }
    let inst = LiftInstance::new(args.a.clone(), args.z.clone(), args.b.clone(), ctx)?;
    let mut counter = OpCounter::new();
    let outcome: LiftOutcome = match &args.order {
        Some(order) => lift_with_order(&inst, order, OrderCheck::Validate, &mut counter)?,
        None => lift(&inst, &mut counter),
    };
    let code = report(out, outcome.solution.as_ref())?;
    if args.count {
        tallies(out, &counter)?;
    }
    Ok(code)
}

fn cmd_bach(args: &BachArgs, out: &mut dyn Write) -> Result<i32> {
    let ctx = PrimePowerModulus::new(args.p.clone(), args.k)?;
    let inst = LiftInstance::new(args.a.clone(), args.z.clone(), args.b.clone(), ctx)?;
    let mut counter = OpCounter::new();
    let outcome = bach_lift(&inst, &mut counter)?;
    let code = report(out, outcome.solution.as_ref())?;
    if args.count {
        tallies(out, &counter)?;
    }
    Ok(code)
}

fn cmd_order(a: &BigInt, m: &BigUint, out: &mut dyn Write) -> Result<i32> {
    let m = m.to_u64().ok_or_else(|| Error::OracleBound {
        modulus: m.clone(),
        bound: DEFAULT_BOUND,
    })?;
    let ord = mult_order(a.clone(), m)?;
    writeln!(out, "{ord}").map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let mut suite = BenchSuite::grid(&args.primes, &args.ks, args.n, args.seed);
    suite.unsolvable_fraction = args.unsolvable_fraction;
    suite.out = args.out.clone();
    let records = run_suite(&suite)?;
    write!(out, "{}", format_summary(&summarize(&records))).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_verify(
    args: &VerifyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
    lift_solver: &mut dyn Solver,
) -> Result<i32> {
    let config = SweepConfig {
        primes: args.primes.clone(),
        max_modulus: args.max_modulus,
        exhaustive_limit: args.exhaustive_limit.unwrap_or(args.max_modulus),
        sampled_bases: args.bases,
        sampled_targets: args.targets,
        seed: args.seed,
    };
    let mut ordered = OrderedLiftSolver::default();
    let mut bach = BachSolver::default();
    let report = sweep(&config, &mut [lift_solver, &mut ordered, &mut bach])?;
    let sampled = report.moduli.iter().filter(|m| !m.exhaustive).count();
    writeln!(
        out,
        "moduli: {} ({} sampled), (a, b) pairs: {}",
        report.moduli.len(),
        sampled,
        report.total_pairs()
    )
    .map_err(io)?;
    for t in &report.solvers {
        writeln!(
            out,
            "{}: {} checked, {} mismatches",
            t.name, t.checked, t.mismatches
        )
        .map_err(io)?;
    }
    writeln!(out, "mismatches: {}", report.mismatch_count).map_err(io)?;
    if report.is_clean() {
        return Ok(EXIT_OK);
    }
    for m in &report.mismatches {
        let _ = writeln!(err, "mismatch: {m}");
    }
    Ok(EXIT_MISMATCH)
}
