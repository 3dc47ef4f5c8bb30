//! Multiplication-count benchmarks: the lifting algorithm against the
//! baseline on seeded random instances.
//!
//! Counts are the primary metric. Wall-clock times are recorded too, but
//! they depend on the bignum library: residues are stored in binary, so the
//! multiplications and divisions by powers of `p` that the cost model treats
//! as free are not free here.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bach::bach_lift;
use crate::error::{Error, Result};
use crate::lift::{lift, LiftInstance};
use crate::ring::{ceil_log2, OpCounter, PrimePowerModulus};

/// Default slack on the `O(log p)` term of the count bound.
pub const SLACK_C: f64 = 10.0;
/// Default constant slack of the count bound.
pub const SLACK_C0: f64 = 20.0;

/// CSV header, in column order.
pub const CSV_HEADER: &str =
    "p,k,seed,our_mults,bach_mults,our_wall_ns,bach_wall_ns,solution_found,iterations";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub p: u64,
    pub k: u32,
    /// Seed that regenerates this instance.
    pub seed: u64,
    /// Multiplications modulo `p^k` by the lifting algorithm.
    pub our_mults: u64,
    /// Multiplications modulo `p^(2k-1)` by the baseline; `None` for `p = 2`.
    pub bach_mults: Option<u64>,
    pub our_wall_ns: u64,
    pub bach_wall_ns: Option<u64>,
    pub solution_found: bool,
    pub iterations: u32,
}

#[derive(Clone, Debug)]
pub struct BenchSuite {
    pub points: Vec<(u64, u32)>,
    pub instances: usize,
    pub seed: u64,
    /// Share of instances built to have no solution (only where `k >= 2`;
    /// for `k = 1` every consistent instance is solvable).
    pub unsolvable_fraction: f64,
    pub out: Option<PathBuf>,
}

impl BenchSuite {
    /// The full grid of `primes x ks`, sorted.
    pub fn grid(primes: &[u64], ks: &[u32], instances: usize, seed: u64) -> Self {
        let mut points: Vec<(u64, u32)> = primes
            .iter()
            .flat_map(|&p| ks.iter().map(move |&k| (p, k)))
            .collect();
        points.sort();
        points.dedup();
        Self {
            points,
            instances,
            seed,
            unsolvable_fraction: 0.0,
            out: None,
        }
    }
}

/// `k (ceil(log2 p) + 2) + c ceil(log2 p) + c0`.
pub fn count_bound(p: u64, k: u32, slack_c: f64, slack_c0: f64) -> f64 {
    let lg = ceil_log2(&BigUint::from(p)) as f64;
    f64::from(k) * (lg + 2.0) + slack_c * lg + slack_c0
}

/// Whether the record's count stays within [`count_bound`] (inclusive).
pub fn check_bound(record: &BenchRecord, slack_c: f64, slack_c0: f64) -> bool {
    record.our_mults as f64 <= count_bound(record.p, record.k, slack_c, slack_c0)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of instance `index` at grid point `(p, k)`.
pub fn instance_seed(suite_seed: u64, p: u64, k: u32, index: usize) -> u64 {
    splitmix(splitmix(splitmix(suite_seed ^ p) ^ u64::from(k)) ^ index as u64)
}

fn random_unit(rng: &mut ChaCha8Rng, ctx: &PrimePowerModulus) -> BigUint {
    loop {
        let a = rng.gen_biguint_below(ctx.m());
        if !(&a % ctx.p()).is_zero() {
            return a;
        }
    }
}

fn z_of(x: &BigUint, p: u64) -> BigUint {
    if p == 2 {
        BigUint::ZERO
    } else {
        x % (p - 1)
    }
}

fn instance(
    a: &BigUint,
    z: &BigUint,
    b: &BigUint,
    ctx: &PrimePowerModulus,
) -> Result<LiftInstance> {
    LiftInstance::new(
        BigInt::from(a.clone()),
        BigInt::from(z.clone()),
        BigInt::from(b.clone()),
        ctx.clone(),
    )
}

/// A solvable instance with exponent drawn uniformly from `[0, phi(p^k))`.
pub fn solvable_instance(p: u64, k: u32, seed: u64) -> Result<LiftInstance> {
    let ctx = PrimePowerModulus::from_u64(p, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_unit(&mut rng, &ctx);
    let x = rng.gen_biguint_below(&ctx.phi());
    let b = a.modpow(&x, ctx.m());
    instance(&a, &z_of(&x, p), &b, &ctx)
}

/// An instance that is consistent modulo `p` but has no solution modulo
/// `p^k` (`k >= 2`): `a` is a `p`-th power, so `a^(p-1) = 1 (mod p^2)`, while
/// `b = a^z (1 + p)` differs from every power of `a` modulo `p^2`.
pub fn unsolvable_instance(p: u64, k: u32, seed: u64) -> Result<LiftInstance> {
    if k < 2 {
        return Err(Error::Internal("unsolvable instances need k >= 2".into()));
    }
    let ctx = PrimePowerModulus::from_u64(p, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, z) = pth_power_base(&mut rng, &ctx, p);
    let b = a.modpow(&z, ctx.m()) * (1 + p) % ctx.m();
    instance(&a, &z, &b, &ctx)
}

fn pth_power_base(rng: &mut ChaCha8Rng, ctx: &PrimePowerModulus, p: u64) -> (BigUint, BigUint) {
    let a = random_unit(rng, ctx).modpow(&BigUint::from(p), ctx.m());
    let z = if p == 2 {
        BigUint::ZERO
    } else {
        BigUint::from(rng.gen_range(0..p - 1))
    };
    (a, z)
}

/// Smallest `k` for which [`paired_instances`] can build a pair.
pub fn min_paired_k(p: u64) -> u32 {
    if p == 2 {
        5
    } else {
        3
    }
}

/// A solvable and an unsolvable instance sharing `a`, `z` and the modulus;
/// the solvable one needs at least one pass of the main loop. Requires
/// `k >= min_paired_k(p)`: a `p`-th power base already satisfies
/// `a^(p-1) = 1 (mod p^2)` (`a^2 = 1 (mod 16)` for `p = 2`), so below that
/// every power of `a` equals `a^z`.
pub fn paired_instances(p: u64, k: u32, seed: u64) -> Result<(LiftInstance, LiftInstance)> {
    if k < min_paired_k(p) {
        return Err(Error::Internal(format!(
            "paired instances need k >= {}",
            min_paired_k(p)
        )));
    }
    let ctx = PrimePowerModulus::from_u64(p, k)?;
    let m = ctx.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = if p == 2 {
        BigUint::one()
    } else {
        BigUint::from(p - 1)
    };
    loop {
        let (a, z) = pth_power_base(&mut rng, &ctx, p);
        let c0 = a.modpow(&z, m);
        let y = rng.gen_biguint_below(&ctx.phi());
        let b_solvable = a.modpow(&(&z + &step * y), m);
        if b_solvable == c0 || (p == 2 && b_solvable == a) {
            continue;
        }
        let b_unsolvable = &c0 * (1 + p) % m;
        return Ok((
            instance(&a, &z, &b_solvable, &ctx)?,
            instance(&a, &z, &b_unsolvable, &ctx)?,
        ));
    }
}

/// Runs both algorithms on one instance with fresh counters.
pub fn measure(inst: &LiftInstance, seed: u64) -> Result<BenchRecord> {
    let ctx = inst.ctx();
    let p = ctx.p().to_u64().expect("benchmark primes fit in u64");
    let k = ctx.k();

    let mut ours = OpCounter::new();
    let start = Instant::now();
    let out = lift(inst, &mut ours);
    let our_wall_ns = start.elapsed().as_nanos() as u64;

    let (bach_mults, bach_wall_ns) = if p != 2 && k >= 1 {
        let mut theirs = OpCounter::new();
        let start = Instant::now();
        let baseline = bach_lift(inst, &mut theirs)?;
        let wall = start.elapsed().as_nanos() as u64;
        if baseline.solution.is_some() != out.solution.is_some() {
            return Err(Error::Internal(format!(
                "solvability disagreement at p={p} k={k} seed={seed}"
            )));
        }
        (Some(theirs.mults_mod_wide()), Some(wall))
    } else {
        (None, None)
    };

    Ok(BenchRecord {
        p,
        k,
        seed,
        our_mults: ours.mults_mod_m(),
        bach_mults,
        our_wall_ns,
        bach_wall_ns,
        solution_found: out.solution.is_some(),
        iterations: out.iterations,
    })
}

/// Generates and measures every instance of the suite; writes the CSV when
/// `suite.out` is set. Deterministic for a given seed, apart from timings.
pub fn run_suite(suite: &BenchSuite) -> Result<Vec<BenchRecord>> {
    if suite.points.is_empty() {
        return Err(Error::InvalidGrid("no grid points"));
    }
    for &(p, k) in &suite.points {
        PrimePowerModulus::from_u64(p, k)?;
        if k == 0 {
            return Err(Error::InvalidGrid("k must be at least 1"));
        }
    }
    let mut records = Vec::with_capacity(suite.points.len() * suite.instances);
    for &(p, k) in &suite.points {
        for index in 0..suite.instances {
            let seed = instance_seed(suite.seed, p, k, index);
            let mut pick = ChaCha8Rng::seed_from_u64(seed);
            let inst = if k >= 2 && pick.gen_bool(suite.unsolvable_fraction.clamp(0.0, 1.0)) {
                unsolvable_instance(p, k, seed)?
            } else {
                solvable_instance(p, k, seed)?
            };
            records.push(measure(&inst, seed)?);
        }
    }
    if let Some(path) = &suite.out {
        emit_csv(&records, path)?;
    }
    Ok(records)
}

fn opt(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the header and one row per record (LF line endings).
pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.p,
            r.k,
            r.seed,
            r.our_mults,
            opt(r.bach_mults),
            r.our_wall_ns,
            opt(r.bach_wall_ns),
            r.solution_found,
            r.iterations
        )
        .expect("writing to a String");
    }
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(out.as_bytes()).map_err(io)?;
    Ok(())
}

/// Per-grid-point means.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub p: u64,
    pub k: u32,
    pub instances: usize,
    pub mean_our_mults: f64,
    pub mean_bach_mults: Option<f64>,
    pub mean_our_ns: f64,
    pub mean_bach_ns: Option<f64>,
    pub bound: f64,
    pub within_bound: usize,
}

impl PointSummary {
    pub fn count_ratio(&self) -> Option<f64> {
        self.mean_bach_mults.map(|b| b / self.mean_our_mults)
    }

    pub fn wall_ratio(&self) -> Option<f64> {
        self.mean_bach_ns.map(|b| b / self.mean_our_ns)
    }
}

fn mean(values: impl Iterator<Item = u64>) -> Option<f64> {
    let (sum, n) = values.fold((0f64, 0usize), |(s, n), v| (s + v as f64, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Groups records by `(p, k)`, sorted.
pub fn summarize(records: &[BenchRecord]) -> Vec<PointSummary> {
    let mut keys: Vec<(u64, u32)> = records.iter().map(|r| (r.p, r.k)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(p, k)| {
            let rows: Vec<&BenchRecord> = records.iter().filter(|r| (r.p, r.k) == (p, k)).collect();
            PointSummary {
                p,
                k,
                instances: rows.len(),
                mean_our_mults: mean(rows.iter().map(|r| r.our_mults)).unwrap_or(0.0),
                mean_bach_mults: mean(rows.iter().filter_map(|r| r.bach_mults)),
                mean_our_ns: mean(rows.iter().map(|r| r.our_wall_ns)).unwrap_or(0.0),
                mean_bach_ns: mean(rows.iter().filter_map(|r| r.bach_wall_ns)),
                bound: count_bound(p, k, SLACK_C, SLACK_C0),
                within_bound: rows
                    .iter()
                    .filter(|r| check_bound(r, SLACK_C, SLACK_C0))
                    .count(),
            }
        })
        .collect()
}

/// Fixed-width table of [`summarize`] output.
pub fn format_summary(summary: &[PointSummary]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>6} {:>6} {:>5} {:>12} {:>10} {:>12} {:>8} {:>9} {:>9}",
        "p", "k", "n", "our_mults", "bound", "bach_mults", "ratio", "in_bound", "wall_x"
    );
    let f = |v: Option<f64>, prec: usize| v.map_or("-".to_string(), |v| format!("{v:.prec$}"));
    for row in summary {
        let _ = writeln!(
            s,
            "{:>6} {:>6} {:>5} {:>12.1} {:>10.0} {:>12} {:>8} {:>9} {:>9}",
            row.p,
            row.k,
            row.instances,
            row.mean_our_mults,
            row.bound,
            f(row.mean_bach_mults, 1),
            f(row.count_ratio(), 2),
            format!("{}/{}", row.within_bound, row.instances),
            f(row.wall_ratio(), 2),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(p: u64, k: u32, our_mults: u64) -> BenchRecord {
        BenchRecord {
            p,
            k,
            seed: 0,
            our_mults,
            bach_mults: None,
            our_wall_ns: 0,
            bach_wall_ns: None,
            solution_found: true,
            iterations: 0,
        }
    }

    #[test]
    fn check_bound_examples() {
        assert!(check_bound(&record(5, 16, 70), 10.0, 10.0));
        assert!(!check_bound(&record(3, 1, 200), 10.0, 10.0));
        // 16 * 5 + 30 + 10 = 120
        assert!(check_bound(&record(5, 16, 120), 10.0, 10.0));
        assert!(!check_bound(&record(5, 16, 121), 10.0, 10.0));
    }

    #[test]
    fn unsolvable_instances_have_no_solution() {
        for (p, k) in [(2u64, 6u32), (3, 5), (5, 4), (13, 3)] {
            for seed in 0..5 {
                let (yes, no) = paired_instances(p, k, seed).unwrap();
                let o = crate::oracle::brute_dlog(
                    BigInt::from(no.a().clone()),
                    BigInt::from(no.b().clone()),
                    no.ctx(),
                )
                .unwrap();
                assert_eq!(o.minimal_x, None);
                let o = crate::oracle::brute_dlog(
                    BigInt::from(yes.a().clone()),
                    BigInt::from(yes.b().clone()),
                    yes.ctx(),
                )
                .unwrap();
                assert!(o.minimal_x.is_some());
            }
        }
    }

    #[test]
    fn pairs_need_room_for_a_loop() {
        assert!(paired_instances(2, 4, 0).is_err());
        assert!(paired_instances(3, 2, 0).is_err());
        let no = unsolvable_instance(3, 2, 0).unwrap();
        assert!(crate::lift::lift(&no, &mut OpCounter::new())
            .solution
            .is_none());
    }

    #[test]
    fn instance_seeds_differ() {
        let a = instance_seed(1, 5, 16, 0);
        assert_ne!(a, instance_seed(1, 5, 16, 1));
        assert_ne!(a, instance_seed(1, 5, 17, 0));
        assert_ne!(a, instance_seed(2, 5, 16, 0));
        assert_eq!(a, instance_seed(1, 5, 16, 0));
    }

    #[test]
    fn summary_is_sorted() {
        let records = vec![record(7, 2, 10), record(3, 4, 12), record(3, 4, 14)];
        let s = summarize(&records);
        assert_eq!((s[0].p, s[0].k, s[0].instances), (3, 4, 2));
        assert_eq!(s[0].mean_our_mults, 13.0);
        assert_eq!(s[1].p, 7);
        assert!(format_summary(&s).lines().count() == 3);
    }
}
