//! Oracle sweeps: every solver against brute force on small prime powers.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bach::BachLifter;
use crate::error::Result;
use crate::lift::{LiftOptions, Lifter};
use crate::oracle::PowerTable;
use crate::ring::{OpCounter, PrimePowerModulus};

/// Something that can be checked against the oracle one base at a time.
pub trait Solver {
    fn name(&self) -> &'static str;
    fn supports(&self, p: u64) -> bool {
        let _ = p;
        true
    }
    /// Whether a returned `x` must be the least solution, not just any.
    fn expects_minimal(&self) -> bool {
        false
    }
    /// Called once per base before its targets; `ord_p` is `ord_p(a)`.
    fn prepare(&mut self, a: u64, p: u64, k: u32, ord_p: u64);
    /// `z` is the least exponent with `a^z = b (mod p)`.
    fn solve(&mut self, b: u64, z: u64) -> Result<Option<u64>>;
}

/// The lifting algorithm with `p - 1` as step.
#[derive(Default)]
pub struct LiftSolver {
    lifter: Option<Lifter<u64>>,
}

impl Solver for LiftSolver {
    fn name(&self) -> &'static str {
        "lift"
    }
    fn prepare(&mut self, a: u64, p: u64, k: u32, _ord_p: u64) {
        self.lifter = Some(Lifter::new(
            a,
            p,
            k,
            None,
            LiftOptions::default(),
            &mut OpCounter::new(),
        ));
    }
    fn solve(&mut self, b: u64, z: u64) -> Result<Option<u64>> {
        let lifter = self.lifter.as_ref().expect("prepare() not called");
        Ok(lifter.solve(&b, &z, &mut OpCounter::new()).solution)
    }
}

/// The lifting algorithm with the exact order `ord_p(a)` as step.
#[derive(Default)]
pub struct OrderedLiftSolver {
    lifter: Option<Lifter<u64>>,
    ord: u64,
}

impl Solver for OrderedLiftSolver {
    fn name(&self) -> &'static str {
        "lift_with_order"
    }
    fn expects_minimal(&self) -> bool {
        true
    }
    fn prepare(&mut self, a: u64, p: u64, k: u32, ord_p: u64) {
        self.ord = ord_p;
        self.lifter = Some(Lifter::new(
            a,
            p,
            k,
            Some(ord_p),
            LiftOptions::default(),
            &mut OpCounter::new(),
        ));
    }
    fn solve(&mut self, b: u64, z: u64) -> Result<Option<u64>> {
        let lifter = self.lifter.as_ref().expect("prepare() not called");
        Ok(lifter
            .solve(&b, &(z % self.ord), &mut OpCounter::new())
            .solution)
    }
}

enum BachState {
    Word(BachLifter<u64>),
    Big(BachLifter<BigUint>),
}

/// The baseline method; odd primes only.
#[derive(Default)]
pub struct BachSolver {
    state: Option<BachState>,
}

impl Solver for BachSolver {
    fn name(&self) -> &'static str {
        "bach"
    }
    fn supports(&self, p: u64) -> bool {
        p != 2
    }
    fn prepare(&mut self, a: u64, p: u64, k: u32, _ord_p: u64) {
        let mut c = OpCounter::new();
        let wide = u128::from(p).checked_pow(2 * k - 1);
        self.state = Some(match wide {
            Some(w) if w < u128::from(crate::arith::WORD_LIMIT) => {
                BachState::Word(BachLifter::new(a, p, k, &mut c))
            }
            _ => BachState::Big(BachLifter::new(a.into(), p.into(), k, &mut c)),
        });
    }
    fn solve(&mut self, b: u64, z: u64) -> Result<Option<u64>> {
        let mut c = OpCounter::new();
        Ok(match self.state.as_ref().expect("prepare() not called") {
            BachState::Word(l) => l.solve(&b, &z, &mut c)?.solution,
            BachState::Big(l) => l
                .solve(&b.into(), &z.into(), &mut c)?
                .solution
                .map(|x| u64::try_from(x).expect("baseline x < phi(p^k)")),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    /// Largest `p^k` visited.
    pub max_modulus: u64,
    /// Moduli up to this size check every `(a, b)`; larger ones are sampled.
    pub exhaustive_limit: u64,
    /// Bases drawn per sampled modulus.
    pub sampled_bases: usize,
    /// Targets drawn per sampled base.
    pub sampled_targets: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            primes: vec![2, 3, 5, 7, 11, 13],
            max_modulus: 1_000_000,
            exhaustive_limit: 100_000,
            sampled_bases: 32,
            sampled_targets: 128,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub solver: &'static str,
    pub p: u64,
    pub k: u32,
    pub a: u64,
    pub b: u64,
    pub z: u64,
    pub expected: Option<u64>,
    pub got: Option<u64>,
    pub reason: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: a={} z={} b={} p={} k={}: expected {:?}, got {:?} ({})",
            self.solver,
            self.a,
            self.z,
            self.b,
            self.p,
            self.k,
            self.expected,
            self.got,
            self.reason
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusSummary {
    pub p: u64,
    pub k: u32,
    pub exhaustive: bool,
    pub pairs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverTally {
    pub name: &'static str,
    pub checked: u64,
    pub mismatches: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub moduli: Vec<ModulusSummary>,
    /// Per solver, in solver order.
    pub solvers: Vec<SolverTally>,
    pub mismatches: Vec<Mismatch>,
    /// Total mismatches, including those not stored.
    pub mismatch_count: u64,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.mismatch_count == 0
    }

    pub fn total_pairs(&self) -> u64 {
        self.moduli.iter().map(|m| m.pairs).sum()
    }

    pub fn tally(&self, name: &str) -> Option<&SolverTally> {
        self.solvers.iter().find(|t| t.name == name)
    }
}

const MAX_STORED_MISMATCHES: usize = 32;

/// All `(p, k)` with `k >= 1` and `p^k <= max_modulus`, sorted.
pub fn prime_powers(primes: &[u64], max_modulus: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &p in primes {
        let mut k = 1;
        while p.checked_pow(k).is_some_and(|m| m <= max_modulus) {
            out.push((p, k));
            k += 1;
        }
    }
    out.sort();
    out
}

/// Runs every solver on every selected `(a, b)` and compares with the oracle.
///
/// Targets without a solution modulo `p` are skipped, since no solver
/// accepts them.
pub fn sweep(config: &SweepConfig, solvers: &mut [&mut dyn Solver]) -> Result<SweepReport> {
    for &p in &config.primes {
        PrimePowerModulus::from_u64(p, 1)?;
    }
    let mut report = SweepReport {
        solvers: solvers
            .iter()
            .map(|s| SolverTally {
                name: s.name(),
                checked: 0,
                mismatches: 0,
            })
            .collect(),
        ..SweepReport::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for (p, k) in prime_powers(&config.primes, config.max_modulus) {
        let m = p.pow(k);
        let exhaustive = m <= config.exhaustive_limit;
        let mut small = PowerTable::new(p)?;
        let mut full = PowerTable::new(m)?;
        let mut pairs = 0u64;

        let bases: Vec<u64> = if exhaustive {
            (1..m).filter(|a| a % p != 0).collect()
        } else {
            (0..config.sampled_bases)
                .map(|_| loop {
                    let a = rng.gen_range(1..m);
                    if a % p != 0 {
                        break a;
                    }
                })
                .collect()
        };

        for a in bases {
            let ord_p = small.fill(a % p);
            full.fill(a);
            let active: Vec<usize> = (0..solvers.len())
                .filter(|&i| solvers[i].supports(p))
                .collect();
            for &i in &active {
                solvers[i].prepare(a, p, k, ord_p);
            }
            let targets: Box<dyn Iterator<Item = u64>> = if exhaustive {
                Box::new(0..m)
            } else {
                let picked: Vec<u64> = (0..config.sampled_targets)
                    .map(|_| loop {
                        let b = rng.gen_range(0..m);
                        if small.minimal_x(b % p).is_some() {
                            break b;
                        }
                    })
                    .collect();
                Box::new(picked.into_iter())
            };
            for b in targets {
                let Some(z) = small.minimal_x(b % p) else {
                    continue;
                };
                pairs += 1;
                let expected = full.minimal_x(b);
                for &i in &active {
                    let solver = &mut solvers[i];
                    let got = solver.solve(b, z);
                    report.solvers[i].checked += 1;
                    let reason = match &got {
                        Err(e) => Some(format!("error: {e}")),
                        Ok(None) if expected.is_some() => Some("missed a solution".into()),
                        Ok(Some(_)) if expected.is_none() => {
                            Some("claimed an impossible solution".into())
                        }
                        Ok(Some(x)) if !full.is_solution(*x, b) => Some("a^x != b".into()),
                        Ok(Some(x)) if solver.expects_minimal() && Some(*x) != expected => {
                            Some("not the least solution".into())
                        }
                        _ => None,
                    };
                    if let Some(reason) = reason {
                        report.mismatch_count += 1;
                        report.solvers[i].mismatches += 1;
                        if report.mismatches.len() < MAX_STORED_MISMATCHES {
                            report.mismatches.push(Mismatch {
                                solver: solver.name(),
                                p,
                                k,
                                a,
                                b,
                                z,
                                expected,
                                got: got.ok().flatten(),
                                reason,
                            });
                        }
                    }
                }
            }
        }
        report.moduli.push(ModulusSummary {
            p,
            k,
            exhaustive,
            pairs,
        });
    }
    Ok(report)
}
