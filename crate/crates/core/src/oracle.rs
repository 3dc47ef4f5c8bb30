//! Brute-force ground truth for small moduli.
//!
//! Nothing here shares code with the lifting algorithms: powers are
//! enumerated one multiplication at a time in plain `u64` arithmetic.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ring::{floor_mod, PrimePowerModulus};

/// Largest modulus the oracle accepts by default.
pub const DEFAULT_BOUND: u64 = 10_000_000;

/// All solutions of `a^x = b (mod p^k)`: empty, or
/// `{minimal_x + t * period : t >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub ctx: PrimePowerModulus,
    pub a: u64,
    pub b: u64,
    pub minimal_x: Option<u64>,
    /// `ord_{p^k}(a)`.
    pub period: u64,
}

impl SolutionSet {
    pub fn contains(&self, x: &BigUint) -> bool {
        match self.minimal_x {
            Some(min) => {
                let period = BigUint::from(self.period);
                x >= &BigUint::from(min) && ((x - min) % &period) == BigUint::ZERO
            }
            None => false,
        }
    }
}

fn bounded_modulus(ctx: &PrimePowerModulus, bound: u64) -> Result<u64> {
    ctx.m()
        .to_u64()
        .filter(|&m| m <= bound)
        .ok_or_else(|| Error::OracleBound {
            modulus: ctx.m().clone(),
            bound,
        })
}

/// Exhaustive discrete logarithm modulo `p^k` with the default bound.
pub fn brute_dlog(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    ctx: &PrimePowerModulus,
) -> Result<SolutionSet> {
    brute_dlog_bounded(a, b, ctx, DEFAULT_BOUND)
}

pub fn brute_dlog_bounded(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    ctx: &PrimePowerModulus,
    bound: u64,
) -> Result<SolutionSet> {
    let m = bounded_modulus(ctx, bound)?;
    let a = a.into();
    if floor_mod(&a, ctx.p()) == BigUint::ZERO {
        return Err(Error::BaseDivisibleByP {
            a,
            p: ctx.p().clone(),
        });
    }
    let a = floor_mod(&a, ctx.m()).to_u64().unwrap();
    let b = floor_mod(&b.into(), ctx.m()).to_u64().unwrap();
    let one = 1 % m;
    let mut cur = one;
    let mut minimal_x = None;
    let mut x = 0u64;
    loop {
        if minimal_x.is_none() && cur == b {
            minimal_x = Some(x);
        }
        cur = mul(cur, a, m);
        x += 1;
        if cur == one {
            break;
        }
    }
    Ok(SolutionSet {
        ctx: ctx.clone(),
        a,
        b,
        minimal_x,
        period: x,
    })
}

/// `ord_m(a)` by iteration; `m` must not exceed [`DEFAULT_BOUND`].
pub fn mult_order(a: impl Into<BigInt>, m: u64) -> Result<u64> {
    mult_order_bounded(a, m, DEFAULT_BOUND)
}

pub fn mult_order_bounded(a: impl Into<BigInt>, m: u64, bound: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if m > bound {
        return Err(Error::OracleBound {
            modulus: m.into(),
            bound,
        });
    }
    let a = floor_mod(&a.into(), &BigUint::from(m)).to_u64().unwrap();
    if gcd(a, m) != 1 {
        return Err(Error::NotCoprime {
            a: a.into(),
            m: m.into(),
        });
    }
    let one = 1 % m;
    let mut cur = a % m;
    let mut r = 1;
    while cur != one {
        cur = mul(cur, a, m);
        r += 1;
    }
    Ok(r)
}

fn mul(x: u64, y: u64, m: u64) -> u64 {
    (u128::from(x) * u128::from(y) % u128::from(m)) as u64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

const UNSEEN: u32 = u32::MAX;

/// Least exponent reaching every residue, for one base at a time.
///
/// Refilling for a new base only clears the entries the previous base
/// touched, so sweeping every base of a modulus costs the sum of their
/// orders rather than `m` per base.
#[derive(Clone, Debug)]
pub struct PowerTable {
    m: u64,
    first: Vec<u32>,
    cycle: Vec<u32>,
}

impl PowerTable {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        if m > DEFAULT_BOUND {
            return Err(Error::OracleBound {
                modulus: m.into(),
                bound: DEFAULT_BOUND,
            });
        }
        Ok(Self {
            m,
            first: vec![UNSEEN; m as usize],
            cycle: Vec::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// Enumerates the powers of `a` (a unit modulo `m`); returns `ord_m(a)`.
    pub fn fill(&mut self, a: u64) -> u64 {
        for &r in &self.cycle {
            self.first[r as usize] = UNSEEN;
        }
        self.cycle.clear();
        let m = self.m;
        let mut cur = 1 % m;
        loop {
            if self.first[cur as usize] != UNSEEN {
                break;
            }
            self.first[cur as usize] = self.cycle.len() as u32;
            self.cycle.push(cur as u32);
            cur = mul(cur, a, m);
        }
        debug_assert_eq!(cur, 1 % m, "base is not a unit");
        self.cycle.len() as u64
    }

    /// Order of the current base.
    pub fn period(&self) -> u64 {
        self.cycle.len() as u64
    }

    /// Least `x >= 0` with `a^x = b`, for the current base.
    pub fn minimal_x(&self, b: u64) -> Option<u64> {
        match self.first[b as usize] {
            UNSEEN => None,
            x => Some(u64::from(x)),
        }
    }

    /// Whether `a^x = b` for the current base.
    pub fn is_solution(&self, x: u64, b: u64) -> bool {
        self.minimal_x(b) == Some(x % self.period())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, k: u32) -> PrimePowerModulus {
        PrimePowerModulus::from_u64(p, k).unwrap()
    }

    #[test]
    fn brute_dlog_examples() {
        let s = brute_dlog(2, 8, &ctx(5, 2)).unwrap();
        assert_eq!((s.minimal_x, s.period), (Some(3), 20));
        let s = brute_dlog(1, 1, &ctx(7, 3)).unwrap();
        assert_eq!((s.minimal_x, s.period), (Some(0), 1));
        let s = brute_dlog(8, 5, &ctx(3, 2)).unwrap();
        assert_eq!((s.minimal_x, s.period), (None, 2));
    }

    #[test]
    fn solution_set_membership() {
        let s = brute_dlog(2, 8, &ctx(5, 2)).unwrap();
        assert!(s.contains(&BigUint::from(23u32)));
        assert!(!s.contains(&BigUint::from(13u32)));
    }

    #[test]
    fn brute_dlog_refuses_large_moduli() {
        let c = ctx(3, 20);
        assert!(matches!(
            brute_dlog(2, 1, &c),
            Err(Error::OracleBound { .. })
        ));
        assert!(matches!(
            brute_dlog(6, 1, &ctx(3, 2)),
            Err(Error::BaseDivisibleByP { .. })
        ));
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(3, 8).unwrap(), 2);
        assert_eq!(mult_order(2, 25).unwrap(), 20);
        assert_eq!(mult_order(-1, 25).unwrap(), 2);
        assert!(matches!(mult_order(4, 8), Err(Error::NotCoprime { .. })));
        assert!(matches!(
            mult_order(2, DEFAULT_BOUND + 1),
            Err(Error::OracleBound { .. })
        ));
    }

    #[test]
    fn order_divides_p_minus_one() {
        for p in (2..100u64).filter(|&n| (2..n).all(|d| n % d != 0)) {
            for a in 1..p {
                assert_eq!((p - 1) % mult_order(a, p).unwrap(), 0);
            }
        }
    }

    #[test]
    fn power_table_matches_brute_dlog() {
        let c = ctx(3, 4);
        let mut table = PowerTable::new(81).unwrap();
        for a in (1..81).filter(|a| a % 3 != 0) {
            table.fill(a);
            for b in 0..81 {
                let s = brute_dlog(a, b, &c).unwrap();
                assert_eq!(table.minimal_x(b), s.minimal_x);
                assert_eq!(table.period(), s.period);
            }
        }
    }
}
