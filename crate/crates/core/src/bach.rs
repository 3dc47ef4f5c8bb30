//! Bach's lifting method, kept as an independent baseline.
//!
//! For odd `p`, `theta(x) = (x^((p-1) p^(k-1)) - 1) / p^k mod p^(k-1)` is a
//! homomorphism from the units modulo `p^k` onto `Z/p^(k-1)Z` whose kernel is
//! the `(p-1)`-torsion. Solving `theta(a) y = theta(b) (mod p^(k-1))` and
//! combining `y` with `z` by CRT gives a solution modulo `p^k`.
//!
//! Both theta evaluations are full exponentiations modulo `p^(2k-1)`, so the
//! cost does not depend on whether a solution exists.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith::{word, Int, WORD_LIMIT};
use crate::error::{Error, Result};
use crate::lift::{LiftInstance, LiftOutcome, Solved};
use crate::ring::{floor_mod, valuation_unsigned, OpCounter, PrimePowerModulus, Ring, Width};

/// `theta(x)` for one modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaValue {
    pub value: BigUint,
    pub ctx: PrimePowerModulus,
}

/// Evaluates `theta(x)`; multiplications are tallied as wide
/// (`mod p^(2k-1)`).
pub fn theta(
    x: impl Into<BigInt>,
    ctx: &PrimePowerModulus,
    counter: &mut OpCounter,
) -> Result<ThetaValue> {
    check_modulus(ctx)?;
    let x = floor_mod(&x.into(), ctx.m());
    if (&x % ctx.p()).is_zero() {
        return Err(Error::BaseDivisibleByP {
            a: x.into(),
            p: ctx.p().clone(),
        });
    }
    let params = Params::new(ctx.p().clone(), ctx.k());
    Ok(ThetaValue {
        value: params.theta(&x, counter),
        ctx: ctx.clone(),
    })
}

fn check_modulus(ctx: &PrimePowerModulus) -> Result<()> {
    if ctx.p() == &BigUint::from(2u32) {
        return Err(Error::EvenPrime);
    }
    if ctx.k() == 0 {
        return Err(Error::ZeroExponent);
    }
    Ok(())
}

#[derive(Clone, Debug)]
struct Params<T: Int> {
    p: T,
    k: u32,
    /// `p^k`
    pk: T,
    /// `p^(k-1)`
    n: T,
    /// `(p-1) p^(k-1)`
    phi: T,
    wide: Ring<T>,
}

impl<T: Int> Params<T> {
    fn new(p: T, k: u32) -> Self {
        let one = T::from_u64(1);
        let n = p.pow_u32(k - 1);
        let pk = n.mul(&p);
        let phi = p.sub(&one).mul(&n);
        let wide = Ring::with_width(p.pow_u32(2 * k - 1), Width::Wide);
        Self {
            p,
            k,
            pk,
            n,
            phi,
            wide,
        }
    }

    fn theta(&self, x: &T, counter: &mut OpCounter) -> T {
        let t = self.wide.pow_mod(x, &self.phi, counter);
        // t = 1 (mod p^k) by Euler's theorem, and t < p^(2k-1).
        t.sub(&T::from_u64(1)).div(&self.pk).rem(&self.n)
    }
}

/// Baseline state for one base `a`: `theta(a)` is computed once.
#[derive(Clone, Debug)]
pub struct BachLifter<T: Int> {
    params: Params<T>,
    a: T,
    theta_a: T,
}

impl<T: Int> BachLifter<T> {
    /// `a` reduced modulo `p^k` and not divisible by the odd prime `p`;
    /// `k >= 1`.
    pub fn new(a: T, p: T, k: u32, counter: &mut OpCounter) -> Self {
        let params = Params::new(p, k);
        let theta_a = params.theta(&a, counter);
        Self { params, a, theta_a }
    }

    pub fn theta_a(&self) -> &T {
        &self.theta_a
    }

    /// Lifts `b` given `a^z = b (mod p)`.
    ///
    /// Fails only if the reconstructed `x` does not satisfy the congruence,
    /// which would mean the method itself is wrong.
    pub fn solve(&self, b: &T, z: &T, counter: &mut OpCounter) -> Result<Solved<T>> {
        let Params {
            p, k, pk, n, phi, ..
        } = &self.params;
        let theta_b = self.params.theta(b, counter);

        // theta is onto Z/p^(k-1), and theta(1 + p) generates it, so
        // r = min(nu_p(a^(p-1) - 1), k) = min(nu_p(theta(a)) + 1, k).
        let (g_exp, _) = valuation_unsigned(&self.theta_a, p, k - 1);
        let r = (g_exp + 1).min(*k);
        let g = p.pow_u32(g_exp);
        if !theta_b.rem(&g).eq_zero() {
            return Ok(Solved {
                solution: None,
                r,
                iterations: 0,
            });
        }
        let reduced_n = n.div(&g);
        let unit = self.theta_a.div(&g).rem(&reduced_n);
        let inv = unit
            .inv_mod(&reduced_n)
            .ok_or_else(|| Error::Internal("theta(a) / gcd is not a unit".into()))?;
        let y = theta_b.div(&g).mul_rem(&inv, &reduced_n);

        // x = ((z - y) p^(k-1) + y) mod (p-1) p^(k-1), kept non-negative.
        let y_n = y.mul(n).rem(phi);
        let x = z.mul(n).add(&y).add(phi).sub(&y_n).rem(phi);

        let check = Ring::new(pk.clone());
        if check.pow_mod(&self.a, &x, &mut OpCounter::new()) != b.rem(pk) {
            return Err(Error::Internal(format!(
                "baseline produced x = {x:?} which does not satisfy the congruence"
            )));
        }
        Ok(Solved {
            solution: Some(x),
            r,
            iterations: 0,
        })
    }
}

/// Runs the baseline on `inst`. Requires odd `p` and `k >= 1`.
pub fn bach_lift(inst: &LiftInstance, counter: &mut OpCounter) -> Result<LiftOutcome> {
    let ctx = inst.ctx();
    check_modulus(ctx)?;
    let k = ctx.k();
    let wide_fits = num_traits::Pow::pow(ctx.p(), 2 * k - 1) < BigUint::from(WORD_LIMIT);
    let solved = if wide_fits {
        let p = word(ctx.p());
        let lifter = BachLifter::new(word(inst.a()), p, k, counter);
        let s = lifter.solve(&word(inst.b()), &word(inst.z()), counter)?;
        Solved {
            solution: s.solution.map(BigUint::from),
            r: s.r,
            iterations: 0,
        }
    } else {
        let lifter = BachLifter::new(inst.a().clone(), ctx.p().clone(), k, counter);
        lifter.solve(inst.b(), inst.z(), counter)?
    };
    Ok(LiftOutcome {
        solution: solved.solution,
        r: solved.r,
        iterations: 0,
        counter: *counter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ctx(p: u64, k: u32) -> PrimePowerModulus {
        PrimePowerModulus::from_u64(p, k).unwrap()
    }

    fn theta_of(x: i64, p: u64, k: u32) -> u64 {
        theta(x, &ctx(p, k), &mut OpCounter::new())
            .unwrap()
            .value
            .to_u64()
            .unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_of(1, 5, 3), 0);
        // (2^20 - 1) / 25 = 41943 = 3 (mod 5)
        assert_eq!(theta_of(2, 5, 2), 3);
        // (1 + 7) has order 7 modulo 49, so theta is non-zero.
        let direct = (BigUint::from(8u32).pow(42u32) - 1u32) / 49u32 % 7u32;
        assert_eq!(BigUint::from(theta_of(8, 7, 2)), direct);
        assert_ne!(theta_of(8, 7, 2), 0);
    }

    #[test]
    fn theta_is_a_homomorphism() {
        let (p, k) = (7u64, 4u32);
        let m = p.pow(k);
        let n = p.pow(k - 1);
        for (x, y) in [(3u64, 5u64), (10, 12), (100, 2000), (1 + p, 1 + p)] {
            let lhs = theta_of(((x * y) % m) as i64, p, k);
            let rhs = (theta_of(x as i64, p, k) + theta_of(y as i64, p, k)) % n;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn theta_rejects_bad_input() {
        let mut c = OpCounter::new();
        assert!(matches!(
            theta(2, &ctx(2, 3), &mut c),
            Err(Error::EvenPrime)
        ));
        assert!(matches!(
            theta(10, &ctx(5, 3), &mut c),
            Err(Error::BaseDivisibleByP { .. })
        ));
        assert!(matches!(
            theta(2, &ctx(5, 0), &mut c),
            Err(Error::ZeroExponent)
        ));
    }

    fn bach_x(a: i64, z: i64, b: i64, p: u64, k: u32) -> Option<u64> {
        let inst = LiftInstance::new(a, z, b, ctx(p, k)).unwrap();
        bach_lift(&inst, &mut OpCounter::new())
            .unwrap()
            .solution
            .map(|x| x.to_u64().unwrap())
    }

    #[test]
    fn bach_examples() {
        let x = bach_x(2, 3, 8, 5, 2).unwrap();
        assert_eq!(x % 20, 3);
        assert_eq!(bach_x(1, 0, 1, 7, 3), Some(0));
        assert_eq!(bach_x(8, 1, 5, 3, 2), None);
        assert_eq!(bach_x(3, 1, 3, 5, 1), Some(1));
    }

    #[test]
    fn bach_rejects_two() {
        let inst = LiftInstance::new(3, 0, 3, ctx(2, 3)).unwrap();
        assert!(matches!(
            bach_lift(&inst, &mut OpCounter::new()),
            Err(Error::EvenPrime)
        ));
    }

    #[test]
    fn bach_big_backend() {
        // p^(2k-1) = 101^9 exceeds a word.
        let c = ctx(101, 5);
        let a = 7u32;
        let x = BigUint::from(123_456_789u64);
        let b = BigUint::from(a).modpow(&x, c.m());
        let inst = LiftInstance::new(
            a,
            BigInt::from(&x % 100u32),
            BigInt::from(b.clone()),
            c.clone(),
        )
        .unwrap();
        let got = bach_lift(&inst, &mut OpCounter::new())
            .unwrap()
            .solution
            .unwrap();
        assert_eq!(BigUint::from(a).modpow(&got, c.m()), b);
    }
}
