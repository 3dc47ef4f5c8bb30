//! Lifting a discrete logarithm from `Z/pZ` to `Z/p^kZ`.
//!
//! Given `a^z = b (mod p)` with `p` not dividing `a`, the solution modulo
//! `p^k` is built as `x = (p - 1) y + z`, with `y` assembled one base-`p`
//! digit per iteration. Each iteration fixes one more base-`p` digit of
//! `c = a^x mod p^k` so that it agrees with `b`. After the `j`-th iteration
//! `c = b (mod p^(r + j))`, where `r = min(nu_p(a^(p-1) - 1), k)`.
//!
//! The digit update needs `e^d` and `e^p` for `e = a^((p-1) p^j)`. Once
//! `2r >= k` the binomial expansion of `(1 + (e - 1))^d` truncates after the
//! linear term, once `3r >= k` after the quadratic one; otherwise both powers
//! come from a single shared squaring chain ([`Ring::pow_dual`]).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{word, Int, WORD_LIMIT};
use crate::error::{Error, Result};
use crate::ring::{
    floor_mod, valuation_unsigned, OpCounter, PrimePowerModulus, Ring, Width, POW_DUAL_THRESHOLD,
};

/// One validated lifting problem: find `x` with `a^x = b (mod p^k)` given
/// `a^z = b (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftInstance {
    a: BigUint,
    z: BigUint,
    b: BigUint,
    ctx: PrimePowerModulus,
}

impl LiftInstance {
    /// Normalizes `a, b` into `[0, p^k)` and `z` into `[0, p - 1)` (floor
    /// semantics for negative inputs), then checks `p ∤ a` and
    /// `a^z = b (mod p)`.
    pub fn new(
        a: impl Into<BigInt>,
        z: impl Into<BigInt>,
        b: impl Into<BigInt>,
        ctx: PrimePowerModulus,
    ) -> Result<Self> {
        let (a, z, b) = (a.into(), z.into(), b.into());
        let p = ctx.p().clone();
        let a_mod_p = floor_mod(&a, &p);
        if a_mod_p.is_zero() {
            return Err(Error::BaseDivisibleByP { a, p });
        }
        let b_mod_p = floor_mod(&b, &p);
        let z_mod_p = if p == BigUint::from(2u32) {
            BigUint::zero()
        } else {
            floor_mod(&z, &(&p - 1u32))
        };
        if a_mod_p.modpow(&z_mod_p, &p) != b_mod_p {
            return Err(Error::ExponentMismatch);
        }
        Ok(Self {
            a: ctx.normalize(&a),
            z: z_mod_p,
            b: ctx.normalize(&b),
            ctx,
        })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    /// The known exponent, reduced into `[0, p - 1)` (always 0 for `p = 2`).
    pub fn z(&self) -> &BigUint {
        &self.z
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn ctx(&self) -> &PrimePowerModulus {
        &self.ctx
    }
}

/// Result of a lifting run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftOutcome {
    /// A non-negative `x` with `a^x = b (mod p^k)`, or `None` when no such
    /// `x` exists.
    pub solution: Option<BigUint>,
    /// `min(nu_p(a^(p-1) - 1), k)` for odd `p`, `min(nu_2(a^2 - 1), k)` for
    /// `p = 2`. Zero when `k = 0`.
    pub r: u32,
    /// Main-loop passes; at most `k - r`.
    pub iterations: u32,
    pub counter: OpCounter,
}

/// Integer backend selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// `u64` when `p^k` is below 2^32, `BigUint` otherwise.
    #[default]
    Auto,
    /// Always `BigUint`.
    BigOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftOptions {
    /// Disable the binomial shortcuts and take the `pow_dual` update on every
    /// iteration.
    pub force_pow_dual: bool,
    pub pow_dual_threshold: u64,
    pub backend: Backend,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            force_pow_dual: false,
            pow_dual_threshold: POW_DUAL_THRESHOLD,
            backend: Backend::Auto,
        }
    }
}

/// How much to trust a caller-supplied `ord_p(a)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrderCheck {
    /// Check `ord | p - 1` and `a^ord = 1 (mod p)`; for `p < 2^32` also
    /// check that no proper divisor works.
    #[default]
    Validate,
    Trust,
}

/// Lifting result in backend representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved<T> {
    pub solution: Option<T>,
    pub r: u32,
    pub iterations: u32,
}

/// Per-base state of the lifting algorithm.
///
/// Everything that depends only on `a` (the step `a^(p-1)`, `r` and `h`) is
/// computed once; [`Lifter::solve`] then handles any number of targets.
#[derive(Clone, Debug)]
pub struct Lifter<T: Int> {
    ring: Ring<T>,
    p: T,
    k: u32,
    a: T,
    /// Multiplier of `y` in `x = step * y + z`: `p - 1`, or `ord_p(a)`.
    step: T,
    binary: bool,
    /// `a^step mod p^k` (`a^2` for `p = 2`); zero-sized when `k = 0`.
    e0: T,
    r: u32,
    /// `(e0 - 1) / p^r`.
    h: T,
    /// `p^r`.
    v0: T,
    opts: LiftOptions,
}

impl<T: Int> Lifter<T> {
    /// Prepares base `a` (reduced, not divisible by `p`) modulo `m = p^k`.
    ///
    /// `order` replaces `p - 1` by `ord_p(a)` in the solution form and must
    /// already be validated; for `p = 2` it is ignored.
    pub fn new(
        a: T,
        p: T,
        k: u32,
        order: Option<T>,
        opts: LiftOptions,
        counter: &mut OpCounter,
    ) -> Self {
        let m = p.pow_u32(k);
        let ring = Ring::new(m);
        let one = T::from_u64(1);
        let binary = p == T::from_u64(2);
        let step = match order {
            Some(ord) if !binary => ord,
            _ => p.sub(&one),
        };
        let mut lifter = Self {
            ring,
            p,
            k,
            a,
            step,
            binary,
            e0: T::from_u64(0),
            r: 0,
            h: T::from_u64(0),
            v0: one.clone(),
            opts,
        };
        if k == 0 {
            return lifter;
        }
        let e_exp = if binary {
            T::from_u64(2)
        } else {
            lifter.step.clone()
        };
        let e0 = lifter.ring.pow_mod(&lifter.a, &e_exp, counter);
        let (r, h) = valuation_unsigned(&e0.sub(&one), &lifter.p, k);
        lifter.v0 = lifter.p.pow_u32(r);
        lifter.e0 = e0;
        lifter.r = r;
        lifter.h = h;
        lifter
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> &T {
        self.ring.modulus()
    }

    /// Lifts target `b` (reduced) with known exponent `z`, where
    /// `0 <= z < step` and `a^z = b (mod p)`.
    pub fn solve(&self, b: &T, z: &T, counter: &mut OpCounter) -> Solved<T> {
        let k = self.k;
        if k == 0 {
            return Solved {
                solution: Some(z.clone()),
                r: 0,
                iterations: 0,
            };
        }
        let ring = &self.ring;
        let p = &self.p;
        let one = T::from_u64(1);

        let mut c = ring.pow_mod(&self.a, z, counter);
        let mut y = T::from_u64(0);
        let mut u = if self.binary {
            T::from_u64(2)
        } else {
            one.clone()
        };
        let mut v = self.v0.clone();
        let mut r = self.r;
        let no_solution = Solved {
            solution: None,
            r: self.r,
            iterations: 0,
        };

        // The lowest r digits of c never change inside the loop.
        if b.rem(&v) != c.rem(&v) {
            if !self.binary || b.rem(&v) != self.a.rem(&v) {
                return no_solution;
            }
            // p = 2: the first binary digit of y is 1.
            c = self.a.clone();
            y = one.clone();
        }
        if *b == c {
            return Solved {
                solution: Some(self.finish(&y, z)),
                r: self.r,
                iterations: 0,
            };
        }

        // (h b)^(p-2) = (h b)^(-1) mod p; only needed once the loop runs.
        let small = Ring::with_width(p.clone(), Width::Small);
        let hb = small.mul_mod(&self.h.rem(p), &b.rem(p), counter);
        let g = small.pow_mod(&hb, &p.sub(&T::from_u64(2)), counter);

        let mut e = self.e0.clone();
        let mut iterations = 0;
        while *b != c {
            assert!(r < k, "lifting loop overran p^k; preconditions violated");
            let diff = b.div(&v).rem(p).add(p).sub(&c.div(&v).rem(p)).rem(p);
            let d = small.mul_mod(&g, &diff, counter);
            y = y.add(&d.mul(&u));

            let (f, e_next) = self.step_powers(&e, &d, r, counter);
            e = e_next;
            c = ring.mul_mod(&c, &f, counter);
            u = u.mul(p);
            v = v.mul(p);
            r += 1;
            iterations += 1;
            debug_assert!(c.rem(&v) == b.rem(&v), "c = b (mod p^(r + j)) violated");
        }
        Solved {
            solution: Some(self.finish(&y, z)),
            r: self.r,
            iterations,
        }
    }

    /// `(e^d, e^p) mod p^k`, given `e = 1 (mod p^r)`.
    fn step_powers(&self, e: &T, d: &T, r: u32, counter: &mut OpCounter) -> (T, T) {
        let ring = &self.ring;
        let m = ring.modulus();
        let p = &self.p;
        let one = T::from_u64(1);
        let k = u64::from(self.k);
        let r = u64::from(r);
        let t = e.sub(&one);

        if !self.opts.force_pow_dual && 2 * r >= k {
            // (1 + t)^d = 1 + d t once t^2 = 0 (mod p^k).
            let f = one.add(&ring.mul_digit(&t, d, counter)).rem(m);
            let e_next = one.add(&t.mul(p).rem(m)).rem(m);
            return (f, e_next);
        }
        if !self.opts.force_pow_dual && 3 * r >= k {
            // (1 + t)^d = 1 + t (d + t d(d-1)/2) once t^3 = 0 (mod p^k).
            let two = T::from_u64(2);
            let d_pair = if d.eq_zero() {
                d.clone()
            } else {
                d.mul(&d.sub(&one)).div(&two)
            };
            let inner = d.add(&ring.mul_digit(&t, &d_pair, counter)).rem(m);
            let f = one.add(&ring.mul_mod(&t, &inner, counter)).rem(m);
            let p_pair = p.mul(&p.sub(&one)).div(&two);
            let inner = p.add(&ring.mul_digit(&t, &p_pair, counter)).rem(m);
            let e_next = one.add(&ring.mul_mod(&t, &inner, counter)).rem(m);
            return (f, e_next);
        }
        ring.pow_dual_ordered(e, d, p, self.opts.pow_dual_threshold, counter)
    }

    fn finish(&self, y: &T, z: &T) -> T {
        self.step.mul(y).add(z)
    }
}

/// Lifts `inst` with the default options.
pub fn lift(inst: &LiftInstance, counter: &mut OpCounter) -> LiftOutcome {
    lift_with_options(inst, LiftOptions::default(), counter)
}

pub fn lift_with_options(
    inst: &LiftInstance,
    opts: LiftOptions,
    counter: &mut OpCounter,
) -> LiftOutcome {
    run(inst, None, &inst.z, opts, counter)
}

/// Lifts using a known `ord_p(a)` in place of `p - 1`, which makes the
/// result the least non-negative solution.
pub fn lift_with_order(
    inst: &LiftInstance,
    order: &BigUint,
    check: OrderCheck,
    counter: &mut OpCounter,
) -> Result<LiftOutcome> {
    lift_with_order_options(inst, order, check, LiftOptions::default(), counter)
}

pub fn lift_with_order_options(
    inst: &LiftInstance,
    order: &BigUint,
    check: OrderCheck,
    opts: LiftOptions,
    counter: &mut OpCounter,
) -> Result<LiftOutcome> {
    if check == OrderCheck::Validate {
        validate_order(inst.a(), order, inst.ctx().p())?;
    }
    if order.is_zero() {
        return Err(Error::InvalidOrder {
            order: order.clone(),
            reason: "order must be positive",
        });
    }
    let z = inst.z() % order;
    Ok(run(inst, Some(order), &z, opts, counter))
}

fn validate_order(a: &BigUint, order: &BigUint, p: &BigUint) -> Result<()> {
    let invalid = |reason| {
        Err(Error::InvalidOrder {
            order: order.clone(),
            reason,
        })
    };
    if order.is_zero() {
        return invalid("order must be positive");
    }
    let p_minus_1 = p - 1u32;
    if !(&p_minus_1 % order).is_zero() {
        return invalid("order does not divide p - 1");
    }
    let a = a % p;
    if !a.modpow(order, p).is_one() {
        return invalid("a^order is not 1 modulo p");
    }
    if let Some(ord) = order.to_u64().filter(|_| p < &BigUint::from(WORD_LIMIT)) {
        let mut rest = ord;
        let mut q = 2u64;
        while rest > 1 {
            if q * q > rest {
                q = rest;
            }
            if rest % q == 0 {
                if a.modpow(&BigUint::from(ord / q), p).is_one() {
                    return invalid("a proper divisor of order already gives 1 modulo p");
                }
                while rest % q == 0 {
                    rest /= q;
                }
            }
            q += 1;
        }
    }
    Ok(())
}

fn run(
    inst: &LiftInstance,
    order: Option<&BigUint>,
    z: &BigUint,
    opts: LiftOptions,
    counter: &mut OpCounter,
) -> LiftOutcome {
    let ctx = inst.ctx();
    let solved = if opts.backend == Backend::Auto && ctx.fits_word() {
        let lifter = Lifter::new(
            word(inst.a()),
            word(ctx.p()),
            ctx.k(),
            order.map(word),
            opts,
            counter,
        );
        let s = lifter.solve(&word(inst.b()), &word(z), counter);
        Solved {
            solution: s.solution.map(BigUint::from),
            r: s.r,
            iterations: s.iterations,
        }
    } else {
        let lifter = Lifter::new(
            inst.a().clone(),
            ctx.p().clone(),
            ctx.k(),
            order.cloned(),
            opts,
            counter,
        );
        lifter.solve(inst.b(), z, counter)
    };
    LiftOutcome {
        solution: solved.solution,
        r: solved.r,
        iterations: solved.iterations,
        counter: *counter,
    }
}

/// Least `x >= 0` with `a^x = b (mod p^k)` when `p` divides `a`.
///
/// Powers of such an `a` are determined by their valuation: `a^x` has
/// valuation `x nu_p(a)`, so apart from `b = 1` and `b = 0 (mod p^k)` the only
/// candidate is `nu_p(b) / nu_p(a)`.
pub fn lift_p_divides_a(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    ctx: &PrimePowerModulus,
) -> Result<Option<BigUint>> {
    let (a, b) = (a.into(), b.into());
    let p = ctx.p();
    if !floor_mod(&a, p).is_zero() {
        return Err(Error::BaseNotDivisibleByP { a, p: p.clone() });
    }
    let m = ctx.m();
    let k = ctx.k();
    let a = ctx.normalize(&a);
    let b = ctx.normalize(&b);
    if b == BigUint::one() % m {
        return Ok(Some(BigUint::zero()));
    }
    let (va, _) = valuation_unsigned(&a, p, k);
    let (vb, _) = valuation_unsigned(&b, p, k);
    let candidate = if vb >= k {
        k.div_ceil(va)
    } else if vb == 0 || vb % va != 0 {
        return Ok(None);
    } else {
        vb / va
    };
    let x = BigUint::from(candidate);
    Ok((a.modpow(&x, m) == b).then_some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, k: u32) -> PrimePowerModulus {
        PrimePowerModulus::from_u64(p, k).unwrap()
    }

    fn inst(a: i64, z: i64, b: i64, p: u64, k: u32) -> LiftInstance {
        LiftInstance::new(a, z, b, ctx(p, k)).unwrap()
    }

    fn lift_x(a: i64, z: i64, b: i64, p: u64, k: u32) -> Option<u64> {
        let out = lift(&inst(a, z, b, p, k), &mut OpCounter::new());
        out.solution.map(|x| x.to_u64().unwrap())
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_x(2, 3, 8, 5, 2), Some(3));
        assert_eq!(lift_x(8, 1, 5, 3, 2), None);
        assert_eq!(lift_x(3, 0, 3, 2, 3), Some(1));
        assert_eq!(lift_x(3, 0, 5, 2, 3), None);
        let b = 7i64.pow(4) % 11i64.pow(4);
        assert_eq!(lift_x(7, 4, b, 11, 0), Some(4));
    }

    #[test]
    fn k_zero_skips_all_arithmetic() {
        let mut c = OpCounter::new();
        let out = lift(&inst(7, 4, 2401, 11, 0), &mut c);
        assert_eq!(out.solution, Some(BigUint::from(4u32)));
        assert_eq!(c, OpCounter::new());
    }

    #[test]
    fn p_two_first_digit_shortcut_exits_immediately() {
        let out = lift(&inst(3, 0, 3, 2, 3), &mut OpCounter::new());
        assert_eq!(out.r, 3);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            LiftInstance::new(2, 0, 8, ctx(5, 2)),
            Err(Error::ExponentMismatch)
        ));
        assert!(matches!(
            LiftInstance::new(10, 1, 10, ctx(5, 2)),
            Err(Error::BaseDivisibleByP { .. })
        ));
    }

    #[test]
    fn instance_normalization() {
        let i = LiftInstance::new(-23, -1, 8 + 25, ctx(5, 2)).unwrap();
        assert_eq!(i.a(), &BigUint::from(2u32));
        assert_eq!(i.z(), &BigUint::from(3u32));
        assert_eq!(i.b(), &BigUint::from(8u32));
        let i = LiftInstance::new(3, 5, 1, ctx(2, 4)).unwrap();
        assert_eq!(i.z(), &BigUint::zero());
    }

    #[test]
    fn lift_with_order_examples() {
        let run = |a, z, b, p, k, ord: u32| {
            lift_with_order(
                &inst(a, z, b, p, k),
                &BigUint::from(ord),
                OrderCheck::Validate,
                &mut OpCounter::new(),
            )
            .unwrap()
            .solution
            .map(|x| x.to_u64().unwrap())
        };
        assert_eq!(run(8, 0, 1, 3, 2, 2), Some(0));
        assert_eq!(run(2, 3, 8, 5, 2, 4), Some(3));
        assert_eq!(run(4, 0, 7, 3, 2, 1), Some(2));
    }

    #[test]
    fn order_validation() {
        let i = inst(4, 0, 7, 3, 2);
        let check = |ord: u32| {
            lift_with_order(
                &i,
                &BigUint::from(ord),
                OrderCheck::Validate,
                &mut OpCounter::new(),
            )
        };
        assert!(check(2).is_err(), "4 = 1 mod 3, so 2 is not minimal");
        assert!(check(3).is_err());
        assert!(check(0).is_err());
        let i = inst(2, 1, 2, 7, 2);
        assert!(lift_with_order(
            &i,
            &BigUint::from(2u32),
            OrderCheck::Validate,
            &mut OpCounter::new()
        )
        .is_err());
        assert!(lift_with_order(
            &i,
            &BigUint::from(3u32),
            OrderCheck::Validate,
            &mut OpCounter::new()
        )
        .is_ok());
    }

    #[test]
    fn p_divides_a_examples() {
        let c = ctx(3, 2);
        assert_eq!(lift_p_divides_a(6, 1, &c).unwrap(), Some(BigUint::zero()));
        assert_eq!(
            lift_p_divides_a(3, 0, &c).unwrap(),
            Some(BigUint::from(2u32))
        );
        assert_eq!(lift_p_divides_a(6, 3, &c).unwrap(), None);
        assert!(matches!(
            lift_p_divides_a(2, 1, &c),
            Err(Error::BaseNotDivisibleByP { .. })
        ));
        assert_eq!(lift_p_divides_a(0, 0, &c).unwrap(), Some(BigUint::one()));
        assert_eq!(lift_p_divides_a(3, 3, &c).unwrap(), Some(BigUint::one()));
        assert_eq!(
            lift_p_divides_a(9, 0, &ctx(3, 5)).unwrap(),
            Some(BigUint::from(3u32))
        );
        assert_eq!(
            lift_p_divides_a(5, 7, &ctx(5, 0)).unwrap(),
            Some(BigUint::zero())
        );
    }

    #[test]
    fn p_divides_a_matches_exhaustive_search() {
        for (p, k) in [(2u64, 5u32), (3, 4), (5, 3), (7, 2)] {
            let c = ctx(p, k);
            let m = p.pow(k);
            for a in (0..m).step_by(p as usize) {
                for b in 0..m {
                    let brute = (0..=u64::from(k) + 1).find(|&x| {
                        BigUint::from(a).modpow(&BigUint::from(x), &BigUint::from(m))
                            == BigUint::from(b)
                    });
                    let got = lift_p_divides_a(a as i64, b as i64, &c).unwrap();
                    assert_eq!(
                        got.map(|x| x.to_u64().unwrap()),
                        brute,
                        "a={a} b={b} p={p} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn backends_agree() {
        let opts = LiftOptions {
            backend: Backend::BigOnly,
            ..LiftOptions::default()
        };
        for (a, z, b, p, k) in [
            (2, 3, 8, 5, 6),
            (3, 0, 5, 2, 9),
            (10, 1, 10, 7, 5),
            (5, 2, 25, 3, 8),
        ] {
            let i = match LiftInstance::new(a, z, b, ctx(p, k)) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let mut c1 = OpCounter::new();
            let mut c2 = OpCounter::new();
            let x = lift(&i, &mut c1);
            let y = lift_with_options(&i, opts, &mut c2);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn solution_satisfies_congruence_beyond_word_size() {
        let c = ctx(1_000_003, 5);
        let a = BigInt::from(123_456_789u64);
        let x = BigUint::from(987_654_321_012u64);
        let b = BigUint::from(123_456_789u64).modpow(&x, c.m());
        let z = BigInt::from(&x % 1_000_002u32);
        let i = LiftInstance::new(a, z, BigInt::from(b.clone()), c.clone()).unwrap();
        let out = lift(&i, &mut OpCounter::new());
        let got = out.solution.unwrap();
        assert_eq!(i.a().modpow(&got, c.m()), b);
        assert!(out.iterations <= c.k() - out.r);
    }
}
