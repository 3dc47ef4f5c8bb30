//! Arithmetic in `Z/p^k Z` with multiplication counting.
//!
//! Costs are measured the way the lifting literature does it: one unit per
//! multiplication of two full-size residues. Multiplications and exact
//! divisions by powers of `p` are free, squarings are not discounted, and
//! work modulo `p` itself is tallied separately.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{Int, WORD_LIMIT};
use crate::error::{Error, Result};

/// Exponent bound below which [`Ring::pow_dual`] falls back to two plain
/// exponentiations.
pub const POW_DUAL_THRESHOLD: u64 = 15;

/// Which tally a ring's multiplications land in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Width {
    /// Residues modulo `p^k`.
    Full,
    /// Residues modulo `p^(2k-1)`, used by the baseline method.
    Wide,
    /// Residues modulo `p` (digit arithmetic).
    Small,
}

/// Multiplication tallies for a single algorithm run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    mults_mod_m: u64,
    mults_mod_wide: u64,
    mults_mod_small: u64,
    mults_by_digit: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Multiplications of two residues modulo `p^k`.
    pub fn mults_mod_m(&self) -> u64 {
        self.mults_mod_m
    }

    /// Multiplications of two residues modulo `p^(2k-1)`.
    pub fn mults_mod_wide(&self) -> u64 {
        self.mults_mod_wide
    }

    /// Multiplications modulo `p`.
    pub fn mults_mod_small(&self) -> u64 {
        self.mults_mod_small
    }

    /// Products of a residue with a single-digit (or digit-pair) scalar.
    pub fn mults_by_digit(&self) -> u64 {
        self.mults_by_digit
    }

    #[inline]
    pub(crate) fn record(&mut self, width: Width) {
        match width {
            Width::Full => self.mults_mod_m += 1,
            Width::Wide => self.mults_mod_wide += 1,
            Width::Small => self.mults_mod_small += 1,
        }
    }

    #[inline]
    pub(crate) fn record_digit(&mut self) {
        self.mults_by_digit += 1;
    }

    /// Adds another run's tallies to this one.
    pub fn absorb(&mut self, other: &OpCounter) {
        self.mults_mod_m += other.mults_mod_m;
        self.mults_mod_wide += other.mults_mod_wide;
        self.mults_mod_small += other.mults_mod_small;
        self.mults_by_digit += other.mults_by_digit;
    }
}

/// A validated prime power `p^k` with the modulus `m = p^k` cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerModulus {
    p: BigUint,
    k: u32,
    m: BigUint,
}

impl PrimePowerModulus {
    /// Builds `p^k`, rejecting composite `p`.
    pub fn new(p: BigUint, k: u32) -> Result<Self> {
        if !is_prime(&p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::new_unchecked(p, k))
    }

    /// Builds `p^k` without testing `p` for primality.
    ///
    /// Results of every algorithm in this crate are meaningless if `p` is
    /// not actually prime.
    pub fn new_unchecked(p: BigUint, k: u32) -> Self {
        let m = num_traits::Pow::pow(&p, k);
        Self { p, k, m }
    }

    pub fn from_u64(p: u64, k: u32) -> Result<Self> {
        Self::new(BigUint::from(p), k)
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    /// `phi(p^k) = (p - 1) p^(k-1)`, the order of the unit group; 1 for `k = 0`.
    pub fn phi(&self) -> BigUint {
        if self.k == 0 {
            return BigUint::one();
        }
        (&self.p - 1u32) * num_traits::Pow::pow(&self.p, self.k - 1)
    }

    /// Whether the `u64` backend can hold every residue product.
    pub fn fits_word(&self) -> bool {
        self.m < BigUint::from(WORD_LIMIT)
    }

    /// Counted arithmetic modulo `p^k`.
    pub fn ring(&self) -> Ring<BigUint> {
        Ring::new(self.m.clone())
    }

    /// Reduces an arbitrary integer into `[0, m)`.
    pub fn normalize(&self, x: &BigInt) -> BigUint {
        floor_mod(x, &self.m)
    }
}

/// Floor-mod of a signed integer by a positive modulus.
pub fn floor_mod(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    x.mod_floor(&m)
        .to_biguint()
        .expect("floor-mod is non-negative")
}

/// Residue arithmetic modulo `modulus`, tallying every multiplication.
#[derive(Clone, Debug)]
pub struct Ring<T: Int = BigUint> {
    modulus: T,
    width: Width,
}

impl<T: Int> Ring<T> {
    /// A ring whose multiplications count as full-size (`mod p^k`).
    ///
    /// Panics if `modulus` is zero.
    pub fn new(modulus: T) -> Self {
        Self::with_width(modulus, Width::Full)
    }

    pub fn with_width(modulus: T, width: Width) -> Self {
        assert!(!modulus.eq_zero(), "modulus must be at least 1");
        Self { modulus, width }
    }

    pub fn modulus(&self) -> &T {
        &self.modulus
    }

    pub fn width(&self) -> Width {
        self.width
    }

    #[inline]
    pub fn reduce(&self, x: &T) -> T {
        x.rem(&self.modulus)
    }

    /// `1 mod m`.
    #[inline]
    pub fn one(&self) -> T {
        T::from_u64(1).rem(&self.modulus)
    }

    /// `x * y mod m`, counted as exactly one multiplication.
    #[inline]
    pub fn mul_mod(&self, x: &T, y: &T, counter: &mut OpCounter) -> T {
        counter.record(self.width);
        x.mul_rem(y, &self.modulus)
    }

    /// `x * s mod m` where `s` is a small scalar (a digit or a digit pair).
    #[inline]
    pub fn mul_digit(&self, x: &T, s: &T, counter: &mut OpCounter) -> T {
        counter.record_digit();
        x.mul_rem(&s.rem(&self.modulus), &self.modulus)
    }

    /// `a^e mod m` by left-to-right square-and-multiply.
    ///
    /// Performs `bits(e) - 1` squarings and `popcount(e) - 1` further
    /// multiplications, so never more than `2 * ceil(log2 e)`.
    pub fn pow_mod(&self, a: &T, e: &T, counter: &mut OpCounter) -> T {
        if e.eq_zero() {
            return self.one();
        }
        let base = self.reduce(a);
        let mut acc = base.clone();
        for i in (0..e.bits() - 1).rev() {
            acc = self.mul_mod(&acc, &acc, counter);
            if e.bit(i) {
                acc = self.mul_mod(&acc, &base, counter);
            }
        }
        acc
    }

    /// `(a^b1 mod m, a^b2 mod m)` sharing one squaring chain.
    pub fn pow_dual(&self, a: &T, b1: &T, b2: &T, counter: &mut OpCounter) -> Result<(T, T)> {
        self.pow_dual_with_threshold(a, b1, b2, POW_DUAL_THRESHOLD, counter)
    }

    /// [`Ring::pow_dual`] with an explicit small-exponent threshold. When
    /// `b2 <= threshold` the pair is computed as `a^b1` and
    /// `a^b1 * a^(b2 - b1)`.
    pub fn pow_dual_with_threshold(
        &self,
        a: &T,
        b1: &T,
        b2: &T,
        threshold: u64,
        counter: &mut OpCounter,
    ) -> Result<(T, T)> {
        if b1 > b2 {
            return Err(Error::ExponentsOutOfOrder {
                b1: b1.to_biguint(),
                b2: b2.to_biguint(),
            });
        }
        Ok(self.pow_dual_ordered(a, b1, b2, threshold, counter))
    }

    /// Infallible core of `pow_dual`; the caller guarantees `b1 <= b2`.
    pub(crate) fn pow_dual_ordered(
        &self,
        a: &T,
        b1: &T,
        b2: &T,
        threshold: u64,
        counter: &mut OpCounter,
    ) -> (T, T) {
        debug_assert!(b1 <= b2);
        if *b2 <= T::from_u64(threshold) {
            let r1 = self.pow_mod(a, b1, counter);
            let r2 = self.pow_mod(a, &b2.sub(b1), counter);
            let r2 = self.mul_mod(&r1, &r2, counter);
            return (r1, r2);
        }
        // Right-to-left; accumulators start as the (implicit) identity, so
        // the first factor each one absorbs is an assignment, not a product.
        let mut square = self.reduce(a);
        let mut r1: Option<T> = None;
        let mut r2: Option<T> = None;
        let len = b2.bits();
        for i in 0..len {
            if b1.bit(i) {
                r1 = Some(match r1 {
                    Some(acc) => self.mul_mod(&acc, &square, counter),
                    None => square.clone(),
                });
            }
            if b2.bit(i) {
                r2 = Some(match r2 {
                    Some(acc) => self.mul_mod(&acc, &square, counter),
                    None => square.clone(),
                });
            }
            if i + 1 < len {
                square = self.mul_mod(&square, &square, counter);
            }
        }
        (
            r1.unwrap_or_else(|| self.one()),
            r2.unwrap_or_else(|| self.one()),
        )
    }
}

/// `(min(nu_p(x), cap), x / p^r)`; for `x = 0` this is `(cap, 0)`.
pub fn valuation(x: &BigInt, p: &BigUint, cap: u32) -> (u32, BigInt) {
    let (r, h) = valuation_unsigned(&x.magnitude().clone(), p, cap);
    let h = match x.sign() {
        Sign::Minus => -BigInt::from(h),
        _ => BigInt::from(h),
    };
    (r, h)
}

pub(crate) fn valuation_unsigned<T: Int>(x: &T, p: &T, cap: u32) -> (u32, T) {
    let mut h = x.clone();
    let mut r = 0;
    while r < cap && h.rem(p).eq_zero() {
        h = h.div(p);
        r += 1;
    }
    (r, h)
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller-Rabin bases that are a proof of primality below 2^64.
const DETERMINISTIC_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const EXTRA_ROUNDS: usize = 20;

/// Primality test: deterministic below 2^64, a fixed set of Miller-Rabin
/// rounds above.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &q in &SMALL_PRIMES {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n - 1 is non-zero");
    let d = &n_minus_1 >> s;
    let witness = |base: &BigUint| -> bool {
        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    if DETERMINISTIC_BASES
        .iter()
        .any(|&b| witness(&BigUint::from(b)))
    {
        return false;
    }
    if n.to_u64().is_some() {
        return true;
    }
    // Fixed pseudo-random bases.
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    (0..EXTRA_ROUNDS).all(|_| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let base = BigUint::from(state) % (&n_minus_1 - 2u32) + 2u32;
        !witness(&base)
    })
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: &BigUint) -> u64 {
    if n.is_zero() || n.is_one() {
        return 0;
    }
    (n - 1u32).bits()
}
