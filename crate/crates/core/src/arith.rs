//! Integer backends shared by the lifting and baseline algorithms.
//!
//! Everything is written once against [`Int`] and instantiated twice: `u64`
//! for moduli below [`WORD_LIMIT`] (all products of two residues fit in a
//! word) and `BigUint` for everything else.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Moduli strictly below this bound may use the `u64` backend.
pub const WORD_LIMIT: u64 = 1 << 32;

mod sealed {
    pub trait Sealed {}
    impl Sealed for u64 {}
    impl Sealed for num_bigint::BigUint {}
}

/// Non-negative integer arithmetic needed by the lifting loops.
///
/// For `u64` the caller guarantees that no intermediate overflows; every
/// modulus handed to the word backend is below [`WORD_LIMIT`].
pub trait Int: sealed::Sealed + Clone + Ord + Debug + Send + Sync + 'static {
    fn from_u64(v: u64) -> Self;
    fn to_biguint(&self) -> BigUint;
    fn eq_zero(&self) -> bool;
    fn eq_one(&self) -> bool;
    fn bits(&self) -> u64;
    fn bit(&self, i: u64) -> bool;
    fn add(&self, o: &Self) -> Self;
    /// `self - o`; requires `self >= o`.
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn rem(&self, o: &Self) -> Self;
    fn shr1(&self) -> Self;
    fn pow_u32(&self, e: u32) -> Self;

    /// Inverse of `self` modulo `m`, if `gcd(self, m) = 1`.
    fn inv_mod(&self, m: &Self) -> Option<Self>;

    fn mul_rem(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }
}

impl Int for u64 {
    #[inline]
    fn from_u64(v: u64) -> Self {
        v
    }
    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
    #[inline]
    fn eq_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn eq_one(&self) -> bool {
        *self == 1
    }
    #[inline]
    fn bits(&self) -> u64 {
        (64 - self.leading_zeros()) as u64
    }
    #[inline]
    fn bit(&self, i: u64) -> bool {
        i < 64 && (self >> i) & 1 == 1
    }
    #[inline]
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    #[inline]
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    #[inline]
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    #[inline]
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    #[inline]
    fn rem(&self, o: &Self) -> Self {
        self % o
    }
    #[inline]
    fn shr1(&self) -> Self {
        self >> 1
    }
    fn pow_u32(&self, e: u32) -> Self {
        self.pow(e)
    }
    fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (i128::from(*m), i128::from(*self % m));
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        (r0 == 1).then(|| s0.rem_euclid(i128::from(*m)) as u64)
    }
}

impl Int for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
    fn eq_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn eq_one(&self) -> bool {
        One::is_one(self)
    }
    fn bits(&self) -> u64 {
        BigUint::bits(self)
    }
    fn bit(&self, i: u64) -> bool {
        BigUint::bit(self, i)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn rem(&self, o: &Self) -> Self {
        self % o
    }
    fn shr1(&self) -> Self {
        self >> 1u32
    }
    fn pow_u32(&self, e: u32) -> Self {
        num_traits::Pow::pow(self, e)
    }
    fn inv_mod(&self, m: &Self) -> Option<Self> {
        let m = BigInt::from(m.clone());
        let egcd = BigInt::from(self.clone()).extended_gcd(&m);
        if !egcd.gcd.is_one() {
            return None;
        }
        egcd.x.mod_floor(&m).to_biguint()
    }
}

/// Converts a `BigUint` that is known to fit into the word backend.
pub(crate) fn word(v: &BigUint) -> u64 {
    v.to_u64().expect("value exceeds the word backend")
}
