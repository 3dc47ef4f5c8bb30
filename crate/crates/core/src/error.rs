use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("precondition failed: p divides a (a = {a}, p = {p})")]
    BaseDivisibleByP { a: BigInt, p: BigUint },

    #[error("precondition failed: p does not divide a (a = {a}, p = {p})")]
    BaseNotDivisibleByP { a: BigInt, p: BigUint },

    #[error("precondition failed: a^z \u{2262} b (mod p)")]
    ExponentMismatch,

    #[error("invalid order {order}: {reason}")]
    InvalidOrder {
        order: BigUint,
        reason: &'static str,
    },

    #[error("exponents out of order: b1 = {b1} exceeds b2 = {b2}")]
    ExponentsOutOfOrder { b1: BigUint, b2: BigUint },

    #[error("the baseline method requires an odd prime, got p = 2")]
    EvenPrime,

    #[error("the baseline method requires k >= 1")]
    ZeroExponent,

    #[error("modulus {modulus} exceeds the oracle bound {bound}")]
    OracleBound { modulus: BigUint, bound: u64 },

    #[error("{a} is not coprime to {m}")]
    NotCoprime { a: BigUint, m: BigUint },

    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("invalid benchmark grid: {0}")]
    InvalidGrid(&'static str),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
