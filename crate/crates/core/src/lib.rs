//! Lifting discrete logarithms from `Z/pZ` to `Z/p^kZ`.
//!
//! Given `a^z = b (mod p)` with `p ∤ a`, [`lift()`] finds `x` with
//! `a^x = b (mod p^k)` (or proves there is none) using about
//! `k (ceil(log2 p) + 2)` multiplications modulo `p^k`. The crate also ships
//! Bach's method as a baseline ([`bach`]), a brute-force oracle
//! ([`oracle`]), oracle sweeps ([`verify`]) and a counting benchmark
//! harness ([`bench`]).

pub mod arith;
pub mod bach;
pub mod bench;
pub mod cli;
pub mod error;
pub mod lift;
pub mod oracle;
pub mod ring;
pub mod verify;

pub use bach::{bach_lift, theta, BachLifter, ThetaValue};
pub use error::{Error, Result};
pub use lift::{
    lift, lift_p_divides_a, lift_with_options, lift_with_order, Backend, LiftInstance, LiftOptions,
    LiftOutcome, Lifter, OrderCheck,
};
pub use oracle::{brute_dlog, mult_order, SolutionSet};
pub use ring::{valuation, OpCounter, PrimePowerModulus, Ring};
