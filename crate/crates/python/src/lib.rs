//! Python bindings. Integers cross the boundary as Python `int`s of any size.

use dlog_lift::bach;
use dlog_lift::lift::{LiftInstance, LiftOutcome, OrderCheck};
use dlog_lift::oracle;
use dlog_lift::ring::{self, OpCounter, PrimePowerModulus, Ring};
use dlog_lift::Error;
use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// The modulus `p^k`; `p` is checked for primality.
#[pyclass(name = "PrimePowerModulus", frozen)]
struct PyModulus(PrimePowerModulus);

#[pymethods]
impl PyModulus {
    #[new]
    fn new(p: BigUint, k: u32) -> PyResult<Self> {
        PrimePowerModulus::new(p, k).map(Self).map_err(py_err)
    }

    #[getter]
    fn p(&self) -> BigUint {
        self.0.p().clone()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.0.k()
    }

    #[getter]
    fn m(&self) -> BigUint {
        self.0.m().clone()
    }

    #[getter]
    fn phi(&self) -> BigUint {
        self.0.phi()
    }

    fn __repr__(&self) -> String {
        format!("PrimePowerModulus(p={}, k={})", self.0.p(), self.0.k())
    }
}

/// Result of one run with its multiplication tallies.
#[pyclass(name = "Outcome", frozen, get_all)]
struct PyOutcome {
    solution: Option<BigUint>,
    r: u32,
    iterations: u32,
    mults_mod_pk: u64,
    mults_mod_p2k1: u64,
    mults_mod_p: u64,
    mults_by_digit: u64,
}

#[pymethods]
impl PyOutcome {
    fn __repr__(&self) -> String {
        let x = self
            .solution
            .as_ref()
            .map_or("None".to_string(), |x| x.to_string());
        format!(
            "Outcome(solution={x}, r={}, iterations={}, mults_mod_pk={}, mults_mod_p2k1={})",
            self.r, self.iterations, self.mults_mod_pk, self.mults_mod_p2k1
        )
    }
}

impl From<LiftOutcome> for PyOutcome {
    fn from(o: LiftOutcome) -> Self {
        Self {
            solution: o.solution,
            r: o.r,
            iterations: o.iterations,
            mults_mod_pk: o.counter.mults_mod_m(),
            mults_mod_p2k1: o.counter.mults_mod_wide(),
            mults_mod_p: o.counter.mults_mod_small(),
            mults_by_digit: o.counter.mults_by_digit(),
        }
    }
}

fn instance(a: BigInt, z: BigInt, b: BigInt, p: BigUint, k: u32) -> PyResult<LiftInstance> {
    let ctx = PrimePowerModulus::new(p, k).map_err(py_err)?;
    LiftInstance::new(a, z, b, ctx).map_err(py_err)
}

/// Solves `a^x = b (mod p^k)` given `a^z = b (mod p)`; `None` if unsolvable.
/// With `order = ord_p(a)` the least non-negative solution is returned.
#[pyfunction]
#[pyo3(signature = (a, z, b, p, k, *, order = None))]
fn lift_detailed(
    a: BigInt,
    z: BigInt,
    b: BigInt,
    p: BigUint,
    k: u32,
    order: Option<BigUint>,
) -> PyResult<PyOutcome> {
    let inst = instance(a, z, b, p, k)?;
    let mut counter = OpCounter::new();
    let out = match order {
        Some(ord) => {
            dlog_lift::lift::lift_with_order(&inst, &ord, OrderCheck::Validate, &mut counter)
                .map_err(py_err)?
        }
        None => dlog_lift::lift::lift(&inst, &mut counter),
    };
    Ok(out.into())
}

#[pyfunction]
#[pyo3(signature = (a, z, b, p, k, *, order = None))]
fn lift(
    a: BigInt,
    z: BigInt,
    b: BigInt,
    p: BigUint,
    k: u32,
    order: Option<BigUint>,
) -> PyResult<Option<BigUint>> {
    Ok(lift_detailed(a, z, b, p, k, order)?.solution)
}

/// Least `x` with `a^x = b (mod p^k)` when `p` divides `a`.
#[pyfunction]
fn lift_p_divides_a(a: BigInt, b: BigInt, p: BigUint, k: u32) -> PyResult<Option<BigUint>> {
    let ctx = PrimePowerModulus::new(p, k).map_err(py_err)?;
    dlog_lift::lift::lift_p_divides_a(a, b, &ctx).map_err(py_err)
}

/// The baseline method (odd `p`, `k >= 1`).
#[pyfunction]
fn bach_lift(a: BigInt, z: BigInt, b: BigInt, p: BigUint, k: u32) -> PyResult<PyOutcome> {
    let inst = instance(a, z, b, p, k)?;
    bach::bach_lift(&inst, &mut OpCounter::new())
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn theta(x: BigInt, p: BigUint, k: u32) -> PyResult<BigUint> {
    let ctx = PrimePowerModulus::new(p, k).map_err(py_err)?;
    Ok(bach::theta(x, &ctx, &mut OpCounter::new())
        .map_err(py_err)?
        .value)
}

/// `(minimal_x, period)` by enumeration; `minimal_x` is `None` when
/// unsolvable.
#[pyfunction]
fn brute_dlog(a: BigInt, b: BigInt, p: BigUint, k: u32) -> PyResult<(Option<u64>, u64)> {
    let ctx = PrimePowerModulus::new(p, k).map_err(py_err)?;
    let s = oracle::brute_dlog(a, b, &ctx).map_err(py_err)?;
    Ok((s.minimal_x, s.period))
}

#[pyfunction]
fn mult_order(a: BigInt, m: u64) -> PyResult<u64> {
    oracle::mult_order(a, m).map_err(py_err)
}

/// `(r, h)` with `x = p^r h` and `r = cap` or `p ∤ h`.
#[pyfunction]
fn valuation(x: BigInt, p: BigUint, cap: u32) -> (u32, BigInt) {
    ring::valuation(&x, &p, cap)
}

/// `(a^b1 mod m, a^b2 mod m)` for `b1 <= b2`.
#[pyfunction]
fn pow_dual(a: BigUint, b1: BigUint, b2: BigUint, m: BigUint) -> PyResult<(BigUint, BigUint)> {
    if m == BigUint::ZERO {
        return Err(py_err(Error::ZeroModulus));
    }
    Ring::new(m)
        .pow_dual(&a, &b1, &b2, &mut OpCounter::new())
        .map_err(py_err)
}

#[pymodule]
fn dlog_lift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModulus>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(lift_detailed, m)?)?;
    m.add_function(wrap_pyfunction!(lift_p_divides_a, m)?)?;
    m.add_function(wrap_pyfunction!(bach_lift, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(brute_dlog, m)?)?;
    m.add_function(wrap_pyfunction!(mult_order, m)?)?;
    m.add_function(wrap_pyfunction!(valuation, m)?)?;
    m.add_function(wrap_pyfunction!(pow_dual, m)?)?;
    Ok(())
}
