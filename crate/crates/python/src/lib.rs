//! Python bindings for `denum_core`. Rationals cross the boundary as
//! `fractions.Fraction`, big integers as `int`.

use denum_core::bfnum::{bf_explicit, bf_recursive, BfQuery};
use denum_core::bounds::{bound_sequences, dhat_bounds, inequality_a, BoundReport};
use denum_core::exact::{self, CountMethod};
use denum_core::frobenius::{bound_frobenius, frobenius_exact};
use denum_core::powersum::{check_sum_bounds, power_sum, PowerSumQuery};
use denum_core::verify::{run_verify, Suite, SweepConfig};
use denum_core::{CoefficientTuple, Error, ExactRational};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(denum, DenumError, PyValueError, "Precondition or domain error raised by denum.");

fn err(e: Error) -> PyErr {
    DenumError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, x: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.numer().clone(), x.denom().clone()))
}

fn opt_fraction<'py>(py: Python<'py>, x: Option<&ExactRational>) -> PyResult<Bound<'py, PyAny>> {
    match x {
        Some(x) => fraction(py, x),
        None => Ok(py.None().into_bound(py)),
    }
}

/// Accepts `int`, `Fraction`, or anything else with `numerator`/`denominator`.
fn to_rational(x: &Bound<'_, PyAny>) -> PyResult<ExactRational> {
    let num: BigInt = x.getattr("numerator")?.extract()?;
    let den: BigInt = x.getattr("denominator")?.extract()?;
    Ok(ExactRational::new(num, den))
}

#[pyclass(name = "CoefficientTuple", frozen)]
struct PyCoefficientTuple {
    inner: CoefficientTuple,
}

#[pymethods]
impl PyCoefficientTuple {
    #[new]
    fn new(coeffs: Vec<u64>) -> PyResult<Self> {
        CoefficientTuple::new(coeffs).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn coeffs(&self) -> Vec<u64> {
        self.inner.as_slice().to_vec()
    }

    fn gcd(&self) -> u64 {
        self.inner.gcd()
    }

    fn is_coprime(&self) -> bool {
        self.inner.is_coprime()
    }

    fn gcd_chain(&self) -> Vec<u64> {
        self.inner.gcd_chain().as_slice().to_vec()
    }

    fn reduced(&self) -> (Self, u64) {
        let (inner, d) = self.inner.reduced();
        (Self { inner }, d)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("CoefficientTuple([{}])", self.inner.as_slice().iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        tuple_arg(other).is_ok_and(|t| t == self.inner)
    }
}

/// A `CoefficientTuple` or any sequence of positive ints.
fn tuple_arg(obj: &Bound<'_, PyAny>) -> PyResult<CoefficientTuple> {
    if let Ok(t) = obj.cast::<PyCoefficientTuple>() {
        return Ok(t.get().inner.clone());
    }
    CoefficientTuple::new(obj.extract::<Vec<u64>>()?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (coeffs, n, method = "recursion"))]
fn denumerant(coeffs: &Bound<'_, PyAny>, n: u64, method: &str) -> PyResult<BigInt> {
    let a = tuple_arg(coeffs)?;
    let value = match method {
        "recursion" => exact::denumerant(&a, n).value,
        "oracle" => exact::oracle_count(&a, n).map_err(err)?.value,
        "popoviciu" => {
            if a.len() != 2 {
                return Err(DenumError::new_err("popoviciu needs exactly 2 coefficients"));
            }
            exact::popoviciu(a.as_slice()[0], a.as_slice()[1], n).map_err(err)?.value
        }
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    Ok(value.into())
}

#[pyfunction]
fn denumerant_table(coeffs: &Bound<'_, PyAny>, max_n: u64) -> PyResult<Vec<BigInt>> {
    let a = tuple_arg(coeffs)?;
    Ok(exact::denumerant_table(&a, max_n).into_iter().map(BigInt::from).collect())
}

#[pyfunction]
fn extended_count(coeffs: &Bound<'_, PyAny>, n: u64) -> PyResult<BigInt> {
    Ok(exact::extended_count(&tuple_arg(coeffs)?, n).value.into())
}

#[pyfunction]
fn popoviciu(a1: u64, a2: u64, n: u64) -> PyResult<BigInt> {
    let r = exact::popoviciu(a1, a2, n).map_err(err)?;
    debug_assert_eq!(r.method, CountMethod::Popoviciu);
    Ok(r.value.into())
}

#[pyfunction]
fn sequences<'py>(py: Python<'py>, coeffs: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let s = bound_sequences(&tuple_arg(coeffs)?).map_err(err)?;
    let list = |xs: &[ExactRational]| -> PyResult<Bound<'py, PyList>> {
        PyList::new(py, xs.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?)
    };
    let d = PyDict::new(py);
    d.set_item("s_plus", list(&s.s_plus)?)?;
    d.set_item("s_minus", list(&s.s_minus)?)?;
    d.set_item("r", list(&s.r)?)?;
    d.set_item("t", fraction(py, &s.t)?)?;
    Ok(d)
}

fn bound_dict<'py>(py: Python<'py>, r: &BoundReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("exact", r.exact.clone().map(BigInt::from))?;
    d.set_item("lower_a", fraction(py, &r.lower_a)?)?;
    d.set_item("upper_a", fraction(py, &r.upper_a)?)?;
    d.set_item("lower_b", opt_fraction(py, r.lower_b.as_ref())?)?;
    d.set_item("applicable", r.applicable_lower)?;
    d.set_item("ok", r.sandwich_ok)?;
    Ok(d)
}

/// Inequality A and B values next to the exact count.
#[pyfunction]
fn bounds<'py>(py: Python<'py>, coeffs: &Bound<'py, PyAny>, n: u64) -> PyResult<Bound<'py, PyDict>> {
    let a = tuple_arg(coeffs)?;
    let exact = exact::denumerant(&a, n).value;
    bound_dict(py, &inequality_a(&a, n, Some(exact)).map_err(err)?)
}

#[pyfunction]
fn dhat<'py>(py: Python<'py>, coeffs: &Bound<'py, PyAny>, n: u64) -> PyResult<Bound<'py, PyDict>> {
    let a = tuple_arg(coeffs)?;
    let exact = exact::extended_count(&a, n).value;
    let r = dhat_bounds(&a, n, Some(exact)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("d", r.d)?;
    d.set_item("exact", r.exact.map(BigInt::from))?;
    d.set_item("lower", fraction(py, &r.lower)?)?;
    d.set_item("middle", fraction(py, &r.middle)?)?;
    d.set_item("upper", fraction(py, &r.upper)?)?;
    d.set_item("ok", r.chain_ok)?;
    Ok(d)
}

#[pyfunction]
fn frobenius(coeffs: &Bound<'_, PyAny>) -> PyResult<i64> {
    frobenius_exact(&tuple_arg(coeffs)?).map_err(err)
}

#[pyfunction]
fn frobenius_bounds<'py>(py: Python<'py>, coeffs: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let r = bound_frobenius(&tuple_arg(coeffs)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("g", r.g)?;
    d.set_item("upper", fraction(py, &r.brauer_upper)?)?;
    d.set_item("root_lower_1", r.root_lower_1.clone())?;
    d.set_item("root_lower_2", r.root_lower_2.clone())?;
    d.set_item("ok", r.bounds_hold())?;
    Ok(d)
}

/// Blom-Fröberg number `[[m, l]]^a_r`.
#[pyfunction]
#[pyo3(signature = (coeffs, r, m, l, method = "explicit"))]
fn bf_number<'py>(
    py: Python<'py>,
    coeffs: &Bound<'py, PyAny>,
    r: usize,
    m: i64,
    l: i64,
    method: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let a = tuple_arg(coeffs)?;
    let q = BfQuery::new(r, m, l);
    let v = match method {
        "explicit" => bf_explicit(&a, q),
        "recursive" => bf_recursive(&a, q),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
    .map_err(err)?;
    fraction(py, &v)
}

#[pyfunction]
#[pyo3(name = "power_sum")]
fn py_power_sum<'py>(
    py: Python<'py>,
    x: &Bound<'py, PyAny>,
    c: &Bound<'py, PyAny>,
    k: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let q = PowerSumQuery::new(to_rational(x)?, to_rational(c)?, k).map_err(err)?;
    fraction(py, &power_sum(&q).map_err(err)?)
}

/// `(lower <= middle, middle <= f_k(x), f_k(x) <= upper)`.
#[pyfunction]
fn sum_bounds(x: &Bound<'_, PyAny>, c: &Bound<'_, PyAny>, k: u32) -> PyResult<(bool, bool, bool)> {
    let q = PowerSumQuery::new(to_rational(x)?, to_rational(c)?, k).map_err(err)?;
    let r = check_sum_bounds(&q).map_err(err)?;
    Ok((r.lower_le_middle, r.middle_le_sum, r.sum_le_upper))
}

/// Runs a seeded sweep and returns the report as JSON text.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (suite, seed = 1, trials = 200, k_min = 2, k_max = 4, max_coeff = 12, n_max = 120))]
fn verify(
    py: Python<'_>,
    suite: &str,
    seed: u64,
    trials: usize,
    k_min: usize,
    k_max: usize,
    max_coeff: u64,
    n_max: u64,
) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(err)?;
    let cfg = SweepConfig { suite, seed, trials, k_min, k_max, max_coeff, n_max };
    let report = py.detach(|| run_verify(&cfg)).map_err(err)?;
    Ok(report.to_json())
}

#[pymodule]
fn denum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DenumError", m.py().get_type::<DenumError>())?;
    m.add_class::<PyCoefficientTuple>()?;
    m.add_function(wrap_pyfunction!(denumerant, m)?)?;
    m.add_function(wrap_pyfunction!(denumerant_table, m)?)?;
    m.add_function(wrap_pyfunction!(extended_count, m)?)?;
    m.add_function(wrap_pyfunction!(popoviciu, m)?)?;
    m.add_function(wrap_pyfunction!(sequences, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(dhat, m)?)?;
    m.add_function(wrap_pyfunction!(frobenius, m)?)?;
    m.add_function(wrap_pyfunction!(frobenius_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(bf_number, m)?)?;
    m.add_function(wrap_pyfunction!(py_power_sum, m)?)?;
    m.add_function(wrap_pyfunction!(sum_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
