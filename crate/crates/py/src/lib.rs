//! Python bindings: a thin translation layer over the core crate.
//! Domain and divergence failures surface as ValueError, convergence
//! and budget failures as RuntimeError; numerics stay in f64 end to end.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: ellip2::Error) -> PyErr {
    match e {
        ellip2::Error::Domain(_) | ellip2::Error::Divergence(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn cfg(rel_tol: Option<f64>, max_terms: Option<usize>) -> ellip2::SeriesConfig {
    let mut c = ellip2::SeriesConfig::default();
    if let Some(t) = rel_tol {
        c.rel_tol = t;
        c.abs_tol = t * 1e-2;
    }
    if let Some(n) = max_terms {
        c.max_terms = n;
    }
    c
}

/// A validated pair of moduli with k1² + k2² < 1.
#[pyclass(name = "ModulusPair", frozen)]
#[derive(Clone, Copy)]
struct PyModulusPair(ellip2::ModulusPair);

#[pymethods]
impl PyModulusPair {
    #[new]
    fn new(k1: f64, k2: f64) -> PyResult<Self> {
        ellip2::ModulusPair::new(k1, k2).map(Self).map_err(to_py)
    }

    #[getter]
    fn k1(&self) -> f64 {
        self.0.k1()
    }

    #[getter]
    fn k2(&self) -> f64 {
        self.0.k2()
    }

    #[getter]
    fn k1_prime(&self) -> f64 {
        self.0.k1_prime()
    }

    #[getter]
    fn k2_prime(&self) -> f64 {
        self.0.k2_prime()
    }

    /// √(1 − k1² − k2²), the joint complement.
    #[getter]
    fn k_prime(&self) -> f64 {
        self.0.k_prime()
    }

    fn __repr__(&self) -> String {
        format!("ModulusPair(k1={}, k2={})", self.0.k1(), self.0.k2())
    }
}

/// A value plus how it was obtained: `method` is one of "quadrature",
/// "legendre_series", "f4_closed", "product_formula".
#[pyclass(name = "EvalResult", frozen)]
struct PyEvalResult(ellip2::EvalResult);

#[pymethods]
impl PyEvalResult {
    #[getter]
    fn value(&self) -> f64 {
        self.0.value
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.0.method.as_str()
    }

    #[getter]
    fn error_estimate(&self) -> f64 {
        self.0.error_estimate
    }

    #[getter]
    fn terms_or_evals(&self) -> u64 {
        self.0.terms_or_evals
    }

    fn __repr__(&self) -> String {
        format!(
            "EvalResult(value={}, method='{}', error_estimate={:e}, terms_or_evals={})",
            self.0.value,
            self.0.method.as_str(),
            self.0.error_estimate,
            self.0.terms_or_evals
        )
    }
}

#[pyfunction]
fn complete_k(k: f64) -> PyResult<f64> {
    let m = ellip2::Modulus::new(k).map_err(to_py)?;
    ellip2::complete_k(m).map_err(to_py)
}

#[pyfunction]
fn complete_e(k: f64) -> PyResult<f64> {
    let m = ellip2::Modulus::new(k).map_err(to_py)?;
    Ok(ellip2::complete_e(m))
}

#[pyfunction]
fn complete_k_deriv(k: f64) -> PyResult<f64> {
    let m = ellip2::Modulus::new(k).map_err(to_py)?;
    ellip2::complete_k_deriv(m).map_err(to_py)
}

#[pyfunction]
fn complete_e_deriv(k: f64) -> PyResult<f64> {
    let m = ellip2::Modulus::new(k).map_err(to_py)?;
    ellip2::complete_e_deriv(m).map_err(to_py)
}

#[pyfunction]
fn jacobi_dn(u: f64, k: f64) -> PyResult<f64> {
    let m = ellip2::Modulus::new(k).map_err(to_py)?;
    ellip2::jacobi_dn(u, m).map_err(to_py)
}

/// P_{n - 3/2}(x) for integer n ≥ 0 (so n = 0,1,2 give the degrees
/// −3/2, −1/2, +1/2).
#[pyfunction]
fn legendre_p_halfint(n: u32, x: f64) -> PyResult<f64> {
    ellip2::legendre_p_halfint(ellip2::HalfIntDegree(n), x).map_err(to_py)
}

#[pyfunction]
fn gen_k(mp: PyModulusPair) -> PyResult<PyEvalResult> {
    ellip2::gen_k(&mp.0).map(PyEvalResult).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (mp, rel_tol=None, max_terms=None))]
fn gen_e(mp: PyModulusPair, rel_tol: Option<f64>, max_terms: Option<usize>) -> PyResult<PyEvalResult> {
    ellip2::gen_e(&mp.0, &cfg(rel_tol, max_terms))
        .map(PyEvalResult)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (mp, rel_tol=None, max_terms=None))]
fn gen_e_series(
    mp: PyModulusPair,
    rel_tol: Option<f64>,
    max_terms: Option<usize>,
) -> PyResult<PyEvalResult> {
    ellip2::gen_e_series(&mp.0, &cfg(rel_tol, max_terms))
        .map(PyEvalResult)
        .map_err(to_py)
}

#[pyfunction]
fn gen_e_closed(mp: PyModulusPair) -> PyResult<PyEvalResult> {
    ellip2::gen_e_closed(&mp.0).map(PyEvalResult).map_err(to_py)
}

#[pyfunction]
fn gen_e_symmetric(k: f64) -> PyResult<PyEvalResult> {
    ellip2::gen_e_symmetric(k).map(PyEvalResult).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (mp, tol=1e-10))]
fn oracle_e2(mp: PyModulusPair, tol: f64) -> PyResult<f64> {
    ellip2::oracle_e2(&mp.0, tol).map(|q| q.value).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (mp, tol=1e-10))]
fn oracle_k2(mp: PyModulusPair, tol: f64) -> PyResult<f64> {
    ellip2::oracle_k2(&mp.0, tol).map(|q| q.value).map_err(to_py)
}

#[pyfunction]
fn f4_reduced(u: f64, v: f64) -> PyResult<f64> {
    ellip2::f4_reduced(u, v).map_err(to_py)
}

/// Raw double series for F4(-1/2,-1/2;1,1;x,y).
#[pyfunction]
#[pyo3(signature = (x, y, rel_tol=None, max_terms=None))]
fn f4_series(x: f64, y: f64, rel_tol: Option<f64>, max_terms: Option<usize>) -> PyResult<f64> {
    let args = ellip2::F4Args::new(x, y).map_err(to_py)?;
    ellip2::f4_series(-0.5, -0.5, 1.0, 1.0, args, &cfg(rel_tol, max_terms))
        .map(|s| s.value)
        .map_err(to_py)
}

/// Solve the quadric system u(1-v) = 2t/(1+x), v(1-u) = (x-1)/(x+1);
/// returns (u, v, du_dt, dv_dt).
#[pyfunction]
fn solve_uv(t: f64, x: f64) -> PyResult<(f64, f64, f64, f64)> {
    let s = ellip2::solve_uv(t, x).map_err(to_py)?;
    Ok((s.u, s.v, s.du_dt, s.dv_dt))
}

#[pymodule]
fn ellip2_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModulusPair>()?;
    m.add_class::<PyEvalResult>()?;
    m.add_function(wrap_pyfunction!(complete_k, m)?)?;
    m.add_function(wrap_pyfunction!(complete_e, m)?)?;
    m.add_function(wrap_pyfunction!(complete_k_deriv, m)?)?;
    m.add_function(wrap_pyfunction!(complete_e_deriv, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_dn, m)?)?;
    m.add_function(wrap_pyfunction!(legendre_p_halfint, m)?)?;
    m.add_function(wrap_pyfunction!(gen_k, m)?)?;
    m.add_function(wrap_pyfunction!(gen_e, m)?)?;
    m.add_function(wrap_pyfunction!(gen_e_series, m)?)?;
    m.add_function(wrap_pyfunction!(gen_e_closed, m)?)?;
    m.add_function(wrap_pyfunction!(gen_e_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_e2, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_k2, m)?)?;
    m.add_function(wrap_pyfunction!(f4_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(f4_series, m)?)?;
    m.add_function(wrap_pyfunction!(solve_uv, m)?)?;
    Ok(())
}
