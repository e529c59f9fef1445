//! Python bindings: state construction, evolution, residual diagnostics,
//! quadrature statistics, and the closed-form width formulas.
//!
//! The module mirrors the Rust API in snake_case and maps every library
//! error onto `ValueError`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use squeezelab::dynamics;
use squeezelab::fock::{FockState, ToleranceConfig};
use squeezelab::state::{self, CoherentParams, SqueezeParams};
use squeezelab::uncertainty;

fn vetted<T>(result: squeezelab::error::Result<T>) -> PyResult<T> {
    result.map_err(|err| PyValueError::new_err(err.to_string()))
}

fn coherent_params(alpha: Complex64) -> PyResult<CoherentParams> {
    vetted(CoherentParams::new(alpha))
}

fn squeeze_params(r: f64, phi: f64) -> PyResult<SqueezeParams> {
    vetted(SqueezeParams::new(r, phi))
}

/// A normalized state in the truncated Fock basis.
#[pyclass(name = "FockState", frozen)]
struct PyFockState {
    inner: FockState,
}

#[pymethods]
impl PyFockState {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities().to_vec()
    }

    /// Probability mass carried by the last `count` basis components.
    fn tail_mass(&self, count: usize) -> f64 {
        self.inner.tail_mass(count)
    }

    /// Overlap magnitude `|<self|other>|` between unit-normalized states.
    fn fidelity(&self, other: &PyFockState) -> PyResult<f64> {
        vetted(self.inner.fidelity(&other.inner))
    }

    fn __repr__(&self) -> String {
        format!("FockState(dim={})", self.inner.dim())
    }
}

/// Quadrature moments of a state at one instant.
#[pyclass(name = "QuadratureStats", frozen, get_all)]
struct PyQuadratureStats {
    t: f64,
    mean_x: f64,
    mean_p: f64,
    var_x: f64,
    var_p: f64,
    cov_xp: f64,
}

#[pymethods]
impl PyQuadratureStats {
    /// Vacuum-normalized width product `4 var_x var_p`.
    fn product4(&self) -> f64 {
        4.0 * self.var_x * self.var_p
    }

    /// Covariance-centered product `var_x var_p - cov_xp^2`.
    fn centered_product(&self) -> f64 {
        self.var_x * self.var_p - self.cov_xp * self.cov_xp
    }
}

/// Uncertainty-relation evaluation of one state.
#[pyclass(name = "UncertaintyReport", frozen, get_all)]
struct PyUncertaintyReport {
    lhs: f64,
    heisenberg_bound: f64,
    schrodinger_bound: f64,
    cov_xp: f64,
    saturates_heisenberg: bool,
    saturates_schrodinger: bool,
}

impl From<uncertainty::UncertaintyReport> for PyUncertaintyReport {
    fn from(report: uncertainty::UncertaintyReport) -> Self {
        Self {
            lhs: report.lhs,
            heisenberg_bound: report.heisenberg_bound,
            schrodinger_bound: report.schrodinger_bound,
            cov_xp: report.cov_xp,
            saturates_heisenberg: report.saturates_heisenberg,
            saturates_schrodinger: report.saturates_schrodinger,
        }
    }
}

/// Number state `|n>` in a `dim`-dimensional basis.
#[pyfunction]
fn number_state(n: usize, dim: usize) -> PyResult<PyFockState> {
    Ok(PyFockState {
        inner: vetted(FockState::number_state(n, dim))?,
    })
}

/// Coherent state from the closed-form amplitudes.
#[pyfunction]
fn coherent(alpha: Complex64, dim: usize) -> PyResult<PyFockState> {
    Ok(PyFockState {
        inner: vetted(state::coherent_closed_form(&coherent_params(alpha)?, dim))?,
    })
}

/// Squeezed vacuum from the factorized even-amplitude form.
#[pyfunction]
fn squeezed_vacuum(r: f64, phi: f64, dim: usize) -> PyResult<PyFockState> {
    Ok(PyFockState {
        inner: vetted(state::squeezed_vacuum_factored(&squeeze_params(r, phi)?, dim))?,
    })
}

/// Displaced squeezed state `D(alpha) S(z) |0>` built by matrix
/// exponentials.
#[pyfunction]
fn displaced_squeezed(alpha: Complex64, r: f64, phi: f64, dim: usize) -> PyResult<PyFockState> {
    Ok(PyFockState {
        inner: vetted(state::displaced_squeezed(
            &coherent_params(alpha)?,
            &squeeze_params(r, phi)?,
            dim,
            &ToleranceConfig::default(),
        ))?,
    })
}

/// Oscillator evolution `e^{-i(N + 1/2)t}` applied to a state.
#[pyfunction]
fn evolve(psi: &PyFockState, t: f64) -> PyResult<PyFockState> {
    Ok(PyFockState {
        inner: vetted(dynamics::evolve(&psi.inner, t))?,
    })
}

/// Quadrature moments of a state, measured with dense operators.
#[pyfunction]
fn quadrature_stats(psi: &PyFockState, t: f64) -> PyResult<PyQuadratureStats> {
    let stats = vetted(dynamics::quadrature_stats(&psi.inner, t))?;
    Ok(PyQuadratureStats {
        t: stats.t,
        mean_x: stats.mean_x,
        mean_p: stats.mean_p,
        var_x: stats.var_x,
        var_p: stats.var_p,
        cov_xp: stats.cov_xp,
    })
}

/// Norm of `(a - alpha) psi` over all but the final basis component.
#[pyfunction]
fn ladder_residual(psi: &PyFockState, alpha: Complex64) -> PyResult<f64> {
    Ok(state::ladder_residual(&psi.inner, &coherent_params(alpha)?))
}

/// Norm of the squeezed-state eigenvalue condition applied to `psi`.
#[pyfunction]
fn bogoliubov_residual(psi: &PyFockState, alpha: Complex64, r: f64, phi: f64) -> PyResult<f64> {
    Ok(state::bogoliubov_residual(
        &psi.inner,
        &coherent_params(alpha)?,
        &squeeze_params(r, phi)?,
    ))
}

/// Vacuum-normalized closed-form position width at time `t`.
#[pyfunction]
fn kennard_var_x(r: f64, phi: f64, t: f64) -> PyResult<f64> {
    Ok(dynamics::kennard_var_x(&squeeze_params(r, phi)?, t))
}

/// Vacuum-normalized closed-form momentum width at time `t`.
#[pyfunction]
fn kennard_var_p(r: f64, phi: f64, t: f64) -> PyResult<f64> {
    Ok(dynamics::kennard_var_p(&squeeze_params(r, phi)?, t))
}

/// Closed-form width product `1 + sinh^2(2r) sin^2(2t - phi)`.
#[pyfunction]
fn kennard_product(r: f64, phi: f64, t: f64) -> PyResult<f64> {
    Ok(dynamics::kennard_product(&squeeze_params(r, phi)?, t))
}

/// Heisenberg bound evaluation with default tolerances.
#[pyfunction]
fn heisenberg_check(psi: &PyFockState) -> PyResult<PyUncertaintyReport> {
    Ok(vetted(uncertainty::heisenberg_check(&psi.inner, &ToleranceConfig::default()))?.into())
}

/// Schrödinger (covariance-strengthened) bound evaluation with default
/// tolerances.
#[pyfunction]
fn schrodinger_check(psi: &PyFockState) -> PyResult<PyUncertaintyReport> {
    Ok(vetted(uncertainty::schrodinger_check(&psi.inner, &ToleranceConfig::default()))?.into())
}

#[pymodule]
fn squeezelab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFockState>()?;
    m.add_class::<PyQuadratureStats>()?;
    m.add_class::<PyUncertaintyReport>()?;
    m.add_function(wrap_pyfunction!(number_state, m)?)?;
    m.add_function(wrap_pyfunction!(coherent, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(displaced_squeezed, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(quadrature_stats, m)?)?;
    m.add_function(wrap_pyfunction!(ladder_residual, m)?)?;
    m.add_function(wrap_pyfunction!(bogoliubov_residual, m)?)?;
    m.add_function(wrap_pyfunction!(kennard_var_x, m)?)?;
    m.add_function(wrap_pyfunction!(kennard_var_p, m)?)?;
    m.add_function(wrap_pyfunction!(kennard_product, m)?)?;
    m.add_function(wrap_pyfunction!(heisenberg_check, m)?)?;
    m.add_function(wrap_pyfunction!(schrodinger_check, m)?)?;
    Ok(())
}
