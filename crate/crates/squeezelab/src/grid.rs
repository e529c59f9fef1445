//! Position-space rendering of Fock-basis states and the closed-form
//! Gaussian wavefunctions they are compared against.
//!
//! Oscillator eigenfunctions come from the normalized recurrence
//! `phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1}` with
//! `phi_0 = pi^{-1/4} e^{-x^2/2}`; raw Hermite polynomials overflow long
//! before n = 128. All integrals are trapezoid sums on the uniform grid.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::state::SqueezeParams;

/// Worst tolerated deviation of the trapezoid Gram matrix from the
/// identity before a basis is declared unresolvable on the grid.
const ORTHONORMALITY_TOL: f64 = 1e-8;

/// Uniform position grid `[x_min, x_max]` sampled at `n_points` locations
/// including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be finite, got [{x_min}, {x_max}]"
            )));
        }
        if x_min >= x_max {
            return Err(Error::InvalidParameter(format!(
                "grid needs x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 16 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 16 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Sample locations; the endpoints are hit exactly.
    pub fn points(&self) -> Array1<f64> {
        let last = (self.n_points - 1) as f64;
        Array1::from_iter(
            (0..self.n_points)
                .map(|j| self.x_min + (self.x_max - self.x_min) * (j as f64 / last)),
        )
    }

    /// Trapezoid quadrature weights: half spacing at the endpoints, full
    /// spacing elsewhere.
    pub fn weights(&self) -> Array1<f64> {
        let h = self.spacing();
        let mut w = Array1::from_elem(self.n_points, h);
        w[0] = 0.5 * h;
        w[self.n_points - 1] = 0.5 * h;
        w
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            x_min: -12.0,
            x_max: 12.0,
            n_points: 2048,
        }
    }
}

/// A complex amplitude sampled on a [`Grid`], in units of one over the
/// square root of length.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    values: Array1<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: Grid, values: Array1<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidParameter(format!(
                "value count {} does not match the grid's {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NumericalError(
                "wavefunction samples must be finite".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &Array1<Complex64> {
        &self.values
    }

    /// Trapezoid overlap `integral conj(self) other dx`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter(
                "wavefunctions live on different grids".into(),
            ));
        }
        let w = self.grid.weights();
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..self.values.len() {
            sum += w[j] * self.values[j].conj() * other.values[j];
        }
        Ok(sum)
    }

    /// Square root of the trapezoid integral of `|psi|^2`.
    pub fn norm(&self) -> f64 {
        let w = self.grid.weights();
        self.values
            .iter()
            .zip(w.iter())
            .map(|(v, wj)| wj * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probability_density(&self) -> Array1<f64> {
        self.values.mapv(|v| v.norm_sqr())
    }

    /// Quadrature `<x>`, normalized by the integral of `|psi|^2`.
    pub fn mean_x(&self) -> f64 {
        let w = self.grid.weights();
        let pts = self.grid.points();
        let mut total = 0.0;
        let mut weighted = 0.0;
        for j in 0..self.values.len() {
            let density = w[j] * self.values[j].norm_sqr();
            total += density;
            weighted += density * pts[j];
        }
        weighted / total
    }

    /// Quadrature `Var(x)`, normalized by the integral of `|psi|^2`.
    pub fn var_x(&self) -> f64 {
        let mean = self.mean_x();
        let w = self.grid.weights();
        let pts = self.grid.points();
        let mut total = 0.0;
        let mut weighted = 0.0;
        for j in 0..self.values.len() {
            let density = w[j] * self.values[j].norm_sqr();
            total += density;
            weighted += density * (pts[j] - mean) * (pts[j] - mean);
        }
        weighted / total
    }
}

/// Rows of oscillator eigenfunctions evaluated on the grid, without any
/// resolution check. Row `n` holds `phi_n` at every grid point.
fn hermite_rows(grid: &Grid, dim: usize) -> Array2<f64> {
    let pts = grid.points();
    let n_points = grid.n_points();
    let mut rows = Array2::zeros((dim, n_points));
    let norm0 = std::f64::consts::PI.powf(-0.25);
    for j in 0..n_points {
        rows[[0, j]] = norm0 * (-0.5 * pts[j] * pts[j]).exp();
    }
    if dim > 1 {
        for j in 0..n_points {
            rows[[1, j]] = std::f64::consts::SQRT_2 * pts[j] * rows[[0, j]];
        }
    }
    for n in 1..dim.saturating_sub(1) {
        let climb = (2.0 / (n as f64 + 1.0)).sqrt();
        let drop = (n as f64 / (n as f64 + 1.0)).sqrt();
        for j in 0..n_points {
            rows[[n + 1, j]] = climb * pts[j] * rows[[n, j]] - drop * rows[[n - 1, j]];
        }
    }
    rows
}

/// The first `dim` oscillator eigenfunctions on the grid, gated on the
/// trapezoid Gram matrix reproducing the identity to within 1e-8.
///
/// High-order eigenfunctions spread toward the grid edge and stop being
/// orthonormal under quadrature; that shows up here as a
/// `GridResolutionError` rather than as silent inaccuracy downstream.
pub fn hermite_functions(grid: &Grid, dim: usize) -> Result<Array2<f64>> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "need at least one basis function".into(),
        ));
    }
    let rows = hermite_rows(grid, dim);
    let w = grid.weights();
    let mut weighted = rows.clone();
    for j in 0..grid.n_points() {
        let wj = w[j];
        for n in 0..dim {
            weighted[[n, j]] *= wj;
        }
    }
    let gram = weighted.dot(&rows.t());
    let mut worst = 0.0f64;
    for m in 0..dim {
        for n in 0..dim {
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((gram[[m, n]] - target).abs());
        }
    }
    if worst > ORTHONORMALITY_TOL {
        return Err(Error::GridResolutionError(format!(
            "basis of {dim} functions deviates from orthonormality by {worst:.3e} on this grid \
             (bound {ORTHONORMALITY_TOL:.0e}); widen the grid or add points"
        )));
    }
    Ok(rows)
}

/// Renders a Fock-basis state as `psi(x) = sum_n c_n phi_n(x)`.
///
/// Uses the raw recurrence without the orthonormality gate: superpositions
/// inside the truncation envelope have negligible weight on the high-order
/// functions that fail the gate.
pub fn fock_to_position(psi: &FockState, grid: &Grid) -> Result<WaveFunction> {
    let rows = hermite_rows(grid, psi.dim());
    let amps = psi.amplitudes();
    let mut values = Array1::from_elem(grid.n_points(), Complex64::new(0.0, 0.0));
    for n in 0..psi.dim() {
        let c = amps[n];
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..grid.n_points() {
            values[j] += c * rows[[n, j]];
        }
    }
    WaveFunction::new(grid.clone(), values)
}

/// Closed-form coherent packet `pi^{-1/4} exp[-(x - x0)^2/2 + i p0 x]`.
pub fn psi_cs_closed_form(x0: f64, p0: f64, grid: &Grid) -> Result<WaveFunction> {
    let pts = grid.points();
    let norm0 = std::f64::consts::PI.powf(-0.25);
    let values = pts.mapv(|x| {
        Complex64::new(norm0 * (-0.5 * (x - x0) * (x - x0)).exp(), 0.0)
            * Complex64::from_polar(1.0, p0 * x)
    });
    WaveFunction::new(grid.clone(), values)
}

/// Closed-form displaced squeezed packet
/// `e^{-i x0 p0 / 2} pi^{-1/4} F1^{-1/2} exp[-(x - x0)^2 F2 / 2 + i p0 x]`
/// with `F1 = cosh r + e^{i phi} sinh r` and `F2 = (cosh r - e^{i phi}
/// sinh r) / F1`.
///
/// `Re F1 >= e^{-r} > 0`, so the principal square root keeps the prefactor
/// argument inside `(-pi/2, pi/2]` as required for a deterministic branch.
pub fn psi_ss_closed_form(
    x0: f64,
    p0: f64,
    z: &SqueezeParams,
    grid: &Grid,
) -> Result<WaveFunction> {
    let phase = Complex64::from_polar(z.r().sinh(), z.phi());
    let f1 = Complex64::new(z.r().cosh(), 0.0) + phase;
    let f2 = (Complex64::new(z.r().cosh(), 0.0) - phase) / f1;
    let prefactor = Complex64::from_polar(1.0, -0.5 * x0 * p0)
        * Complex64::new(std::f64::consts::PI.powf(-0.25), 0.0)
        / f1.sqrt();
    let pts = grid.points();
    let values = pts.mapv(|x| {
        let shift = x - x0;
        let exponent =
            f2 * Complex64::new(-0.5 * shift * shift, 0.0) + Complex64::new(0.0, p0 * x);
        prefactor * exponent.exp()
    });
    WaveFunction::new(grid.clone(), values)
}

/// Largest pointwise deviation after removing the global phase: aligns `b`
/// by the phase of the trapezoid overlap `<a, b>` and returns
/// `max_j |a_j - e^{i theta} b_j|`.
pub fn compare_up_to_phase(a: &WaveFunction, b: &WaveFunction) -> Result<f64> {
    let overlap = a.inner(b)?;
    let theta = -overlap.arg();
    let rotation = Complex64::from_polar(1.0, theta);
    let mut worst = 0.0f64;
    for j in 0..a.values().len() {
        worst = worst.max((a.values()[j] - rotation * b.values()[j]).norm());
    }
    Ok(worst)
}
