//! Oscillator time evolution and the closed-form oscillating-width formulas
//! the simulated variances are checked against.
//!
//! Evolution uses `H = N + 1/2`, so amplitudes pick up `e^{-i(n+1/2)t}` and
//! the state returns to itself (times a global `-1`) after `t = 2 pi`.
//!
//! The closed-form widths are vacuum-normalized: `kennard_var_x` equals 1
//! for the unsqueezed packet, which is twice the physical `Var(x) = 1/2`
//! under `[x, p] = i`. Comparisons therefore pair `2 * var_x` with
//! `kennard_var_x` and `4 * var_x * var_p` with `kennard_product`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{covariance, DenseOperator, FockState, ToleranceConfig};
use crate::state::{displaced_squeezed, CoherentParams, SqueezeParams};

/// Quadrature moments of a state at one instant. `cov_xp` is the symmetrized
/// covariance `<{x - <x>, p - <p>}>/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats {
    pub t: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
}

impl QuadratureStats {
    /// Physical uncertainty product scaled to match the vacuum-normalized
    /// closed form: `4 var_x var_p`.
    pub fn product4(&self) -> f64 {
        4.0 * self.var_x * self.var_p
    }

    /// Covariance-centered product `var_x var_p - cov_xp^2`, bounded below
    /// by 1/4 and equal to it for every pure Gaussian state.
    pub fn centered_product(&self) -> f64 {
        self.var_x * self.var_p - self.cov_xp * self.cov_xp
    }
}

/// A displaced squeezed state's quadrature moments sampled over time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    coherent: CoherentParams,
    squeeze: SqueezeParams,
    samples: Vec<QuadratureStats>,
}

impl Trajectory {
    pub fn coherent(&self) -> &CoherentParams {
        &self.coherent
    }

    pub fn squeeze(&self) -> &SqueezeParams {
        &self.squeeze
    }

    pub fn samples(&self) -> &[QuadratureStats] {
        &self.samples
    }
}

/// Applies `e^{-iHt}` with `H = N + 1/2` by phasing each amplitude.
pub fn evolve(psi: &FockState, t: f64) -> Result<FockState> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "evolution time must be finite, got {t}"
        )));
    }
    let phased = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64 + 0.5) * t))
        .collect();
    FockState::from_amplitudes(phased)
}

/// Measures the quadrature moments of `psi` with dense `x` and `p`
/// operators.
pub fn quadrature_stats(psi: &FockState, t: f64) -> Result<QuadratureStats> {
    let (x, p) = DenseOperator::quadratures(psi.dim())?;
    Ok(QuadratureStats {
        t,
        mean_x: x.expectation(psi)?.re,
        mean_p: p.expectation(psi)?.re,
        var_x: x.variance(psi)?,
        var_p: p.variance(psi)?,
        cov_xp: covariance(&x, &p, psi)?,
    })
}

/// Builds the displaced squeezed state once, evolves it to each requested
/// time, and records the quadrature moments.
///
/// Times must be finite and strictly increasing.
pub fn trajectory(
    p: &CoherentParams,
    z: &SqueezeParams,
    times: &[f64],
    dim: usize,
    cfg: &ToleranceConfig,
) -> Result<Trajectory> {
    for (i, &t) in times.iter().enumerate() {
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sample times must be finite, got {t}"
            )));
        }
        if i > 0 && t <= times[i - 1] {
            return Err(Error::InvalidParameter(format!(
                "sample times must be strictly increasing, got {} after {}",
                t,
                times[i - 1]
            )));
        }
    }
    let base = displaced_squeezed(p, z, dim, cfg)?;
    let (x, pq) = DenseOperator::quadratures(dim)?;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let psi = evolve(&base, t)?;
        samples.push(QuadratureStats {
            t,
            mean_x: x.expectation(&psi)?.re,
            mean_p: pq.expectation(&psi)?.re,
            var_x: x.variance(&psi)?,
            var_p: pq.variance(&psi)?,
            cov_xp: covariance(&x, &pq, &psi)?,
        });
    }
    Ok(Trajectory {
        coherent: *p,
        squeeze: *z,
        samples,
    })
}

/// `steps` evenly spaced times covering `[0, t_max]` inclusive.
pub fn evenly_spaced_times(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 time samples to span an interval, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| t_max * (i as f64 / last)).collect())
}

/// Vacuum-normalized position width
/// `cosh^2 r + sinh^2 r + 2 cosh r sinh r cos(2t - phi)`; equals
/// `2 Var(x)` of the evolved displaced squeezed state.
pub fn kennard_var_x(z: &SqueezeParams, t: f64) -> f64 {
    let (ch, sh) = (z.r().cosh(), z.r().sinh());
    ch * ch + sh * sh + 2.0 * ch * sh * (2.0 * t - z.phi()).cos()
}

/// Vacuum-normalized momentum width, the same expression with the cosine
/// term negated; equals `2 Var(p)`.
pub fn kennard_var_p(z: &SqueezeParams, t: f64) -> f64 {
    let (ch, sh) = (z.r().cosh(), z.r().sinh());
    ch * ch + sh * sh - 2.0 * ch * sh * (2.0 * t - z.phi()).cos()
}

/// Width product `1 + (1/4)(s^2 - s^{-2})^2 sin^2(2t - phi)` with
/// `s = e^r`; equals both `kennard_var_x * kennard_var_p` and the physical
/// `4 Var(x) Var(p)`.
pub fn kennard_product(z: &SqueezeParams, t: f64) -> f64 {
    let s2 = (2.0 * z.r()).exp();
    let swing = 0.5 * (s2 - 1.0 / s2);
    1.0 + swing * swing * (2.0 * t - z.phi()).sin().powi(2)
}
