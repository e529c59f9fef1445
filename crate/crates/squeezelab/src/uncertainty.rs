//! Heisenberg and Schrödinger uncertainty relations and their saturation.
//!
//! The Schrödinger bound uses the centered covariance
//! `cov = <{x - <x>, p - <p>}>/2`, giving `Var(x) Var(p) >= 1/4 + cov^2`.
//! Displaced squeezed states saturate that bound at every evolution time;
//! they touch the plain Heisenberg bound only where the covariance vanishes.

use crate::error::Result;
use crate::fock::{covariance, DenseOperator, FockState, ToleranceConfig};

/// Both uncertainty bounds evaluated on one state. `lhs` is
/// `Var(x) Var(p)`; a bound is "saturated" when `lhs` sits within
/// `compare_tol` of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub lhs: f64,
    pub heisenberg_bound: f64,
    pub schrodinger_bound: f64,
    pub cov_xp: f64,
    pub saturates_heisenberg: bool,
    pub saturates_schrodinger: bool,
}

fn analyze(psi: &FockState, cfg: &ToleranceConfig) -> Result<UncertaintyReport> {
    let (x, p) = DenseOperator::quadratures(psi.dim())?;
    let lhs = x.variance(psi)? * p.variance(psi)?;
    let cov_xp = covariance(&x, &p, psi)?;
    let heisenberg_bound = 0.25;
    let schrodinger_bound = 0.25 + cov_xp * cov_xp;
    Ok(UncertaintyReport {
        lhs,
        heisenberg_bound,
        schrodinger_bound,
        cov_xp,
        saturates_heisenberg: (lhs - heisenberg_bound).abs() < cfg.compare_tol,
        saturates_schrodinger: (lhs - schrodinger_bound).abs() < cfg.compare_tol,
    })
}

/// Evaluates `Var(x) Var(p)` against the constant bound 1/4.
pub fn heisenberg_check(psi: &FockState, cfg: &ToleranceConfig) -> Result<UncertaintyReport> {
    analyze(psi, cfg)
}

/// Evaluates `Var(x) Var(p)` against the covariance-strengthened bound
/// `1/4 + cov_xp^2`.
pub fn schrodinger_check(psi: &FockState, cfg: &ToleranceConfig) -> Result<UncertaintyReport> {
    analyze(psi, cfg)
}
