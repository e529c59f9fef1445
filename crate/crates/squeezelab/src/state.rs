//! Coherent and squeezed state construction along three equivalent routes,
//! plus the eigenvalue residuals that certify each construction.
//!
//! All builders return unit-norm states labeled in the squeeze-then-displace
//! convention `D(alpha) S(z) |0>`.

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DenseOperator, FockState, ToleranceConfig};

/// Largest displacement magnitude the numerics are designed for.
pub const MAX_ALPHA: f64 = 6.0;

/// Largest squeeze magnitude the numerics are designed for.
pub const MAX_SQUEEZE: f64 = 2.0;

/// Number of trailing amplitudes whose combined mass is bounded by the
/// truncation guard.
pub const TAIL_COMPONENTS: usize = 10;

/// Extra rows used while exponentiating generators. The truncated-series
/// exponential corrupts the top few dozen rows of its result at the scale of
/// the state's own edge amplitudes; building in a padded space and projecting
/// back keeps the returned window at projection accuracy.
const EDGE_PAD: usize = 64;

/// Displacement label `alpha`, equivalently the phase-space centroid
/// `(x0, p0) = sqrt(2) (Re alpha, Im alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams {
    alpha: Complex64,
}

impl CoherentParams {
    pub fn new(alpha: Complex64) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "displacement must be finite, got {alpha}"
            )));
        }
        if alpha.norm() > MAX_ALPHA {
            return Err(Error::InvalidParameter(format!(
                "displacement magnitude {} exceeds the design envelope {MAX_ALPHA}",
                alpha.norm()
            )));
        }
        Ok(Self { alpha })
    }

    /// Builds the label from the packet centroid via
    /// `alpha = (x0 + i p0)/sqrt(2)`.
    pub fn from_phase_space(x0: f64, p0: f64) -> Result<Self> {
        Self::new(Complex64::new(x0, p0) / Complex64::new(std::f64::consts::SQRT_2, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// Centroid position `<x> = sqrt(2) Re alpha`.
    pub fn x0(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.alpha.re
    }

    /// Centroid momentum `<p> = sqrt(2) Im alpha`.
    pub fn p0(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.alpha.im
    }
}

/// Squeeze label `z = r e^{i phi}` with magnitude `r >= 0` and phase
/// normalized into `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    phi: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !r.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squeeze parameters must be finite, got r={r}, phi={phi}"
            )));
        }
        if r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "squeeze magnitude must be non-negative, got {r}"
            )));
        }
        if r > MAX_SQUEEZE {
            return Err(Error::InvalidParameter(format!(
                "squeeze magnitude {r} exceeds the design envelope {MAX_SQUEEZE}"
            )));
        }
        Ok(Self {
            r,
            phi: phi.rem_euclid(std::f64::consts::TAU),
        })
    }

    /// The identity squeeze `z = 0`.
    pub fn none() -> Self {
        Self { r: 0.0, phi: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    /// Width scale `s = e^r` (derived, never stored).
    pub fn s(&self) -> f64 {
        self.r.exp()
    }
}

/// Parameters `(B, C)` of the minimum-uncertainty eigenvalue problem
/// `(x + i B p) psi = C psi` with `B = dx/dp` and `C = <x> + i B <p>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinUncertaintyCondition {
    b: f64,
    c: Complex64,
}

impl MinUncertaintyCondition {
    pub fn new(b: f64, c: Complex64) -> Result<Self> {
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "width ratio B must be strictly positive and finite, got {b}"
            )));
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue C must be finite, got {c}"
            )));
        }
        Ok(Self { b, c })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Real-axis squeeze reaching `Var(x) = B/2`: `r = ln(B)/2` at phase 0
    /// for wide packets, `r = -ln(B)/2` at phase pi for narrow ones.
    pub fn squeeze_params(&self) -> Result<SqueezeParams> {
        let half_log = 0.5 * self.b.ln();
        if half_log >= 0.0 {
            SqueezeParams::new(half_log, 0.0)
        } else {
            SqueezeParams::new(-half_log, std::f64::consts::PI)
        }
    }

    /// Displacement read off the eigenvalue: `<x> = Re C`, `<p> = Im C / B`.
    pub fn coherent_params(&self) -> Result<CoherentParams> {
        CoherentParams::from_phase_space(self.c.re, self.c.im / self.b)
    }
}

/// Requires the expected occupation plus a six-standard-deviation margin to
/// fit inside the basis: `|alpha|^2 + sinh^2 r + 6 sqrt(|alpha|^2 + sinh^2 r
/// + 1) < dim`.
pub fn truncation_guard(p: &CoherentParams, z: &SqueezeParams, dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("need dim >= 2, got {dim}")));
    }
    let occupation = p.alpha().norm_sqr() + z.r().sinh().powi(2);
    let demand = occupation + 6.0 * (occupation + 1.0).sqrt();
    if demand >= dim as f64 {
        return Err(Error::TruncationError(format!(
            "state needs about {demand:.1} basis levels but only {dim} are available \
             (|alpha| = {:.3}, r = {:.3})",
            p.alpha().norm(),
            z.r()
        )));
    }
    Ok(())
}

/// Rejects states whose trailing-component mass exceeds the tail bound.
fn check_tail(state: &FockState, tail_tol: f64) -> Result<()> {
    let mass = state.tail_mass(TAIL_COMPONENTS);
    if mass >= tail_tol {
        return Err(Error::TruncationError(format!(
            "probability mass {mass:.3e} in the last {TAIL_COMPONENTS} amplitudes exceeds \
             the tail bound {tail_tol:.3e}"
        )));
    }
    Ok(())
}

/// Keeps the first `dim` amplitudes and renormalizes.
fn project(state: &FockState, dim: usize) -> Result<FockState> {
    let window = Array1::from_iter(state.amplitudes().iter().take(dim).copied());
    FockState::from_amplitudes(window)?.normalized()
}

fn displacement_generator(alpha: Complex64, dim: usize) -> Result<DenseOperator> {
    let a = DenseOperator::annihilation(dim)?;
    a.dagger().scale(alpha).sub(&a.scale(alpha.conj()))
}

fn squeeze_generator(z: Complex64, dim: usize) -> Result<DenseOperator> {
    let a = DenseOperator::annihilation(dim)?;
    let adag = a.dagger();
    let half = Complex64::new(0.5, 0.0);
    adag.compose(&adag)?
        .scale(half * z)
        .sub(&a.compose(&a)?.scale(half * z.conj()))
}

/// Unitary displacement `D(alpha) = exp(alpha a^dag - alpha* a)`.
pub fn displacement_operator(
    p: &CoherentParams,
    dim: usize,
    cfg: &ToleranceConfig,
) -> Result<DenseOperator> {
    displacement_generator(p.alpha(), dim)?.matrix_exp(cfg)
}

/// Unitary squeeze `S(z) = exp(z a^dag^2 / 2 - z* a^2 / 2)`.
pub fn squeeze_operator(
    z: &SqueezeParams,
    dim: usize,
    cfg: &ToleranceConfig,
) -> Result<DenseOperator> {
    squeeze_generator(z.z(), dim)?.matrix_exp(cfg)
}

/// Coherent state from the closed-form amplitudes
/// `c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!)`, renormalized after
/// truncation.
pub fn coherent_closed_form(p: &CoherentParams, dim: usize) -> Result<FockState> {
    let tol = ToleranceConfig::default();
    truncation_guard(p, &SqueezeParams::none(), dim)?;
    let alpha = p.alpha();
    let mut amps = Array1::zeros(dim);
    let mut value = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps[0] = value;
    for n in 1..dim {
        value = value * alpha / Complex64::new((n as f64).sqrt(), 0.0);
        amps[n] = value;
    }
    let state = FockState::from_amplitudes(amps)?;
    let renorm_factor = 1.0 / state.norm();
    if (renorm_factor - 1.0).abs() >= tol.tail_tol {
        return Err(Error::TruncationError(format!(
            "renormalization factor deviates from 1 by {:.3e}, beyond the tail bound {:.3e}",
            (renorm_factor - 1.0).abs(),
            tol.tail_tol
        )));
    }
    let state = state.normalized()?;
    check_tail(&state, tol.tail_tol)?;
    Ok(state)
}

/// Coherent state as the exponentiated displacement generator acting on the
/// vacuum.
pub fn coherent_via_displacement(
    p: &CoherentParams,
    dim: usize,
    cfg: &ToleranceConfig,
) -> Result<FockState> {
    truncation_guard(p, &SqueezeParams::none(), dim)?;
    let work = dim + EDGE_PAD;
    let d = displacement_generator(p.alpha(), work)?.matrix_exp(cfg)?;
    let displaced = d.apply(&FockState::vacuum(work)?)?;
    let state = project(&displaced, dim)?;
    check_tail(&state, cfg.tail_tol)?;
    Ok(state)
}

/// Squeezed vacuum from the factorized form: even amplitudes
/// `c_{2m} = (cosh r)^{-1/2} (e^{i phi} tanh(r)/2)^m sqrt((2m)!)/m!`, odd
/// amplitudes exactly zero.
pub fn squeezed_vacuum_factored(z: &SqueezeParams, dim: usize) -> Result<FockState> {
    let tol = ToleranceConfig::default();
    let origin = CoherentParams::new(Complex64::new(0.0, 0.0))?;
    truncation_guard(&origin, z, dim)?;
    let mut amps = Array1::zeros(dim);
    let ratio_base = Complex64::from_polar(0.5 * z.r().tanh(), z.phi());
    let mut value = Complex64::new(1.0 / z.r().cosh().sqrt(), 0.0);
    amps[0] = value;
    let mut m = 0usize;
    while 2 * (m + 1) < dim {
        let two_m = (2 * m) as f64;
        let step = ((two_m + 1.0) * (two_m + 2.0)).sqrt() / (m as f64 + 1.0);
        value = value * ratio_base * Complex64::new(step, 0.0);
        amps[2 * (m + 1)] = value;
        m += 1;
    }
    let state = FockState::from_amplitudes(amps)?.normalized()?;
    check_tail(&state, tol.tail_tol)?;
    Ok(state)
}

/// Displaced squeezed state `D(alpha) S(z) |0>` with both factors built by
/// the matrix exponential.
pub fn displaced_squeezed(
    p: &CoherentParams,
    z: &SqueezeParams,
    dim: usize,
    cfg: &ToleranceConfig,
) -> Result<FockState> {
    truncation_guard(p, z, dim)?;
    let work = dim + EDGE_PAD;
    let squeezed = squeeze_generator(z.z(), work)?
        .matrix_exp(cfg)?
        .apply(&FockState::vacuum(work)?)?;
    let displaced = displacement_generator(p.alpha(), work)?
        .matrix_exp(cfg)?
        .apply(&squeezed)?;
    let state = project(&displaced, dim)?;
    check_tail(&state, cfg.tail_tol)?;
    Ok(state)
}

/// State determined by the minimum-uncertainty condition, built by mapping
/// `(B, C)` onto displacement and real-axis squeeze labels.
pub fn from_min_uncertainty(
    cond: &MinUncertaintyCondition,
    dim: usize,
    cfg: &ToleranceConfig,
) -> Result<FockState> {
    displaced_squeezed(&cond.coherent_params()?, &cond.squeeze_params()?, dim, cfg)
}

/// Norm of `(a - alpha) psi` over all but the last basis component, where
/// the annihilation image is incomplete.
pub fn ladder_residual(psi: &FockState, p: &CoherentParams) -> f64 {
    let dim = psi.dim();
    let alpha = p.alpha();
    let mut sum = 0.0;
    for n in 0..dim - 1 {
        let lowered = Complex64::new(((n + 1) as f64).sqrt(), 0.0) * psi.amplitude(n + 1);
        sum += (lowered - alpha * psi.amplitude(n)).norm_sqr();
    }
    sum.sqrt()
}

/// Norm of `[(cosh r) a - (e^{i phi} sinh r) a^dag] psi - mu psi` over all
/// but the last basis component, with the transformed eigenvalue
/// `mu = (cosh r) alpha - (e^{i phi} sinh r) alpha*`.
pub fn bogoliubov_residual(psi: &FockState, p: &CoherentParams, z: &SqueezeParams) -> f64 {
    let dim = psi.dim();
    let alpha = p.alpha();
    let ch = Complex64::new(z.r().cosh(), 0.0);
    let sh = Complex64::from_polar(z.r().sinh(), z.phi());
    let mu = ch * alpha - sh * alpha.conj();
    let mut sum = 0.0;
    for n in 0..dim - 1 {
        let lowered = Complex64::new(((n + 1) as f64).sqrt(), 0.0) * psi.amplitude(n + 1);
        let raised = if n > 0 {
            Complex64::new((n as f64).sqrt(), 0.0) * psi.amplitude(n - 1)
        } else {
            Complex64::new(0.0, 0.0)
        };
        sum += (ch * lowered - sh * raised - mu * psi.amplitude(n)).norm_sqr();
    }
    sum.sqrt()
}

/// Norm of `(x + i B p) psi - C psi` over all but the last basis component.
/// Vanishes exactly on the ideal minimum-uncertainty state.
pub fn min_uncertainty_residual(psi: &FockState, cond: &MinUncertaintyCondition) -> f64 {
    // x + iBp = [(1+B) a + (1-B) a^dag] / sqrt(2)
    let dim = psi.dim();
    let lower = Complex64::new((1.0 + cond.b()) / std::f64::consts::SQRT_2, 0.0);
    let raise = Complex64::new((1.0 - cond.b()) / std::f64::consts::SQRT_2, 0.0);
    let mut sum = 0.0;
    for n in 0..dim - 1 {
        let lowered = Complex64::new(((n + 1) as f64).sqrt(), 0.0) * psi.amplitude(n + 1);
        let raised = if n > 0 {
            Complex64::new((n as f64).sqrt(), 0.0) * psi.amplitude(n - 1)
        } else {
            Complex64::new(0.0, 0.0)
        };
        sum += (lower * lowered + raise * raised - cond.c() * psi.amplitude(n)).norm_sqr();
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::max_entry_norm;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual} (tol {tol})"
        );
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn coherent_params(re: f64, im: f64) -> CoherentParams {
        CoherentParams::new(c(re, im)).unwrap()
    }

    #[test]
    fn coherent_at_origin_is_vacuum() {
        let state = coherent_closed_form(&coherent_params(0.0, 0.0), 16).unwrap();
        assert_eq!(state.amplitude(0), c(1.0, 0.0));
        assert_close(state.tail_mass(15), 0.0, 0.0);
    }

    #[test]
    fn coherent_alpha_one_amplitudes() {
        let state = coherent_closed_form(&coherent_params(1.0, 0.0), 64).unwrap();
        let c0 = 0.606_530_659_712_633_4; // e^{-1/2}
        assert_close(state.amplitude(0).re, c0, 1e-14);
        assert_close(state.amplitude(1).re, c0, 1e-14);
        assert_close(state.amplitude(2).re, c0 / 2f64.sqrt(), 1e-14);
        assert_close(state.norm(), 1.0, 1e-14);
    }

    #[test]
    fn coherent_centroid_matches_phase_space_labels() {
        let p = CoherentParams::from_phase_space(1.5, -0.7).unwrap();
        let state = coherent_closed_form(&p, 64).unwrap();
        let (x, pq) = DenseOperator::quadratures(64).unwrap();
        assert_close(x.expectation(&state).unwrap().re, 1.5, 1e-10);
        assert_close(pq.expectation(&state).unwrap().re, -0.7, 1e-10);
    }

    #[test]
    fn coherent_occupation_is_poissonian() {
        let p = coherent_params(2.0, 0.0);
        let state = coherent_closed_form(&p, 64).unwrap();
        let n_op = DenseOperator::number(64).unwrap();
        assert_close(n_op.variance(&state).unwrap(), 4.0, 1e-9);
        // Per-component Poisson weights.
        let lambda: f64 = 4.0;
        let mut weight = (-lambda).exp();
        for n in 0..20 {
            if n > 0 {
                weight *= lambda / n as f64;
            }
            assert_close(state.probabilities()[n], weight, 1e-12);
        }
    }

    #[test]
    fn displacement_route_matches_closed_form() {
        let cfg = ToleranceConfig::default();
        let p = coherent_params(2.0, 0.0);
        let by_exp = coherent_via_displacement(&p, 64, &cfg).unwrap();
        let closed = coherent_closed_form(&p, 64).unwrap();
        assert!(1.0 - by_exp.fidelity(&closed).unwrap() < 1e-10);
    }

    #[test]
    fn displacement_route_at_origin_is_vacuum() {
        let cfg = ToleranceConfig::default();
        let state = coherent_via_displacement(&coherent_params(0.0, 0.0), 32, &cfg).unwrap();
        assert_eq!(state.amplitude(0), c(1.0, 0.0));
        assert_close(state.tail_mass(31), 0.0, 0.0);
    }

    #[test]
    fn split_form_displacement_matches_unitary() {
        // e^{-|alpha|^2/2} e^{alpha a^dag} e^{-alpha* a} |0> against the
        // one-shot unitary, pointwise.
        let cfg = ToleranceConfig::default();
        let dim = 64;
        let alpha = c(1.0, 0.5);
        let a = DenseOperator::annihilation(dim).unwrap();
        let up = a.dagger().scale(alpha).matrix_exp(&cfg).unwrap();
        let down = a.scale(-alpha.conj()).matrix_exp(&cfg).unwrap();
        let vac = FockState::vacuum(dim).unwrap();
        let split = up
            .apply(&down.apply(&vac).unwrap())
            .unwrap()
            .amplitudes()
            .mapv(|v| v * c((-0.5 * alpha.norm_sqr()).exp(), 0.0));
        let unitary = displacement_operator(&CoherentParams::new(alpha).unwrap(), dim, &cfg)
            .unwrap()
            .apply(&vac)
            .unwrap();
        let deviation = (&split - unitary.amplitudes())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(deviation < 1e-10, "split-form deviation {deviation}");
    }

    #[test]
    fn squeezed_vacuum_r_zero_is_vacuum() {
        let state = squeezed_vacuum_factored(&SqueezeParams::none(), 16).unwrap();
        assert_eq!(state.amplitude(0), c(1.0, 0.0));
        assert_close(state.tail_mass(15), 0.0, 0.0);
    }

    #[test]
    fn squeezed_vacuum_amplitudes_at_half() {
        // Frozen from the closed form cross-checked against a numeric matrix
        // exponential of the squeeze generator.
        let z = SqueezeParams::new(0.5, 0.0).unwrap();
        let state = squeezed_vacuum_factored(&z, 64).unwrap();
        assert_close(state.amplitude(0).re, 0.941_710_615_831_675_7, 1e-12);
        assert_close(state.amplitude(2).re, 0.307_719_176_458_370_44, 1e-12);
        for n in (1..64).step_by(2) {
            assert_eq!(state.amplitude(n), c(0.0, 0.0));
        }
    }

    #[test]
    fn squeezed_vacuum_phase_pi_flips_second_amplitude() {
        let plain = squeezed_vacuum_factored(&SqueezeParams::new(0.5, 0.0).unwrap(), 64).unwrap();
        let flipped =
            squeezed_vacuum_factored(&SqueezeParams::new(0.5, std::f64::consts::PI).unwrap(), 64)
                .unwrap();
        assert_close(flipped.amplitude(2).re, -plain.amplitude(2).re, 1e-15);
        assert_close(
            flipped.amplitude(2).norm(),
            plain.amplitude(2).norm(),
            1e-15,
        );
    }

    #[test]
    fn squeeze_operator_route_matches_factored() {
        let cfg = ToleranceConfig::default();
        let z = SqueezeParams::new(0.8, 1.3).unwrap();
        let dim = 96;
        let factored = squeezed_vacuum_factored(&z, dim).unwrap();
        let exponentiated = squeeze_operator(&z, dim, &cfg)
            .unwrap()
            .apply(&FockState::vacuum(dim).unwrap())
            .unwrap();
        assert!(1.0 - factored.fidelity(&exponentiated).unwrap() < 1e-8);
    }

    #[test]
    fn displaced_squeezed_identity_labels_give_vacuum() {
        let cfg = ToleranceConfig::default();
        let state = displaced_squeezed(
            &coherent_params(0.0, 0.0),
            &SqueezeParams::none(),
            32,
            &cfg,
        )
        .unwrap();
        assert_eq!(state.amplitude(0), c(1.0, 0.0));
    }

    #[test]
    fn displaced_squeezed_without_squeeze_is_coherent() {
        let cfg = ToleranceConfig::default();
        let p = coherent_params(1.0, 0.5);
        let state = displaced_squeezed(&p, &SqueezeParams::none(), 64, &cfg).unwrap();
        let closed = coherent_closed_form(&p, 64).unwrap();
        let deviation = (state.amplitudes() - closed.amplitudes())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(deviation < 1e-10, "amplitude deviation {deviation}");
    }

    #[test]
    fn displaced_squeezed_centroid_is_displacement_only() {
        let cfg = ToleranceConfig::default();
        let state = displaced_squeezed(
            &coherent_params(1.0, 0.0),
            &SqueezeParams::new(0.5, 0.0).unwrap(),
            96,
            &cfg,
        )
        .unwrap();
        let (x, _) = DenseOperator::quadratures(96).unwrap();
        assert_close(
            x.expectation(&state).unwrap().re,
            std::f64::consts::SQRT_2,
            1e-9,
        );
    }

    #[test]
    fn ladder_residual_examples() {
        let closed = coherent_closed_form(&coherent_params(1.0, 0.0), 64).unwrap();
        assert!(ladder_residual(&closed, &coherent_params(1.0, 0.0)) < 1e-10);

        let one = FockState::number_state(1, 16).unwrap();
        assert_close(ladder_residual(&one, &coherent_params(0.0, 0.0)), 1.0, 1e-15);

        let vac = FockState::vacuum(16).unwrap();
        assert_close(ladder_residual(&vac, &coherent_params(0.0, 0.0)), 0.0, 0.0);
    }

    #[test]
    fn bogoliubov_residual_of_displaced_squeezed() {
        let cfg = ToleranceConfig::default();
        let p = coherent_params(1.0, 0.0);
        let z = SqueezeParams::new(0.5, 0.0).unwrap();
        let state = displaced_squeezed(&p, &z, 96, &cfg).unwrap();
        assert!(bogoliubov_residual(&state, &p, &z) < 1e-8);
    }

    #[test]
    fn bogoliubov_residual_of_factored_squeezed_vacuum() {
        let z = SqueezeParams::new(0.3, std::f64::consts::FRAC_PI_2).unwrap();
        let state = squeezed_vacuum_factored(&z, 64).unwrap();
        assert!(bogoliubov_residual(&state, &coherent_params(0.0, 0.0), &z) < 1e-8);
    }

    #[test]
    fn bogoliubov_residual_reduces_to_ladder_at_r_zero() {
        let p = coherent_params(0.9, -0.4);
        let state = coherent_closed_form(&p, 48).unwrap();
        let with_zero_squeeze = bogoliubov_residual(&state, &p, &SqueezeParams::none());
        assert_close(with_zero_squeeze, ladder_residual(&state, &p), 1e-15);
    }

    #[test]
    fn min_uncertainty_b_one_is_coherent() {
        let cfg = ToleranceConfig::default();
        let cond = MinUncertaintyCondition::new(1.0, c(1.5, -0.7)).unwrap();
        let state = from_min_uncertainty(&cond, 64, &cfg).unwrap();
        let closed = coherent_closed_form(&CoherentParams::from_phase_space(1.5, -0.7).unwrap(), 64)
            .unwrap();
        assert!(1.0 - state.fidelity(&closed).unwrap() < 1e-9);
        assert!(min_uncertainty_residual(&state, &cond) < 1e-8);
    }

    #[test]
    fn min_uncertainty_wide_packet_variance() {
        let cfg = ToleranceConfig::default();
        let r: f64 = 0.4;
        let cond = MinUncertaintyCondition::new((2.0 * r).exp(), c(0.0, 0.0)).unwrap();
        let state = from_min_uncertainty(&cond, 96, &cfg).unwrap();
        let (x, _) = DenseOperator::quadratures(96).unwrap();
        assert_close(x.variance(&state).unwrap(), (2.0 * r).exp() / 2.0, 1e-9);
        assert!(min_uncertainty_residual(&state, &cond) < 1e-8);
    }

    #[test]
    fn min_uncertainty_narrow_packet_maps_to_phase_pi() {
        let cond = MinUncertaintyCondition::new(0.5, c(0.2, 0.3)).unwrap();
        let z = cond.squeeze_params().unwrap();
        assert_close(z.r(), 0.5 * 2f64.ln(), 1e-15);
        assert_close(z.phi(), std::f64::consts::PI, 1e-15);

        let cfg = ToleranceConfig::default();
        let state = from_min_uncertainty(&cond, 96, &cfg).unwrap();
        let (x, _) = DenseOperator::quadratures(96).unwrap();
        assert_close(x.variance(&state).unwrap(), 0.25, 1e-9);
        assert!(min_uncertainty_residual(&state, &cond) < 1e-8);
    }

    #[test]
    fn min_uncertainty_identity_is_vacuum() {
        let cfg = ToleranceConfig::default();
        let cond = MinUncertaintyCondition::new(1.0, c(0.0, 0.0)).unwrap();
        let state = from_min_uncertainty(&cond, 32, &cfg).unwrap();
        assert_eq!(state.amplitude(0), c(1.0, 0.0));
    }

    #[test]
    fn min_uncertainty_rejects_non_positive_ratio() {
        assert!(matches!(
            MinUncertaintyCondition::new(0.0, c(0.0, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            MinUncertaintyCondition::new(-2.0, c(0.0, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn guard_rejects_oversized_states() {
        let p = coherent_params(6.0, 0.0);
        assert!(matches!(
            truncation_guard(&p, &SqueezeParams::none(), 64),
            Err(Error::TruncationError(_))
        ));
        assert!(truncation_guard(&p, &SqueezeParams::none(), 128).is_ok());
    }

    #[test]
    fn tail_check_rejects_heavy_squeezed_tails() {
        // Passes the occupation guard but leaves too much mass near the edge.
        let z = SqueezeParams::new(1.8, 0.0).unwrap();
        assert!(matches!(
            squeezed_vacuum_factored(&z, 64),
            Err(Error::TruncationError(_))
        ));
    }

    #[test]
    fn envelope_limits_are_enforced() {
        assert!(matches!(
            CoherentParams::new(c(6.5, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            SqueezeParams::new(2.3, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            SqueezeParams::new(-0.1, 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn squeeze_phase_is_normalized() {
        let z = SqueezeParams::new(0.5, 7.0).unwrap();
        assert_close(z.phi(), 7.0 - std::f64::consts::TAU, 1e-15);
        assert_close(SqueezeParams::new(0.5, -1.0).unwrap().phi(), std::f64::consts::TAU - 1.0, 1e-15);
    }

    #[test]
    fn squeeze_scale_accessor() {
        let z = SqueezeParams::new(0.7, 0.0).unwrap();
        assert_close(z.s(), 0.7f64.exp(), 1e-15);
    }

    #[test]
    fn operators_are_unitary() {
        let cfg = ToleranceConfig::default();
        let dim = 64;
        let d = displacement_operator(&coherent_params(1.2, -0.8), dim, &cfg).unwrap();
        let s = squeeze_operator(&SqueezeParams::new(1.0, 2.1).unwrap(), dim, &cfg).unwrap();
        for u in [d, s] {
            let residual = u
                .dagger()
                .compose(&u)
                .unwrap()
                .sub(&DenseOperator::identity(dim).unwrap())
                .unwrap();
            assert!(max_entry_norm(residual.matrix()) < 1e-11);
        }
    }
}
