//! Named verification suites behind the `verify` command.
//!
//! Each suite re-measures a module invariant and reports the worst value
//! seen across its sweep as one row, so the report has a fixed shape run
//! to run. Randomized sweeps draw from a fixed-seed generator; two runs of
//! the same suite produce identical rows.
//!
//! Residual rows carry the fixed tolerances of the invariants they mirror.
//! Spot-value and saturation-flag rows are judged against
//! `ToleranceConfig::compare_tol`, which is how an unreachable
//! `--tol compare=...` override forces a failing report.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{evenly_spaced_times, evolve, kennard_product, kennard_var_p, kennard_var_x, trajectory};
use crate::error::{Error, Result};
use crate::fock::{DenseOperator, FockState, ToleranceConfig};
use crate::grid::{compare_up_to_phase, fock_to_position, hermite_functions, psi_cs_closed_form, psi_ss_closed_form, Grid};
use crate::state::{
    bogoliubov_residual, coherent_closed_form, coherent_via_displacement, displaced_squeezed,
    from_min_uncertainty, ladder_residual, min_uncertainty_residual, squeeze_operator,
    squeezed_vacuum_factored, CoherentParams, MinUncertaintyCondition, SqueezeParams,
};
use crate::uncertainty::schrodinger_check;

/// Suites in the order `verify` runs them.
pub const SUITES: [&str; 5] = [
    "coherent-equivalence",
    "squeeze-equivalence",
    "dynamics-kennard",
    "uncertainty",
    "grid-crosscheck",
];

const SEED: u64 = 0x5153_4c41_4221_0001;

/// One verified invariant: the worst measured value across the suite's
/// sweep against the tolerance that judges it.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn check(suite: &str, name: &str, measured: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        suite: suite.to_string(),
        name: name.to_string(),
        measured,
        tolerance,
        passed: measured <= tolerance,
    }
}

/// Flag mismatches reported as a count with zero tolerance.
fn flag_check(suite: &str, name: &str, mismatches: usize) -> CheckResult {
    check(suite, name, mismatches as f64, 0.0)
}

fn draw_alpha(rng: &mut ChaCha8Rng, max_radius: f64) -> Complex64 {
    let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let radius = max_radius * rng.random_range(0.0f64..1.0).sqrt();
    Complex64::from_polar(radius, angle)
}

fn coherent_equivalence(cfg: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "coherent-equivalence";
    let dim = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_gap = 0.0f64;
    let mut worst_ladder = 0.0f64;
    let mut worst_centroid = 0.0f64;
    let (x, p) = DenseOperator::quadratures(dim)?;
    for _ in 0..10 {
        let params = CoherentParams::new(draw_alpha(&mut rng, 3.0))?;
        let closed = coherent_closed_form(&params, dim)?;
        let exponentiated = coherent_via_displacement(&params, dim, cfg)?;
        worst_gap = worst_gap.max(1.0 - closed.fidelity(&exponentiated)?);
        worst_ladder = worst_ladder.max(ladder_residual(&closed, &params));
        worst_centroid = worst_centroid
            .max((x.expectation(&closed)?.re - params.x0()).abs())
            .max((p.expectation(&closed)?.re - params.p0()).abs());
    }
    let unit = coherent_closed_form(&CoherentParams::new(Complex64::new(1.0, 0.0))?, dim)?;
    Ok(vec![
        check(SUITE, "closed-form-vs-displacement-fidelity-gap", worst_gap, 1e-10),
        check(SUITE, "ladder-eigenvalue-residual", worst_ladder, 1e-9),
        check(SUITE, "centroid-matches-labels", worst_centroid, cfg.compare_tol),
        check(
            SUITE,
            "unit-displacement-ground-amplitude",
            (unit.amplitude(0).re - 0.606_530_659_712_633_4).abs(),
            cfg.compare_tol,
        ),
    ])
}

fn squeeze_equivalence(cfg: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "squeeze-equivalence";
    let dim = 128;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut worst_gap = 0.0f64;
    let mut worst_bogoliubov = 0.0f64;
    for _ in 0..8 {
        let z = SqueezeParams::new(
            rng.random_range(0.0f64..1.0),
            rng.random_range(0.0..std::f64::consts::TAU),
        )?;
        let p = CoherentParams::new(draw_alpha(&mut rng, 2.0))?;
        let vacuum_dim = 96;
        let factored = squeezed_vacuum_factored(&z, vacuum_dim)?;
        let exponentiated = squeeze_operator(&z, vacuum_dim, cfg)?
            .apply(&FockState::vacuum(vacuum_dim)?)?;
        worst_gap = worst_gap.max(1.0 - factored.fidelity(&exponentiated)?);
        let state = displaced_squeezed(&p, &z, dim, cfg)?;
        worst_bogoliubov = worst_bogoliubov.max(bogoliubov_residual(&state, &p, &z));
    }
    let half = squeezed_vacuum_factored(&SqueezeParams::new(0.5, 0.0)?, 64)?;
    let cond = MinUncertaintyCondition::new(1.0f64.exp(), Complex64::new(0.4, 0.2))?;
    let min_state = from_min_uncertainty(&cond, dim, cfg)?;
    Ok(vec![
        check(SUITE, "factored-vs-exponential-fidelity-gap", worst_gap, 1e-8),
        check(SUITE, "bogoliubov-eigenvalue-residual", worst_bogoliubov, 1e-8),
        check(
            SUITE,
            "half-squeeze-ground-amplitude",
            (half.amplitude(0).re - 0.941_710_615_831_675_7).abs(),
            cfg.compare_tol,
        ),
        check(
            SUITE,
            "min-uncertainty-eigenvalue-residual",
            min_uncertainty_residual(&min_state, &cond),
            1e-8,
        ),
    ])
}

fn dynamics_kennard(cfg: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "dynamics-kennard";
    let dim = 128;
    let p = CoherentParams::new(Complex64::new(1.0, 0.5))?;
    let times = evenly_spaced_times(std::f64::consts::TAU, 64)?;
    let mut worst_x = 0.0f64;
    let mut worst_p = 0.0f64;
    let mut worst_product = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut worst_centroid = 0.0f64;
    let mut worst_algebra = 0.0f64;
    for r in [0.25, 0.5, 1.0] {
        for phi in [0.0, std::f64::consts::FRAC_PI_3, std::f64::consts::PI] {
            let z = SqueezeParams::new(r, phi)?;
            let traj = trajectory(&p, &z, &times, dim, cfg)?;
            let sum_target = (2.0 * r).cosh();
            for sample in traj.samples() {
                let t = sample.t;
                worst_x = worst_x.max((2.0 * sample.var_x - kennard_var_x(&z, t)).abs());
                worst_p = worst_p.max((2.0 * sample.var_p - kennard_var_p(&z, t)).abs());
                worst_product =
                    worst_product.max((sample.product4() - kennard_product(&z, t)).abs());
                worst_sum = worst_sum.max((sample.var_x + sample.var_p - sum_target).abs());
                worst_centroid = worst_centroid
                    .max((sample.mean_x - (p.x0() * t.cos() + p.p0() * t.sin())).abs())
                    .max((sample.mean_p - (p.p0() * t.cos() - p.x0() * t.sin())).abs());
                worst_algebra = worst_algebra
                    .max((kennard_var_x(&z, t) * kennard_var_p(&z, t) - kennard_product(&z, t)).abs());
            }
        }
    }
    Ok(vec![
        check(SUITE, "position-width-vs-closed-form", worst_x, 1e-8),
        check(SUITE, "momentum-width-vs-closed-form", worst_p, 1e-8),
        check(SUITE, "width-product-vs-closed-form", worst_product, 1e-8),
        check(SUITE, "variance-sum-constant", worst_sum, 1e-9),
        check(SUITE, "centroid-classical-motion", worst_centroid, 1e-9),
        check(SUITE, "closed-form-product-factorizes", worst_algebra, 1e-12),
    ])
}

fn uncertainty_suite(cfg: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "uncertainty";
    let vacuum = schrodinger_check(&FockState::vacuum(32)?, cfg)?;
    let one = schrodinger_check(&FockState::number_state(1, 16)?, cfg)?;
    let two = schrodinger_check(&FockState::number_state(2, 16)?, cfg)?;
    let coherent = schrodinger_check(
        &coherent_closed_form(&CoherentParams::new(Complex64::new(1.3, -0.2))?, 64)?,
        cfg,
    )?;

    let z = SqueezeParams::new(0.5, std::f64::consts::FRAC_PI_3)?;
    let base = displaced_squeezed(&CoherentParams::new(Complex64::new(1.0, 0.5))?, &z, 128, cfg)?;
    let mut worst_centered = 0.0f64;
    let mut worst_link = 0.0f64;
    let mut flag_misses = 0usize;
    for k in 0..8 {
        let t = std::f64::consts::TAU * k as f64 / 8.0 + 0.05;
        let report = schrodinger_check(&evolve(&base, t)?, cfg)?;
        worst_centered =
            worst_centered.max((report.lhs - report.cov_xp * report.cov_xp - 0.25).abs());
        worst_link = worst_link
            .max((4.0 * (0.25 + report.cov_xp * report.cov_xp) - kennard_product(&z, t)).abs());
        if !report.saturates_schrodinger {
            flag_misses += 1;
        }
    }
    // The width product returns to 1 at t = phi/2, where the plain
    // Heisenberg bound is touched as well; a quarter period later it is not.
    let at_minimum = schrodinger_check(&evolve(&base, z.phi() / 2.0)?, cfg)?;
    let off_minimum = schrodinger_check(
        &evolve(&base, z.phi() / 2.0 + std::f64::consts::FRAC_PI_4)?,
        cfg,
    )?;
    if !at_minimum.saturates_heisenberg {
        flag_misses += 1;
    }
    if off_minimum.saturates_heisenberg {
        flag_misses += 1;
    }

    Ok(vec![
        check(SUITE, "vacuum-product-saturates", (vacuum.lhs - 0.25).abs(), cfg.compare_tol),
        check(SUITE, "first-excited-product", (one.lhs - 2.25).abs(), cfg.compare_tol),
        check(SUITE, "second-excited-product", (two.lhs - 6.25).abs(), cfg.compare_tol),
        check(SUITE, "coherent-product-saturates", (coherent.lhs - 0.25).abs(), cfg.compare_tol),
        check(SUITE, "centered-product-pins-quarter", worst_centered, 1e-8),
        check(SUITE, "covariance-bound-tracks-width-product", worst_link, 1e-8),
        flag_check(SUITE, "saturation-flags", flag_misses),
    ])
}

fn grid_crosscheck(cfg: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    const SUITE: &str = "grid-crosscheck";
    let grid = Grid::default();
    let dim = 128;

    let basis_dim = 45;
    let rows = hermite_functions(&grid, basis_dim)?;
    let w = grid.weights();
    let mut worst_gram = 0.0f64;
    for m in 0..basis_dim {
        for n in m..basis_dim {
            let mut overlap = 0.0;
            for j in 0..grid.n_points() {
                overlap += w[j] * rows[[m, j]] * rows[[n, j]];
            }
            let target = if m == n { 1.0 } else { 0.0 };
            worst_gram = worst_gram.max((overlap - target).abs());
        }
    }

    let vacuum_render = fock_to_position(&FockState::vacuum(16)?, &grid)?;
    let ground = psi_cs_closed_form(0.0, 0.0, &grid)?;
    let vacuum_dev = compare_up_to_phase(&vacuum_render, &ground)?;

    let coherent_p = CoherentParams::from_phase_space(2.0, 0.0)?;
    let coherent_dev = compare_up_to_phase(
        &fock_to_position(&coherent_closed_form(&coherent_p, dim)?, &grid)?,
        &psi_cs_closed_form(2.0, 0.0, &grid)?,
    )?;

    let mut worst_gaussian = 0.0f64;
    for (alpha, r, phi) in [
        (Complex64::new(1.0, 0.0), 0.5, 0.0),
        (Complex64::new(1.0, 0.0), 1.0, std::f64::consts::FRAC_PI_2),
        (Complex64::new(0.5, 0.5), 0.8, std::f64::consts::PI),
    ] {
        let p = CoherentParams::new(alpha)?;
        let z = SqueezeParams::new(r, phi)?;
        let rendered = fock_to_position(&displaced_squeezed(&p, &z, dim, cfg)?, &grid)?;
        let closed = psi_ss_closed_form(p.x0(), p.p0(), &z, &grid)?;
        worst_gaussian = worst_gaussian.max(compare_up_to_phase(&rendered, &closed)?);
    }

    let moment_p = CoherentParams::new(Complex64::new(1.0, 0.5))?;
    let moment_z = SqueezeParams::new(0.5, std::f64::consts::FRAC_PI_3)?;
    let moment_state = displaced_squeezed(&moment_p, &moment_z, dim, cfg)?;
    let rendered = fock_to_position(&moment_state, &grid)?;
    let (x, _) = DenseOperator::quadratures(dim)?;
    let moment_dev = (rendered.mean_x() - x.expectation(&moment_state)?.re)
        .abs()
        .max((rendered.var_x() - x.variance(&moment_state)?).abs());

    let parseval_state = displaced_squeezed(
        &CoherentParams::new(Complex64::new(1.5, 0.0))?,
        &SqueezeParams::new(0.5, 0.0)?,
        dim,
        cfg,
    )?;
    let parseval_render = fock_to_position(&parseval_state, &grid)?;
    let parseval_dev = (parseval_render.norm() * parseval_render.norm()
        - parseval_state.probabilities().sum())
    .abs();

    Ok(vec![
        check(SUITE, "basis-orthonormality", worst_gram, 1e-8),
        check(SUITE, "vacuum-renders-as-ground-state", vacuum_dev, cfg.compare_tol),
        check(SUITE, "coherent-rendering-vs-closed-form", coherent_dev, 1e-6),
        check(SUITE, "squeezed-rendering-vs-closed-form", worst_gaussian, 1e-6),
        check(SUITE, "grid-moments-vs-operator-moments", moment_dev, 1e-7),
        check(SUITE, "fock-grid-parseval", parseval_dev, 1e-8),
    ])
}

/// Runs one named suite; unknown names are a configuration error.
pub fn run_suite(name: &str, cfg: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    match name {
        "coherent-equivalence" => coherent_equivalence(cfg),
        "squeeze-equivalence" => squeeze_equivalence(cfg),
        "dynamics-kennard" => dynamics_kennard(cfg),
        "uncertainty" => uncertainty_suite(cfg),
        "grid-crosscheck" => grid_crosscheck(cfg),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite '{other}'; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// Runs every suite in declaration order.
pub fn run_all(cfg: &ToleranceConfig) -> Result<Vec<CheckResult>> {
    let mut results = Vec::new();
    for suite in SUITES {
        results.extend(run_suite(suite, cfg)?);
    }
    Ok(results)
}
