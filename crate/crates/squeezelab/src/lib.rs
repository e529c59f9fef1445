//! Truncated Fock-space simulator for coherent and squeezed states of the
//! harmonic oscillator.
//!
//! Natural units throughout: hbar = m = omega = 1, quadratures
//! `x = (a + a^dag)/sqrt(2)`, `p = (a - a^dag)/(i*sqrt(2))`, so `[x, p] = i`
//! away from the truncation edge. Displaced squeezed states follow the
//! squeeze-then-displace convention `D(alpha) S(z) |0>` with
//! `alpha = (x0 + i p0)/sqrt(2)` and `z = r e^{i phi}`.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod grid;
pub mod state;
pub mod uncertainty;
pub mod verify;

pub use dynamics::{
    evenly_spaced_times, evolve, kennard_product, kennard_var_p, kennard_var_x, quadrature_stats,
    trajectory, QuadratureStats, Trajectory,
};
pub use error::{Error, Result};
pub use fock::{covariance, DenseOperator, FockState, ToleranceConfig};
pub use grid::{
    compare_up_to_phase, fock_to_position, hermite_functions, psi_cs_closed_form,
    psi_ss_closed_form, Grid, WaveFunction,
};
pub use state::{
    bogoliubov_residual, coherent_closed_form, coherent_via_displacement, displaced_squeezed,
    displacement_operator, from_min_uncertainty, ladder_residual, min_uncertainty_residual,
    squeeze_operator, squeezed_vacuum_factored, truncation_guard, CoherentParams,
    MinUncertaintyCondition, SqueezeParams,
};
pub use uncertainty::{heisenberg_check, schrodinger_check, UncertaintyReport};
pub use verify::{run_all, run_suite, CheckResult, SUITES};
