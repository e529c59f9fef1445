//! Dense complex linear algebra over the truncated number basis.
//!
//! States are amplitude vectors over `|0..dim-1>`, operators are `dim x dim`
//! complex matrices. Everything is immutable after construction and every
//! operation is a pure function, so values can be shared freely across
//! threads.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entry magnitude of `M - M^dag` accepted as Hermitian.
const HERMITICITY_TOL: f64 = 1e-12;

/// Round-off slack below zero tolerated (and clamped) in variances.
const VARIANCE_CLAMP: f64 = 1e-12;

/// Numerical tolerances used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Truncation tolerance for the matrix-exponential power series.
    pub exp_tol: f64,
    /// Bound on the probability mass allowed in the last ten amplitudes of a
    /// constructed state.
    pub tail_tol: f64,
    /// Default tolerance for equality-style comparisons.
    pub compare_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            exp_tol: 1e-13,
            tail_tol: 1e-10,
            compare_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    /// Rejects non-finite or non-positive tolerances.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("exp_tol", self.exp_tol),
            ("tail_tol", self.tail_tol),
            ("compare_tol", self.compare_tol),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("need dim >= 2, got {dim}")));
    }
    Ok(())
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidDimension(format!(
            "mismatched dimensions {a} and {b}"
        )));
    }
    Ok(())
}

/// Amplitude vector over the truncated number basis.
///
/// Factory functions in this crate return unit-norm states; `apply` may
/// produce unnormalized vectors and leaves renormalization to the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amps: Array1<Complex64>,
}

impl FockState {
    /// Wraps an amplitude vector; requires dim >= 2 and finite entries.
    pub fn from_amplitudes(amps: Array1<Complex64>) -> Result<Self> {
        check_dim(amps.len())?;
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NumericalError(
                "state amplitudes contain non-finite values".into(),
            ));
        }
        Ok(Self { amps })
    }

    /// The ground state `|0>`.
    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number_state(0, dim)
    }

    /// The number eigenstate `|n>`.
    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if n >= dim {
            return Err(Error::InvalidParameter(format!(
                "number state index {n} outside basis of dimension {dim}"
            )));
        }
        let mut amps = Array1::zeros(dim);
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amps
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns the state scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::NumericalError(format!(
                "cannot normalize state with norm {n}"
            )));
        }
        let inv = Complex64::new(1.0 / n, 0.0);
        Ok(Self {
            amps: self.amps.mapv(|c| c * inv),
        })
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Overlap magnitude `|<self|other>|` of the unit-normalized states.
    ///
    /// Symmetric, in `[0, 1]`, and equal to 1 exactly when the states agree
    /// up to a global phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let overlap = self.inner(other)?.norm();
        let denom = self.norm() * other.norm();
        if denom <= 0.0 {
            return Err(Error::NumericalError(
                "fidelity of a zero-norm state is undefined".into(),
            ));
        }
        Ok((overlap / denom).min(1.0))
    }

    /// Occupation probabilities `|c_n|^2`.
    pub fn probabilities(&self) -> Array1<f64> {
        self.amps.mapv(|c| c.norm_sqr())
    }

    /// Probability mass in the last `count` basis components.
    pub fn tail_mass(&self, count: usize) -> f64 {
        let start = self.dim().saturating_sub(count);
        self.amps.iter().skip(start).map(|c| c.norm_sqr()).sum()
    }
}

/// Dense complex matrix acting on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    mat: Array2<Complex64>,
}

impl DenseOperator {
    /// Wraps a square matrix; requires dim >= 2 and finite entries.
    pub fn from_matrix(mat: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = mat.dim();
        if rows != cols {
            return Err(Error::InvalidDimension(format!(
                "operator matrix must be square, got {rows}x{cols}"
            )));
        }
        check_dim(rows)?;
        if mat.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NumericalError(
                "operator entries contain non-finite values".into(),
            ));
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            mat: Array2::eye(dim),
        })
    }

    /// Annihilation operator: `a[n-1][n] = sqrt(n)`.
    pub fn annihilation(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut mat = Array2::zeros((dim, dim));
        for n in 1..dim {
            mat[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self { mat })
    }

    /// Creation operator, the adjoint of `annihilation`.
    pub fn creation(dim: usize) -> Result<Self> {
        Ok(Self::annihilation(dim)?.dagger())
    }

    /// Number operator `diag(0, 1, ..., dim-1)`.
    pub fn number(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut mat = Array2::zeros((dim, dim));
        for n in 0..dim {
            mat[[n, n]] = Complex64::new(n as f64, 0.0);
        }
        Ok(Self { mat })
    }

    /// The dimensionless quadrature pair `x = (a + a^dag)/sqrt(2)` and
    /// `p = (a - a^dag)/(i*sqrt(2))`.
    pub fn quadratures(dim: usize) -> Result<(Self, Self)> {
        check_dim(dim)?;
        let mut x = Array2::zeros((dim, dim));
        let mut p = Array2::zeros((dim, dim));
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for n in 1..dim {
            let root = (n as f64).sqrt() * inv_sqrt2;
            x[[n - 1, n]] = Complex64::new(root, 0.0);
            x[[n, n - 1]] = Complex64::new(root, 0.0);
            p[[n - 1, n]] = Complex64::new(0.0, -root);
            p[[n, n - 1]] = Complex64::new(0.0, root);
        }
        Ok((Self { mat: x }, Self { mat: p }))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            mat: self.mat.t().mapv(|c| c.conj()),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            mat: self.mat.mapv(|c| c * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            mat: &self.mat - &other.mat,
        })
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            mat: dense_mul(&self.mat, &other.mat),
        })
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        ab.sub(&ba)
    }

    /// Largest entry magnitude of `M - M^dag`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let dev = (self.mat[[i, j]] - self.mat[[j, i]].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    fn require_hermitian(&self) -> Result<()> {
        let dev = self.hermiticity_error();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(format!(
                "max |M - M^dag| entry = {dev:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        Ok(())
    }

    /// Applies the operator to a state. The result is not renormalized.
    pub fn apply(&self, psi: &FockState) -> Result<FockState> {
        check_same_dim(self.dim(), psi.dim())?;
        FockState::from_amplitudes(self.mat.dot(psi.amplitudes()))
    }

    /// Expectation value `<psi|M|psi>` on the unit-normalized state.
    pub fn expectation(&self, psi: &FockState) -> Result<Complex64> {
        let image = self.apply(psi)?;
        let norm_sqr = psi.norm().powi(2);
        if norm_sqr <= 0.0 {
            return Err(Error::NumericalError(
                "expectation on a zero-norm state is undefined".into(),
            ));
        }
        Ok(psi.inner(&image)? / norm_sqr)
    }

    /// Variance `<M^2> - <M>^2` of a Hermitian operator.
    ///
    /// Computed as `|M psi|^2 - <M>^2`, which equals `<M^2>` only for
    /// Hermitian `M`; hence the Hermiticity gate. Round-off can push a
    /// saturated state slightly negative, which is clamped to zero.
    pub fn variance(&self, psi: &FockState) -> Result<f64> {
        self.require_hermitian()?;
        let image = self.apply(psi)?;
        let norm_sqr = psi.norm().powi(2);
        if norm_sqr <= 0.0 {
            return Err(Error::NumericalError(
                "variance on a zero-norm state is undefined".into(),
            ));
        }
        let mean = (psi.inner(&image)? / norm_sqr).re;
        let second = image.norm().powi(2) / norm_sqr;
        let var = second - mean * mean;
        if var < 0.0 && var > -VARIANCE_CLAMP {
            Ok(0.0)
        } else {
            Ok(var)
        }
    }

    /// Matrix exponential by scaling-and-squaring with a truncated power
    /// series; the series remainder is kept below `exp_tol` spread across the
    /// squaring steps.
    pub fn matrix_exp(&self, cfg: &ToleranceConfig) -> Result<Self> {
        cfg.validate()?;
        let dim = self.dim();
        let norm = one_norm(&self.mat);
        if norm == 0.0 {
            return Self::identity(dim);
        }

        // Scale until the one-norm is at most THETA, run the Taylor series,
        // then square back up.
        const THETA: f64 = 1.0;
        const MAX_TERMS: usize = 60;
        let squarings = if norm > THETA {
            (norm / THETA).log2().ceil() as i32
        } else {
            0
        };
        let scaled = self
            .mat
            .mapv(|c| c * Complex64::new(2f64.powi(-squarings), 0.0));
        let scaled_norm = one_norm(&scaled);
        let target = (cfg.exp_tol * 2f64.powi(-squarings)).max(1e-16);
        let bands = column_bands(&scaled);

        let mut sum: Array2<Complex64> = Array2::eye(dim);
        let mut term: Array2<Complex64> = Array2::eye(dim);
        let mut converged = false;
        for k in 1..=MAX_TERMS {
            term = match &bands {
                Some(bands) => banded_right_mul(&term, &scaled, bands),
                None => dense_mul(&term, &scaled),
            };
            term.mapv_inplace(|c| c / (k as f64));
            sum += &term;
            // Geometric bound on the series remainder.
            let ratio = scaled_norm / (k as f64 + 1.0);
            if ratio < 1.0 && one_norm(&term) * ratio / (1.0 - ratio) < target {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NumericalError(format!(
                "matrix exponential series did not converge in {MAX_TERMS} terms"
            )));
        }

        let mut result = sum;
        for _ in 0..squarings {
            result = dense_mul(&result, &result);
        }
        if result.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NumericalError(
                "matrix exponential produced non-finite entries".into(),
            ));
        }
        Ok(Self { mat: result })
    }
}

/// Symmetrized, centered covariance `<{A,B}>/2 - <A><B>` of two Hermitian
/// operators.
pub fn covariance(a: &DenseOperator, b: &DenseOperator, psi: &FockState) -> Result<f64> {
    a.require_hermitian()?;
    b.require_hermitian()?;
    let norm_sqr = psi.norm().powi(2);
    if norm_sqr <= 0.0 {
        return Err(Error::NumericalError(
            "covariance on a zero-norm state is undefined".into(),
        ));
    }
    let a_psi = a.apply(psi)?;
    let b_psi = b.apply(psi)?;
    // <{A,B}>/2 = Re <A psi | B psi> for Hermitian A, B.
    let sym = a_psi.inner(&b_psi)?.re / norm_sqr;
    let mean_a = psi.inner(&a_psi)?.re / norm_sqr;
    let mean_b = psi.inner(&b_psi)?.re / norm_sqr;
    Ok(sym - mean_a * mean_b)
}

/// Dense complex matrix product, computed as four real products so the
/// optimized f64 kernels in `matrixmultiply` carry the load.
fn dense_mul(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (m, k) = a.dim();
    let n = b.ncols();
    let split = |mat: &Array2<Complex64>| {
        let mut re = Vec::with_capacity(mat.len());
        let mut im = Vec::with_capacity(mat.len());
        // Arrays in this crate are standard (row-major) layout; fall back to
        // a logical-order copy otherwise.
        let binding = mat.as_standard_layout();
        for c in binding.iter() {
            re.push(c.re);
            im.push(c.im);
        }
        (re, im)
    };
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let mut cr = vec![0.0f64; m * n];
    let mut ci = vec![0.0f64; m * n];
    let rs = |cols: usize| cols as isize;
    unsafe {
        use matrixmultiply::dgemm;
        // C_re = A_re B_re - A_im B_im
        dgemm(m, k, n, 1.0, ar.as_ptr(), rs(k), 1, br.as_ptr(), rs(n), 1, 0.0, cr.as_mut_ptr(), rs(n), 1);
        dgemm(m, k, n, -1.0, ai.as_ptr(), rs(k), 1, bi.as_ptr(), rs(n), 1, 1.0, cr.as_mut_ptr(), rs(n), 1);
        // C_im = A_re B_im + A_im B_re
        dgemm(m, k, n, 1.0, ar.as_ptr(), rs(k), 1, bi.as_ptr(), rs(n), 1, 0.0, ci.as_mut_ptr(), rs(n), 1);
        dgemm(m, k, n, 1.0, ai.as_ptr(), rs(k), 1, br.as_ptr(), rs(n), 1, 1.0, ci.as_mut_ptr(), rs(n), 1);
    }
    let data: Vec<Complex64> = cr
        .into_iter()
        .zip(ci)
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    Array2::from_shape_vec((m, n), data).expect("shape matches by construction")
}

/// Nonzero row range (inclusive start, exclusive end) of each column, or
/// `None` when the matrix is dense enough that a plain product is cheaper.
/// Ladder-operator generators are banded, which makes the series phase of
/// the exponential far cheaper than its squaring phase.
fn column_bands(mat: &Array2<Complex64>) -> Option<Vec<(usize, usize)>> {
    let dim = mat.nrows();
    let mut bands = Vec::with_capacity(dim);
    let mut work = 0usize;
    for j in 0..dim {
        let mut lo = dim;
        let mut hi = 0;
        for i in 0..dim {
            if mat[[i, j]] != Complex64::new(0.0, 0.0) {
                if lo == dim {
                    lo = i;
                }
                hi = i + 1;
            }
        }
        let width = hi.saturating_sub(lo);
        work += width;
        bands.push((lo.min(hi), hi));
    }
    // Total multiply count is dim * work; bail out unless clearly sparse.
    if work * 4 < dim * dim {
        Some(bands)
    } else {
        None
    }
}

/// `lhs * rhs` where `rhs` has the given per-column nonzero row ranges.
fn banded_right_mul(
    lhs: &Array2<Complex64>,
    rhs: &Array2<Complex64>,
    bands: &[(usize, usize)],
) -> Array2<Complex64> {
    let dim = lhs.nrows();
    let mut out = Array2::zeros((dim, dim));
    for i in 0..dim {
        let lhs_row = lhs.row(i);
        let mut out_row = out.row_mut(i);
        for (j, &(lo, hi)) in bands.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in lo..hi {
                acc += lhs_row[k] * rhs[[k, j]];
            }
            out_row[j] = acc;
        }
    }
    out
}

/// Maximum column sum of entry magnitudes (the induced one-norm).
fn one_norm(mat: &Array2<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for col in mat.columns() {
        let sum: f64 = col.iter().map(|c| c.norm()).sum();
        worst = worst.max(sum);
    }
    worst
}

/// Largest entry magnitude; handy for operator-level comparisons.
pub fn max_entry_norm(mat: &Array2<Complex64>) -> f64 {
    mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual} (tol {tol})"
        );
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn annihilation_dim2_matches_definition() {
        let a = DenseOperator::annihilation(2).unwrap();
        assert_eq!(a.matrix()[[0, 1]], c(1.0, 0.0));
        assert_eq!(a.matrix()[[0, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix()[[1, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix()[[1, 1]], c(0.0, 0.0));
    }

    #[test]
    fn annihilation_dim3_entries() {
        let a = DenseOperator::annihilation(3).unwrap();
        assert_close(a.matrix()[[0, 1]].re, 1.0, 0.0);
        assert_close(a.matrix()[[1, 2]].re, 2f64.sqrt(), 1e-15);
        let nonzero = a.matrix().iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn creation_sends_vacuum_to_one() {
        let adag = DenseOperator::creation(8).unwrap();
        let one = adag.apply(&FockState::vacuum(8).unwrap()).unwrap();
        assert_eq!(one.amplitudes(), FockState::number_state(1, 8).unwrap().amplitudes());
    }

    #[test]
    fn rejects_dimension_below_two() {
        assert!(matches!(
            DenseOperator::annihilation(1),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(FockState::vacuum(0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn quadratures_dim2_x_matrix() {
        let (x, _) = DenseOperator::quadratures(2).unwrap();
        let v = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(x.matrix()[[0, 1]].re, v, 1e-16);
        assert_close(x.matrix()[[1, 0]].re, v, 1e-16);
        assert_eq!(x.matrix()[[0, 0]], c(0.0, 0.0));
    }

    #[test]
    fn quadratures_are_hermitian() {
        let (x, p) = DenseOperator::quadratures(32).unwrap();
        assert!(x.hermiticity_error() < 1e-14);
        assert!(p.hermiticity_error() < 1e-14);
        assert!(DenseOperator::number(32).unwrap().hermiticity_error() < 1e-14);
    }

    #[test]
    fn vacuum_x_squared_is_half() {
        let (x, _) = DenseOperator::quadratures(16).unwrap();
        let vac = FockState::vacuum(16).unwrap();
        let x2 = x.compose(&x).unwrap();
        assert_close(x2.expectation(&vac).unwrap().re, 0.5, 1e-14);
        assert_close(x.variance(&vac).unwrap(), 0.5, 1e-14);
    }

    #[test]
    fn commutator_is_i_identity_off_the_edge() {
        let dim = 32;
        let (x, p) = DenseOperator::quadratures(dim).unwrap();
        let comm = x.commutator(&p).unwrap();
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                let expected = if i == j { c(0.0, 1.0) } else { c(0.0, 0.0) };
                assert!(
                    (comm.matrix()[[i, j]] - expected).norm() < 1e-12,
                    "commutator deviates at ({i},{j})"
                );
            }
        }
        // The truncation edge is the known exception.
        let edge = comm.matrix()[[dim - 1, dim - 1]];
        assert_close(edge.im, 1.0 - dim as f64, 1e-9);
    }

    #[test]
    fn variance_of_first_excited_state() {
        let (x, _) = DenseOperator::quadratures(16).unwrap();
        let one = FockState::number_state(1, 16).unwrap();
        assert_close(x.variance(&one).unwrap(), 1.5, 1e-13);
    }

    #[test]
    fn variance_rejects_non_hermitian() {
        let a = DenseOperator::annihilation(8).unwrap();
        let psi = FockState::vacuum(8).unwrap();
        assert!(matches!(a.variance(&psi), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn covariance_of_vacuum_vanishes() {
        let (x, p) = DenseOperator::quadratures(16).unwrap();
        let vac = FockState::vacuum(16).unwrap();
        assert_close(covariance(&x, &p, &vac).unwrap(), 0.0, 1e-14);
    }

    #[test]
    fn fidelity_basics() {
        let zero = FockState::vacuum(8).unwrap();
        let one = FockState::number_state(1, 8).unwrap();
        assert_close(zero.fidelity(&zero).unwrap(), 1.0, 1e-12);
        assert_close(zero.fidelity(&one).unwrap(), 0.0, 0.0);
        assert_close(one.fidelity(&zero).unwrap(), 0.0, 0.0);
    }

    #[test]
    fn matrix_exp_of_zero_is_identity() {
        let zero = DenseOperator::from_matrix(Array2::zeros((6, 6))).unwrap();
        let exp = zero.matrix_exp(&ToleranceConfig::default()).unwrap();
        assert_eq!(exp.matrix(), DenseOperator::identity(6).unwrap().matrix());
    }

    #[test]
    fn matrix_exp_of_diagonal_phases() {
        // exp(i*pi*diag(0,1,2,3)) = diag(1,-1,1,-1)
        let dim = 4;
        let mut mat = Array2::zeros((dim, dim));
        for n in 0..dim {
            mat[[n, n]] = c(0.0, std::f64::consts::PI * n as f64);
        }
        let exp = DenseOperator::from_matrix(mat)
            .unwrap()
            .matrix_exp(&ToleranceConfig::default())
            .unwrap();
        for n in 0..dim {
            let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((exp.matrix()[[n, n]] - c(expected, 0.0)).norm() < 1e-13);
            for m in 0..dim {
                if m != n {
                    assert!(exp.matrix()[[n, m]].norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn matrix_exp_of_skew_hermitian_is_unitary() {
        // Displacement-style generator at alpha = 1.3 + 0.4i.
        let dim = 64;
        let alpha = c(1.3, 0.4);
        let a = DenseOperator::annihilation(dim).unwrap();
        let gen = a
            .dagger()
            .scale(alpha)
            .sub(&a.scale(alpha.conj()))
            .unwrap();
        let u = gen.matrix_exp(&ToleranceConfig::default()).unwrap();
        let residual = u
            .dagger()
            .compose(&u)
            .unwrap()
            .sub(&DenseOperator::identity(dim).unwrap())
            .unwrap();
        assert!(max_entry_norm(residual.matrix()) < 1e-11);
    }

    #[test]
    fn matrix_exp_preserves_norm_for_skew_hermitian() {
        let dim = 48;
        let alpha = c(0.7, -1.1);
        let a = DenseOperator::annihilation(dim).unwrap();
        let gen = a
            .dagger()
            .scale(alpha)
            .sub(&a.scale(alpha.conj()))
            .unwrap();
        let u = gen.matrix_exp(&ToleranceConfig::default()).unwrap();
        let moved = u.apply(&FockState::number_state(3, dim).unwrap()).unwrap();
        assert_close(moved.norm(), 1.0, 1e-11);
    }

    #[test]
    fn matrix_exp_rejects_bad_tolerances() {
        let zero = DenseOperator::from_matrix(Array2::zeros((4, 4))).unwrap();
        let bad = ToleranceConfig {
            exp_tol: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            zero.matrix_exp(&bad),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn tolerance_defaults() {
        let cfg = ToleranceConfig::default();
        assert_eq!(cfg.exp_tol, 1e-13);
        assert_eq!(cfg.tail_tol, 1e-10);
        assert_eq!(cfg.compare_tol, 1e-9);
    }

    #[test]
    fn tail_mass_counts_trailing_components() {
        let mut amps = Array1::zeros(6);
        amps[4] = c(0.6, 0.0);
        amps[5] = c(0.0, 0.8);
        let psi = FockState::from_amplitudes(amps).unwrap();
        assert_close(psi.tail_mass(2), 1.0, 1e-15);
        assert_close(psi.tail_mass(1), 0.64, 1e-15);
        assert_close(psi.tail_mass(100), 1.0, 1e-15);
    }

    #[test]
    fn apply_permits_unnormalized_results() {
        let a = DenseOperator::annihilation(8).unwrap();
        let dropped = a.apply(&FockState::vacuum(8).unwrap()).unwrap();
        assert_close(dropped.norm(), 0.0, 0.0);
    }
}
