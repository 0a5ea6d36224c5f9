//! The complete family of Hilbert-space metric candidates Theta solving the
//! quasi-Hermiticity constraint `H^dagger Theta = Theta H`, via three routes:
//! a Hermitian nullspace of the flattened linear constraint, the spectral sum
//! over left eigenvectors, and the closed-form elimination formulas for the
//! 4x4 family. Also positivity/signature tests and the S-space inner product.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::{C64, CMatrix, SquareMatrix};
use crate::model::ModelParams;
use crate::spectral;

/// Coordinates used to parametrize a metric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parametrization {
    /// First-row elements `t1..t4` of the elimination solution.
    EliminationT,
    /// Positive weights `kappa_j` of the spectral sum.
    SpectralKappa,
    /// Frobenius-orthonormal nullspace basis (no distinguished coordinates).
    Nullspace,
}

/// A basis of the Hermitian solution space of the quasi-Hermiticity
/// constraint for a fixed Hamiltonian.
#[derive(Debug, Clone)]
pub struct MetricFamily {
    pub basis: Vec<SquareMatrix>,
    pub family_dim: usize,
    pub parametrization: Parametrization,
}

/// Inertia of a Hermitian matrix plus the positive-definiteness verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignatureReport {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
    pub positive_definite: bool,
    pub min_eigenvalue: f64,
}

/// Residual of the quasi-Hermiticity constraint, `||H^dagger Theta - Theta H||`
/// in the max-entry norm.
pub fn constraint_residual(h: &SquareMatrix, theta: &SquareMatrix) -> f64 {
    let d = h.matrix().adjoint() * theta.matrix() - theta.matrix() * h.matrix();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius-orthonormal real coordinates on the Hermitian matrices of
/// dimension `dim`: first the `dim` diagonal entries, then for each pair
/// `i < j` the symmetric and antisymmetric off-diagonal components scaled
/// by sqrt(2) so the coordinate 2-norm equals the Frobenius norm.
fn hermitian_from_coords(dim: usize, coords: &[f64]) -> CMatrix {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = CMatrix::zeros(dim, dim);
    let mut k = 0;
    for i in 0..dim {
        m[(i, i)] = C64::new(coords[k], 0.0);
        k += 1;
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let re = coords[k] * inv_sqrt2;
            let im = coords[k + 1] * inv_sqrt2;
            k += 2;
            m[(i, j)] = C64::new(re, im);
            m[(j, i)] = C64::new(re, -im);
        }
    }
    m
}

/// Complete Hermitian solution space of `H^dagger Theta - Theta H = 0`.
///
/// The constraint is flattened into a real homogeneous system over the
/// `dim^2` real coordinates of the Hermitian matrices; the returned basis is
/// Frobenius-orthonormal. `family_dim = 0` is a valid outcome. Any singular
/// value below `tol * max(1, s_max)` counts as zero.
pub fn solve_metric_space(h: &SquareMatrix, tol: f64) -> MetricFamily {
    let dim = h.dim();
    let n_coords = dim * dim;

    // Column k of the real system is Re/Im of vec(H^dagger B_k - B_k H).
    let mut system = DMatrix::<f64>::zeros(2 * n_coords, n_coords);
    let h_adj = h.matrix().adjoint();
    for k in 0..n_coords {
        let mut coords = vec![0.0; n_coords];
        coords[k] = 1.0;
        let b = hermitian_from_coords(dim, &coords);
        let l = &h_adj * &b - &b * h.matrix();
        for (idx, z) in l.iter().enumerate() {
            system[(idx, k)] = z.re;
            system[(n_coords + idx, k)] = z.im;
        }
    }

    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let s_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let threshold = tol * s_max.max(1.0);

    let mut basis = Vec::new();
    for (row, &s) in svd.singular_values.iter().enumerate() {
        if s <= threshold {
            let coords: Vec<f64> = v_t.row(row).iter().copied().collect();
            let m = hermitian_from_coords(dim, &coords);
            basis.push(SquareMatrix::new(m).expect("finite by construction"));
        }
    }
    // An n x n coordinate space can hide nullspace directions past the
    // listed singular values only when the system has fewer rows than
    // columns; here rows = 2 n >= n, so the list is complete.
    let family_dim = basis.len();
    MetricFamily {
        basis,
        family_dim,
        parametrization: Parametrization::Nullspace,
    }
}

/// Tolerance used to decide spectrum realness inside the spectral
/// metric construction.
pub const REAL_SPECTRUM_TOL: f64 = 1e-8;

/// Metric from the spectral sum `Theta = sum_j |Xi_j> kappa_j <Xi_j|`, where
/// the `|Xi_j>` are unit-norm eigenvectors of `H^dagger`.
///
/// Requires a real spectrum (within [`REAL_SPECTRUM_TOL`]) and positive
/// weights; the result is Hermitian positive definite for diagonalizable `H`.
pub fn metric_from_left_eigenvectors(
    h: &SquareMatrix,
    kappas: &[f64],
) -> Result<SquareMatrix> {
    let dim = h.dim();
    if kappas.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected {dim} weights, got {}",
            kappas.len()
        )));
    }
    if kappas.iter().any(|&k| !(k > 0.0) || !k.is_finite()) {
        return Err(Error::NonPositiveKappa);
    }
    let sys = spectral::eigendecompose(h, REAL_SPECTRUM_TOL)?;
    let scale = h.norm_max().max(1.0);
    let worst_im = sys
        .spectrum
        .eigenvalues
        .iter()
        .map(|e| e.im.abs())
        .fold(0.0, f64::max);
    if worst_im > REAL_SPECTRUM_TOL * scale {
        return Err(Error::ComplexSpectrum(worst_im));
    }

    let mut theta = CMatrix::zeros(dim, dim);
    for (j, &kappa) in kappas.iter().enumerate() {
        let xi = sys.left.column(j);
        // Columns come back unit-norm; the weight absorbs any scale choice.
        theta += (xi * xi.adjoint()) * C64::new(kappa, 0.0);
    }
    // Symmetrize away rounding noise.
    let theta = (&theta + theta.adjoint()) * C64::new(0.5, 0.0);
    SquareMatrix::new(theta)
}

fn require_real_couplings(p: &ModelParams) -> Result<(f64, f64)> {
    if !p.couplings_real() {
        return Err(Error::EliminationSingular);
    }
    Ok((p.alpha().re, p.beta().re))
}

const SINGULAR_DENOM_EPS: f64 = 1e-14;

/// Closed-form elimination solution of the constraint for the 4x4 family:
/// first row `(t1, t2, t3, t4)`, symmetric completion, and the remaining
/// entries eliminated explicitly. Singular at `alpha = -1` or `beta = -1`.
pub fn closed_form_theta(p: &ModelParams, t: [f64; 4]) -> Result<SquareMatrix> {
    let (al, be) = require_real_couplings(p)?;
    let dal = 1.0 + al;
    let dbe = 1.0 + be;
    if dal.abs() <= SINGULAR_DENOM_EPS || dbe.abs() <= SINGULAR_DENOM_EPS {
        return Err(Error::EliminationSingular);
    }
    let [t1, t2, t3, t4] = t;

    let theta22 = (t1 * (1.0 - be) + t3 * dal) / dbe;
    let theta23 = (t2 * (1.0 - al) + t4 * dbe) / dbe;
    let theta24 = t3 * (1.0 - be) / dbe;
    let theta33 = (t1 * (be - 1.0) - t3 * dal) * (al - 1.0) / (dbe * dal);
    let theta34 = t2 * (al - 1.0) * (be - 1.0) / (dbe * dal);
    let theta44 = -t1 * (be - 1.0) * (be - 1.0) * (al - 1.0) / (dbe * dbe * dal);

    #[rustfmt::skip]
    let entries = [
        t1,      t2,      t3,      t4,
        t2,      theta22, theta23, theta24,
        t3,      theta23, theta33, theta34,
        t4,      theta24, theta34, theta44,
    ];
    SquareMatrix::from_real_rows(4, &entries)
}

/// The strictly diagonal family member (the `t2 = t3 = t4 = 0` choice in its
/// symmetrized normalization), scaled by `t1`:
/// `diag((1+a)(1+b)/(1-b), 1+a, 1-a, (1-a)(1-b)/(1+b))`.
///
/// Positive definite exactly for `|alpha| < 1` and `|beta| < 1`; an
/// indefinite diagonal pseudometric outside. Singular at `beta = +-1`.
pub fn diagonal_metric(p: &ModelParams, t1: f64) -> Result<SquareMatrix> {
    let (al, be) = require_real_couplings(p).map_err(|_| Error::SingularNormalization)?;
    if (1.0 - be).abs() <= SINGULAR_DENOM_EPS || (1.0 + be).abs() <= SINGULAR_DENOM_EPS {
        return Err(Error::SingularNormalization);
    }
    let d = [
        t1 * (1.0 + al) * (1.0 + be) / (1.0 - be),
        t1 * (1.0 + al),
        t1 * (1.0 - al),
        t1 * (1.0 - al) * (1.0 - be) / (1.0 + be),
    ];
    #[rustfmt::skip]
    let entries = [
        d[0], 0.0,  0.0,  0.0,
        0.0,  d[1], 0.0,  0.0,
        0.0,  0.0,  d[2], 0.0,
        0.0,  0.0,  0.0,  d[3],
    ];
    SquareMatrix::from_real_rows(4, &entries)
}

/// Eigenvalues of a Hermitian matrix, ascending. Errors when the input is
/// not Hermitian within `tol`.
fn hermitian_eigenvalues(theta: &SquareMatrix, tol: f64) -> Result<Vec<f64>> {
    let scale = theta.norm_max().max(1.0);
    if theta.hermiticity_defect() > tol * scale {
        return Err(Error::NotHermitian(tol));
    }
    let herm = (theta.matrix() + theta.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::new(herm);
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Inertia of a Hermitian matrix with zero-band `tol * max(1, ||Theta||)`.
pub fn signature(theta: &SquareMatrix, tol: f64) -> Result<SignatureReport> {
    let values = hermitian_eigenvalues(theta, tol.max(1e-12))?;
    let band = tol * theta.norm_max().max(1.0);
    let n_plus = values.iter().filter(|&&v| v > band).count();
    let n_minus = values.iter().filter(|&&v| v < -band).count();
    let n_zero = values.len() - n_plus - n_minus;
    let min_eigenvalue = values[0];
    Ok(SignatureReport {
        n_plus,
        n_zero,
        n_minus,
        positive_definite: n_plus == values.len() && min_eigenvalue > band,
        min_eigenvalue,
    })
}

/// Positive-definiteness verdict at the constraint-residual scale.
pub const POSITIVITY_TOL: f64 = 1e-10;

pub fn is_positive_definite(theta: &SquareMatrix) -> bool {
    signature(theta, POSITIVITY_TOL).map_or(false, |s| s.positive_definite)
}

/// S-space inner product `<phi | Theta | psi>`; sesquilinear, conjugate
/// symmetric for Hermitian `Theta`.
pub fn inner_product_s(
    phi: &DVector<C64>,
    psi: &DVector<C64>,
    theta: &SquareMatrix,
) -> Result<C64> {
    if phi.len() != theta.dim() || psi.len() != theta.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} against a {}x{} metric",
            phi.len(),
            psi.len(),
            theta.dim(),
            theta.dim()
        )));
    }
    Ok(phi.dotc(&(theta.matrix() * psi)))
}

/// Principal square root of a positive-definite Hermitian matrix, with its
/// inverse.
pub fn theta_sqrt(theta: &SquareMatrix) -> Result<(SquareMatrix, SquareMatrix)> {
    let scale = theta.norm_max().max(1.0);
    if theta.hermiticity_defect() > 1e-10 * scale {
        return Err(Error::NotHermitian(1e-10));
    }
    let herm = (theta.matrix() + theta.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::new(herm);
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if min <= POSITIVITY_TOL * scale {
        return Err(Error::NotPositiveDefinite(min));
    }
    let dim = theta.dim();
    let mut sqrt_d = CMatrix::zeros(dim, dim);
    let mut inv_sqrt_d = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        let r = eig.eigenvalues[i].sqrt();
        sqrt_d[(i, i)] = C64::new(r, 0.0);
        inv_sqrt_d[(i, i)] = C64::new(1.0 / r, 0.0);
    }
    let u = &eig.eigenvectors;
    let omega = u * sqrt_d * u.adjoint();
    let omega_inv = u * inv_sqrt_d * u.adjoint();
    Ok((SquareMatrix::new(omega)?, SquareMatrix::new(omega_inv)?))
}

/// The similarity transform `Omega H Omega^{-1}` with `Omega = Theta^{1/2}`;
/// Hermitian whenever `Theta` is a valid metric for `H`.
pub fn hermitize(h: &SquareMatrix, theta: &SquareMatrix) -> Result<SquareMatrix> {
    let (omega, omega_inv) = theta_sqrt(theta)?;
    SquareMatrix::new(omega.matrix() * h.matrix() * omega_inv.matrix())
}

/// Least-squares projection residual of `m` onto the span of `basis`
/// (Frobenius geometry), normalized by `||m||_F`.
pub fn projection_residual(m: &SquareMatrix, basis: &[SquareMatrix]) -> f64 {
    let norm = m.norm_frobenius();
    if norm == 0.0 {
        return 0.0;
    }
    // Gram solve in the (generally non-orthonormal) basis.
    let n = basis.len();
    let mut gram = DMatrix::<C64>::zeros(n, n);
    let mut rhs = DVector::<C64>::zeros(n);
    let dot = |x: &SquareMatrix, y: &SquareMatrix| -> C64 {
        x.matrix()
            .iter()
            .zip(y.matrix().iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    };
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = dot(&basis[i], &basis[j]);
        }
        rhs[i] = dot(&basis[i], m);
    }
    let coeffs = gram.svd(true, true).solve(&rhs, 1e-13).expect("svd solve");
    let mut residual = m.matrix().clone();
    for (i, b) in basis.iter().enumerate() {
        residual -= b.matrix() * coeffs[i];
    }
    residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / norm
}

/// Convenience builder for the elimination-parametrized family: the four
/// closed-form solutions at the coordinate unit vectors `t`.
pub fn elimination_family(p: &ModelParams) -> Result<MetricFamily> {
    let mut basis = Vec::with_capacity(4);
    for k in 0..4 {
        let mut t = [0.0; 4];
        t[k] = 1.0;
        basis.push(closed_form_theta(p, t)?);
    }
    Ok(MetricFamily {
        family_dim: basis.len(),
        basis,
        parametrization: Parametrization::EliminationT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;
    use approx::assert_relative_eq;

    fn family_h(a: f64, b: f64) -> SquareMatrix {
        build_hamiltonian(&ModelParams::from_ab(a, b))
    }

    #[test]
    fn nullspace_family_is_four_dimensional_at_generic_point() {
        let h = family_h(0.5, 0.5);
        let fam = solve_metric_space(&h, 1e-10);
        assert_eq!(fam.family_dim, 4);
        for theta in &fam.basis {
            assert!(theta.hermiticity_defect() < 1e-12);
            let bound = 1e-10 * h.norm_max() * theta.norm_max();
            assert!(constraint_residual(&h, theta) <= bound.max(1e-13));
        }
    }

    #[test]
    fn nullspace_of_identity_is_the_full_hermitian_space() {
        let fam = solve_metric_space(&SquareMatrix::identity(4), 1e-10);
        assert_eq!(fam.family_dim, 16);
    }

    #[test]
    fn nullspace_basis_is_frobenius_orthonormal() {
        let h = family_h(0.3, 0.7);
        let fam = solve_metric_space(&h, 1e-10);
        for i in 0..fam.family_dim {
            for j in 0..fam.family_dim {
                let ip: C64 = fam.basis[i]
                    .matrix()
                    .iter()
                    .zip(fam.basis[j].matrix().iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip.re - expected).abs() < 1e-10 && ip.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_family_contains_no_positive_definite_member() {
        // B = 0 Jordan point: the family persists but its positive cone is
        // empty; scan random combinations.
        let h = build_hamiltonian(&ModelParams::from_alpha_beta(0.5, 1.0));
        let fam = solve_metric_space(&h, 1e-10);
        assert!(fam.family_dim >= 1);
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..200 {
            let mut combo = CMatrix::zeros(4, 4);
            for b in &fam.basis {
                combo += b.matrix() * C64::new(next(), 0.0);
            }
            let combo = SquareMatrix::new(combo).unwrap();
            assert!(!is_positive_definite(&combo));
        }
    }

    #[test]
    fn spectral_metric_of_hermitian_h_with_unit_weights_is_identity() {
        let h = family_h(2.0, 2.0);
        assert!(h.is_hermitian(1e-14));
        let theta = metric_from_left_eigenvectors(&h, &[1.0; 4]).unwrap();
        let d = theta.matrix() - SquareMatrix::identity(4).matrix();
        assert!(d.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn spectral_metric_is_positive_definite_and_solves_constraint() {
        let h = family_h(0.5, 0.5);
        let theta = metric_from_left_eigenvectors(&h, &[1.0, 2.0, 0.5, 3.0]).unwrap();
        assert!(is_positive_definite(&theta));
        let bound = 1e-10 * h.norm_max() * theta.norm_max();
        assert!(constraint_residual(&h, &theta) <= bound);
    }

    #[test]
    fn spectral_metric_lies_in_the_nullspace_span() {
        let h = family_h(0.5, 0.5);
        let fam = solve_metric_space(&h, 1e-10);
        for kappas in [[1.0, 1.0, 1.0, 1.0], [0.3, 2.0, 1.5, 0.7]] {
            let theta = metric_from_left_eigenvectors(&h, &kappas).unwrap();
            assert!(projection_residual(&theta, &fam.basis) < 1e-9);
        }
    }

    #[test]
    fn spectral_metric_rejects_complex_spectrum() {
        let h = family_h(-0.5, 0.3);
        assert!(matches!(
            metric_from_left_eigenvectors(&h, &[1.0; 4]),
            Err(Error::ComplexSpectrum(_))
        ));
    }

    #[test]
    fn spectral_metric_rejects_non_positive_weights() {
        let h = family_h(0.5, 0.5);
        assert!(matches!(
            metric_from_left_eigenvectors(&h, &[1.0, -1.0, 1.0, 1.0]),
            Err(Error::NonPositiveKappa)
        ));
    }

    #[test]
    fn closed_form_theta_is_identity_at_zero_couplings() {
        let p = ModelParams::from_alpha_beta(0.0, 0.0);
        let theta = closed_form_theta(&p, [1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(theta.matrix(), SquareMatrix::identity(4).matrix());
    }

    #[test]
    fn closed_form_theta_satisfies_constraint_generically() {
        let cases = [
            (0.3, 0.4, [1.0, 0.2, -0.5, 0.8]),
            (-0.7, 0.9, [0.1, 1.0, 0.3, -0.2]),
            (0.55, -0.25, [2.0, -1.0, 0.5, 0.25]),
        ];
        for (al, be, t) in cases {
            let p = ModelParams::from_alpha_beta(al, be);
            let h = build_hamiltonian(&p);
            let theta = closed_form_theta(&p, t).unwrap();
            let bound = 1e-12 * h.norm_max().max(1.0) * theta.norm_max().max(1.0);
            assert!(constraint_residual(&h, &theta) < bound.max(1e-13));
        }
    }

    #[test]
    fn closed_form_theta_errors_on_singular_couplings() {
        let p = ModelParams::from_alpha_beta(0.3, -1.0);
        assert!(matches!(
            closed_form_theta(&p, [1.0, 0.0, 0.0, 0.0]),
            Err(Error::EliminationSingular)
        ));
        let p = ModelParams::from_alpha_beta(-1.0, 0.3);
        assert!(closed_form_theta(&p, [1.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn elimination_family_spans_the_nullspace() {
        let p = ModelParams::from_ab(0.5, 0.5);
        let h = build_hamiltonian(&p);
        let nullspace = solve_metric_space(&h, 1e-10);
        let elim = elimination_family(&p).unwrap();
        for theta in &elim.basis {
            assert!(projection_residual(theta, &nullspace.basis) < 1e-8);
        }
        for theta in &nullspace.basis {
            assert!(projection_residual(theta, &elim.basis) < 1e-8);
        }
    }

    #[test]
    fn diagonal_metric_is_identity_at_zero_couplings() {
        let p = ModelParams::from_alpha_beta(0.0, 0.0);
        let theta = diagonal_metric(&p, 1.0).unwrap();
        assert_eq!(theta.matrix(), SquareMatrix::identity(4).matrix());
    }

    #[test]
    fn diagonal_metric_matches_closed_form_up_to_scale() {
        let p = ModelParams::from_alpha_beta(0.5, 0.5);
        let diag = diagonal_metric(&p, 1.0).unwrap();
        let (al, be) = (0.5, 0.5);
        let t1 = (1.0 + al) * (1.0 + be) / (1.0 - be);
        let elim = closed_form_theta(&p, [t1, 0.0, 0.0, 0.0]).unwrap();
        let d = diag.matrix() - elim.matrix();
        assert!(d.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn diagonal_metric_pseudometric_entries_below_b_zero() {
        // beta = 1 + gamma^2 with gamma = 0.1 sits just below B = 0.
        let gamma: f64 = 0.1;
        let p = ModelParams::from_alpha_beta(0.0, 1.0 + gamma * gamma);
        let theta = diagonal_metric(&p, 1.0).unwrap();
        let g2 = gamma * gamma;
        assert_relative_eq!(theta[(0, 0)].re, -(2.0 + g2) / g2, max_relative = 1e-12);
        assert_relative_eq!(theta[(1, 1)].re, 1.0, max_relative = 1e-12);
        assert_relative_eq!(theta[(2, 2)].re, 1.0, max_relative = 1e-12);
        assert_relative_eq!(theta[(3, 3)].re, -g2 / (2.0 + g2), max_relative = 1e-12);
        let sig = signature(&theta, 1e-10).unwrap();
        assert_eq!((sig.n_plus, sig.n_zero, sig.n_minus), (2, 0, 2));
        assert!(!sig.positive_definite);
    }

    #[test]
    fn diagonal_metric_errors_at_beta_one() {
        let p = ModelParams::from_alpha_beta(0.0, 1.0);
        assert!(matches!(
            diagonal_metric(&p, 1.0),
            Err(Error::SingularNormalization)
        ));
    }

    #[test]
    fn signature_examples() {
        let id = SquareMatrix::identity(4);
        let sig = signature(&id, 1e-10).unwrap();
        assert_eq!((sig.n_plus, sig.n_zero, sig.n_minus), (4, 0, 0));
        assert!(sig.positive_definite);

        let zero = SquareMatrix::zeros(4);
        let sig = signature(&zero, 1e-10).unwrap();
        assert_eq!((sig.n_plus, sig.n_zero, sig.n_minus), (0, 4, 0));
        assert!(!sig.positive_definite);
    }

    #[test]
    fn signature_rejects_non_hermitian() {
        let m = SquareMatrix::from_real_rows(
            2,
            &[0.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(signature(&m, 1e-10), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn inner_product_reduces_to_dirac_for_identity_metric() {
        let phi = DVector::from_vec(vec![C64::new(1.0, 1.0), C64::new(0.0, -2.0)]);
        let psi = DVector::from_vec(vec![C64::new(0.5, 0.0), C64::new(1.0, 1.0)]);
        let theta = SquareMatrix::identity(2);
        let ip = inner_product_s(&phi, &psi, &theta).unwrap();
        assert_eq!(ip, phi.dotc(&psi));
    }

    #[test]
    fn eigenvectors_are_theta_orthogonal() {
        let h = family_h(0.5, 0.5);
        let theta = metric_from_left_eigenvectors(&h, &[1.0, 2.0, 0.7, 1.3]).unwrap();
        let sys = spectral::eigendecompose(&h, 1e-10).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let vi = DVector::from_column_slice(sys.right.column(i).as_slice());
                let vj = DVector::from_column_slice(sys.right.column(j).as_slice());
                let ip = inner_product_s(&vi, &vj, &theta).unwrap();
                if i != j {
                    assert!(ip.norm() < 1e-9, "<v{i}|Theta|v{j}> = {ip}");
                } else {
                    assert!(ip.re > 0.0 && ip.im.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn inner_product_positive_for_positive_definite_metric() {
        let h = family_h(0.5, 0.5);
        let theta = metric_from_left_eigenvectors(&h, &[1.0; 4]).unwrap();
        let psi = DVector::from_vec(vec![
            C64::new(0.3, -0.4),
            C64::new(1.0, 0.0),
            C64::new(-0.2, 0.9),
            C64::new(0.0, 0.1),
        ]);
        let ip = inner_product_s(&psi, &psi, &theta).unwrap();
        assert!(ip.re > 0.0 && ip.im.abs() < 1e-12);
    }

    #[test]
    fn inner_product_rejects_dimension_mismatch() {
        let phi = DVector::from_vec(vec![C64::new(1.0, 0.0)]);
        let psi = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let theta = SquareMatrix::identity(2);
        assert!(inner_product_s(&phi, &psi, &theta).is_err());
    }

    #[test]
    fn hermitization_makes_h_literally_hermitian() {
        let h = family_h(0.5, 0.3);
        let theta = metric_from_left_eigenvectors(&h, &[1.0, 0.5, 2.0, 1.5]).unwrap();
        let transformed = hermitize(&h, &theta).unwrap();
        assert!(transformed.hermiticity_defect() < 1e-8);
    }

    #[test]
    fn below_b_zero_diagonal_is_indefinite_but_family_keeps_a_metric() {
        // A in (0,1), B < 0, C > 0: the diagonal member loses positivity
        // while the spectral construction still yields a valid metric.
        let p = ModelParams::from_ab(0.5, -0.1);
        let h = build_hamiltonian(&p);
        let diag = diagonal_metric(&p, 1.0).unwrap();
        assert!(!is_positive_definite(&diag));
        let theta = metric_from_left_eigenvectors(&h, &[1.0; 4]).unwrap();
        assert!(is_positive_definite(&theta));
        assert!(projection_residual(&theta, &solve_metric_space(&h, 1e-10).basis) < 1e-9);
    }
}
