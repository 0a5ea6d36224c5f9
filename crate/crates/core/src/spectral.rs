//! Generic small-dense-matrix eigenanalysis: eigenpairs via the complex
//! Schur form, reality classification, algebraic/geometric multiplicities,
//! diagonalizability, and exceptional-point location along parameter paths.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matrix::{C64, CMatrix, SquareMatrix};
use crate::model::ModelParams;

const SCHUR_EPS: f64 = 1e-13;
const SCHUR_MAX_ITER: usize = 10_000;

/// Relative singular-value threshold for the numerical rank of `M - lambda I`.
pub const RANK_TOL: f64 = 1e-9;

/// Default clustering radius factor; the radius is
/// `CLUSTER_RADIUS_FACTOR * max(1, ||M||)`.
pub const CLUSTER_RADIUS_FACTOR: f64 = 1e-7;

/// One group of numerically coincident eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// Representative value (mean of the grouped eigenvalues).
    pub value: C64,
    pub algebraic: usize,
    pub geometric: usize,
}

/// Reality classification of an eigenvalue multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reality {
    AllReal,
    ComplexPairs,
    AllImaginaryRealPart,
}

impl std::fmt::Display for Reality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Reality::AllReal => "all-real",
            Reality::ComplexPairs => "complex-pairs",
            Reality::AllImaginaryRealPart => "all-imaginary-real-part",
        };
        f.write_str(s)
    }
}

/// Eigenvalue multiset with multiplicities and the tolerance that produced it.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues sorted by (re, im).
    pub eigenvalues: Vec<C64>,
    pub clusters: Vec<Cluster>,
    pub reality: Reality,
    pub tol_used: f64,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_all_real(&self) -> bool {
        self.reality == Reality::AllReal
    }
}

/// Full eigensystem: spectrum plus right eigenvectors of `M` and left
/// eigenvectors (eigenvectors of `M^dagger`), column per eigenvalue.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub spectrum: Spectrum,
    pub right: CMatrix,
    pub left: CMatrix,
}

/// Eigenvalues and right eigenvectors via the complex Schur decomposition,
/// sorted by (re, im).
fn schur_eigenpairs(m: &CMatrix) -> Result<(Vec<C64>, CMatrix)> {
    let dim = m.nrows();
    // The complex QR iteration can stall on spectra with exact symmetries
    // (conjugate pairs of a real matrix, or the +/-lambda quartets of this
    // model family): the shift never breaks the tie.  A fixed complex
    // spectral shift M + sigma I destroys both symmetries, changes no
    // eigenvector, and is undone on the eigenvalues afterwards.
    let scale = m.iter().map(|z| z.norm()).fold(0.0_f64, f64::max).max(1.0);
    let sigma = C64::new(0.371, 0.219) * scale;
    let (schur, shift) = match m.clone().try_schur(SCHUR_EPS, SCHUR_MAX_ITER) {
        Some(s) => (s, C64::new(0.0, 0.0)),
        None => {
            let mut shifted = m.clone();
            for k in 0..dim {
                shifted[(k, k)] += sigma;
            }
            let s = shifted
                .try_schur(SCHUR_EPS, SCHUR_MAX_ITER)
                .ok_or(Error::ConvergenceFailure(SCHUR_MAX_ITER))?;
            (s, sigma)
        }
    };
    let (q, mut t) = schur.unpack();
    for k in 0..dim {
        t[(k, k)] -= shift;
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (t[(i, i)], t[(j, j)]);
        a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
    });

    // Eigenvectors of the upper-triangular factor by back-substitution,
    // with a floor on near-degenerate denominators (the LAPACK ztrevc
    // trick); the floored vector still has a small normalized residual.
    let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let floor = scale * 1e-150_f64.max(f64::EPSILON * scale);
    let mut vectors = CMatrix::zeros(dim, dim);
    for (col, &k) in order.iter().enumerate() {
        let lambda = t[(k, k)];
        let mut x = DVector::<C64>::zeros(dim);
        x[k] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for i in (j + 1)..=k {
                s += t[(j, i)] * x[i];
            }
            let mut denom = lambda - t[(j, j)];
            if denom.norm() < floor {
                denom = C64::new(floor, 0.0);
            }
            x[j] = s / denom;
        }
        let v = &q * x;
        let norm = v.norm();
        vectors.set_column(col, &(v / C64::new(norm, 0.0)));
    }

    let eigenvalues: Vec<C64> = order.iter().map(|&k| t[(k, k)]).collect();
    Ok((eigenvalues, vectors))
}

fn cluster_eigenvalues(sorted: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for &lambda in sorted {
        match clusters.last_mut() {
            Some((rep, count)) if (lambda - *rep).norm() <= radius => {
                // Running mean keeps the representative centered.
                let n = *count as f64;
                *rep = (*rep * C64::new(n, 0.0) + lambda) / C64::new(n + 1.0, 0.0);
                *count += 1;
            }
            _ => clusters.push((lambda, 1)),
        }
    }
    clusters
}

/// Numerical rank of `m` from its singular values, threshold `RANK_TOL * s_max`.
pub fn numerical_rank(m: &CMatrix) -> usize {
    let svd = m.clone().svd(false, false);
    let s_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    if s_max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL * s_max)
        .count()
}

fn classify_reality(eigenvalues: &[C64], tol: f64, scale: f64) -> Reality {
    let band = tol * scale.max(1.0);
    if eigenvalues.iter().all(|e| e.im.abs() <= band) {
        Reality::AllReal
    } else if eigenvalues.iter().all(|e| e.re.abs() <= band) {
        Reality::AllImaginaryRealPart
    } else {
        Reality::ComplexPairs
    }
}

/// Eigendecompose with an explicit clustering radius.
pub fn eigendecompose_with_radius(
    m: &SquareMatrix,
    tol: f64,
    cluster_radius: f64,
) -> Result<Eigensystem> {
    let dim = m.dim();
    let (eigenvalues, right) = schur_eigenpairs(m.matrix())?;
    let (left_values, left_raw) = schur_eigenpairs(&m.matrix().adjoint())?;

    // Left eigenvectors belong to the conjugated eigenvalues; pair each
    // right eigenvalue with the closest conjugate, greedily.
    let mut left = CMatrix::zeros(dim, dim);
    let mut taken = vec![false; dim];
    for (col, &lambda) in eigenvalues.iter().enumerate() {
        let target = lambda.conj();
        let (best, _) = left_values
            .iter()
            .enumerate()
            .filter(|(j, _)| !taken[*j])
            .map(|(j, &mu)| (j, (mu - target).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("one unmatched left eigenvalue per column");
        taken[best] = true;
        left.set_column(col, &left_raw.column(best));
    }

    let scale = m.norm_max();
    let clusters_raw = cluster_eigenvalues(&eigenvalues, cluster_radius);
    let clusters: Vec<Cluster> = clusters_raw
        .into_iter()
        .map(|(value, algebraic)| {
            let shifted = m.matrix() - CMatrix::identity(dim, dim) * value;
            let geometric = dim - numerical_rank(&shifted);
            Cluster {
                value,
                algebraic,
                // A resolved simple eigenvalue always carries one eigenvector.
                geometric: geometric.clamp(1, algebraic),
            }
        })
        .collect();

    let reality = classify_reality(&eigenvalues, tol, scale);
    Ok(Eigensystem {
        spectrum: Spectrum {
            eigenvalues,
            clusters,
            reality,
            tol_used: tol,
        },
        right,
        left,
    })
}

/// Eigendecompose `m` with the default clustering radius
/// `CLUSTER_RADIUS_FACTOR * max(1, ||M||)`.
pub fn eigendecompose(m: &SquareMatrix, tol: f64) -> Result<Eigensystem> {
    let radius = CLUSTER_RADIUS_FACTOR * m.norm_max().max(1.0);
    eigendecompose_with_radius(m, tol, radius)
}

/// True iff every eigenvalue cluster has geometric = algebraic multiplicity.
pub fn is_diagonalizable(m: &SquareMatrix, tol: f64) -> bool {
    match eigendecompose(m, tol) {
        Ok(sys) => sys
            .spectrum
            .clusters
            .iter()
            .all(|c| c.geometric == c.algebraic),
        Err(_) => false,
    }
}

/// Kind of degeneracy at a located exceptional point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpKind {
    DoubleRoot,
    QuadrupleRoot,
}

impl std::fmt::Display for EpKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EpKind::DoubleRoot => "double-root",
            EpKind::QuadrupleRoot => "quadruple-root",
        })
    }
}

/// A located exceptional point along a one-parameter path.
#[derive(Debug, Clone, Copy)]
pub struct EpLocation {
    /// Parameter value along the path.
    pub parameter: f64,
    /// Magnitude of the secular-quartic discriminant at the located point.
    pub residual: f64,
    pub kind: EpKind,
}

/// Signed square-root surrogate of the secular-quartic discriminant.
///
/// For `E^4 + p E^2 + q` with `p = -(A + 2B)` and `q = B^2` the discriminant
/// factors as `16 q (p^2 - 4q)^2 = 16 (A B C)^2`, so `A B C` changes sign
/// across each of the three EP lines `A = 0`, `B = 0`, `C = 0` while the
/// discriminant itself only touches zero.
pub fn signed_discriminant_root(p: &ModelParams) -> f64 {
    p.a() * p.b() * p.c()
}

/// Discriminant magnitude of the secular quartic, `16 (A B C)^2`.
pub fn discriminant_magnitude(p: &ModelParams) -> f64 {
    let g = signed_discriminant_root(p);
    16.0 * g * g
}

const EP_SCAN_POINTS: usize = 256;

/// Locate an exceptional point of the model family along the path
/// `t -> path(t)` on `[lo, hi]` by bisection of the signed discriminant
/// surrogate. When several EPs are bracketed the one nearest the segment
/// midpoint is returned.
pub fn find_ep_on_segment<F>(path: F, lo: f64, hi: f64, tol: f64) -> Result<EpLocation>
where
    F: Fn(f64) -> ModelParams,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidRange(format!("[{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidRange(format!("tolerance {tol}")));
    }
    let g = |t: f64| signed_discriminant_root(&path(t));

    // Coarse scan for strict sign changes; exact zeros at scan points are
    // kept as root candidates directly.
    let mut roots: Vec<f64> = Vec::new();
    let step = (hi - lo) / EP_SCAN_POINTS as f64;
    let mut prev_t = lo;
    let mut prev_g = g(lo);
    if prev_g == 0.0 {
        roots.push(lo);
    }
    for k in 1..=EP_SCAN_POINTS {
        let t = if k == EP_SCAN_POINTS { hi } else { lo + step * k as f64 };
        let gt = g(t);
        if gt == 0.0 {
            roots.push(t);
        } else if prev_g != 0.0 && prev_g.signum() != gt.signum() {
            roots.push(bisect(&g, prev_t, t, tol));
        }
        prev_t = t;
        prev_g = gt;
    }

    let mid = 0.5 * (lo + hi);
    let best = roots
        .into_iter()
        .min_by(|x, y| (x - mid).abs().total_cmp(&(y - mid).abs()))
        .ok_or(Error::NoEpBracketed { lo, hi })?;

    let p = path(best);
    let kind_band = (10.0 * tol).max(1e-8);
    let kind = if p.a().abs() <= kind_band && p.c().abs() <= kind_band {
        EpKind::QuadrupleRoot
    } else {
        EpKind::DoubleRoot
    };
    Ok(EpLocation {
        parameter: best,
        residual: discriminant_magnitude(&p),
        kind,
    })
}

fn bisect<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut g_lo = g(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if g_lo.signum() != g_mid.signum() {
            hi = mid;
        } else {
            lo = mid;
            g_lo = g_mid;
        }
    }
    0.5 * (lo + hi)
}
