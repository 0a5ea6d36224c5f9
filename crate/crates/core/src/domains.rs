//! Classification of the (A, B) parameter plane by computable predicates:
//! Hermiticity, matrix realness, spectral reality, diagonalizability,
//! crypto-Hermiticity (a positive-definite metric exists), EP adjacency.
//! Also the grid scanner and the one-parameter spectrum sweeps behind the
//! domain map and the level-crossing pictures.

use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::metric;
use crate::model::{ModelParams, build_hamiltonian, closed_form_energies};
use crate::spectral;

/// Best-effort region name; only assigned where the predicates pin it down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedRegion {
    /// Hermitian wedge (both couplings purely imaginary).
    D3,
    /// Real crypto-Hermitian doubly connected set.
    D5,
    /// On an EP line within the tolerance band.
    Boundary,
    /// Irreparably non-Hermitian: `A < 0` or `C < 0`.
    Broken,
}

impl std::fmt::Display for NamedRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NamedRegion::D3 => "D3",
            NamedRegion::D5 => "D5",
            NamedRegion::Boundary => "boundary",
            NamedRegion::Broken => "broken",
        })
    }
}

/// Predicate report for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainLabel {
    /// `H = H^dagger` entrywise.
    pub hermitian: bool,
    /// All entries real.
    pub real_matrix: bool,
    pub spectrum_real: bool,
    pub diagonalizable: bool,
    /// A positive-definite metric exists (decided constructively).
    pub crypto_hermitian: bool,
    /// Within the tolerance band of one of the EP lines `A = 0`, `C = 0`,
    /// or `B = 0` with `A > 0`.
    pub ep_boundary: bool,
    pub named_region: Option<NamedRegion>,
}

/// Thresholds used by a scan, recorded for reproducibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanTolerances {
    /// EP-line band and reality band.
    pub boundary: f64,
    /// Eigensolver tolerance handed to the spectral module.
    pub eigen: f64,
    /// Relative rank threshold used for geometric multiplicities.
    pub rank: f64,
    /// Cluster radius factor for eigenvalue grouping.
    pub cluster_radius_factor: f64,
}

impl ScanTolerances {
    pub fn with_boundary(boundary: f64) -> Self {
        Self {
            boundary,
            eigen: 1e-10,
            rank: spectral::RANK_TOL,
            cluster_radius_factor: spectral::CLUSTER_RADIUS_FACTOR,
        }
    }
}

/// Default boundary band.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-8;

/// Classify one point of the (A, B) plane by direct computation.
pub fn classify_point(a: f64, b: f64, tol: f64) -> DomainLabel {
    let p = ModelParams::from_ab(a, b);
    let h = build_hamiltonian(&p);
    let c = p.c();

    let hermitian = h.hermiticity_defect() <= tol * h.norm_max().max(1.0);
    let real_matrix = h.is_real(tol);

    let eig = spectral::eigendecompose(&h, 1e-10);
    let (spectrum_real, diagonalizable) = match &eig {
        Ok(sys) => {
            let band = tol * h.norm_max().max(1.0);
            let real = sys
                .spectrum
                .eigenvalues
                .iter()
                .all(|e| e.im.abs() <= band);
            let diag = sys
                .spectrum
                .clusters
                .iter()
                .all(|cl| cl.geometric == cl.algebraic);
            (real, diag)
        }
        Err(_) => (false, false),
    };

    // Constructive check: build a metric and test positivity.
    let crypto_hermitian = spectrum_real
        && diagonalizable
        && metric::metric_from_left_eigenvectors(&h, &[1.0; 4])
            .map(|theta| {
                metric::is_positive_definite(&theta)
                    && metric::constraint_residual(&h, &theta)
                        <= 1e-8 * h.norm_max().max(1.0) * theta.norm_max().max(1.0)
            })
            .unwrap_or(false);

    let ep_boundary = a.abs() <= tol || c.abs() <= tol || (b.abs() <= tol && a > tol);

    let named_region = if ep_boundary {
        Some(NamedRegion::Boundary)
    } else if a < -tol || c < -tol {
        Some(NamedRegion::Broken)
    } else if hermitian {
        Some(NamedRegion::D3)
    } else if real_matrix && crypto_hermitian {
        Some(NamedRegion::D5)
    } else {
        None
    };

    DomainLabel {
        hermitian,
        real_matrix,
        spectrum_real,
        diagonalizable,
        crypto_hermitian,
        ep_boundary,
        named_region,
    }
}

/// Row-major classification grid over a rectangle of the (A, B) plane,
/// evaluated at cell centers, A varying fastest.
#[derive(Debug, Clone)]
pub struct ScanGrid {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub na: usize,
    pub nb: usize,
    pub cells: Vec<DomainLabel>,
    pub tolerances: ScanTolerances,
}

impl ScanGrid {
    /// Cell center coordinates of cell `(ia, ib)`.
    pub fn cell_center(&self, ia: usize, ib: usize) -> (f64, f64) {
        let da = (self.a_range.1 - self.a_range.0) / self.na as f64;
        let db = (self.b_range.1 - self.b_range.0) / self.nb as f64;
        (
            self.a_range.0 + (ia as f64 + 0.5) * da,
            self.b_range.0 + (ib as f64 + 0.5) * db,
        )
    }

    pub fn cell(&self, ia: usize, ib: usize) -> &DomainLabel {
        &self.cells[ib * self.na + ia]
    }
}

/// Classify every cell center of an `na x nb` grid.
pub fn scan_grid(
    a_range: (f64, f64),
    b_range: (f64, f64),
    na: usize,
    nb: usize,
    tol: f64,
) -> Result<ScanGrid> {
    if na < 2 || nb < 2 {
        return Err(Error::InvalidRange(format!(
            "grid resolutions must be >= 2, got {na} x {nb}"
        )));
    }
    if !(a_range.0 < a_range.1) || !(b_range.0 < b_range.1) {
        return Err(Error::InvalidRange(format!(
            "degenerate ranges A {a_range:?}, B {b_range:?}"
        )));
    }
    let mut grid = ScanGrid {
        a_range,
        b_range,
        na,
        nb,
        cells: Vec::with_capacity(na * nb),
        tolerances: ScanTolerances::with_boundary(tol),
    };
    for ib in 0..nb {
        for ia in 0..na {
            let (a, b) = grid.cell_center(ia, ib);
            grid.cells.push(classify_point(a, b, tol));
        }
    }
    Ok(grid)
}

/// One-parameter path through the (A, B) plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Fix `A`, vary `B`.
    FixA,
    /// Fix `B`, vary `A`.
    FixB,
    /// The diagonal `A = B` (no fixed value).
    Diagonal,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub parameter: f64,
    /// The four closed-form energies, sorted by (re, im).
    pub energies: [C64; 4],
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub sweep: Sweep,
    pub fixed_value: Option<f64>,
    pub rows: Vec<SweepRow>,
}

/// Closed-form spectrum along a sweep, `steps` uniform samples on `[lo, hi]`
/// inclusive.
pub fn sweep_spectrum(
    sweep: Sweep,
    fixed_value: Option<f64>,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<SweepTable> {
    if steps < 2 {
        return Err(Error::InvalidRange(format!("steps must be >= 2, got {steps}")));
    }
    if !(lo < hi) {
        return Err(Error::InvalidRange(format!("[{lo}, {hi}]")));
    }
    match (sweep, fixed_value) {
        (Sweep::Diagonal, Some(_)) => {
            return Err(Error::InvalidRange(
                "the diagonal sweep takes no fixed value".into(),
            ));
        }
        (Sweep::FixA | Sweep::FixB, None) => {
            return Err(Error::InvalidRange(
                "axis sweeps require a fixed value for the other axis".into(),
            ));
        }
        _ => {}
    }

    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = lo + (hi - lo) * k as f64 / (steps - 1) as f64;
        let p = match sweep {
            Sweep::FixA => ModelParams::from_ab(fixed_value.unwrap(), t),
            Sweep::FixB => ModelParams::from_ab(t, fixed_value.unwrap()),
            Sweep::Diagonal => ModelParams::from_ab(t, t),
        };
        let mut energies = closed_form_energies(&p);
        energies.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        rows.push(SweepRow {
            parameter: t,
            energies,
        });
    }
    Ok(SweepTable {
        sweep,
        fixed_value,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_wedge_point() {
        let label = classify_point(2.0, 2.0, 1e-8);
        assert!(label.hermitian);
        assert!(label.spectrum_real);
        assert!(label.crypto_hermitian);
        assert!(!label.real_matrix);
        assert_eq!(label.named_region, Some(NamedRegion::D3));
    }

    #[test]
    fn real_crypto_hermitian_point() {
        let label = classify_point(0.5, 0.5, 1e-8);
        assert!(!label.hermitian);
        assert!(label.real_matrix);
        assert!(label.spectrum_real);
        assert!(label.diagonalizable);
        assert!(label.crypto_hermitian);
        assert_eq!(label.named_region, Some(NamedRegion::D5));
    }

    #[test]
    fn broken_point_below_c_zero() {
        // (0.02, -0.02): C = -0.06 < 0.
        let label = classify_point(0.02, -0.02, 1e-8);
        assert!(!label.spectrum_real);
        assert!(!label.crypto_hermitian);
        assert_eq!(label.named_region, Some(NamedRegion::Broken));
    }

    #[test]
    fn ep_boundary_flags() {
        assert!(classify_point(0.0, 0.5, 1e-8).ep_boundary);
        assert!(classify_point(0.5, 0.0, 1e-8).ep_boundary);
        // C = 0 at (0.4, -0.1)
        assert!(classify_point(0.4, -0.1, 1e-8).ep_boundary);
        assert!(!classify_point(0.5, 0.5, 1e-8).ep_boundary);
        // B = 0 with A < 0 is not on the dashed EP line (C = -0.5 there is,
        // however, nonzero and A < 0, so no flag).
        assert!(!classify_point(-0.5, 0.0, 1e-8).ep_boundary);
        assert!(!classify_point(-0.5, 1.0, 1e-8).ep_boundary);
    }

    #[test]
    fn scan_grid_smoke_and_determinism() {
        let g1 = scan_grid((-1.0, 2.0), (-1.0, 2.0), 3, 3, 1e-8).unwrap();
        assert_eq!(g1.cells.len(), 9);
        let g2 = scan_grid((-1.0, 2.0), (-1.0, 2.0), 3, 3, 1e-8).unwrap();
        assert_eq!(g1.cells, g2.cells);
        assert_eq!(g1.tolerances, g2.tolerances);
    }

    #[test]
    fn negative_a_half_plane_has_no_real_spectrum() {
        let g = scan_grid((-2.0, -0.1), (-1.0, 2.0), 6, 6, 1e-8).unwrap();
        for cell in &g.cells {
            assert!(!cell.spectrum_real);
            assert!(!cell.crypto_hermitian);
        }
    }

    #[test]
    fn spectrum_real_agrees_with_closed_form_criterion() {
        let g = scan_grid((-1.0, 2.0), (-1.0, 2.0), 13, 13, 1e-8).unwrap();
        for ib in 0..13 {
            for ia in 0..13 {
                let (a, b) = g.cell_center(ia, ib);
                let c = a + 4.0 * b;
                // Skip the tolerance band around the reality boundary.
                if a.abs() < 1e-3 || c.abs() < 1e-3 {
                    continue;
                }
                let expected = a > 0.0 && c > 0.0;
                assert_eq!(
                    g.cell(ia, ib).spectrum_real,
                    expected,
                    "at (A, B) = ({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn scan_grid_rejects_bad_input() {
        assert!(scan_grid((0.0, 1.0), (0.0, 1.0), 1, 3, 1e-8).is_err());
        assert!(scan_grid((1.0, 0.0), (0.0, 1.0), 3, 3, 1e-8).is_err());
    }

    #[test]
    fn sweep_fix_a_crosses_at_b_zero_and_complexifies_below_c_zero() {
        let table = sweep_spectrum(Sweep::FixA, Some(0.02), -0.02, 0.05, 141).unwrap();
        for row in &table.rows {
            let c = 0.02 + 4.0 * row.parameter;
            let all_real = row.energies.iter().all(|e| e.im.abs() < 1e-12);
            if c < -1e-9 {
                assert!(!all_real, "B = {}", row.parameter);
            } else if row.parameter > 1e-9 || (row.parameter < -1e-9 && c > 1e-9) {
                assert!(all_real, "B = {}", row.parameter);
            }
        }
        // Unavoided crossing: the middle gap closes at B = 0.
        let at_zero = table
            .rows
            .iter()
            .min_by(|x, y| x.parameter.abs().total_cmp(&y.parameter.abs()))
            .unwrap();
        assert!(at_zero.parameter.abs() < 1e-12);
        let gap = (at_zero.energies[1] - at_zero.energies[2]).norm();
        assert!(gap < 1e-8, "middle gap {gap}");
    }

    #[test]
    fn sweep_fix_b_unfolds_at_a_zero() {
        let table = sweep_spectrum(Sweep::FixB, Some(0.02), -0.02, 0.05, 71).unwrap();
        for row in &table.rows {
            let a = row.parameter;
            let all_real = row.energies.iter().all(|e| e.im.abs() < 1e-12);
            if a > 1e-9 {
                assert!(all_real);
            } else if a < -1e-9 {
                assert!(!all_real);
            }
        }
    }

    #[test]
    fn diagonal_sweep_branches() {
        let table = sweep_spectrum(Sweep::Diagonal, None, 0.0, 0.1, 11).unwrap();
        for row in &table.rows {
            let a = row.parameter;
            let sa = a.sqrt();
            let sc = (5.0 * a).sqrt();
            let mut expected = [
                (sa + sc) / 2.0,
                (sa - sc) / 2.0,
                (-sa + sc) / 2.0,
                (-sa - sc) / 2.0,
            ];
            expected.sort_by(f64::total_cmp);
            for (e, x) in row.energies.iter().zip(expected) {
                assert!((e.re - x).abs() < 1e-10 && e.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sweep_rejects_invalid_configuration() {
        assert!(sweep_spectrum(Sweep::Diagonal, Some(0.1), 0.0, 1.0, 10).is_err());
        assert!(sweep_spectrum(Sweep::FixA, None, 0.0, 1.0, 10).is_err());
        assert!(sweep_spectrum(Sweep::FixA, Some(0.1), 0.0, 1.0, 1).is_err());
        assert!(sweep_spectrum(Sweep::FixA, Some(0.1), 1.0, 0.0, 10).is_err());
    }
}
