//! The solvable 4x4 two-parameter matrix family, its parity operator,
//! closed-form spectrum, and the harmonic-oscillator reference formulas.
//!
//! The Hamiltonian is tridiagonal with zero diagonal, superdiagonal
//! `(-1+b, -1+a, -1+b)` and subdiagonal `(-1-b, -1-a, -1-b)`. In the
//! `(A, B)` coordinates `A = 1 - a^2`, `B = 1 - b^2`, `C = A + 4B` the
//! four energies are `E = (+-sqrt(A) +- sqrt(C)) / 2`, which makes the
//! root-complexification lines `A = 0` and `C = 0` explicit.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::matrix::{C64, SquareMatrix};

/// Model dimension; only the N = 4 member is defined explicitly.
pub const MODEL_DIM: usize = 4;

/// A point of the coupling plane, carried both as the couplings
/// `(alpha, beta)` and as the derived coordinates `(A, B, C)`.
///
/// `A` and `B` are always real here; `alpha = sqrt(1 - A)` uses the
/// principal branch, so `alpha >= 0` for `A <= 1` and `alpha = i sqrt(A - 1)`
/// for `A > 1` (same for `beta`/`B`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: C64,
    beta: C64,
    a: f64,
    b: f64,
}

impl ModelParams {
    /// Real couplings `alpha`, `beta`.
    pub fn from_alpha_beta(alpha: f64, beta: f64) -> Self {
        Self {
            alpha: C64::new(alpha, 0.0),
            beta: C64::new(beta, 0.0),
            a: 1.0 - alpha * alpha,
            b: 1.0 - beta * beta,
        }
    }

    /// Principal-branch couplings from the `(A, B)` coordinates.
    pub fn from_ab(a: f64, b: f64) -> Self {
        Self {
            alpha: principal_coupling(a),
            beta: principal_coupling(b),
            a,
            b,
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `C = A + 4B`.
    pub fn c(&self) -> f64 {
        self.a + 4.0 * self.b
    }

    /// `alpha^2` as a real number (`1 - A`).
    pub fn alpha_sq(&self) -> f64 {
        1.0 - self.a
    }

    /// `beta^2` as a real number (`1 - B`).
    pub fn beta_sq(&self) -> f64 {
        1.0 - self.b
    }

    /// Both couplings real (i.e. `A <= 1` and `B <= 1`).
    pub fn couplings_real(&self) -> bool {
        self.alpha.im == 0.0 && self.beta.im == 0.0
    }
}

fn principal_coupling(coord: f64) -> C64 {
    // sqrt(1 - coord) with the principal branch.
    if coord <= 1.0 {
        C64::new((1.0 - coord).sqrt(), 0.0)
    } else {
        C64::new(0.0, (coord - 1.0).sqrt())
    }
}

/// The 4x4 family member at `p`: zero diagonal, superdiagonal
/// `(-1+beta, -1+alpha, -1+beta)`, subdiagonal `(-1-beta, -1-alpha, -1-beta)`.
pub fn build_hamiltonian(p: &ModelParams) -> SquareMatrix {
    let one = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    let (al, be) = (p.alpha, p.beta);
    #[rustfmt::skip]
    let entries = [
        z,         -one + be, z,         z,
        -one - be, z,         -one + al, z,
        z,         -one - al, z,         -one + be,
        z,         z,         -one - be, z,
    ];
    SquareMatrix::from_rows(MODEL_DIM, &entries).expect("finite by construction")
}

/// Antidiagonal parity matrix of ones; an involution for every `dim >= 1`.
pub fn build_parity(dim: usize) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(dim).into_inner();
    for i in 0..dim {
        m[(i, dim - 1 - i)] = C64::new(1.0, 0.0);
    }
    SquareMatrix::new(m).expect("finite by construction")
}

/// PT-symmetry defect `|| P H P - H^T ||` in the max-entry norm, with the
/// antilinear time reversal realized as plain transposition.
///
/// Zero (to rounding) for every output of [`build_hamiltonian`].
pub fn pt_residual(h: &SquareMatrix) -> f64 {
    let p = build_parity(h.dim());
    let conjugated = p.matrix() * h.matrix() * p.matrix();
    let d = conjugated - h.matrix().transpose();
    d.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Coefficients of the secular quartic `E^4 + (a^2 - 3 + 2 b^2) E^2 + (1 - b^2)^2`,
/// in descending powers of `E`.
pub fn secular_coefficients(p: &ModelParams) -> [f64; 5] {
    let a2 = p.alpha_sq();
    let b2 = p.beta_sq();
    [1.0, 0.0, a2 - 3.0 + 2.0 * b2, 0.0, (1.0 - b2) * (1.0 - b2)]
}

/// Evaluate a quartic with real coefficients (descending powers) at `e`.
pub fn eval_quartic(coeffs: &[f64; 5], e: C64) -> C64 {
    coeffs
        .iter()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * e + C64::new(c, 0.0))
}

/// The four closed-form energies `E = (+-sqrt(A) +- sqrt(C)) / 2` with the
/// principal square roots. All four are real exactly when `A >= 0` and
/// `C >= 0`; off that wedge the complexified values are still returned.
pub fn closed_form_energies(p: &ModelParams) -> [C64; 4] {
    let sa = Complex::new(p.a(), 0.0).sqrt();
    let sc = Complex::new(p.c(), 0.0).sqrt();
    let half = C64::new(0.5, 0.0);
    [
        (sa + sc) * half,
        (sa - sc) * half,
        (-sa + sc) * half,
        (-sa - sc) * half,
    ]
}

/// One bound-state label of the generalized harmonic oscillator used as the
/// reference model for unavoided crossings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HOLevel {
    /// Radial quantum number.
    pub n: u32,
    /// Quasi-parity, +1 or -1.
    pub q: i32,
    /// Coupling strength.
    pub alpha: f64,
    /// Regularization shift (only enters through `c^2`); the physical
    /// regularization takes `c > 0`, default 1.
    pub c: f64,
}

impl HOLevel {
    pub fn new(n: u32, q: i32, alpha: f64, c: f64) -> Result<Self> {
        if q != 1 && q != -1 {
            return Err(Error::InvalidQuasiParity(q));
        }
        Ok(Self { n, q, alpha, c })
    }

    pub fn with_default_shift(n: u32, q: i32, alpha: f64) -> Result<Self> {
        Self::new(n, q, alpha, 1.0)
    }
}

/// Oscillator level energy `E = 4n + 2 - 2 q alpha + c^2`.
pub fn ho_energy(level: &HOLevel) -> f64 {
    4.0 * f64::from(level.n) + 2.0 - 2.0 * f64::from(level.q) * level.alpha + level.c * level.c
}

/// True iff the oscillator levels `(m, +1)` and `(n, -1)` cross at `alpha`,
/// i.e. exactly at the integer coupling `alpha = m - n`.
pub fn ho_crossing(m: u32, n: u32, alpha: f64) -> bool {
    alpha == f64::from(m) - f64::from(n)
}
