//! Dense square complex matrices at desk scale.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// A dense square complex matrix with finite entries.
///
/// Houses Hamiltonians, metrics and the parity operator. Construction
/// rejects NaN/Inf entries; everything else is a thin wrapper over
/// [`nalgebra::DMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    inner: CMatrix,
}

impl SquareMatrix {
    pub fn new(inner: CMatrix) -> Result<Self> {
        if inner.nrows() != inner.ncols() || inner.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected a nonempty square matrix, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { inner })
    }

    /// Row-major complex entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(CMatrix::from_row_slice(dim, dim, entries))
    }

    /// Row-major real entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_rows(dim, &complex)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_inner(self) -> CMatrix {
        self.inner
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    /// Max-entry norm.
    pub fn norm_max(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-entry distance to the adjoint.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = &self.inner - self.inner.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.norm_max().max(1.0)
    }

    /// True when every entry has negligible imaginary part.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.norm_max().max(1.0);
        self.inner.iter().all(|z| z.im.abs() <= tol * scale)
    }
}

impl std::ops::Deref for SquareMatrix {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.inner
    }
}

impl std::fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.inner.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(
            SquareMatrix::new(m),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(SquareMatrix::new(m), Err(Error::NonFinite)));
    }

    #[test]
    fn hermiticity_defect_of_hermitian_is_zero() {
        let m = SquareMatrix::from_rows(
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(m.hermiticity_defect(), 0.0);
        assert!(m.is_hermitian(1e-14));
    }
}
