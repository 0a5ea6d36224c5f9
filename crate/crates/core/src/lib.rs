//! Numerical toolkit for an exactly solvable 4x4 crypto-Hermitian
//! (PT-symmetric) matrix model: closed-form spectra, the complete family of
//! Hilbert-space metrics, exceptional-point detection, parameter-domain
//! classification, and the unfolding of the B = 0 level crossing.
//!
//! Everything is a pure function of its inputs; all types are safe to share
//! across threads.

pub mod domains;
pub mod error;
pub mod matrix;
pub mod metric;
pub mod model;
pub mod spectral;
pub mod unfolding;

pub use domains::{DomainLabel, NamedRegion, ScanGrid, ScanTolerances, Sweep, SweepTable};
pub use error::{Error, Result};
pub use matrix::{C64, CMatrix, SquareMatrix};
pub use metric::{MetricFamily, Parametrization, SignatureReport};
pub use model::{HOLevel, MODEL_DIM, ModelParams};
pub use spectral::{Cluster, Eigensystem, EpKind, EpLocation, Reality, Spectrum};
pub use unfolding::UnfoldingReport;
