//! Long-time limits: quadrature of the limiting overlaps, the limiting
//! entanglement, Shannon scaling and its correction integrals, and the
//! simulation-side estimates they are checked against.

pub mod calibrate;
pub mod extrapolate;
pub mod limits;
pub mod quadrature;
pub mod report;
pub mod shannon;
pub mod weights;

pub use calibrate::{calibrate, Calibration, CalibrationCase, CandidateScore};
pub use extrapolate::{empirical_limit, scaling_fit, EmpiricalLimit, ScalingFit};
pub use limits::{
    density_entanglement, entanglement_from_pair, entanglement_from_pairs, factored_entanglement,
    limit_density, limit_entanglement, limit_overlap_diagonal, limit_overlaps, LimitMethod,
};
pub use quadrature::{chebyshev_quadrature2d, QuadratureGrid};
pub use report::{build_limit_report, walk_series, Discrepancy, LimitConfig, LimitReport};
pub use shannon::{shannon_correction_integral, CorrectionTarget, Corrections};
pub use weights::{weight_coefficients, weight_h, Transcription, WeightCoefficients};

use crate::coin::Chirality;
use crate::entropy::EntropyError;
use crate::evolution::EvolutionError;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum AsymptoticsError {
    #[error("limit theorems need abcd != 0, got |abcd| = {abcd:e}")]
    DegenerateCoin { abcd: f64 },
    #[error("point ({x}, {y}) outside the open integration domain")]
    OutsideDomain { x: f64, y: f64 },
    #[error("invalid quadrature grid {nx}x{ny} with half-widths ({c1}, {c2})")]
    BadGrid { nx: usize, ny: usize, c1: f64, c2: f64 },
    #[error("grid half-widths {grid:?} do not match the coin's domain {domain:?}")]
    GridMismatch { grid: (f64, f64), domain: (f64, f64) },
    #[error("series of length {len} is shorter than {min}")]
    TooShort { len: usize, min: usize },
    #[error("window fraction {window} outside (0, 1]")]
    BadWindow { window: f64 },
    #[error("scaling fit needs >= 6 points with n_min >= 16 (got {points} points, n_min {n_min})")]
    TooFewPoints { points: usize, n_min: f64 },
    #[error("limiting density is not a Kronecker product (residual {residual:e})")]
    NotFactorable { residual: f64 },
    #[error("chirality {} has no limiting mass", .chirality.label())]
    EmptyComponent { chirality: Chirality },
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}
