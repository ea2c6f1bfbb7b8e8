//! Second-order correction integrals `∫∫ F·log₂ F dx dy` of the Shannon
//! entropy, where `F = fᵂ/ρᵂ` (or the total `f`) and
//! `fᵂ = hᵂ / (√(|a|⁴ − x²)·√(|d|⁴ − y²))` without the `1/4π²` prefactor.
//!
//! After `x = c₁ sin θ`, `y = c₂ sin ψ` the integral is
//! `∫∫ u·log₂ u dθ dψ − ∫∫ u·log₂(c₁ cos θ) − ∫∫ u·log₂(c₂ cos ψ)` with
//! `u = F·√(c₁² − x²)·√(c₂² − y²)`; the logarithmic edge terms use
//! [`log_weights`](super::quadrature::log_weights).

use core::f64::consts::{LN_2, PI};

use super::quadrature::{log_weights, QuadratureGrid};
use super::weights::{weight_all, Transcription, WeightCoefficients};
use super::AsymptoticsError;
use crate::coin::Chirality;
use crate::math::plog2p;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionTarget {
    Chirality(Chirality),
    /// `f = Σ_W fᵂ`, not normalized.
    Total,
}

/// Correction integrals for every target.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Corrections {
    pub L: Option<f64>,
    pub R: Option<f64>,
    pub D: Option<f64>,
    pub U: Option<f64>,
    pub total: f64,
}

impl Corrections {
    pub fn get(&self, target: CorrectionTarget) -> Option<f64> {
        match target {
            CorrectionTarget::Chirality(Chirality::L) => self.L,
            CorrectionTarget::Chirality(Chirality::R) => self.R,
            CorrectionTarget::Chirality(Chirality::D) => self.D,
            CorrectionTarget::Chirality(Chirality::U) => self.U,
            CorrectionTarget::Total => Some(self.total),
        }
    }
}

/// `∫∫ F log₂ F dx dy` for `F(x, y) = u(x, y) / (√(c₁² − x²)·√(c₂² − y²))`.
pub fn entropy_integral<F>(u: F, grid: &QuadratureGrid) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    entropy_integrals(|x, y| [u(x, y)], grid)[0]
}

/// Several [`entropy_integral`]s sharing one pass over the nodes.
pub fn entropy_integrals<F, const M: usize>(u: F, grid: &QuadratureGrid) -> [f64; M]
where
    F: Fn(f64, f64) -> [f64; M] + Sync + Send,
{
    let xs = grid.nodes_x();
    let ys = grid.nodes_y();
    let lx = log_weights(grid.nx, grid.c1);
    let ly = log_weights(grid.ny, grid.c2);
    let hx = PI / grid.nx as f64;
    let hy = PI / grid.ny as f64;
    let rows = par::map_rows(xs.len(), |j| {
        let mut acc = [0.0; M];
        for (k, &y) in ys.iter().enumerate() {
            let v = u(xs[j], y);
            for m in 0..M {
                acc[m] += hx * hy * plog2p(v[m]) - v[m] * (lx[j] * hy + hx * ly[k]) / LN_2;
            }
        }
        acc
    });
    let mut total = [0.0; M];
    for row in rows {
        for m in 0..M {
            total[m] += row[m];
        }
    }
    total
}

/// All five correction integrals; `rho[W]` is the limiting mass of `W`, and
/// targets whose mass is not positive are skipped.
pub fn shannon_corrections(
    w: &WeightCoefficients,
    grid: &QuadratureGrid,
    transcription: &Transcription,
    rho: [f64; 4],
) -> Result<Corrections, AsymptoticsError> {
    let inv = rho.map(|r| if r > 0.0 { 1.0 / r } else { 0.0 });
    let v = entropy_integrals(
        |x, y| {
            let h = weight_all(x, y, w, transcription).unwrap_or([f64::NAN; 4]);
            [h[0] * inv[0], h[1] * inv[1], h[2] * inv[2], h[3] * inv[3], h[0] + h[1] + h[2] + h[3]]
        },
        grid,
    );
    let pick = |i: usize| (rho[i] > 0.0).then_some(v[i]);
    Ok(Corrections {
        L: pick(0),
        R: pick(1),
        D: pick(2),
        U: pick(3),
        total: v[4],
    })
}

/// One correction integral, with `ρᵂ` taken from the same transcription.
pub fn shannon_correction_integral(
    target: CorrectionTarget,
    coin: &crate::coin::CoinParameters,
    phi: &crate::evolution::InitialState,
    grid: &QuadratureGrid,
    transcription: &Transcription,
) -> Result<f64, AsymptoticsError> {
    let w = super::weights::weight_coefficients(coin, phi)?;
    let rho = super::limits::limit_overlaps_with(&w, grid, transcription)?;
    let c = shannon_corrections(&w, grid, transcription, rho)?;
    c.get(target).ok_or(AsymptoticsError::EmptyComponent {
        chirality: match target {
            CorrectionTarget::Chirality(ch) => ch,
            CorrectionTarget::Total => Chirality::L,
        },
    })
}
