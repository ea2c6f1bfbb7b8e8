//! Gauss–Chebyshev quadrature on `(−c₁, c₁) × (−c₂, c₂)` for integrands
//! carrying the inverse-square-root edge weight.
//!
//! With `x = c·sin θ` the weight `dx / √(c² − x²)` becomes `dθ`, so
//! `∫∫ g(x, y) / (√(c₁² − x²)·√(c₂² − y²)) dx dy ≈ Σ (π/Nₓ)(π/N_y)·g(xⱼ, y_k)`
//! at `θⱼ = −π/2 + (j + ½)·π/N`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::AsymptoticsError;
use crate::coin::CoinParameters;
use crate::math::{cos, ln, sin};
use crate::par;

pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureGrid {
    pub nx: usize,
    pub ny: usize,
    /// Half-width in x, `|a|²` for a walk.
    pub c1: f64,
    /// Half-width in y, `|d|²` for a walk.
    pub c2: f64,
}

impl QuadratureGrid {
    pub fn new(nx: usize, ny: usize, c1: f64, c2: f64) -> Result<Self, AsymptoticsError> {
        let bad_width = |c: f64| !(c > 0.0 && c <= 1.0);
        if nx < MIN_NODES || ny < MIN_NODES || bad_width(c1) || bad_width(c2) {
            return Err(AsymptoticsError::BadGrid { nx, ny, c1, c2 });
        }
        Ok(QuadratureGrid { nx, ny, c1, c2 })
    }

    /// `N × N` nodes on the coin's domain `|x| < |a|²`, `|y| < |d|²`.
    pub fn for_coin(coin: &CoinParameters, n: usize) -> Result<Self, AsymptoticsError> {
        Self::new(n, n, coin.a.norm_sqr(), coin.d.norm_sqr())
    }

    pub fn doubled(&self) -> Self {
        QuadratureGrid {
            nx: 2 * self.nx,
            ny: 2 * self.ny,
            ..*self
        }
    }

    /// Angles `θⱼ ∈ (−π/2, π/2)` of the x nodes.
    pub fn angles_x(&self) -> Vec<f64> {
        angles(self.nx)
    }

    pub fn angles_y(&self) -> Vec<f64> {
        angles(self.ny)
    }

    pub fn nodes_x(&self) -> Vec<f64> {
        self.angles_x().into_iter().map(|t| self.c1 * sin(t)).collect()
    }

    pub fn nodes_y(&self) -> Vec<f64> {
        self.angles_y().into_iter().map(|t| self.c2 * sin(t)).collect()
    }

    /// Product weight `(π/Nₓ)(π/N_y)`.
    pub fn weight(&self) -> f64 {
        (PI / self.nx as f64) * (PI / self.ny as f64)
    }
}

fn angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| -PI / 2.0 + (j as f64 + 0.5) * PI / n as f64)
        .collect()
}

/// `∫∫ g / (√(c₁² − x²)·√(c₂² − y²))` over the grid's rectangle.
pub fn chebyshev_quadrature2d<F>(g: F, grid: &QuadratureGrid) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    chebyshev_quadrature2d_many(|x, y| [g(x, y)], grid)[0]
}

/// Component-wise version of [`chebyshev_quadrature2d`] for integrands that
/// share expensive work between components.
pub fn chebyshev_quadrature2d_many<F, const M: usize>(g: F, grid: &QuadratureGrid) -> [f64; M]
where
    F: Fn(f64, f64) -> [f64; M] + Sync + Send,
{
    let xs = grid.nodes_x();
    let ys = grid.nodes_y();
    let rows = par::map_rows(xs.len(), |j| {
        let mut acc = [0.0; M];
        for &y in &ys {
            let v = g(xs[j], y);
            for m in 0..M {
                acc[m] += v[m];
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
    let w = grid.weight();
    total.map(|t| t * w)
}

/// Product-integration weights for `∫_{−π/2}^{π/2} u(θ)·ln(c·cos θ) dθ` at the
/// Chebyshev angles of an `n`-point rule.
///
/// Uses `ln cos θ = −ln 2 − Σ_{k≥1} cos(2k·t)/k` with `t = θ + π/2`, truncated
/// to the modes the nodes resolve; exact for trigonometric `u` of degree
/// below `n`.
pub fn log_weights(n: usize, c: f64) -> Vec<f64> {
    let h = PI / n as f64;
    (0..n)
        .map(|j| {
            let t = (j as f64 + 0.5) * h;
            let mut s = 0.0;
            let mut k = 1;
            while 2 * k < n {
                s += cos(2.0 * k as f64 * t) / k as f64;
                k += 1;
            }
            h * (ln(c) - core::f64::consts::LN_2 - s)
        })
        .collect()
}
