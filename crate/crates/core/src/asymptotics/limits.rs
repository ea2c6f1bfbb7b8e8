//! Limiting overlaps `‖Ψ_∞ⁱ‖²`, the limiting coin density and its
//! entanglement.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::extrapolate::empirical_limit;
use super::quadrature::{chebyshev_quadrature2d_many, QuadratureGrid};
use super::weights::{spectral_weight, weight_all, weight_coefficients, Transcription, WeightCoefficients};
use super::AsymptoticsError;
use crate::coin::{Chirality, CoinParameters};
use crate::entropy::{entropy_record, kronecker_factors, von_neumann_entropy, CoinDensity, SpectralPair};
use crate::evolution::{InitialState, MemoryCap, Walk};
use crate::linalg::mat4_zero;
use crate::math::plog2p;
use crate::C64;

/// Rearrangement residual above which the limiting density is not treated as
/// a Kronecker product.
pub const NOT_FACTORABLE_TOL: f64 = 1e-6;

fn check_grid(w: &WeightCoefficients, grid: &QuadratureGrid) -> Result<(), AsymptoticsError> {
    let (c1, c2) = w.domain();
    if (grid.c1 - c1).abs() > 1e-12 || (grid.c2 - c2).abs() > 1e-12 {
        return Err(AsymptoticsError::GridMismatch {
            grid: (grid.c1, grid.c2),
            domain: (c1, c2),
        });
    }
    Ok(())
}

/// `(1/4π²)·∫∫ hⁱ / kernel` for all four chiralities. Non-finite weights
/// propagate as NaN.
pub fn limit_overlaps_with(
    w: &WeightCoefficients,
    grid: &QuadratureGrid,
    transcription: &Transcription,
) -> Result<[f64; 4], AsymptoticsError> {
    check_grid(w, grid)?;
    let raw = chebyshev_quadrature2d_many(
        |x, y| weight_all(x, y, w, transcription).unwrap_or([f64::NAN; 4]),
        grid,
    );
    Ok(raw.map(|v| v / (4.0 * PI * PI)))
}

pub fn limit_overlaps(
    coin: &CoinParameters,
    phi: &InitialState,
    grid: &QuadratureGrid,
    transcription: &Transcription,
) -> Result<[f64; 4], AsymptoticsError> {
    let w = weight_coefficients(coin, phi)?;
    limit_overlaps_with(&w, grid, transcription)
}

pub fn limit_overlap_diagonal(
    direction: Chirality,
    coin: &CoinParameters,
    phi: &InitialState,
    grid: &QuadratureGrid,
    transcription: &Transcription,
) -> Result<f64, AsymptoticsError> {
    Ok(limit_overlaps(coin, phi, grid, transcription)?[direction.index()])
}

/// Full limiting coin density from the spectral weights, including the cross
/// overlaps `⟨Ψ_∞ⁱ, Ψ_∞ʲ⟩`.
pub fn limit_density_with(
    w: &WeightCoefficients,
    grid: &QuadratureGrid,
) -> Result<CoinDensity, AsymptoticsError> {
    check_grid(w, grid)?;
    let flat: [f64; 32] = chebyshev_quadrature2d_many(
        |x, y| {
            let m = spectral_weight(x, y, w);
            core::array::from_fn(|k| {
                let z = m[(k / 2) / 4][(k / 2) % 4];
                if k % 2 == 0 {
                    z.re
                } else {
                    z.im
                }
            })
        },
        grid,
    );
    let mut m = mat4_zero();
    let scale = 1.0 / (4.0 * PI * PI);
    for i in 0..4 {
        for j in 0..4 {
            let k = 2 * (4 * i + j);
            m[i][j] = C64::new(flat[k], flat[k + 1]) * scale;
        }
    }
    // exact symmetrization; the quadrature already is Hermitian to rounding
    for i in 0..4 {
        m[i][i] = C64::new(m[i][i].re, 0.0);
        for j in i + 1..4 {
            let z = (m[i][j] + m[j][i].conj()) * 0.5;
            m[i][j] = z;
            m[j][i] = z.conj();
        }
    }
    Ok(CoinDensity::from_matrix(m))
}

pub fn limit_density(
    coin: &CoinParameters,
    phi: &InitialState,
    grid: &QuadratureGrid,
) -> Result<CoinDensity, AsymptoticsError> {
    let w = weight_coefficients(coin, phi)?;
    limit_density_with(&w, grid)
}

/// `−Σ p log₂ p` over the four products of two factor spectra.
pub fn entanglement_from_pairs(left: &SpectralPair, right: &SpectralPair) -> f64 {
    let l = [left.r_plus, left.r_minus];
    let r = [right.r_plus, right.r_minus];
    let mut s = 0.0;
    for a in l {
        for b in r {
            s -= plog2p(a * b);
        }
    }
    s
}

/// Equal factors: `−{r₊² log₂ r₊² + 2·r₊r₋ log₂ r₊r₋ + r₋² log₂ r₋²}`.
pub fn entanglement_from_pair(pair: &SpectralPair) -> f64 {
    entanglement_from_pairs(pair, pair)
}

/// Entanglement of a limiting density through its Kronecker factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactoredLimit {
    pub left: SpectralPair,
    pub right: SpectralPair,
    pub residual: f64,
    pub entropy: f64,
}

pub fn factored_entanglement(density: &CoinDensity) -> Result<FactoredLimit, AsymptoticsError> {
    let f = kronecker_factors(density, f64::INFINITY).ok_or(AsymptoticsError::NotFactorable {
        residual: f64::INFINITY,
    })?;
    if !(f.residual <= NOT_FACTORABLE_TOL) {
        return Err(AsymptoticsError::NotFactorable { residual: f.residual });
    }
    let left = f.left_pair()?;
    let right = f.right_pair()?;
    Ok(FactoredLimit {
        left,
        right,
        residual: f.residual,
        entropy: entanglement_from_pairs(&left, &right),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitMethod {
    /// Factor the quadrature limit density.
    Quadrature { grid: QuadratureGrid },
    /// Trailing-window average of the simulated `Sₙᶜ`.
    Empirical { n_max: usize, window: f64, cap: MemoryCap },
}

/// Limiting entanglement entropy in bits.
pub fn limit_entanglement(
    coin: &CoinParameters,
    phi: &InitialState,
    method: &LimitMethod,
) -> Result<f64, AsymptoticsError> {
    match method {
        LimitMethod::Quadrature { grid } => {
            let density = limit_density(coin, phi, grid)?;
            Ok(factored_entanglement(&density)?.entropy)
        }
        LimitMethod::Empirical { n_max, window, cap } => {
            let mut walk = Walk::new(coin, phi).with_memory_cap(*cap);
            let mut series = Vec::with_capacity(*n_max);
            for _ in 0..*n_max {
                walk.advance()?;
                series.push(entropy_record(walk.field())?.s_c);
            }
            Ok(empirical_limit(&series, *window)?.estimate)
        }
    }
}

/// Entropy of a density's own spectrum, for comparison with the factored
/// value.
pub fn density_entanglement(density: &CoinDensity) -> Result<f64, AsymptoticsError> {
    Ok(von_neumann_entropy(&density.eigenvalues()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_PI_3;

    #[test]
    fn pair_formula_limits() {
        let pure = SpectralPair {
            r_plus: 1.0,
            r_minus: 0.0,
        };
        assert_eq!(entanglement_from_pair(&pure), 0.0);
        let mixed = SpectralPair {
            r_plus: 0.5,
            r_minus: 0.5,
        };
        assert_abs_diff_eq!(entanglement_from_pair(&mixed), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn overlaps_sum_to_one() {
        let coin = CoinParameters::from_angle(FRAC_PI_3).unwrap();
        let grid = QuadratureGrid::for_coin(&coin, 32).unwrap();
        for ch in Chirality::ALL {
            let v = limit_overlaps(&coin, &InitialState::basis(ch), &grid, &Transcription::Spectral)
                .unwrap();
            assert_abs_diff_eq!(v.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
            assert!(v.iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
    }

    #[test]
    fn density_matches_overlaps() {
        let coin = CoinParameters::hadamard();
        let phi = InitialState::basis(Chirality::L);
        let grid = QuadratureGrid::for_coin(&coin, 24).unwrap();
        let d = limit_density(&coin, &phi, &grid).unwrap();
        let o = limit_overlaps(&coin, &phi, &grid, &Transcription::Spectral).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(d.diagonal()[i], o[i], epsilon = 1e-13);
        }
        assert_abs_diff_eq!(d.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_must_match_coin_domain() {
        let coin = CoinParameters::from_angle(FRAC_PI_3).unwrap();
        let grid = QuadratureGrid::new(16, 16, 0.5, 0.5).unwrap();
        let e = limit_overlaps(&coin, &InitialState::basis(Chirality::L), &grid, &Transcription::Spectral);
        assert!(matches!(e, Err(AsymptoticsError::GridMismatch { .. })));
    }

    #[test]
    fn degenerate_coin_is_rejected() {
        let coin = CoinParameters::identity();
        let grid = QuadratureGrid::new(16, 16, 1.0, 1.0).unwrap();
        let e = limit_entanglement(
            &coin,
            &InitialState::basis(Chirality::L),
            &LimitMethod::Quadrature { grid },
        );
        assert!(matches!(e, Err(AsymptoticsError::DegenerateCoin { .. })));
    }

    #[test]
    fn factored_entanglement_of_a_product_density() {
        use crate::linalg::kron2;
        let a = [[C64::new(0.7, 0.0), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), C64::new(0.3, 0.0)]];
        let d = CoinDensity::from_matrix(kron2(&a, &a));
        let f = factored_entanglement(&d).unwrap();
        let direct = density_entanglement(&d).unwrap();
        assert_abs_diff_eq!(f.entropy, direct, epsilon = 1e-12);
        assert!(f.residual < 1e-14);
    }
}
