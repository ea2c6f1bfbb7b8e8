//! Finite-time entropies of a walk state.
//!
//! The reduced coin density is the 4×4 Gram matrix of the four component
//! fields, `ρᶜ[i][j] = Σ_{x,y} Ψⁱ(x,y)·conj(Ψʲ(x,y))`. Its spectrum gives the
//! entanglement entropy directly; the tensor-product route (`r±` pairs of a
//! 2×2 factor) is only a cross-check and is reported through
//! [`kronecker_factor_check`].

use alloc::vec;
use alloc::vec::Vec;

use crate::coin::Chirality;
use crate::evolution::{AmplitudeField, ProbabilityGrid};
use crate::linalg::{
    hermitian_eigen, hermiticity_residual, kron2, mat4_max_diff, mat4_to_vec, mat4_zero, svd,
    Mat2, Mat4,
};
use crate::math::{log2, plog2p, sqrt};
use crate::par;
use crate::C64;

/// Largest time for which the explicit position density is built.
pub const POSITION_DENSITY_MAX_N: usize = 8;
/// Second singular value below which a density counts as a Kronecker product.
pub const FACTOR_TOL: f64 = 1e-8;
/// Component mass below which a conditional entropy is undefined.
pub const EMPTY_COMPONENT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("determinant {delta} outside [0, 1/4]")]
    OutOfRange { delta: f64 },
    #[error("not a probability spectrum: min {min:e}, sum {sum}")]
    BadSpectrum { min: f64, sum: f64 },
    #[error("explicit position density limited to n <= {max}, requested {n}")]
    TooLarge { n: usize, max: usize },
    #[error("chirality {} carries no mass ({mass:e})", .chirality.label())]
    EmptyComponent { chirality: Chirality, mass: f64 },
}

/// Reduced coin density `ρᶜ = Tr_position |Ψ⟩⟨Ψ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDensity {
    pub m: Mat4,
}

impl CoinDensity {
    pub fn from_matrix(m: Mat4) -> Self {
        CoinDensity { m }
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.m[i][i].re).sum()
    }

    /// `‖Ψⁱ‖²` for each chirality.
    pub fn diagonal(&self) -> [f64; 4] {
        core::array::from_fn(|i| self.m[i][i].re)
    }

    /// The six upper off-diagonal entries in the order
    /// `LR, LD, LU, RD, RU, DU`.
    pub fn off_diagonal(&self) -> [C64; 6] {
        let mut out = [C64::new(0.0, 0.0); 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                out[k] = self.m[i][j];
                k += 1;
            }
        }
        out
    }

    /// Assembles a Hermitian density from its diagonal and upper entries.
    pub fn from_parts(diagonal: [f64; 4], upper: [C64; 6]) -> Self {
        let mut m = mat4_zero();
        let mut k = 0;
        for i in 0..4 {
            m[i][i] = C64::new(diagonal[i], 0.0);
            for j in i + 1..4 {
                m[i][j] = upper[k];
                m[j][i] = upper[k].conj();
                k += 1;
            }
        }
        CoinDensity { m }
    }

    pub fn eigenvalues(&self) -> Result<[f64; 4], EntropyError> {
        hermitian_eigenvalues(&self.m)
    }
}

// Upper triangle (10 entries, row-major over i <= j) accumulated over a row.
fn gram_row(row: &[[C64; 4]]) -> [C64; 10] {
    let mut acc = [C64::new(0.0, 0.0); 10];
    for s in row {
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                acc[k] += s[i] * s[j].conj();
                k += 1;
            }
        }
    }
    acc
}

fn assemble_gram(upper: &[C64; 10]) -> CoinDensity {
    let mut m = mat4_zero();
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            if i == j {
                m[i][i] = C64::new(upper[k].re, 0.0);
            } else {
                m[i][j] = upper[k];
                m[j][i] = upper[k].conj();
            }
            k += 1;
        }
    }
    CoinDensity { m }
}

pub fn coin_density(field: &AmplitudeField) -> CoinDensity {
    let side = field.side();
    let sites = field.sites();
    let rows = par::map_rows(side, |r| gram_row(&sites[r * side..(r + 1) * side]));
    let mut total = [C64::new(0.0, 0.0); 10];
    for row in rows {
        for k in 0..10 {
            total[k] += row[k];
        }
    }
    assemble_gram(&total)
}

/// Spectrum of a 4×4 Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &Mat4) -> Result<[f64; 4], EntropyError> {
    let flat = mat4_to_vec(m);
    let residual = hermiticity_residual(4, &flat);
    if residual > 1e-10 {
        return Err(EntropyError::NotHermitian { residual });
    }
    let eig = hermitian_eigen(4, &flat);
    Ok([eig.values[0], eig.values[1], eig.values[2], eig.values[3]])
}

/// Eigenvalues `r± = (1 ± √(1 − 4Δ))/2` of a trace-one 2×2 density with
/// determinant `Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralPair {
    pub r_plus: f64,
    pub r_minus: f64,
}

impl SpectralPair {
    /// `{r₊², r₋², r₊r₋, r₊r₋}`, the spectrum of the pair's tensor square.
    pub fn products(&self) -> [f64; 4] {
        let (p, m) = (self.r_plus, self.r_minus);
        [p * p, m * m, p * m, p * m]
    }
}

pub fn spectral_pair(delta_n: f64) -> Result<SpectralPair, EntropyError> {
    if !(-1e-12..=0.25 + 1e-9).contains(&delta_n) {
        return Err(EntropyError::OutOfRange { delta: delta_n });
    }
    let delta = delta_n.clamp(0.0, 0.25);
    let disc = sqrt(1.0 - 4.0 * delta);
    Ok(SpectralPair {
        r_plus: (1.0 + disc) / 2.0,
        r_minus: (1.0 - disc) / 2.0,
    })
}

/// [`spectral_pair`] of a 2×2 density after trace normalization.
///
/// `1 − 4Δ` is evaluated as `(a − d)² + 4·b·c`, which does not cancel when
/// `Δ` is close to 1/4.
pub fn spectral_pair_of(m: &Mat2) -> Result<SpectralPair, EntropyError> {
    let t = (m[0][0] + m[1][1]).re;
    let gap = (m[0][0] - m[1][1]).re / t;
    let disc_sq = gap * gap + 4.0 * (m[0][1] * m[1][0]).re / (t * t);
    let delta = (1.0 - disc_sq) / 4.0;
    if !(-1e-12..=0.25 + 1e-9).contains(&delta) {
        return Err(EntropyError::OutOfRange { delta });
    }
    let disc = sqrt(disc_sq.clamp(0.0, 1.0));
    Ok(SpectralPair {
        r_plus: (1.0 + disc) / 2.0,
        r_minus: (1.0 - disc) / 2.0,
    })
}

/// Trace-one 2×2 factors with `ρᶜ ≈ left ⊗ right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KroneckerFactors {
    pub left: Mat2,
    pub right: Mat2,
    /// `‖ρᶜ − left ⊗ right‖_max`.
    pub residual: f64,
    pub singular_values: [f64; 4],
}

impl KroneckerFactors {
    pub fn left_pair(&self) -> Result<SpectralPair, EntropyError> {
        spectral_pair_of(&self.left)
    }

    pub fn right_pair(&self) -> Result<SpectralPair, EntropyError> {
        spectral_pair_of(&self.right)
    }

    /// The four products `aᵢ·bⱼ` of the factor spectra, descending. For equal
    /// factors this is `{r₊², r₊r₋, r₊r₋, r₋²}`.
    pub fn product_spectrum(&self) -> Result<[f64; 4], EntropyError> {
        let a = self.left_pair()?;
        let b = self.right_pair()?;
        let mut out = [
            a.r_plus * b.r_plus,
            a.r_plus * b.r_minus,
            a.r_minus * b.r_plus,
            a.r_minus * b.r_minus,
        ];
        out.sort_by(|x, y| y.total_cmp(x));
        Ok(out)
    }
}

pub fn det2(m: &Mat2) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

// R[(i₁ j₁), (i₂ j₂)] = ρ[(i₁ i₂), (j₁ j₂)]; ρ is a Kronecker product exactly
// when R has rank one.
fn rearrange(m: &Mat4) -> Vec<C64> {
    let mut r = vec![C64::new(0.0, 0.0); 16];
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    r[(2 * i1 + j1) * 4 + (2 * i2 + j2)] = m[2 * i1 + i2][2 * j1 + j2];
                }
            }
        }
    }
    r
}

/// Singular values of the Kronecker rearrangement, descending.
pub fn rearrangement_singular_values(m: &Mat4) -> [f64; 4] {
    let s = svd(4, 4, &rearrange(m));
    [s.singular_values[0], s.singular_values[1], s.singular_values[2], s.singular_values[3]]
}

/// Nearest Kronecker factorization with an explicit tolerance on the second
/// singular value of the rearrangement.
pub fn kronecker_factors(density: &CoinDensity, tol: f64) -> Option<KroneckerFactors> {
    let s = svd(4, 4, &rearrange(&density.m));
    let sv = [s.singular_values[0], s.singular_values[1], s.singular_values[2], s.singular_values[3]];
    if !(sv[1] < tol) || sv[0] == 0.0 {
        return None;
    }
    let mut left: Mat2 = [[C64::new(0.0, 0.0); 2]; 2];
    let mut right: Mat2 = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            left[i][j] = s.u[(2 * i + j) * 4] * sv[0];
            right[i][j] = s.v[(2 * i + j) * 4].conj();
        }
    }
    // move the scale so that tr(left) = 1; tr(right) then equals tr(ρ)
    let ta = left[0][0] + left[1][1];
    for i in 0..2 {
        for j in 0..2 {
            left[i][j] /= ta;
            right[i][j] *= ta;
        }
    }
    let residual = mat4_max_diff(&density.m, &kron2(&left, &right));
    Some(KroneckerFactors {
        left,
        right,
        residual,
        singular_values: sv,
    })
}

/// `Some(factors)` when `ρᶜ` is numerically a Kronecker product of two 2×2
/// matrices (second rearrangement singular value below [`FACTOR_TOL`]).
pub fn kronecker_factor_check(density: &CoinDensity) -> Option<KroneckerFactors> {
    kronecker_factors(density, FACTOR_TOL)
}

/// `−Σ λ log₂ λ` over a probability spectrum.
pub fn von_neumann_entropy(eigs: &[f64]) -> Result<f64, EntropyError> {
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = eigs.iter().sum();
    if min < -1e-9 || !((sum - 1.0).abs() < 1e-8) {
        return Err(EntropyError::BadSpectrum { min, sum });
    }
    Ok(-eigs.iter().map(|&l| plog2p(l.max(0.0))).sum::<f64>())
}

/// Entropy of the explicit reduced position density `ρᵖ = Tr_coin |Ψ⟩⟨Ψ|`.
///
/// Only sites carrying amplitude enter the matrix; the dropped rows and
/// columns are identically zero and contribute zero eigenvalues.
pub fn position_entropy_small(field: &AmplitudeField) -> Result<f64, EntropyError> {
    let n = field.time();
    if n > POSITION_DENSITY_MAX_N {
        return Err(EntropyError::TooLarge {
            n,
            max: POSITION_DENSITY_MAX_N,
        });
    }
    let support: Vec<[C64; 4]> = field
        .sites()
        .iter()
        .filter(|s| s.iter().any(|z| z.norm_sqr() > 0.0))
        .copied()
        .collect();
    let dim = support.len();
    let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
    for (i, si) in support.iter().enumerate() {
        for (j, sj) in support.iter().enumerate() {
            rho[i * dim + j] = (0..4).map(|k| si[k] * sj[k].conj()).sum();
        }
    }
    let eig = hermitian_eigen(dim, &rho);
    Ok(-eig.values.iter().map(|&r| plog2p(r.max(0.0))).sum::<f64>())
}

/// `−Σ p log₂ p` over the sites.
pub fn shannon_entropy(grid: &ProbabilityGrid) -> f64 {
    -grid
        .rows()
        .map(|row| row.iter().map(|&p| plog2p(p)).sum::<f64>())
        .sum::<f64>()
}

/// Shannon entropy of `|Ψᵂ(x,y)|² / ‖Ψᵂ‖²`.
pub fn conditional_entropy(field: &AmplitudeField, w: Chirality) -> Result<f64, EntropyError> {
    let j = w.index();
    let mass = field.component_norms()[j];
    if mass <= EMPTY_COMPONENT_TOL {
        return Err(EntropyError::EmptyComponent { chirality: w, mass });
    }
    let side = field.side();
    let sites = field.sites();
    let rows = par::map_rows(side, |r| {
        sites[r * side..(r + 1) * side]
            .iter()
            .map(|s| plog2p(s[j].norm_sqr() / mass))
            .sum::<f64>()
    });
    Ok((-rows.into_iter().sum::<f64>()).max(0.0))
}

/// Everything tracked per time step.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRecord {
    pub n: usize,
    /// Entanglement entropy of `ρᶜ` (bits).
    pub s_c: f64,
    pub s_shannon: f64,
    /// Conditional entropies `Sᵂ`; `None` for an empty component.
    pub s_w: [Option<f64>; 4],
    pub density: CoinDensity,
    /// Spectrum of `ρᶜ`, descending.
    pub eigs: [f64; 4],
    /// `‖Ψʲ‖²`.
    pub norms: [f64; 4],
    /// Number of sites with positive probability.
    pub support: usize,
}

#[derive(Clone, Copy)]
struct RowStats {
    gram: [C64; 10],
    site_plogp: f64,
    comp_plogp: [f64; 4],
    support: usize,
}

/// Fused single-pass computation of every per-step quantity.
///
/// Conditional entropies use `Sᵂ = log₂‖Ψᵂ‖² − Σ|Ψᵂ|² log₂|Ψᵂ|² / ‖Ψᵂ‖²`,
/// which equals the direct definition in [`conditional_entropy`].
pub fn entropy_record(field: &AmplitudeField) -> Result<EntropyRecord, EntropyError> {
    let side = field.side();
    let sites = field.sites();
    let rows = par::map_rows(side, |r| {
        let row = &sites[r * side..(r + 1) * side];
        let mut stats = RowStats {
            gram: gram_row(row),
            site_plogp: 0.0,
            comp_plogp: [0.0; 4],
            support: 0,
        };
        for s in row {
            let q = s.map(|z| z.norm_sqr());
            let p = q[0] + q[1] + q[2] + q[3];
            if p > 0.0 {
                stats.support += 1;
            }
            stats.site_plogp += plog2p(p);
            for j in 0..4 {
                stats.comp_plogp[j] += plog2p(q[j]);
            }
        }
        stats
    });
    let mut gram = [C64::new(0.0, 0.0); 10];
    let mut site_plogp = 0.0;
    let mut comp_plogp = [0.0; 4];
    let mut support = 0;
    for row in rows {
        for k in 0..10 {
            gram[k] += row.gram[k];
        }
        site_plogp += row.site_plogp;
        for j in 0..4 {
            comp_plogp[j] += row.comp_plogp[j];
        }
        support += row.support;
    }
    let density = assemble_gram(&gram);
    let norms = density.diagonal();
    let eigs = density.eigenvalues()?;
    let s_c = von_neumann_entropy(&eigs)?;
    let s_w = core::array::from_fn(|j| {
        let mass = norms[j];
        (mass > EMPTY_COMPONENT_TOL).then(|| (log2(mass) - comp_plogp[j] / mass).max(0.0))
    });
    Ok(EntropyRecord {
        n: field.time(),
        s_c,
        s_shannon: -site_plogp,
        s_w,
        density,
        eigs,
        norms,
        support,
    })
}
