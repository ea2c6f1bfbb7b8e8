//! Small dense complex kernels: fixed 2×2 / 4×4 matrices, a cyclic Jacobi
//! eigensolver for Hermitian matrices, and a one-sided Jacobi SVD.
//!
//! Dynamic matrices are plain row-major slices of [`C64`]. Sizes here are tiny
//! (4×4 coin densities) or modest (position densities of a few hundred sites),
//! so the Jacobi methods are both fast enough and easy to audit through their
//! reconstruction residuals.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{hypot, sqrt};
use crate::C64;

pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[C64; 4]; 4];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Off-diagonal Frobenius tolerance for the Jacobi sweeps.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 50;

pub fn mat4_zero() -> Mat4 {
    [[ZERO; 4]; 4]
}

pub fn mat4_identity() -> Mat4 {
    let mut m = mat4_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = mat4_zero();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat4_add(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mat4_adjoint(a: &Mat4) -> Mat4 {
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn mat4_apply(a: &Mat4, v: &[C64; 4]) -> [C64; 4] {
    let mut out = [ZERO; 4];
    for i in 0..4 {
        out[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2] + a[i][3] * v[3];
    }
    out
}

/// Largest entrywise modulus of `a − b`.
pub fn mat4_max_diff(a: &Mat4, b: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

pub fn mat4_frobenius(a: &Mat4) -> f64 {
    sqrt(a.iter().flatten().map(|z| z.norm_sqr()).sum())
}

/// `‖A·A† − I‖_max`.
pub fn mat4_unitarity_residual(a: &Mat4) -> f64 {
    mat4_max_diff(&mat4_mul(a, &mat4_adjoint(a)), &mat4_identity())
}

/// Kronecker product with index `(2·i₁ + i₂, 2·j₁ + j₂)`.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = mat4_zero();
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    out[2 * i1 + i2][2 * j1 + j2] = a[i1][j1] * b[i2][j2];
                }
            }
        }
    }
    out
}

pub fn mat4_to_vec(a: &Mat4) -> Vec<C64> {
    a.iter().flatten().copied().collect()
}

pub fn mat4_from_slice(a: &[C64]) -> Mat4 {
    assert_eq!(a.len(), 16);
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[4 * i + j];
        }
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix. `vectors` is row-major `n×n`;
/// column `k` is the eigenvector for `values[k]`. Values are descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub n: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<C64>,
    pub sweeps: usize,
}

impl HermitianEigen {
    /// `‖A − V·Λ·V†‖_max` against the matrix that was decomposed.
    pub fn reconstruction_residual(&self, a: &[C64]) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.vectors[i * n + k] * self.values[k] * self.vectors[j * n + k].conj();
                }
                worst = worst.max((acc - a[i * n + j]).norm());
            }
        }
        worst
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.n).map(|i| self.vectors[i * self.n + k]).collect()
    }
}

/// Largest `|a_ij − conj(a_ji)|`.
pub fn hermiticity_residual(n: usize, a: &[C64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[i * n + j] - a[j * n + i].conj()).norm());
        }
    }
    worst
}

// One complex Jacobi rotation chosen to annihilate the (p, q) coupling of a
// Hermitian form with diagonal entries `app`, `aqq` and coupling `apq`.
// Returns (c, s, e) such that J has columns
//   col p = (c at p, −s·conj(e) at q),  col q = (s at p, c·conj(e) at q).
#[inline]
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> Option<(f64, f64, C64)> {
    let g = apq.norm();
    if g < 1e-300 {
        return None;
    }
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_finite() {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + hypot(theta, 1.0))
    } else {
        0.0
    };
    let c = 1.0 / hypot(t, 1.0);
    Some((c, t * c, apq / g))
}

/// Cyclic Jacobi eigensolver for an `n×n` Hermitian matrix (row-major).
///
/// Only the upper triangle's Hermitian part is trusted; callers that need the
/// input to be Hermitian check [`hermiticity_residual`] first.
pub fn hermitian_eigen(n: usize, a: &[C64]) -> HermitianEigen {
    assert_eq!(a.len(), n * n, "matrix must be n×n");
    let mut m = a.to_vec();
    // symmetrize so rounding asymmetry in the input cannot stall the sweeps
    for i in 0..n {
        m[i * n + i] = C64::new(m[i * n + i].re, 0.0);
        for j in i + 1..n {
            let upper = (m[i * n + j] + m[j * n + i].conj()) * 0.5;
            m[i * n + j] = upper;
            m[j * n + i] = upper.conj();
        }
    }
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }
    let scale = sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>()).max(1.0);

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += 2.0 * m[i * n + j].norm_sqr();
            }
        }
        if sqrt(off) <= JACOBI_TOL * scale {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let Some((c, s, e)) = jacobi_rotation(m[p * n + p].re, m[q * n + q].re, m[p * n + q])
                else {
                    continue;
                };
                let ec = e.conj();
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = akp * c - akq * (ec * s);
                    m[k * n + q] = akp * s + akq * (ec * c);
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = apk * c - aqk * (e * s);
                    m[q * n + k] = apk * s + aqk * (e * c);
                }
                m[p * n + q] = ZERO;
                m[q * n + p] = ZERO;
                m[p * n + p] = C64::new(m[p * n + p].re, 0.0);
                m[q * n + q] = C64::new(m[q * n + q].re, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * (ec * s);
                    v[k * n + q] = vkp * s + vkq * (ec * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[y * n + y].re.total_cmp(&m[x * n + x].re));
    let values = order.iter().map(|&k| m[k * n + k].re).collect();
    let mut vectors = vec![ZERO; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + dst] = v[i * n + src];
        }
    }
    HermitianEigen {
        n,
        values,
        vectors,
        sweeps,
    }
}

/// Thin SVD `A = U·Σ·V†` of an `rows×cols` matrix (row-major), `rows ≥ cols`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub rows: usize,
    pub cols: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `rows×cols`, row-major; column k is the k-th left singular vector.
    pub u: Vec<C64>,
    /// `cols×cols`, row-major; column k is the k-th right singular vector.
    pub v: Vec<C64>,
}

/// One-sided (Hestenes) Jacobi SVD. Small singular values come out with
/// absolute accuracy near `ε·‖A‖`, which the rank-one test relies on.
pub fn svd(rows: usize, cols: usize, a: &[C64]) -> Svd {
    assert_eq!(a.len(), rows * cols);
    assert!(rows >= cols, "one-sided Jacobi expects rows >= cols");
    let mut w = a.to_vec();
    let mut v = vec![ZERO; cols * cols];
    for i in 0..cols {
        v[i * cols + i] = ONE;
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..rows {
                    let wp = w[k * cols + p];
                    let wq = w[k * cols + q];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if gamma.norm() <= f64::EPSILON * sqrt(alpha * beta) {
                    continue;
                }
                let Some((c, s, e)) = jacobi_rotation(alpha, beta, gamma) else {
                    continue;
                };
                rotated = true;
                let ec = e.conj();
                for k in 0..rows {
                    let wp = w[k * cols + p];
                    let wq = w[k * cols + q];
                    w[k * cols + p] = wp * c - wq * (ec * s);
                    w[k * cols + q] = wp * s + wq * (ec * c);
                }
                for k in 0..cols {
                    let vp = v[k * cols + p];
                    let vq = v[k * cols + q];
                    v[k * cols + p] = vp * c - vq * (ec * s);
                    v[k * cols + q] = vp * s + vq * (ec * c);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..cols)
        .map(|j| sqrt((0..rows).map(|k| w[k * cols + j].norm_sqr()).sum()))
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let mut u = vec![ZERO; rows * cols];
    let mut vs = vec![ZERO; cols * cols];
    let mut singular_values = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        if sigma > 0.0 {
            for k in 0..rows {
                u[k * cols + dst] = w[k * cols + src] / sigma;
            }
        }
        for k in 0..cols {
            vs[k * cols + dst] = v[k * cols + src];
        }
    }
    Svd {
        rows,
        cols,
        singular_values,
        u,
        v: vs,
    }
}

/// Eigen-decomposition of a 4×4 unitary matrix.
///
/// The eigenvectors are taken from the Hermitian pencil
/// `(W + W†)/2 + κ·(W − W†)/(2i)`, which commutes with `W`; several κ are
/// tried until every eigen-residual is below `1e-9`.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub values: [C64; 4],
    /// Column k is the eigenvector for `values[k]`.
    pub vectors: Mat4,
    pub residual: f64,
}

pub fn unitary_eigen(w: &Mat4) -> UnitaryEigen {
    const PENCILS: [f64; 4] = [
        0.577_215_664_901_532_9,
        1.618_033_988_749_895,
        -core::f64::consts::FRAC_1_SQRT_2,
        core::f64::consts::PI,
    ];
    let wd = mat4_adjoint(w);
    let mut best: Option<UnitaryEigen> = None;
    for &kappa in PENCILS.iter() {
        let mut h = [ZERO; 16];
        for i in 0..4 {
            for j in 0..4 {
                let sum = (w[i][j] + wd[i][j]) * 0.5;
                let diff = (w[i][j] - wd[i][j]) * C64::new(0.0, -0.5);
                h[4 * i + j] = sum + diff * kappa;
            }
        }
        let eig = hermitian_eigen(4, &h);
        let mut vectors = mat4_zero();
        let mut values = [ZERO; 4];
        let mut residual = 0.0f64;
        for k in 0..4 {
            let col: [C64; 4] = core::array::from_fn(|i| eig.vectors[4 * i + k]);
            let wv = mat4_apply(w, &col);
            let mu: C64 = col.iter().zip(wv.iter()).map(|(a, b)| a.conj() * b).sum();
            for i in 0..4 {
                vectors[i][k] = col[i];
                residual = residual.max((wv[i] - mu * col[i]).norm());
            }
            values[k] = mu;
        }
        let candidate = UnitaryEigen {
            values,
            vectors,
            residual,
        };
        if residual < 1e-9 {
            return candidate;
        }
        if best.as_ref().map_or(true, |b| residual < b.residual) {
            best = Some(candidate);
        }
    }
    best.expect("at least one pencil was tried")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn random_unitary(seed: u64) -> Mat4 {
        // Gram-Schmidt on a deterministic pseudo-random matrix.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut cols: Vec<[C64; 4]> = Vec::new();
        for _ in 0..4 {
            let mut c: [C64; 4] = core::array::from_fn(|_| C64::new(next(), next()));
            for prev in &cols {
                let proj: C64 = prev.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
                for i in 0..4 {
                    c[i] -= proj * prev[i];
                }
            }
            let norm = sqrt(c.iter().map(|z| z.norm_sqr()).sum());
            for z in c.iter_mut() {
                *z /= norm;
            }
            cols.push(c);
        }
        let mut m = mat4_zero();
        for (k, c) in cols.iter().enumerate() {
            for i in 0..4 {
                m[i][k] = c[i];
            }
        }
        m
    }

    #[test]
    fn eigen_recovers_synthesized_spectrum() {
        let v = random_unitary(7);
        let lambda = [0.5, 0.3, 0.2, 0.0];
        let mut a = [ZERO; 16];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    a[4 * i + j] += v[i][k] * lambda[k] * v[j][k].conj();
                }
            }
        }
        let eig = hermitian_eigen(4, &a);
        for (got, want) in eig.values.iter().zip(lambda.iter()) {
            assert_abs_diff_eq!(*got, *want, epsilon = 1e-11);
        }
        assert!(eig.reconstruction_residual(&a) < 1e-11);
    }

    #[test]
    fn svd_reconstructs() {
        let u = random_unitary(3);
        let v = random_unitary(11);
        let sigma = [2.0, 1.0, 1e-9, 0.0];
        let mut a = [ZERO; 16];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    a[4 * i + j] += u[i][k] * sigma[k] * v[j][k].conj();
                }
            }
        }
        let s = svd(4, 4, &a);
        for (got, want) in s.singular_values.iter().zip(sigma.iter()) {
            assert_abs_diff_eq!(*got, *want, epsilon = 1e-14);
        }
    }

    #[test]
    fn unitary_eigen_of_random_unitary() {
        for seed in 0..20 {
            let w = random_unitary(seed);
            let eig = unitary_eigen(&w);
            assert!(eig.residual < 1e-9, "seed {seed}: {}", eig.residual);
            for mu in eig.values {
                assert_abs_diff_eq!(mu.norm(), 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn kron_of_identities() {
        let i2: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
        assert_eq!(kron2(&i2, &i2), mat4_identity());
    }
}
