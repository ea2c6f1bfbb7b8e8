//! U(2) coins, their tensor square and the row slices that move the walker.
//!
//! Chirality basis order is `(L, R, D, U)` ↔ `(0, 1, 2, 3)` throughout the
//! crate. Under the tensor identification `L = 1⊗1`, `R = 1⊗2`, `D = 2⊗1`,
//! `U = 2⊗2`, index `2·i₁ + i₂` of `U ⊗ U` is exactly that order.

use core::f64::consts::FRAC_PI_2;

use crate::linalg::{kron2, mat4_add, mat4_unitarity_residual, mat4_zero, Mat2, Mat4};
use crate::math::{cos, sin};
use crate::C64;

/// Rejection tolerance for user-supplied coin data.
pub const INPUT_TOL: f64 = 1e-10;
/// Residual bound every accepted coin satisfies.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Chirality {
    L,
    R,
    D,
    U,
}

impl Chirality {
    pub const ALL: [Chirality; 4] = [Chirality::L, Chirality::R, Chirality::D, Chirality::U];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(i: usize) -> Option<Chirality> {
        match i {
            0 => Some(Chirality::L),
            1 => Some(Chirality::R),
            2 => Some(Chirality::D),
            3 => Some(Chirality::U),
            _ => None,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            Chirality::L => "L",
            Chirality::R => "R",
            Chirality::D => "D",
            Chirality::U => "U",
        }
    }

    /// Lattice displacement of one step with this chirality.
    pub const fn shift(self) -> (i64, i64) {
        match self {
            Chirality::L => (-1, 0),
            Chirality::R => (1, 0),
            Chirality::D => (0, -1),
            Chirality::U => (0, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum CoinError {
    #[error("coin row is not normalized: |a|^2 + |b|^2 = {norm}")]
    NotNormalized { norm: f64 },
    #[error("determinant is not a unit complex number: |delta| = {modulus}")]
    NotUnitDeterminant { modulus: f64 },
    #[error("coin angle {theta} outside the open interval (0, pi/2)")]
    OutOfRange { theta: f64 },
}

/// A validated 2×2 unitary `[[a, b], [c, d]]` with `c = −Δ·conj(b)` and
/// `d = Δ·conj(a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoinParameters {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub delta: C64,
}

impl CoinParameters {
    pub fn new(a: C64, b: C64, delta: C64) -> Result<Self, CoinError> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() >= INPUT_TOL {
            return Err(CoinError::NotNormalized { norm });
        }
        let modulus = delta.norm();
        if (modulus - 1.0).abs() >= INPUT_TOL {
            return Err(CoinError::NotUnitDeterminant { modulus });
        }
        Ok(CoinParameters {
            a,
            b,
            c: -delta * b.conj(),
            d: delta * a.conj(),
            delta,
        })
    }

    /// The real one-parameter family `[[cos θ, sin θ], [sin θ, −cos θ]]`.
    pub fn from_angle(theta: f64) -> Result<Self, CoinError> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(CoinError::OutOfRange { theta });
        }
        Self::new(
            C64::new(cos(theta), 0.0),
            C64::new(sin(theta), 0.0),
            C64::new(-1.0, 0.0),
        )
    }

    pub fn hadamard() -> Self {
        Self::from_angle(core::f64::consts::FRAC_PI_4).expect("π/4 is in range")
    }

    pub fn identity() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0))
            .expect("identity is unitary")
    }

    pub fn matrix(&self) -> Mat2 {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// `‖M·M† − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let m = self.matrix();
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += m[i][k] * m[j][k].conj();
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - want).norm());
            }
        }
        worst
    }

    /// `|a·b·c·d|`; the limit theorems need this nonzero.
    pub fn abcd(&self) -> f64 {
        (self.a * self.b * self.c * self.d).norm()
    }

    pub fn tensor_square(&self) -> TensorCoin {
        tensor_square(self)
    }

    pub fn directions(&self) -> DirectionMatrices {
        split_directions(&tensor_square(self))
    }
}

pub fn build_coin(a: C64, b: C64, delta: C64) -> Result<CoinParameters, CoinError> {
    CoinParameters::new(a, b, delta)
}

pub fn coin_from_angle(theta: f64) -> Result<CoinParameters, CoinError> {
    CoinParameters::from_angle(theta)
}

/// `U ⊗ U` in the `(L, R, D, U)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorCoin {
    pub entries: Mat4,
}

impl TensorCoin {
    pub fn unitarity_residual(&self) -> f64 {
        mat4_unitarity_residual(&self.entries)
    }

    pub fn row(&self, chirality: Chirality) -> [C64; 4] {
        self.entries[chirality.index()]
    }
}

pub fn tensor_square(coin: &CoinParameters) -> TensorCoin {
    let m = coin.matrix();
    TensorCoin {
        entries: kron2(&m, &m),
    }
}

/// `P, Q, R, S`: the tensor coin restricted to rows `L, R, D, U`. Stored as
/// `[P, Q, R, S]`, indexed by [`Chirality::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionMatrices {
    pub slices: [Mat4; 4],
}

impl DirectionMatrices {
    pub fn get(&self, chirality: Chirality) -> &Mat4 {
        &self.slices[chirality.index()]
    }

    /// The single nonzero row of a slice.
    pub fn row(&self, chirality: Chirality) -> [C64; 4] {
        self.slices[chirality.index()][chirality.index()]
    }

    pub fn sum(&self) -> Mat4 {
        self.slices.iter().fold(mat4_zero(), |acc, m| mat4_add(&acc, m))
    }
}

pub fn split_directions(tensor: &TensorCoin) -> DirectionMatrices {
    let slices = core::array::from_fn(|k| {
        let mut m = mat4_zero();
        m[k] = tensor.entries[k];
        m
    });
    DirectionMatrices { slices }
}
