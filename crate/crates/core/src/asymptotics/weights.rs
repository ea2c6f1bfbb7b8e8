//! Weight functions `hⁱ(x, y)` of the limiting overlaps.
//!
//! The printed weights are ambiguous in several exponents, so they are
//! modelled as a family of [`PrintedReading`]s. [`Transcription::Spectral`]
//! is the reference: the Cesàro limit of `‖Ψₙⁱ‖²` written as an average of
//! eigenprojections of the Fourier-space evolution `W(k)`, pulled back to the
//! Chebyshev rectangle by `k₁ = π/2 + asin(x/|a|²)`, `k₂ = π/2 + asin(y/|d|²)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::AsymptoticsError;
use crate::coin::{Chirality, CoinParameters};
use crate::evolution::InitialState;
use crate::linalg::{mat4_zero, unitary_eigen, Mat4};
use crate::math::{asin, cos, pow, sin, sqrt};
use crate::C64;

/// `|a·b·c·d|` at or below which the limit theorems do not apply.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Eigenphases closer than this share one eigenprojection.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Coefficients `A, B, C, D` together with the walk data they were built from.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightCoefficients {
    /// `a²α + ab(β + γ) + b²λ`.
    pub A: C64,
    /// `acα + bcβ + adγ + bdλ`, as printed.
    pub B: C64,
    /// `acα + bcβ + adγ + bdλ`.
    pub C: C64,
    /// `c²α + cd(β + γ) + d²λ`.
    pub D: C64,
    /// `acα + adβ + bcγ + bdλ`: `B` with the `bc`/`ad` pair swapped.
    pub B_swapped: C64,
    pub coin: CoinParameters,
    pub phi: [C64; 4],
    tensor: Mat4,
}

pub fn weight_coefficients(
    coin: &CoinParameters,
    phi: &InitialState,
) -> Result<WeightCoefficients, AsymptoticsError> {
    let abcd = coin.abcd();
    if !(abcd > DEGENERATE_TOL) {
        return Err(AsymptoticsError::DegenerateCoin { abcd });
    }
    let (a, b, c, d) = (coin.a, coin.b, coin.c, coin.d);
    let [al, be, ga, la] = *phi.amplitudes();
    Ok(WeightCoefficients {
        A: a * a * al + a * b * (be + ga) + b * b * la,
        B: a * c * al + b * c * be + a * d * ga + b * d * la,
        C: a * c * al + b * c * be + a * d * ga + b * d * la,
        D: c * c * al + c * d * (be + ga) + d * d * la,
        B_swapped: a * c * al + a * d * be + b * c * ga + b * d * la,
        coin: *coin,
        phi: *phi.amplitudes(),
        tensor: coin.tensor_square().entries,
    })
}

impl WeightCoefficients {
    /// Half-widths `(|a|², |d|²)` of the integration domain.
    pub fn domain(&self) -> (f64, f64) {
        (self.coin.a.norm_sqr(), self.coin.d.norm_sqr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RatioPower {
    /// `((1−x)/(1+x))^{+1/2}` on the first term, inverse on the second.
    PlusHalf,
    MinusHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Denominators {
    /// `|s|²` and `|t|²` from the cross-term pair (`|a|⁴`, `|c|⁴` for L).
    Quartic,
    /// `|a|²|d|²` and `|b|²|c|²` for every chirality.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RootArgument {
    /// `√(|a|⁴ − x²)`: consistent with the domain edge `|a|²`.
    Fourth,
    /// `√(|a|² − x²)`.
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BcReading {
    /// `B = C` exactly as printed.
    AsPrinted,
    /// `B = acα + adβ + bcγ + bdλ`.
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrintedReading {
    pub ratio_power: RatioPower,
    pub denominators: Denominators,
    pub root: RootArgument,
    pub bc: BcReading,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Transcription {
    Printed(PrintedReading),
    Spectral,
}

impl Transcription {
    /// The sixteen printed readings followed by the spectral form.
    pub fn candidates() -> Vec<Transcription> {
        let mut out = Vec::with_capacity(17);
        for ratio_power in [RatioPower::PlusHalf, RatioPower::MinusHalf] {
            for denominators in [Denominators::Quartic, Denominators::Mixed] {
                for root in [RootArgument::Fourth, RootArgument::Square] {
                    for bc in [BcReading::AsPrinted, BcReading::Swapped] {
                        out.push(Transcription::Printed(PrintedReading {
                            ratio_power,
                            denominators,
                            root,
                            bc,
                        }));
                    }
                }
            }
        }
        out.push(Transcription::Spectral);
        out
    }

    pub fn id(&self) -> String {
        match self {
            Transcription::Spectral => String::from("spectral"),
            Transcription::Printed(p) => format!(
                "printed:ratio{}:{}:root-{}:bc-{}",
                match p.ratio_power {
                    RatioPower::PlusHalf => "+1/2",
                    RatioPower::MinusHalf => "-1/2",
                },
                match p.denominators {
                    Denominators::Quartic => "quartic",
                    Denominators::Mixed => "mixed",
                },
                match p.root {
                    RootArgument::Fourth => "a4",
                    RootArgument::Square => "a2",
                },
                match p.bc {
                    BcReading::AsPrinted => "printed",
                    BcReading::Swapped => "swapped",
                },
            ),
        }
    }

    pub fn from_id(id: &str) -> Option<Transcription> {
        Self::candidates().into_iter().find(|t| t.id() == id)
    }
}

/// `hⁱ(x, y)` under the given transcription.
pub fn weight_h(
    direction: Chirality,
    x: f64,
    y: f64,
    w: &WeightCoefficients,
    transcription: &Transcription,
) -> Result<f64, AsymptoticsError> {
    check_domain(x, y, w)?;
    Ok(match transcription {
        Transcription::Spectral => spectral_weight(x, y, w)[direction.index()][direction.index()].re,
        Transcription::Printed(p) => printed_weight(direction, x, y, w, p),
    })
}

/// All four `hⁱ(x, y)` at once.
pub fn weight_all(
    x: f64,
    y: f64,
    w: &WeightCoefficients,
    transcription: &Transcription,
) -> Result<[f64; 4], AsymptoticsError> {
    check_domain(x, y, w)?;
    Ok(match transcription {
        Transcription::Spectral => {
            let m = spectral_weight(x, y, w);
            core::array::from_fn(|i| m[i][i].re)
        }
        Transcription::Printed(p) => {
            Chirality::ALL.map(|dir| printed_weight(dir, x, y, w, p))
        }
    })
}

fn check_domain(x: f64, y: f64, w: &WeightCoefficients) -> Result<(), AsymptoticsError> {
    let (c1, c2) = w.domain();
    if !(x.abs() < c1 && y.abs() < c2) {
        return Err(AsymptoticsError::OutsideDomain { x, y });
    }
    Ok(())
}

fn printed_weight(
    direction: Chirality,
    x: f64,
    y: f64,
    w: &WeightCoefficients,
    p: &PrintedReading,
) -> f64 {
    let CoinParameters { a, b, c, d, .. } = w.coin;
    let big_b = match p.bc {
        BcReading::AsPrinted => w.B,
        BcReading::Swapped => w.B_swapped,
    };
    // (first coefficient, second coefficient, s, t) with the cross term
    // 2·Re((1 − γ)/(s·γ) · K₁·conj(K₂) / conj(t))
    let (k1, k2, s, t) = match direction {
        Chirality::L => (w.A, w.D, a * a, c * c),
        Chirality::R => (big_b, w.C, a * d, b * c),
        Chirality::D => (w.C, big_b, a * d, b * c),
        Chirality::U => (w.D, w.A, d * d, b * b),
    };
    let (den1, den2) = match p.denominators {
        Denominators::Quartic => (s.norm_sqr(), t.norm_sqr()),
        Denominators::Mixed => (
            a.norm_sqr() * d.norm_sqr(),
            b.norm_sqr() * c.norm_sqr(),
        ),
    };
    let power = match p.ratio_power {
        RatioPower::PlusHalf => 0.5,
        RatioPower::MinusHalf => -0.5,
    };
    let ratio = |u: f64| pow((1.0 - u) / (1.0 + u), power);
    let rx = ratio(x);
    let ry = ratio(y);
    let gamma = w.phi[2];
    let one = C64::new(1.0, 0.0);
    let cross = ((one - gamma) / (s * gamma) * k1 * k2.conj() / t.conj()).re * 2.0;
    let h = k1.norm_sqr() / den1 * rx * ry + k2.norm_sqr() / den2 / (rx * ry) + cross;
    match p.root {
        RootArgument::Fourth => h,
        RootArgument::Square => {
            // re-express 1/√(c − x²) against the c² kernel of the grid
            let (c1, c2) = w.domain();
            h * sqrt(c1 * c1 - x * x) / sqrt(c1 - x * x) * sqrt(c2 * c2 - y * y)
                / sqrt(c2 - y * y)
        }
    }
}

/// Four-fold sum over `(±k₁, ±k₂)` of `Σ_E P_E φ φ† P_E`, the eigenprojections
/// of `W(k) = diag(e^{−ik₁}, e^{ik₁}, e^{−ik₂}, e^{ik₂})·(U ⊗ U)`. The diagonal
/// is `hⁱ`; the off-diagonal entries are the cross weights `hⁱʲ` in the same
/// `Σ Ψⁱ·conj(Ψʲ)` orientation as the coin density.
pub fn spectral_weight(x: f64, y: f64, w: &WeightCoefficients) -> Mat4 {
    let (c1, c2) = w.domain();
    let k1 = core::f64::consts::FRAC_PI_2 + asin((x / c1).clamp(-1.0, 1.0));
    let k2 = core::f64::consts::FRAC_PI_2 + asin((y / c2).clamp(-1.0, 1.0));
    let mut acc = mat4_zero();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            add_projected(&mut acc, s1 * k1, s2 * k2, w);
        }
    }
    acc
}

fn add_projected(acc: &mut Mat4, k1: f64, k2: f64, w: &WeightCoefficients) {
    let phases = [
        C64::new(cos(k1), -sin(k1)),
        C64::new(cos(k1), sin(k1)),
        C64::new(cos(k2), -sin(k2)),
        C64::new(cos(k2), sin(k2)),
    ];
    let mut wk = w.tensor;
    for i in 0..4 {
        for j in 0..4 {
            wk[i][j] *= phases[i];
        }
    }
    let eig = unitary_eigen(&wk);
    let mut taken = [false; 4];
    for m in 0..4 {
        if taken[m] {
            continue;
        }
        let mut proj = [C64::new(0.0, 0.0); 4];
        for l in m..4 {
            if taken[l] || (eig.values[l] - eig.values[m]).norm() > DEGENERACY_TOL {
                continue;
            }
            taken[l] = true;
            let overlap: C64 = (0..4).map(|i| eig.vectors[i][l].conj() * w.phi[i]).sum();
            for i in 0..4 {
                proj[i] += eig.vectors[i][l] * overlap;
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                acc[i][j] += proj[i] * proj[j].conj();
            }
        }
    }
}
