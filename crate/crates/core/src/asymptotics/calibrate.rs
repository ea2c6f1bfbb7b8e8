//! Selection of the weight transcription against simulated overlaps.

use alloc::string::String;
use alloc::vec::Vec;

use super::limits::limit_overlaps_with;
use super::quadrature::QuadratureGrid;
use super::weights::{weight_coefficients, Transcription, WeightCoefficients};
use super::AsymptoticsError;
use crate::coin::CoinParameters;
use crate::evolution::InitialState;

/// Maximum allowed `|quadrature − empirical|` per chirality.
pub const OVERLAP_GATE: f64 = 1e-2;
/// Maximum allowed `|Σ overlaps − 1|`.
pub const SUM_GATE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationCase {
    pub coin: CoinParameters,
    pub phi: InitialState,
    /// Trailing-window estimates of `‖Ψ_∞ⁱ‖²`.
    pub empirical: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CandidateScore {
    pub transcription_id: String,
    /// Worst `|quadrature − empirical|` over cases and chiralities; infinite
    /// when some weight was not finite.
    pub max_deviation: f64,
    pub max_sum_error: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Calibration {
    pub scores: Vec<CandidateScore>,
    pub selected: Option<Transcription>,
    /// Exactly one candidate passed both gates.
    pub unique: bool,
}

/// Scores every candidate on every case with an `n × n` grid per case.
pub fn calibrate(cases: &[CalibrationCase], n: usize) -> Result<Calibration, AsymptoticsError> {
    let prepared: Vec<(WeightCoefficients, QuadratureGrid, [f64; 4])> = cases
        .iter()
        .map(|c| {
            Ok((
                weight_coefficients(&c.coin, &c.phi)?,
                QuadratureGrid::for_coin(&c.coin, n)?,
                c.empirical,
            ))
        })
        .collect::<Result<_, AsymptoticsError>>()?;
    let mut scores = Vec::new();
    let mut best: Option<(f64, Transcription)> = None;
    let mut passed = 0;
    for t in Transcription::candidates() {
        let mut max_deviation = 0.0f64;
        let mut max_sum_error = 0.0f64;
        for (w, grid, empirical) in &prepared {
            let q = limit_overlaps_with(w, grid, &t)?;
            let mut dev = 0.0f64;
            for i in 0..4 {
                let d = (q[i] - empirical[i]).abs();
                dev = if d.is_finite() { dev.max(d) } else { f64::INFINITY };
            }
            let sum = q.iter().sum::<f64>();
            let se = if sum.is_finite() { (sum - 1.0).abs() } else { f64::INFINITY };
            max_deviation = max_deviation.max(dev);
            max_sum_error = max_sum_error.max(se);
        }
        let accepted = max_deviation < OVERLAP_GATE && max_sum_error < SUM_GATE;
        if accepted {
            passed += 1;
            if best.map_or(true, |(d, _)| max_deviation < d) {
                best = Some((max_deviation, t));
            }
        }
        scores.push(CandidateScore {
            transcription_id: t.id(),
            max_deviation,
            max_sum_error,
            accepted,
        });
    }
    Ok(Calibration {
        scores,
        selected: best.map(|(_, t)| t),
        unique: passed == 1,
    })
}
