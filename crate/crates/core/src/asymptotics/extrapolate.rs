//! Long-time estimates from finite series.

use alloc::vec::Vec;

use super::AsymptoticsError;
use crate::math::log2;

pub const MIN_SERIES_LEN: usize = 32;
pub const MIN_FIT_POINTS: usize = 6;
pub const MIN_FIT_N: f64 = 16.0;

/// Trailing-window mean and its spread.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmpiricalLimit {
    pub estimate: f64,
    /// `max |sₙ − estimate|` over the window.
    pub oscillation: f64,
    pub window_len: usize,
}

/// Cesàro estimate over the trailing `window` fraction of `series`.
pub fn empirical_limit(series: &[f64], window: f64) -> Result<EmpiricalLimit, AsymptoticsError> {
    if series.len() < MIN_SERIES_LEN {
        return Err(AsymptoticsError::TooShort {
            len: series.len(),
            min: MIN_SERIES_LEN,
        });
    }
    if !(window > 0.0 && window <= 1.0) {
        return Err(AsymptoticsError::BadWindow { window });
    }
    let len = series.len();
    let take = (libm::ceil(len as f64 * window) as usize).clamp(1, len);
    let tail = &series[len - take..];
    let estimate = tail.iter().sum::<f64>() / take as f64;
    let oscillation = tail
        .iter()
        .map(|v| (v - estimate).abs())
        .fold(0.0, f64::max);
    Ok(EmpiricalLimit {
        estimate,
        oscillation,
        window_len: take,
    })
}

/// Least-squares line `S ≈ slope·log₂ n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

impl ScalingFit {
    pub fn predict(&self, n: f64) -> f64 {
        self.slope * log2(n) + self.intercept
    }
}

/// Fits the points with `n_min ≤ n ≤ n_max`.
pub fn scaling_fit(
    series: &[(f64, f64)],
    n_min: f64,
    n_max: f64,
) -> Result<ScalingFit, AsymptoticsError> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(n, _)| *n >= n_min && *n <= n_max)
        .map(|&(n, s)| (log2(n), s))
        .collect();
    if pts.len() < MIN_FIT_POINTS || n_min < MIN_FIT_N {
        return Err(AsymptoticsError::TooFewPoints {
            points: pts.len(),
            n_min,
        });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(ScalingFit {
        slope,
        intercept,
        r2,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn constant_series() {
        let e = empirical_limit(&[0.3; 64], 0.5).unwrap();
        assert_abs_diff_eq!(e.estimate, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(e.oscillation, 0.0, epsilon = 1e-15);
        assert_eq!(e.window_len, 32);
    }

    #[test]
    fn alternating_decay() {
        let s: Vec<f64> = (1..=512)
            .map(|n| 0.3 + 0.1 * if n % 2 == 0 { 1.0 } else { -1.0 } / n as f64)
            .collect();
        let e = empirical_limit(&s, 0.5).unwrap();
        assert!((e.estimate - 0.3).abs() < 1e-3);
        assert!(e.oscillation > 1e-4 && e.oscillation < 1e-3);
    }

    #[test]
    fn rejects_short_series_and_bad_windows() {
        assert!(matches!(
            empirical_limit(&[1.0; 31], 0.5),
            Err(AsymptoticsError::TooShort { len: 31, .. })
        ));
        assert!(empirical_limit(&[1.0; 40], 0.0).is_err());
        assert!(empirical_limit(&[1.0; 40], 1.5).is_err());
    }

    #[test]
    fn exact_lines() {
        let s: Vec<(f64, f64)> = (16..=64).map(|n| (n as f64, (n as f64 / 4.0).log2())).collect();
        let f = scaling_fit(&s, 16.0, 64.0).unwrap();
        assert_abs_diff_eq!(f.slope, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.intercept, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.r2, 1.0, epsilon = 1e-12);
        let s: Vec<(f64, f64)> = (16..=64).map(|n| (n as f64, 2.0 * (n as f64).log2() + 3.0)).collect();
        let f = scaling_fit(&s, 20.0, 60.0).unwrap();
        assert_abs_diff_eq!(f.slope, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.intercept, 3.0, epsilon = 1e-12);
        assert_eq!(f.points, 41);
    }

    #[test]
    fn fit_needs_enough_points_and_large_n() {
        let s: Vec<(f64, f64)> = (1..=100).map(|n| (n as f64, n as f64)).collect();
        assert!(matches!(
            scaling_fit(&s, 8.0, 100.0),
            Err(AsymptoticsError::TooFewPoints { .. })
        ));
        assert!(matches!(
            scaling_fit(&s, 16.0, 20.0),
            Err(AsymptoticsError::TooFewPoints { points: 5, .. })
        ));
    }

    proptest! {
        #[test]
        fn recovers_limits_within_ten_over_n(
            limit in -5.0f64..5.0,
            amp in -1.0f64..1.0,
            freq in 0.1f64..3.0,
            n_max in 64usize..1024,
        ) {
            let s: Vec<f64> = (1..=n_max)
                .map(|n| limit + amp * (freq * n as f64).cos() / n as f64)
                .collect();
            let e = empirical_limit(&s, 0.5).unwrap();
            prop_assert!((e.estimate - limit).abs() < 10.0 / n_max as f64);
        }
    }
}
