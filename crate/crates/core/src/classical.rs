//! Symmetric simple random walk on Z: the classical baseline for the
//! entropy scaling of the quantum walk.

use alloc::vec::Vec;

use crate::math::{lgamma, ln, log2, plog2p};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ClassicalError {
    #[error("limit report needs n_max >= 1024, got {n_max}")]
    TooShort { n_max: u64 },
}

/// Law of the walk after `n` steps on the support `{−n, −n+2, …, n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialDistribution {
    pub n: u64,
    /// `probabilities[k]` is the mass at `x = −n + 2k`.
    pub probabilities: Vec<f64>,
}

impl BinomialDistribution {
    pub fn position(&self, k: usize) -> i64 {
        -(self.n as i64) + 2 * k as i64
    }

    pub fn at(&self, x: i64) -> f64 {
        let shifted = x + self.n as i64;
        if shifted < 0 || shifted % 2 != 0 {
            return 0.0;
        }
        self.probabilities.get((shifted / 2) as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// `p(−n + 2k) = C(n, k) / 2ⁿ`.
///
/// The central term comes from log-gamma; the rest follow by the exact ratios
/// `C(n, k±1)/C(n, k)`, and the result is renormalized so the total is one to
/// rounding.
pub fn binomial_distribution(n: u64) -> BinomialDistribution {
    let len = n as usize + 1;
    let mut p = alloc::vec![0.0; len];
    let mode = n / 2;
    let nf = n as f64;
    let log_mode = lgamma(nf + 1.0) - lgamma(mode as f64 + 1.0) - lgamma((n - mode) as f64 + 1.0)
        - nf * ln(2.0);
    p[mode as usize] = libm::exp(log_mode);
    for k in mode..n {
        p[k as usize + 1] = p[k as usize] * ((n - k) as f64 / (k + 1) as f64);
    }
    for k in (1..=mode).rev() {
        p[k as usize - 1] = p[k as usize] * (k as f64 / (n - k + 1) as f64);
    }
    let total: f64 = p.iter().sum();
    for v in p.iter_mut() {
        *v /= total;
    }
    BinomialDistribution {
        n,
        probabilities: p,
    }
}

/// `−Σ p log₂ p` of an arbitrary probability vector.
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    -probabilities.iter().map(|&p| plog2p(p)).sum::<f64>()
}

pub fn rw_entropy(n: u64) -> f64 {
    entropy_bits(&binomial_distribution(n).probabilities)
}

/// `(1/2)·log₂(2πe)`, the classical second-order constant for a unit-spaced
/// density.
pub fn gaussian_second_order_constant() -> f64 {
    0.5 * log2(2.0 * core::f64::consts::PI * core::f64::consts::E)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RwRow {
    pub n: u64,
    pub s_rw: f64,
    /// `S / log₂(√n)`.
    pub ratio: f64,
    /// `log₂(√n)·(S / log₂(√n) − 1) = S − log₂(√n)`.
    pub bracket: f64,
}

impl RwRow {
    pub fn at(n: u64) -> Self {
        let s_rw = rw_entropy(n);
        let half_log = 0.5 * log2(n as f64);
        RwRow {
            n,
            s_rw,
            ratio: s_rw / half_log,
            bracket: s_rw - half_log,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RwLimitReport {
    pub rows: Vec<RwRow>,
    /// `(1/2)·log₂(2πe)`.
    pub reference_constant: f64,
    /// Bracket at the largest sampled `n`.
    pub measured_bracket: f64,
    /// Mean bracket over the trailing half of the rows.
    pub trailing_bracket: f64,
    /// `measured_bracket − reference_constant`.
    pub offset: f64,
    pub ratio_decreasing: bool,
    pub entropy_increasing: bool,
}

/// Powers of two from `2⁴` up to `n_max`.
pub fn rw_limit_report(n_max: u64) -> Result<RwLimitReport, ClassicalError> {
    if n_max < 1024 {
        return Err(ClassicalError::TooShort { n_max });
    }
    let mut rows = Vec::new();
    let mut n = 16u64;
    while n <= n_max {
        rows.push(RwRow::at(n));
        n *= 2;
    }
    let reference_constant = gaussian_second_order_constant();
    let measured_bracket = rows.last().map(|r| r.bracket).unwrap_or(f64::NAN);
    let tail = &rows[rows.len() / 2..];
    let trailing_bracket = tail.iter().map(|r| r.bracket).sum::<f64>() / tail.len() as f64;
    let ratio_decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    let entropy_increasing = rows.windows(2).all(|w| w[1].s_rw > w[0].s_rw);
    Ok(RwLimitReport {
        offset: measured_bracket - reference_constant,
        rows,
        reference_constant,
        measured_bracket,
        trailing_bracket,
        ratio_decreasing,
        entropy_increasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn small_laws() {
        let d = binomial_distribution(1);
        assert_eq!(d.probabilities, [0.5, 0.5]);
        assert_eq!((d.position(0), d.position(1)), (-1, 1));
        let d = binomial_distribution(2);
        assert_eq!(d.probabilities, [0.25, 0.5, 0.25]);
        let d = binomial_distribution(4);
        for (got, want) in d.probabilities.iter().zip([1.0, 4.0, 6.0, 4.0, 1.0]) {
            assert_abs_diff_eq!(*got, want / 16.0, epsilon = 1e-16);
        }
        assert_eq!(d.at(-2), 0.25);
        assert_eq!(d.at(-1), 0.0);
    }

    #[test]
    fn large_laws_stay_normalized_and_symmetric() {
        for n in [1000u64, 65_537, 1 << 20] {
            let d = binomial_distribution(n);
            assert_abs_diff_eq!(d.total(), 1.0, epsilon = 1e-12);
            let len = d.probabilities.len();
            for k in (0..len / 2).step_by(997) {
                let (a, b) = (d.probabilities[k], d.probabilities[len - 1 - k]);
                assert!((a - b).abs() <= 1e-12 * a.max(b).max(1e-300), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(rw_entropy(2), 1.5, epsilon = 1e-15);
        // −[2·(1/16)log₂(1/16) + 2·(1/4)log₂(1/4) + (3/8)log₂(3/8)]
        let want = 0.5 + 1.0 - 0.375 * (0.375f64).log2();
        assert_abs_diff_eq!(rw_entropy(4), want, epsilon = 1e-14);
        assert_abs_diff_eq!(rw_entropy(4), 2.0306390622295662, epsilon = 1e-14);
    }

    #[test]
    fn large_n_matches_extended_precision_sum() {
        // 40-digit direct summation of C(n,k)/2^n, n = 2^16
        let oracle = 9.047_095_585_152_648;
        assert_abs_diff_eq!(rw_entropy(1 << 16), oracle, epsilon = 1e-6);
        assert_abs_diff_eq!(rw_entropy(1 << 16), oracle, epsilon = 1e-11);
    }

    #[test]
    fn report_needs_enough_range() {
        assert_eq!(rw_limit_report(10), Err(ClassicalError::TooShort { n_max: 10 }));
        let r = rw_limit_report(1 << 16).unwrap();
        assert_eq!(r.rows.len(), 13);
        assert_eq!(r.rows[0].n, 16);
        assert!(r.ratio_decreasing && r.entropy_increasing);
        assert_abs_diff_eq!(r.reference_constant, 2.0471, epsilon = 1e-4);
    }

    #[test]
    fn entropy_minus_half_log_is_bounded() {
        for e in 4..=20 {
            let n = 1u64 << e;
            let gap = rw_entropy(n) - 0.5 * (n as f64).log2();
            assert!((0.5..1.5).contains(&gap), "n = {n}: {gap}");
        }
    }

    proptest! {
        #[test]
        fn entropy_ignores_ordering(n in 1u64..400, seed in any::<u64>()) {
            let mut p = binomial_distribution(n).probabilities;
            let base = entropy_bits(&p);
            // deterministic Fisher-Yates driven by the seed
            let mut s = seed | 1;
            for i in (1..p.len()).rev() {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                p.swap(i, (s % (i as u64 + 1)) as usize);
            }
            prop_assert!((entropy_bits(&p) - base).abs() < 1e-12);
        }
    }
}
