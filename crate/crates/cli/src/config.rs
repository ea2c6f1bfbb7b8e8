//! JSON run configuration.
//!
//! ```json
//! {
//!   "coin": { "theta": 0.7853981633974483 },
//!   "phi": [[1, 0], [0, 0], [0, 0], [0, 0]],
//!   "n_max": 512,
//!   "quadrature_n": 128,
//!   "window": 0.5,
//!   "fit_min": 64,
//!   "output_dir": "out",
//!   "memory_cap_bytes": 4294967296,
//!   "snapshots": [1, 64, 512]
//! }
//! ```
//!
//! `coin` is either `{"theta": θ}` for `[[cos θ, sin θ], [sin θ, −cos θ]]` or
//! `{"a": [re, im], "b": [re, im], "delta": [re, im]}`. Only `coin`, `phi`
//! and `n_max` are required.

use std::path::{Path, PathBuf};

use qwalk_core::asymptotics::LimitConfig;
use qwalk_core::{CoinParameters, InitialState, MemoryCap, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub coin: CoinSpec,
    pub phi: [[f64; 2]; 4],
    pub n_max: usize,
    #[serde(default = "default_quadrature_n")]
    pub quadrature_n: usize,
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default = "default_fit_min")]
    pub fit_min: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_cap")]
    pub memory_cap_bytes: u64,
    #[serde(default)]
    pub snapshots: Vec<usize>,
}

fn default_quadrature_n() -> usize {
    LimitConfig::default().quadrature_n
}

fn default_window() -> f64 {
    LimitConfig::default().window
}

fn default_fit_min() -> usize {
    LimitConfig::default().fit_min
}

fn default_cap() -> u64 {
    MemoryCap::DEFAULT.0
}

/// A configuration that passed every check.
#[derive(Debug, Clone)]
pub struct Validated {
    pub raw: RunConfig,
    pub coin: CoinParameters,
    pub phi: InitialState,
    pub cap: MemoryCap,
}

impl Validated {
    pub fn limit_config(&self) -> LimitConfig {
        LimitConfig {
            n_max: self.raw.n_max,
            window: self.raw.window,
            quadrature_n: self.raw.quadrature_n,
            fit_min: self.raw.fit_min,
            memory_cap: self.cap.0,
        }
    }

    /// Snapshot times, defaulting to `n_max` alone.
    pub fn snapshot_times(&self) -> Vec<usize> {
        let mut s = if self.raw.snapshots.is_empty() {
            vec![self.raw.n_max]
        } else {
            self.raw.snapshots.clone()
        };
        s.sort_unstable();
        s.dedup();
        s
    }
}

fn c(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

pub fn parse(text: &str, source: &str) -> Result<RunConfig, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Config(format!("{source}: line {} column {}: {e}", e.line(), e.column()))
    })
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

pub fn validate(raw: RunConfig) -> Result<Validated, CliError> {
    let spec = &raw.coin;
    let coin = match (spec.theta, spec.a, spec.b, spec.delta) {
        (Some(theta), None, None, None) => CoinParameters::from_angle(theta),
        (None, Some(a), Some(b), Some(delta)) => CoinParameters::new(c(a), c(b), c(delta)),
        _ => {
            return Err(CliError::Config(
                "field `coin`: give either `theta` alone or all of `a`, `b`, `delta`".into(),
            ))
        }
    }
    .map_err(|e| CliError::Config(format!("field `coin`: {e}")))?;
    let phi = InitialState::new(raw.phi.map(c)).map_err(|_| {
        let norm: f64 = raw.phi.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum();
        CliError::Config(format!(
            "field `phi`: initial coin state must be normalized, sum |phi_i|^2 = {norm} (expected 1)"
        ))
    })?;
    if raw.n_max < 1 {
        return Err(CliError::Config("field `n_max`: must be at least 1".into()));
    }
    if raw.quadrature_n < 8 {
        return Err(CliError::Config("field `quadrature_n`: must be at least 8".into()));
    }
    if !(raw.window > 0.0 && raw.window <= 1.0) {
        return Err(CliError::Config(format!(
            "field `window`: {} outside (0, 1]",
            raw.window
        )));
    }
    if raw.fit_min < 16 {
        return Err(CliError::Config("field `fit_min`: must be at least 16".into()));
    }
    if let Some(&bad) = raw.snapshots.iter().find(|&&n| n > raw.n_max) {
        return Err(CliError::Config(format!(
            "field `snapshots`: {bad} exceeds n_max = {}",
            raw.n_max
        )));
    }
    let cap = MemoryCap(raw.memory_cap_bytes);
    Ok(Validated {
        raw,
        coin,
        phi,
        cap,
    })
}
