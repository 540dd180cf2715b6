//! Sweep configuration, read from JSON with unknown keys rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use su2geom::volume::log_grid;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Radii `log_grid(lo_factor·min(a1, a1/a3), hi_factor·a2, points)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RGridSpec {
    pub points: usize,
    pub lo_factor: f64,
    pub hi_factor: f64,
}

impl Default for RGridSpec {
    fn default() -> Self {
        Self {
            points: 64,
            lo_factor: 0.02,
            hi_factor: 8.0,
        }
    }
}

impl RGridSpec {
    pub fn grid(&self, params: [f64; 3]) -> Vec<f64> {
        let [a1, a2, a3] = params;
        let small = if a3.is_finite() { a1.min(a1 * a2 / a3) } else { a1 };
        log_grid(self.lo_factor * small, self.hi_factor * a2, self.points)
    }
}

/// Heat times `t = u²` with `u` log-spaced from `lo_factor` times the smallest
/// volume breakpoint to `hi_factor·a2`. Weyl thresholds are `s = 1/t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridSpec {
    pub points: usize,
    pub lo_factor: f64,
    pub hi_factor: f64,
}

impl Default for TimeGridSpec {
    fn default() -> Self {
        Self {
            points: 40,
            lo_factor: 0.25,
            hi_factor: 4.0,
        }
    }
}

impl TimeGridSpec {
    pub fn times(&self, params: [f64; 3]) -> Vec<f64> {
        let [a1, a2, a3] = params;
        let small = if a3.is_finite() { a1.min(a1 * a2 / a3) } else { a1 };
        let (lo, hi) = ((self.lo_factor * small).ln(), (self.hi_factor * a2).ln());
        let n = self.points.max(2);
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp().powi(2))
            .collect()
    }
}

fn default_a1_grid() -> Vec<f64> {
    vec![1.0, 0.5, 0.2, 0.1, 0.05]
}
fn default_a3_grid() -> Vec<f64> {
    vec![1.0, 2.0, 5.0, 10.0, 20.0]
}
fn default_n_samples() -> usize {
    20_000
}
fn default_k_neighbors() -> usize {
    16
}
fn default_seed() -> u64 {
    1
}
fn default_anisotropy_cap() -> f64 {
    400.0
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("sweep-out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// `a1` values; `a2 = 1` throughout.
    #[serde(default = "default_a1_grid")]
    pub a1_grid: Vec<f64>,
    #[serde(default = "default_a3_grid")]
    pub a3_grid: Vec<f64>,
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default = "default_k_neighbors")]
    pub k_neighbors: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub r_grid: RGridSpec,
    #[serde(default)]
    pub time_grid: TimeGridSpec,
    /// Adds an `(a1, 1, ∞)` report for every `a1` in the grid.
    #[serde(default)]
    pub include_subriemannian: bool,
    /// Largest allowed `a3/a1`.
    #[serde(default = "default_anisotropy_cap")]
    pub anisotropy_cap: f64,
    /// Threshold of the neighbour-graph anisotropy gate; `None` disables it.
    #[serde(default)]
    pub anisotropy_gate: Option<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl Default for SweepConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.a1_grid.is_empty() || self.a3_grid.is_empty() {
            return bad("a1_grid and a3_grid must be non-empty".into());
        }
        for &a1 in &self.a1_grid {
            if !(a1 > 0.0 && a1 <= 1.0) {
                return bad(format!("a1 = {a1} must lie in (0, 1]"));
            }
        }
        for &a3 in &self.a3_grid {
            if !(a3 >= 1.0 && a3.is_finite()) {
                return bad(format!("a3 = {a3} must be finite and at least 1"));
            }
            for &a1 in &self.a1_grid {
                if a3 / a1 > self.anisotropy_cap {
                    return bad(format!(
                        "a3/a1 = {} for ({a1}, 1, {a3}) exceeds anisotropy_cap {}",
                        a3 / a1,
                        self.anisotropy_cap
                    ));
                }
            }
        }
        if self.n_samples < 1000 {
            return bad(format!("n_samples = {} is below 1000", self.n_samples));
        }
        if self.k_neighbors < 8 {
            return bad(format!("k_neighbors = {} is below 8", self.k_neighbors));
        }
        for (name, points, lo, hi) in [
            (
                "r_grid",
                self.r_grid.points,
                self.r_grid.lo_factor,
                self.r_grid.hi_factor,
            ),
            (
                "time_grid",
                self.time_grid.points,
                self.time_grid.lo_factor,
                self.time_grid.hi_factor,
            ),
        ] {
            if points < 2 || !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
                return bad(format!("{name} needs points >= 2 and 0 < lo_factor < hi_factor"));
            }
        }
        if let Some(g) = self.anisotropy_gate {
            if !(g > 0.0) {
                return bad(format!("anisotropy_gate = {g} must be positive"));
            }
        }
        Ok(())
    }

    /// `(i, j, [a1, 1, a3])` in row-major order.
    pub fn grid_points(&self) -> Vec<(usize, usize, [f64; 3])> {
        let mut out = Vec::new();
        for (i, &a1) in self.a1_grid.iter().enumerate() {
            for (j, &a3) in self.a3_grid.iter().enumerate() {
                out.push((i, j, [a1, 1.0, a3]));
            }
        }
        out
    }
}
