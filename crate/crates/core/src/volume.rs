//! Ball volumes: the piecewise model `V̄` and Monte Carlo curves.
//!
//! Volumes are Haar probabilities `μ₀(B(e, r))`. The model is
//!
//! ```text
//! V̄(r) = r³ / (a1 a2 a3)   for r ≤ a1 a2 / a3
//!        r⁴ / (a1 a2)²     for r ≤ a1
//!        r² / a2²          for r ≤ a2
//!        1                 otherwise
//! ```
//!
//! with the first branch empty when `a3 = ∞`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use crate::distance::{diameter_estimate, DistanceField};
use crate::error::{Error, Result};
use crate::metric::MetricSpec;
use crate::scalar::{powi, Field};

/// Regime of the model, by exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `r³`, small balls.
    Euclidean,
    /// `r⁴`.
    Heisenberg,
    /// `r²`.
    Collapse,
    /// Constant 1.
    Saturated,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch::Euclidean,
        Branch::Heisenberg,
        Branch::Collapse,
        Branch::Saturated,
    ];

    pub fn exponent(self) -> u32 {
        match self {
            Branch::Euclidean => 3,
            Branch::Heisenberg => 4,
            Branch::Collapse => 2,
            Branch::Saturated => 0,
        }
    }

    /// 1-based position in the piecewise definition.
    pub fn id(self) -> u8 {
        match self {
            Branch::Euclidean => 1,
            Branch::Heisenberg => 2,
            Branch::Collapse => 3,
            Branch::Saturated => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Euclidean => "euclidean",
            Branch::Heisenberg => "heisenberg",
            Branch::Collapse => "collapse",
            Branch::Saturated => "saturated",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The model `V̄` for parameters `(a1, a2, a3)`; `a3 = None` means `∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeModel<T> {
    pub a1: T,
    pub a2: T,
    pub a3: Option<T>,
}

impl<T: Field> VolumeModel<T> {
    pub fn new(a1: T, a2: T, a3: Option<T>) -> Result<Self> {
        let valid = a1 > T::zero() && a1 <= a2 && a3.as_ref().is_none_or(|a3| &a2 <= a3);
        if !valid {
            return Err(Error::InvalidParams(format!(
                "need 0 < a1 <= a2 <= a3, got ({a1:?}, {a2:?}, {a3:?})"
            )));
        }
        Ok(Self { a1, a2, a3 })
    }

    /// `(b1, b2, b3) = (a1 a2 / a3, a1, a2)`, with `b1 = 0` for `a3 = ∞`.
    pub fn breakpoints(&self) -> [T; 3] {
        let b1 = match &self.a3 {
            Some(a3) => self.a1.clone() * self.a2.clone() / a3.clone(),
            None => T::zero(),
        };
        [b1, self.a1.clone(), self.a2.clone()]
    }

    pub fn branch(&self, r: &T) -> Branch {
        let [b1, b2, b3] = self.breakpoints();
        if self.a3.is_some() && *r <= b1 {
            Branch::Euclidean
        } else if *r <= b2 {
            Branch::Heisenberg
        } else if *r <= b3 {
            Branch::Collapse
        } else {
            Branch::Saturated
        }
    }

    /// Value of one branch formula at `r`, regardless of its interval.
    pub fn branch_value(&self, branch: Branch, r: &T) -> T {
        let a1a2 = self.a1.clone() * self.a2.clone();
        match branch {
            Branch::Euclidean => match &self.a3 {
                Some(a3) => powi(r, 3) / (a1a2 * a3.clone()),
                None => T::zero(),
            },
            Branch::Heisenberg => powi(r, 4) / powi(&a1a2, 2),
            Branch::Collapse => powi(r, 2) / powi(&self.a2, 2),
            Branch::Saturated => T::one(),
        }
    }

    /// `(V̄(r), branch)`.
    pub fn eval(&self, r: &T) -> (T, Branch) {
        let b = self.branch(r);
        (self.branch_value(b, r), b)
    }

    /// Exponent of the first non-empty branch, the growth rate at `r → 0`.
    pub fn small_r_exponent(&self) -> u32 {
        if self.a3.is_some() {
            3
        } else {
            4
        }
    }

    /// Branches whose interval has positive length.
    pub fn nonempty_branches(&self) -> Vec<Branch> {
        let [b1, b2, b3] = self.breakpoints();
        let mut out = Vec::new();
        if self.a3.is_some() && b1 > T::zero() {
            out.push(Branch::Euclidean);
        }
        if b2 > b1 {
            out.push(Branch::Heisenberg);
        }
        if b3 > b2 {
            out.push(Branch::Collapse);
        }
        out.push(Branch::Saturated);
        out
    }
}

impl VolumeModel<f64> {
    pub fn from_metric(m: &MetricSpec<f64>) -> Result<Self> {
        m.require_nondegenerate()?;
        let [a1, a2, a3] = m.params();
        Self::new(a1, a2, a3.is_finite().then_some(a3))
    }

    pub fn params(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3.unwrap_or(f64::INFINITY)]
    }
}

/// `V̄(r)`.
pub fn model_volume<T: Field>(p: &VolumeModel<T>, r: &T) -> T {
    p.eval(r).0
}

/// `V̄(kr) / V̄(r)`; at `r = 0` the limit `k^e` of the first non-empty branch.
pub fn model_doubling<T: Field>(p: &VolumeModel<T>, r: &T, k: &T) -> T {
    if r.is_zero() {
        return powi(k, p.small_r_exponent());
    }
    let kr = k.clone() * r.clone();
    model_volume(p, &kr) / model_volume(p, r)
}

/// Riemannian volume of SU(2) for `g(a1, a2, a3)`: `16π² a1 a2 a3`.
pub fn riemannian_volume(a: [f64; 3]) -> f64 {
    16.0 * PI * PI * a[0] * a[1] * a[2]
}

/// Variance gate for ratio statistics: `v̂·n` at least this.
pub const VARIANCE_GATE: f64 = 50.0;
/// Stricter gate used for slope fits.
pub const SLOPE_GATE: f64 = 100.0;
/// Minimum number of eligible points for doubling and band statistics.
pub const MIN_ELIGIBLE: usize = 5;
/// Minimum number of points for a regime slope.
pub const MIN_SLOPE_POINTS: usize = 6;

/// Monte Carlo estimate of `r ↦ μ₀(B(e, r))`.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeCurve {
    pub params: [f64; 3],
    pub r_grid: Vec<f64>,
    pub v_hat: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n: usize,
    /// Largest sampled distance of the underlying field.
    pub diameter: f64,
    /// Haar measure of the sampled region; `v̂ = weight·count/n`.
    pub weight: f64,
}

/// Default radii: log-spaced from `0.02·min(a1, a1 a2/a3)` to `2.5·a2` with a
/// whole number of points per octave, so that `2r` lies on the grid.
pub fn default_r_grid(params: [f64; 3]) -> Vec<f64> {
    let [a1, a2, a3] = params;
    let small = if a3.is_finite() { a1.min(a1 * a2 / a3) } else { a1 };
    log_grid(0.02 * small, 2.5 * a2, 64)
}

/// About `points` radii from `lo` to at least `hi`, spaced by `2^(1/m)`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let octaves = (hi / lo).log2();
    let per_octave = ((points.max(2) - 1) as f64 / octaves).round().max(1.0);
    let count = (octaves * per_octave).ceil() as usize + 1;
    (0..count).map(|i| lo * (i as f64 / per_octave).exp2()).collect()
}

impl VolumeCurve {
    /// Builds a curve from sorted sample distances drawn from a region of Haar
    /// measure `weight`.
    pub fn from_distances(
        params: [f64; 3],
        sorted: &[f64],
        r_grid: &[f64],
        diameter: f64,
        weight: f64,
    ) -> Self {
        let n = sorted.len();
        let frac: Vec<f64> = r_grid
            .iter()
            .map(|r| sorted.partition_point(|d| d < r) as f64 / n as f64)
            .collect();
        Self {
            params,
            r_grid: r_grid.to_vec(),
            v_hat: frac.iter().map(|f| weight * f).collect(),
            stderr: frac
                .iter()
                .map(|f| weight * (f * (1.0 - f) / n as f64).sqrt())
                .collect(),
            n,
            diameter,
            weight,
        }
    }

    /// A noiseless curve that follows `V̄` exactly.
    pub fn synthetic(p: &VolumeModel<f64>, r_grid: &[f64], n: usize) -> Self {
        let v_hat: Vec<f64> = r_grid.iter().map(|r| model_volume(p, r)).collect();
        Self {
            params: p.params(),
            r_grid: r_grid.to_vec(),
            stderr: vec![0.0; v_hat.len()],
            v_hat,
            n,
            diameter: f64::INFINITY,
            weight: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.r_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_grid.is_empty()
    }

    /// Number of samples inside the ball at grid index `i`.
    pub fn count(&self, i: usize) -> f64 {
        (self.v_hat[i] / self.weight * self.n as f64).round()
    }

    fn passes_gate(&self, i: usize, gate: f64) -> bool {
        self.count(i) >= gate
    }

    /// Indices of `2r` for each grid radius (matched within relative `1e-9`).
    fn doubled_index(&self, i: usize) -> Option<usize> {
        let target = 2.0 * self.r_grid[i];
        let j = self.r_grid.partition_point(|r| *r < target * (1.0 - 1e-9));
        (j < self.len() && (self.r_grid[j] - target).abs() <= 1e-9 * target).then_some(j)
    }

    /// `(r, v̂(2r)/v̂(r))` for radii that pass the variance gate.
    pub fn doubling_ratios(&self) -> Vec<(f64, f64)> {
        (0..self.len())
            .filter(|&i| self.passes_gate(i, VARIANCE_GATE))
            .filter_map(|i| {
                self.doubled_index(i)
                    .map(|j| (self.r_grid[i], self.v_hat[j] / self.v_hat[i]))
            })
            .collect()
    }

    /// `a1,a2,a3,r,v_hat,stderr,v_model,ratio` rows (no header).
    pub fn write_csv_rows<W: Write>(&self, p: &VolumeModel<f64>, mut w: W) -> std::io::Result<()> {
        let [a1, a2, a3] = self.params;
        for i in 0..self.len() {
            let r = self.r_grid[i];
            let vm = model_volume(p, &r);
            let ratio = self.v_hat[i] / vm;
            writeln!(
                w,
                "{a1},{a2},{a3},{r},{},{},{vm},{ratio}",
                self.v_hat[i], self.stderr[i]
            )?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, p: &VolumeModel<f64>, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CURVE_CSV_HEADER}")?;
        self.write_csv_rows(p, w)
    }
}

pub const CURVE_CSV_HEADER: &str = "a1,a2,a3,r,v_hat,stderr,v_model,ratio";

/// `v̂(r) = #{samples with dist < r} / n` on the given radii (times the
/// region measure for localized fields).
pub fn estimate_curve(f: &DistanceField, r_grid: &[f64]) -> Result<VolumeCurve> {
    if r_grid.windows(2).any(|w| w[1] < w[0]) || r_grid.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::InvalidInput("r_grid must be sorted, non-negative".into()));
    }
    if let Some(r) = r_grid.last().filter(|r| **r > f.valid_radius()) {
        return Err(Error::InvalidInput(format!(
            "radius {r} exceeds {} for a localized field",
            f.valid_radius()
        )));
    }
    let mut d = f.sample_dist().to_vec();
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(VolumeCurve::from_distances(
        f.metric().params(),
        &d,
        r_grid,
        diameter_estimate(f),
        f.region_measure(),
    ))
}

/// Largest `v̂(2r)/v̂(r)` over gated grid radii.
pub fn doubling_estimate(c: &VolumeCurve) -> Result<f64> {
    let below = c.r_grid.iter().filter(|r| **r < c.diameter).count();
    if below < 20 {
        return Err(Error::InsufficientResolution {
            eligible: below,
            required: 20,
        });
    }
    let ratios = c.doubling_ratios();
    if ratios.len() < MIN_ELIGIBLE {
        return Err(Error::InsufficientResolution {
            eligible: ratios.len(),
            required: MIN_ELIGIBLE,
        });
    }
    Ok(ratios.iter().map(|x| x.1).fold(f64::MIN, f64::max))
}

/// `(min, max)` of `v̂(r) / V̄(r)` over gated grid radii.
pub fn ratio_band(c: &VolumeCurve, p: &VolumeModel<f64>) -> Result<(f64, f64)> {
    let ratios: Vec<f64> = (0..c.len())
        .filter(|&i| c.passes_gate(i, VARIANCE_GATE))
        .map(|i| c.v_hat[i] / model_volume(p, &c.r_grid[i]))
        .collect();
    if ratios.len() < MIN_ELIGIBLE {
        return Err(Error::InsufficientResolution {
            eligible: ratios.len(),
            required: MIN_ELIGIBLE,
        });
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Log-log slope of `v̂` over one regime of the model.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeSlope {
    pub branch: Branch,
    pub expected: f64,
    /// Least-squares slope, `None` when fewer than [`MIN_SLOPE_POINTS`] qualify.
    pub slope: Option<f64>,
    pub points: usize,
    pub r_range: Option<(f64, f64)>,
}

/// Slopes over every non-empty regime, using grid radii with `v̂·n ≥ 100`.
pub fn regime_slopes(c: &VolumeCurve, p: &VolumeModel<f64>) -> Vec<RegimeSlope> {
    p.nonempty_branches()
        .into_iter()
        .map(|b| {
            let pts: Vec<(f64, f64)> = (0..c.len())
                .filter(|&i| p.branch(&c.r_grid[i]) == b && c.passes_gate(i, SLOPE_GATE))
                .map(|i| (c.r_grid[i], c.v_hat[i]))
                .collect();
            let slope = (pts.len() >= MIN_SLOPE_POINTS).then(|| loglog_slope(&pts));
            RegimeSlope {
                branch: b,
                expected: b.exponent() as f64,
                slope,
                points: pts.len(),
                r_range: pts.first().zip(pts.last()).map(|(a, z)| (a.0, z.0)),
            }
        })
        .collect()
}

/// Least-squares slope of `ln v` against `ln r`.
pub fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Worst value of `[v̂(r)/v̂(s)] / [D·(r/s)⁴·(1 + slack)]` over gated pairs
/// `s < r`, with `slack = 5·(stderr(r)/v̂(r) + stderr(s)/v̂(s))`. At most 1
/// means the regularity bound with exponent 4 holds.
pub fn regularity_excess(c: &VolumeCurve, d_hat: f64) -> f64 {
    let idx: Vec<usize> = (0..c.len())
        .filter(|&i| c.passes_gate(i, VARIANCE_GATE))
        .collect();
    let mut worst: f64 = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let (s, r) = (c.r_grid[i], c.r_grid[j]);
            let slack = 5.0 * (c.stderr[j] / c.v_hat[j] + c.stderr[i] / c.v_hat[i]);
            let bound = d_hat * (r / s).powi(4) * (1.0 + slack);
            worst = worst.max(c.v_hat[j] / c.v_hat[i] / bound);
        }
    }
    worst
}

/// Exact Haar volume of a ball of radius `r` for `g(1,1,1)`: `(r − sin r)/(2π)`,
/// saturating at 1 for `r ≥ 2π`.
pub fn round_ball_volume(r: f64) -> f64 {
    if r >= 2.0 * PI {
        1.0
    } else if r < 1e-2 {
        let r2 = r * r;
        r * r2 / 6.0 * (1.0 - r2 / 20.0 * (1.0 - r2 / 42.0 * (1.0 - r2 / 72.0))) / (2.0 * PI)
    } else {
        (r - r.sin()) / (2.0 * PI)
    }
}
