//! Per-metric reports and the sweep aggregate.
//!
//! Every verdict carries the thresholds it was judged against.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use su2geom::volume::{Branch, VolumeModel};

/// A measured value and the interval it must lie in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn within(value: Option<f64>, min: Option<f64>, max: Option<f64>) -> Self {
        let pass = value.is_some_and(|v| min.is_none_or(|lo| v >= lo) && max.is_none_or(|hi| v <= hi));
        Self {
            value,
            min,
            max,
            pass,
            note: None,
        }
    }

    pub fn at_most(value: Option<f64>, max: f64) -> Self {
        Self::within(value, None, Some(max))
    }

    pub fn missing(note: impl Into<String>, min: Option<f64>, max: Option<f64>) -> Self {
        Self {
            value: None,
            min,
            max,
            pass: false,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Metric parameters; `a3 = None` stands for `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a1: f64,
    pub a2: f64,
    pub a3: Option<f64>,
}

impl Params {
    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            a1: a[0],
            a2: a[1],
            a3: a[2].is_finite().then_some(a[2]),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a1, self.a2, self.a3.unwrap_or(f64::INFINITY)]
    }

    pub fn model(self) -> VolumeModel<f64> {
        VolumeModel {
            a1: self.a1,
            a2: self.a2,
            a3: self.a3,
        }
    }
}

/// Allowed deviation of a regime slope from its exponent.
pub const SLOPE_TOLERANCE: f64 = 0.5;
/// Bound on the empirical doubling constant.
pub const DOUBLING_BOUND: f64 = 80.0;
/// Bound on `max b_hi / min b_lo` over a sweep.
pub const SPREAD_BOUND: f64 = 50.0;
/// Bound on `max/min` of the heat-trace and Weyl products.
pub const BAND_BOUND: f64 = 100.0;
/// Relative tolerance between the spectral and closed-form `λ₁`.
pub const LAMBDA1_TOLERANCE: f64 = 1e-9;
/// Recorded range for `λ₁·diam²`.
pub const LAMBDA1_DIAM2_RANGE: (f64, f64) = (2.4, 50.0);

pub fn diameter_window(a2: f64) -> (f64, f64) {
    (0.9 * PI * a2, 1.1 * 2.0 * PI * a2)
}

/// `[π²/(4d²), 80²·16/d²]`.
pub fn gap_window(diam: f64) -> (f64, f64) {
    let d2 = diam * diam;
    (PI * PI / (4.0 * d2), DOUBLING_BOUND * DOUBLING_BOUND * 16.0 / d2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub regime: String,
    pub expected: f64,
    pub points: usize,
    pub r_range: Option<(f64, f64)>,
    /// `None` when too few gated radii fall in the regime.
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioBand {
    pub b_lo: f64,
    pub b_hi: f64,
}

/// One `(t, product, regime)` row of a heat or Weyl sandwich.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSample {
    pub t: f64,
    pub product: f64,
    pub regime: String,
}

/// Products over a time grid. `truncated` lists times the spectrum cutoff
/// cannot resolve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub samples: Vec<BandSample>,
    pub truncated: Vec<f64>,
    pub regimes_covered: Vec<String>,
    pub regimes_missing: Vec<String>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    /// `max/min` against [`BAND_BOUND`].
    pub ratio: Verdict,
}

impl BandReport {
    pub fn new(samples: Vec<BandSample>, truncated: Vec<f64>, model: &VolumeModel<f64>) -> Self {
        let names = |bs: &[Branch]| bs.iter().map(|b| b.name().to_string()).collect::<Vec<_>>();
        let expected = names(&model.nonempty_branches());
        let mut covered: Vec<String> = Vec::new();
        for s in &samples {
            if !covered.contains(&s.regime) {
                covered.push(s.regime.clone());
            }
        }
        covered.sort_by_key(|r| expected.iter().position(|e| e == r));
        let missing: Vec<String> = expected.into_iter().filter(|e| !covered.contains(e)).collect();
        let min = samples.iter().map(|s| s.product).reduce(f64::min);
        let max = samples.iter().map(|s| s.product).reduce(f64::max);
        let mut ratio = Verdict::at_most(min.zip(max).map(|(lo, hi)| hi / lo), BAND_BOUND);
        if !missing.is_empty() {
            ratio.pass = false;
            ratio.note = Some(format!("regimes not reached: {}", missing.join(", ")));
        }
        Self {
            samples,
            truncated,
            regimes_covered: covered,
            regimes_missing: missing,
            min,
            max,
            ratio,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub distance_s: f64,
    pub volume_s: f64,
    pub spectrum_s: f64,
    pub total_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub index: (usize, usize),
    pub params: Params,
    pub seed: u64,
    /// Settings the report was computed with; a resumed sweep reuses the
    /// report only when they match.
    pub fingerprint: String,
    /// Hard failure of the distance or spectrum stage.
    pub failure: Option<String>,
    pub d_hat: Verdict,
    pub ratio_band: Option<RatioBand>,
    pub slopes: Vec<SlopeReport>,
    pub diameter: Verdict,
    pub graph_tol: Option<f64>,
    pub lambda1_exact: Option<f64>,
    pub lambda1_spectral: Option<f64>,
    /// `|spectral − exact| / exact`.
    pub lambda1_mismatch: Verdict,
    /// `λ₁` against `[π²/(4d²), 80²·16/d²]`.
    pub gap_sandwich: Verdict,
    /// `λ₁·diam²`, recorded against the calibration range.
    pub lambda1_diam2: Verdict,
    pub heat: Option<BandReport>,
    pub weyl: Option<BandReport>,
    pub two_j_max: Option<u32>,
    pub timings: Timings,
}

impl MetricReport {
    pub fn failed(
        index: (usize, usize),
        params: Params,
        seed: u64,
        fingerprint: String,
        msg: String,
    ) -> Self {
        let miss = || Verdict::missing("not computed", None, None);
        Self {
            index,
            params,
            seed,
            fingerprint,
            failure: Some(msg),
            d_hat: miss(),
            ratio_band: None,
            slopes: Vec::new(),
            diameter: miss(),
            graph_tol: None,
            lambda1_exact: None,
            lambda1_spectral: None,
            lambda1_mismatch: miss(),
            gap_sandwich: miss(),
            lambda1_diam2: miss(),
            heat: None,
            weyl: None,
            two_j_max: None,
            timings: Timings::default(),
        }
    }
}

/// Report for `(a1, 1, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubReport {
    pub index: usize,
    pub params: Params,
    pub seed: u64,
    pub fingerprint: String,
    pub failure: Option<String>,
    pub eps_schedule: Vec<f64>,
    /// One row per target: `(target quaternion, [(ε, d_ε, tol)], monotone)`.
    pub sequences: Vec<SubSequence>,
    pub monotone: bool,
    /// Heisenberg-regime slope on the localized slab field, against `4 ± 0.4`.
    pub heisenberg_slope: Verdict,
    pub d_hat: Verdict,
    pub diameter: Verdict,
    pub timings: Timings,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubSequence {
    pub target: [f64; 4],
    pub sequence: Vec<(f64, f64, f64)>,
    pub monotone: bool,
}

/// Sweep-wide summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub points: usize,
    pub failures: Vec<String>,
    pub max_d_hat: Verdict,
    /// `max b_hi / min b_lo`.
    pub ratio_spread: Verdict,
    /// Worst `|slope − expected|` over every regime with enough points.
    pub worst_slope_deviation: Verdict,
    pub slope_violations: Vec<String>,
    pub diameter_violations: Vec<String>,
    pub worst_lambda1_mismatch: Verdict,
    pub gap_sandwich_violations: Vec<String>,
    /// `(min, max)` of `λ₁·diam²` against the recorded range.
    pub lambda1_diam2: Verdict,
    pub lambda1_diam2_max: Option<f64>,
    pub heat_band: Verdict,
    pub weyl_band: Verdict,
    pub regimes_missing: Vec<String>,
    pub subriemannian: Vec<SubSummary>,
    pub total_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubSummary {
    pub params: Params,
    pub monotone: bool,
    pub heisenberg_slope: Verdict,
    pub d_hat: Verdict,
}

fn label(p: &Params) -> String {
    match p.a3 {
        Some(a3) => format!("({}, {}, {})", p.a1, p.a2, a3),
        None => format!("({}, {}, inf)", p.a1, p.a2),
    }
}

fn band_of(products: impl Iterator<Item = f64>, missing: &[String]) -> Verdict {
    let v: Vec<f64> = products.collect();
    let lo = v.iter().copied().reduce(f64::min);
    let hi = v.iter().copied().reduce(f64::max);
    let mut out = Verdict::at_most(lo.zip(hi).map(|(a, b)| b / a), BAND_BOUND);
    if !missing.is_empty() {
        out.pass = false;
        out.note = Some(format!("{} point/regime pairs not reached", missing.len()));
    }
    out
}

pub fn aggregate(reports: &[MetricReport], subs: &[SubReport], total_s: f64) -> Aggregate {
    let mut failures = Vec::new();
    for r in reports {
        if let Some(f) = &r.failure {
            failures.push(format!("{}: {f}", label(&r.params)));
        }
    }
    for s in subs {
        if let Some(f) = &s.failure {
            failures.push(format!("{}: {f}", label(&s.params)));
        }
    }

    let d_values: Vec<Option<f64>> = reports.iter().map(|r| r.d_hat.value).collect();
    let max_d_hat = if d_values.iter().any(Option::is_none) {
        let known = d_values.iter().flatten().copied().reduce(f64::max);
        let mut v = Verdict::at_most(known, DOUBLING_BOUND);
        v.pass = false;
        v.note = Some("some points have no doubling estimate".into());
        v
    } else {
        Verdict::at_most(
            d_values.iter().flatten().copied().reduce(f64::max),
            DOUBLING_BOUND,
        )
    };

    let bands: Vec<&RatioBand> = reports.iter().filter_map(|r| r.ratio_band.as_ref()).collect();
    let spread = (bands.len() == reports.len() && !bands.is_empty()).then(|| {
        let lo = bands.iter().map(|b| b.b_lo).fold(f64::INFINITY, f64::min);
        let hi = bands.iter().map(|b| b.b_hi).fold(0.0, f64::max);
        hi / lo
    });
    let ratio_spread = Verdict::at_most(spread, SPREAD_BOUND);

    let mut worst: Option<f64> = None;
    let mut slope_violations = Vec::new();
    for r in reports {
        for s in &r.slopes {
            if let Some(v) = &s.verdict {
                let dev = (v.value.unwrap_or(f64::NAN) - s.expected).abs();
                worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
                if !v.pass {
                    slope_violations.push(format!(
                        "{} {}: slope {:.3} vs {}",
                        label(&r.params),
                        s.regime,
                        v.value.unwrap_or(f64::NAN),
                        s.expected
                    ));
                }
            }
        }
    }
    let worst_slope_deviation = Verdict::at_most(worst, SLOPE_TOLERANCE);

    let diameter_violations = reports
        .iter()
        .filter(|r| !r.diameter.pass)
        .map(|r| format!("{}: {:?}", label(&r.params), r.diameter.value))
        .collect();
    let mismatch = reports.iter().map(|r| r.lambda1_mismatch.value);
    let worst_lambda1 = if reports.iter().any(|r| r.lambda1_mismatch.value.is_none()) {
        None
    } else {
        mismatch.flatten().reduce(f64::max)
    };
    let gap_sandwich_violations = reports
        .iter()
        .filter(|r| !r.gap_sandwich.pass)
        .map(|r| {
            format!(
                "{}: λ₁ {:?} outside [{:?}, {:?}]",
                label(&r.params),
                r.gap_sandwich.value,
                r.gap_sandwich.min,
                r.gap_sandwich.max
            )
        })
        .collect();
    let l2: Vec<f64> = reports.iter().filter_map(|r| r.lambda1_diam2.value).collect();
    let (l2_lo, l2_hi) = (
        l2.iter().copied().reduce(f64::min),
        l2.iter().copied().reduce(f64::max),
    );
    let mut lambda1_diam2 = Verdict::within(l2_lo, Some(LAMBDA1_DIAM2_RANGE.0), Some(LAMBDA1_DIAM2_RANGE.1));
    lambda1_diam2.pass = lambda1_diam2.pass && l2_hi.is_some_and(|h| h <= LAMBDA1_DIAM2_RANGE.1);
    lambda1_diam2.note = Some("value is the minimum; see lambda1_diam2_max".into());

    let mut regimes_missing = Vec::new();
    for r in reports {
        for (name, b) in [("heat", &r.heat), ("weyl", &r.weyl)] {
            match b {
                Some(b) => regimes_missing.extend(
                    b.regimes_missing
                        .iter()
                        .map(|m| format!("{} {name}: {m}", label(&r.params))),
                ),
                None => regimes_missing.push(format!("{} {name}: not computed", label(&r.params))),
            }
        }
    }
    let heat_missing: Vec<String> = regimes_missing
        .iter()
        .filter(|m| m.contains(" heat:"))
        .cloned()
        .collect();
    let weyl_missing: Vec<String> = regimes_missing
        .iter()
        .filter(|m| m.contains(" weyl:"))
        .cloned()
        .collect();
    let products = |pick: fn(&MetricReport) -> &Option<BandReport>| {
        reports
            .iter()
            .filter_map(move |r| pick(r).as_ref())
            .flat_map(|b| b.samples.iter().map(|s| s.product))
            .collect::<Vec<_>>()
    };
    let heat_band = band_of(products(|r| &r.heat).into_iter(), &heat_missing);
    let weyl_band = band_of(products(|r| &r.weyl).into_iter(), &weyl_missing);

    Aggregate {
        points: reports.len(),
        failures,
        max_d_hat,
        ratio_spread,
        worst_slope_deviation,
        slope_violations,
        diameter_violations,
        worst_lambda1_mismatch: Verdict::at_most(worst_lambda1, LAMBDA1_TOLERANCE),
        gap_sandwich_violations,
        lambda1_diam2,
        lambda1_diam2_max: l2_hi,
        heat_band,
        weyl_band,
        regimes_missing,
        subriemannian: subs
            .iter()
            .map(|s| SubSummary {
                params: s.params,
                monotone: s.monotone,
                heisenberg_slope: s.heisenberg_slope.clone(),
                d_hat: s.d_hat.clone(),
            })
            .collect(),
        total_s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_thresholds() {
        assert!(Verdict::at_most(Some(3.0), 3.0).pass);
        assert!(!Verdict::at_most(Some(3.1), 3.0).pass);
        assert!(!Verdict::at_most(None, 3.0).pass);
        assert!(Verdict::within(Some(1.0), Some(0.5), Some(2.0)).pass);
        assert!(!Verdict::within(Some(0.4), Some(0.5), None).pass);
    }

    #[test]
    fn infinite_a3_is_null() {
        let p = Params::from_array([1.0, 1.0, f64::INFINITY]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"a1":1.0,"a2":1.0,"a3":null}"#);
        let back: Params = serde_json::from_str(&s).unwrap();
        assert!(back.to_array()[2].is_infinite());
    }

    #[test]
    fn band_flags_missing_regimes() {
        let m = VolumeModel::new(1.0, 1.0, Some(1.0)).unwrap();
        let samples = vec![BandSample {
            t: 4.0,
            product: 1.0,
            regime: "saturated".into(),
        }];
        let b = BandReport::new(samples, vec![], &m);
        assert_eq!(b.regimes_missing, vec!["euclidean".to_string()]);
        assert!(!b.ratio.pass);
    }
}
