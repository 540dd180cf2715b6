//! Per-point pipeline, resumable sweep driver and stored-output loading.
//!
//! Layout under `output_dir`:
//! `points/p{i}_{j}/{report.json, curve.csv, spectrum.csv}`,
//! `sub/s{i}/{report.json, curve.csv}`, `aggregate.json`, `plots/*.svg`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use su2geom::distance::{build_distance_field, diameter_estimate, sub_distance, GraphConfig};
use su2geom::sampling::point_seed;
use su2geom::spectrum::{adaptive_two_j_max, lambda1_exact, spectrum_table, SpectrumTable, MAX_DIM};
use su2geom::volume::{
    doubling_estimate, estimate_curve, log_grid, model_volume, ratio_band, regime_slopes, Branch,
    VolumeCurve, VolumeModel,
};
use su2geom::{algebra, Error, GroupElement, MetricSpec};

use crate::config::SweepConfig;
use crate::report::*;

/// Lowest merged eigenvalues written to `spectrum.csv`.
pub const SPECTRUM_CSV_ROWS: usize = 2000;
/// `ε` values for the sub-Riemannian limit.
pub const SUB_EPS_SCHEDULE: [f64; 7] = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625];
/// Round radius and half-width of the slab field used for the Heisenberg slope.
pub const SLAB_RADIUS: f64 = 1.0;
pub const SLAB_HALF_WIDTH: f64 = 0.1;
pub const HEISENBERG_SLOPE_TOLERANCE: f64 = 0.4;

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("i/o error at {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SweepError + '_ {
    move |source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Serialize)]
struct Fingerprint<'a> {
    params: [Option<f64>; 3],
    seed: u64,
    n_samples: usize,
    k_neighbors: usize,
    anisotropy_gate: Option<f64>,
    r_grid: &'a crate::config::RGridSpec,
    time_grid: &'a crate::config::TimeGridSpec,
}

fn fingerprint(cfg: &SweepConfig, params: [f64; 3], seed: u64) -> String {
    serde_json::to_string(&Fingerprint {
        params: params.map(|a| a.is_finite().then_some(a)),
        seed,
        n_samples: cfg.n_samples,
        k_neighbors: cfg.k_neighbors,
        anisotropy_gate: cfg.anisotropy_gate,
        r_grid: &cfg.r_grid,
        time_grid: &cfg.time_grid,
    })
    .expect("plain data")
}

fn graph_config(cfg: &SweepConfig, seed: u64) -> GraphConfig {
    let mut g = GraphConfig::new(cfg.n_samples, cfg.k_neighbors, seed);
    g.anisotropy_limit = cfg.anisotropy_gate;
    g
}

/// Everything computed for one Riemannian grid point.
pub struct PointOutput {
    pub report: MetricReport,
    pub curve: Option<VolumeCurve>,
    pub spectrum: Option<SpectrumTable>,
}

/// Runs the distance, volume and spectrum stages for `g(a1, a2, a3)`.
pub fn analyze_point(cfg: &SweepConfig, index: (usize, usize), params: [f64; 3], seed: u64) -> PointOutput {
    let start = Instant::now();
    let p = Params::from_array(params);
    let fp = fingerprint(cfg, params, seed);
    let fail = |msg: String, t: Timings| PointOutput {
        report: MetricReport {
            timings: t,
            ..MetricReport::failed(index, p, seed, fp.clone(), msg)
        },
        curve: None,
        spectrum: None,
    };
    let m = match MetricSpec::from_params(params[0], params[1], params[2]) {
        Ok(m) => m,
        Err(e) => return fail(e.to_string(), Timings::default()),
    };
    let model = p.model();
    let mut timings = Timings::default();

    let field = match build_distance_field(&m, &graph_config(cfg, seed)) {
        Ok(f) => f,
        Err(e) => {
            timings.total_s = start.elapsed().as_secs_f64();
            return fail(e.to_string(), timings);
        }
    };
    timings.distance_s = start.elapsed().as_secs_f64();

    let t_vol = Instant::now();
    let diam = diameter_estimate(&field);
    let (dlo, dhi) = diameter_window(params[1]);
    let diameter = Verdict::within(Some(diam), Some(dlo), Some(dhi));
    let curve = match estimate_curve(&field, &cfg.r_grid.grid(params)) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string(), timings),
    };
    let d_hat = match doubling_estimate(&curve) {
        Ok(d) => Verdict::at_most(Some(d), DOUBLING_BOUND),
        Err(e) => Verdict::missing(e.to_string(), None, Some(DOUBLING_BOUND)),
    };
    let band = ratio_band(&curve, &model)
        .ok()
        .map(|(b_lo, b_hi)| RatioBand { b_lo, b_hi });
    let slopes = slope_reports(&curve, &model);
    timings.volume_s = t_vol.elapsed().as_secs_f64();

    let t_spec = Instant::now();
    let times = cfg.time_grid.times(params);
    let two_j = match adaptive_two_j_max(params, times[0]) {
        Ok(k) => k,
        Err(Error::CutoffExceeded { .. }) => MAX_DIM as u32 - 1,
        Err(e) => return fail(e.to_string(), timings),
    };
    let table = match spectrum_table(&m, two_j) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string(), timings),
    };
    let exact = lambda1_exact(&m).ok();
    let spectral = table.lambda1();
    let mismatch = exact.zip(spectral).map(|(e, s)| (s - e).abs() / e);
    let (glo, ghi) = gap_window(diam);
    let (heat, weyl) = band_reports(&table, &model, &times);
    timings.spectrum_s = t_spec.elapsed().as_secs_f64();
    timings.total_s = start.elapsed().as_secs_f64();

    let report = MetricReport {
        index,
        params: p,
        seed,
        fingerprint: fp,
        failure: None,
        d_hat,
        ratio_band: band,
        slopes,
        diameter,
        graph_tol: Some(field.tol()),
        lambda1_exact: exact,
        lambda1_spectral: spectral,
        lambda1_mismatch: Verdict::at_most(mismatch, LAMBDA1_TOLERANCE),
        gap_sandwich: Verdict::within(spectral, Some(glo), Some(ghi)),
        lambda1_diam2: Verdict::within(
            spectral.map(|l| l * diam * diam),
            Some(LAMBDA1_DIAM2_RANGE.0),
            Some(LAMBDA1_DIAM2_RANGE.1),
        ),
        heat: Some(heat),
        weyl: Some(weyl),
        two_j_max: Some(two_j),
        timings,
    };
    PointOutput {
        report,
        curve: Some(curve),
        spectrum: Some(table),
    }
}

pub fn slope_reports(curve: &VolumeCurve, model: &VolumeModel<f64>) -> Vec<SlopeReport> {
    regime_slopes(curve, model)
        .into_iter()
        .map(|s| SlopeReport {
            regime: s.branch.name().to_string(),
            expected: s.expected,
            points: s.points,
            r_range: s.r_range,
            verdict: s.slope.map(|v| {
                Verdict::within(
                    Some(v),
                    Some(s.expected - SLOPE_TOLERANCE),
                    Some(s.expected + SLOPE_TOLERANCE),
                )
            }),
        })
        .collect()
}

/// `heat_trace(t)·V̄(√t)` and `weyl_count(1/t)·V̄(√t)` over `times`.
pub fn band_reports(
    table: &SpectrumTable,
    model: &VolumeModel<f64>,
    times: &[f64],
) -> (BandReport, BandReport) {
    let (mut heat, mut heat_cut) = (Vec::new(), Vec::new());
    let (mut weyl, mut weyl_cut) = (Vec::new(), Vec::new());
    for &t in times {
        let u = t.sqrt();
        let (v, branch): (f64, Branch) = model.eval(&u);
        let sample = |product: f64| BandSample {
            t,
            product,
            regime: branch.name().to_string(),
        };
        match table.heat_trace(t) {
            Ok(h) => heat.push(sample(h * v)),
            Err(_) => heat_cut.push(t),
        }
        match table.weyl_count(1.0 / t) {
            Ok(c) => weyl.push(sample(c as f64 * v)),
            Err(_) => weyl_cut.push(t),
        }
    }
    (
        BandReport::new(heat, heat_cut, model),
        BandReport::new(weyl, weyl_cut, model),
    )
}

/// Sub-Riemannian limit for `(a1, 1, ∞)`.
pub struct SubOutput {
    pub report: SubReport,
    pub curve: Option<VolumeCurve>,
}

/// Targets of the `ε`-schedule: two vertical points and one generic point.
pub fn sub_targets() -> Vec<GroupElement> {
    vec![
        algebra::exp_axis(3, 0.3),
        algebra::exp_axis(3, 1.0),
        algebra::coords_second_kind(0.6, -0.4, 0.5),
    ]
}

pub fn analyze_subriemannian(cfg: &SweepConfig, index: usize, a1: f64, seed: u64) -> SubOutput {
    let start = Instant::now();
    let params = [a1, 1.0, f64::INFINITY];
    let p = Params::from_array(params);
    let fp = fingerprint(cfg, params, seed);
    let fail = |msg: String| SubOutput {
        report: SubReport {
            index,
            params: p,
            seed,
            fingerprint: fp.clone(),
            failure: Some(msg),
            eps_schedule: SUB_EPS_SCHEDULE.to_vec(),
            sequences: Vec::new(),
            monotone: false,
            heisenberg_slope: Verdict::missing("not computed", None, None),
            d_hat: Verdict::missing("not computed", None, None),
            diameter: Verdict::missing("not computed", None, None),
            timings: Timings::default(),
        },
        curve: None,
    };
    let m = match MetricSpec::from_params(a1, 1.0, f64::INFINITY) {
        Ok(m) => m,
        Err(e) => return fail(e.to_string()),
    };
    let gcfg = graph_config(cfg, seed).with_precession();
    let mut timings = Timings::default();

    let targets = sub_targets();
    let seqs = match sub_distance(&m, &targets, &SUB_EPS_SCHEDULE, &gcfg) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    timings.distance_s = start.elapsed().as_secs_f64();

    let t_vol = Instant::now();
    let eps = *SUB_EPS_SCHEDULE.last().expect("non-empty");
    let g = match m.epsilon_truncate(eps) {
        Ok(g) => g,
        Err(e) => return fail(e.to_string()),
    };
    let model = p.model();
    let field = match build_distance_field(&g, &gcfg) {
        Ok(f) => f,
        Err(e) => return fail(e.to_string()),
    };
    let diam = diameter_estimate(&field);
    let (dlo, dhi) = diameter_window(1.0);
    let curve = match estimate_curve(&field, &cfg.r_grid.grid(params)) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let d_hat = match doubling_estimate(&curve) {
        Ok(d) => Verdict::at_most(Some(d), DOUBLING_BOUND),
        Err(e) => Verdict::missing(e.to_string(), None, Some(DOUBLING_BOUND)),
    };
    let heisenberg_slope = match heisenberg_slope(&g, &gcfg, &model, cfg.r_grid.lo_factor * a1) {
        Ok(v) => v,
        Err(e) => Verdict::missing(e.to_string(), None, None),
    };
    timings.volume_s = t_vol.elapsed().as_secs_f64();
    timings.total_s = start.elapsed().as_secs_f64();

    let sequences: Vec<SubSequence> = targets
        .iter()
        .zip(&seqs)
        .map(|(x, s)| SubSequence {
            target: x.to_array(),
            sequence: s.sequence.clone(),
            monotone: s.monotone,
        })
        .collect();
    SubOutput {
        report: SubReport {
            index,
            params: p,
            seed,
            fingerprint: fp,
            failure: None,
            eps_schedule: SUB_EPS_SCHEDULE.to_vec(),
            monotone: sequences.iter().all(|s| s.monotone),
            sequences,
            heisenberg_slope,
            d_hat,
            diameter: Verdict::within(Some(diam), Some(dlo), Some(dhi)),
            timings,
        },
        curve: Some(curve),
    }
}

/// Log-log slope over the Heisenberg regime of a slab field around the
/// horizontal plane, against `4 ± 0.4`.
pub fn heisenberg_slope(
    g: &MetricSpec,
    gcfg: &GraphConfig,
    model: &VolumeModel<f64>,
    r_lo: f64,
) -> su2geom::Result<Verdict> {
    let cfg = gcfg.clone().localized(SLAB_RADIUS).slab(SLAB_HALF_WIDTH);
    let field = build_distance_field(g, &cfg)?;
    let valid = field.valid_radius();
    let grid: Vec<f64> = log_grid(r_lo, valid, 24)
        .into_iter()
        .filter(|r| *r <= valid)
        .collect();
    let curve = estimate_curve(&field, &grid)?;
    let s = regime_slopes(&curve, model)
        .into_iter()
        .find(|s| s.branch == Branch::Heisenberg);
    let (lo, hi) = (4.0 - HEISENBERG_SLOPE_TOLERANCE, 4.0 + HEISENBERG_SLOPE_TOLERANCE);
    Ok(match s.and_then(|s| s.slope.map(|v| (v, s.r_range))) {
        Some((v, range)) => {
            let v = Verdict::within(Some(v), Some(lo), Some(hi));
            match range {
                Some((a, b)) => v.with_note(format!("fit on r in [{a:.4}, {b:.4}], valid radius {valid:.4}")),
                None => v,
            }
        }
        None => Verdict::missing("too few gated radii in the regime", Some(lo), Some(hi)),
    })
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
) -> Result<(), SweepError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), SweepError> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(std::io::Error::other)?;
        writeln!(w)
    })
}

pub fn point_dir(out: &Path, i: usize, j: usize) -> PathBuf {
    out.join("points").join(format!("p{i}_{j}"))
}

pub fn sub_dir(out: &Path, i: usize) -> PathBuf {
    out.join("sub").join(format!("s{i}"))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Option<T> {
    let text = fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn store_point(dir: &Path, out: &PointOutput) -> Result<(), SweepError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    if let Some(c) = &out.curve {
        let model = out.report.params.model();
        write_file(&dir.join("curve.csv"), |w| c.write_csv(&model, w))?;
    }
    if let Some(t) = &out.spectrum {
        let mut head = t.clone();
        head.entries.truncate(SPECTRUM_CSV_ROWS);
        write_file(&dir.join("spectrum.csv"), |w| head.write_csv(w))?;
    }
    // The report goes last: its presence marks the point as complete.
    write_json(&dir.join("report.json"), &out.report)
}

fn store_sub(dir: &Path, out: &SubOutput) -> Result<(), SweepError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    if let Some(c) = &out.curve {
        let model = out.report.params.model();
        write_file(&dir.join("curve.csv"), |w| c.write_csv(&model, w))?;
    }
    write_json(&dir.join("report.json"), &out.report)
}

/// Result of a sweep.
pub struct SweepOutcome {
    pub reports: Vec<MetricReport>,
    pub subs: Vec<SubReport>,
    pub aggregate: Aggregate,
    /// Grid points whose stored report was reused.
    pub reused: usize,
}

/// Runs every grid point on a pool of `workers` threads (all cores when
/// `None`), reusing stored reports with a matching fingerprint, then writes
/// `aggregate.json` and the plots.
pub fn run_sweep(cfg: &SweepConfig, workers: Option<usize>) -> Result<SweepOutcome, SweepError> {
    let start = Instant::now();
    let out = cfg.output_dir.as_path();
    fs::create_dir_all(out).map_err(io_err(out))?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build()?;

    let points = cfg.grid_points();
    let results: Vec<Result<(MetricReport, bool), SweepError>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(i, j, params)| {
                let seed = point_seed(cfg.seed, i as u32, j as u32);
                let dir = point_dir(out, i, j);
                let fp = fingerprint(cfg, params, seed);
                if let Some(r) = read_json::<MetricReport>(&dir.join("report.json")) {
                    if r.fingerprint == fp {
                        return Ok((r, true));
                    }
                }
                let res = analyze_point(cfg, (i, j), params, seed);
                store_point(&dir, &res)?;
                Ok((res.report, false))
            })
            .collect()
    });
    let mut reports = Vec::with_capacity(results.len());
    let mut reused = 0;
    for r in results {
        let (rep, was_reused) = r?;
        reused += was_reused as usize;
        reports.push(rep);
    }

    let mut subs = Vec::new();
    if cfg.include_subriemannian {
        let results: Vec<Result<SubReport, SweepError>> = pool.install(|| {
            cfg.a1_grid
                .par_iter()
                .enumerate()
                .map(|(i, &a1)| {
                    // Column index u32::MAX keeps these seeds apart from the grid.
                    let seed = point_seed(cfg.seed, i as u32, u32::MAX);
                    let dir = sub_dir(out, i);
                    let fp = fingerprint(cfg, [a1, 1.0, f64::INFINITY], seed);
                    if let Some(r) = read_json::<SubReport>(&dir.join("report.json")) {
                        if r.fingerprint == fp {
                            return Ok(r);
                        }
                    }
                    let res = analyze_subriemannian(cfg, i, a1, seed);
                    store_sub(&dir, &res)?;
                    Ok(res.report)
                })
                .collect()
        });
        for r in results {
            subs.push(r?);
        }
    }

    let agg = aggregate(&reports, &subs, start.elapsed().as_secs_f64());
    write_json(&out.join("aggregate.json"), &agg)?;
    let stored = load_curves(out, &reports, &subs);
    crate::plot::emit_plots(&stored, &out.join("plots")).map_err(io_err(out))?;
    Ok(SweepOutcome {
        reports,
        subs,
        aggregate: agg,
        reused,
    })
}

/// One row of `curve.csv`.
#[derive(Clone, Debug, Deserialize)]
pub struct CurveRow {
    pub r: f64,
    pub v_hat: f64,
    pub stderr: f64,
    pub v_model: f64,
    pub ratio: f64,
}

pub fn read_curve(path: &Path) -> Option<Vec<CurveRow>> {
    let mut rdr = csv::Reader::from_path(path).ok()?;
    rdr.deserialize().collect::<Result<Vec<CurveRow>, _>>().ok()
}

/// A report with its stored curve, as used by the plots.
pub struct StoredPoint {
    pub params: Params,
    pub label: String,
    pub d_hat: Option<f64>,
    pub diameter: Option<f64>,
    pub lambda1: Option<f64>,
    pub grid_index: Option<(usize, usize)>,
    pub curve: Option<Vec<CurveRow>>,
}

fn load_curves(out: &Path, reports: &[MetricReport], subs: &[SubReport]) -> Vec<StoredPoint> {
    let mut v: Vec<StoredPoint> = reports
        .iter()
        .map(|r| StoredPoint {
            params: r.params,
            label: format!("p{}_{}", r.index.0, r.index.1),
            d_hat: r.d_hat.value,
            diameter: r.diameter.value,
            lambda1: r.lambda1_spectral,
            grid_index: Some(r.index),
            curve: if r.failure.is_none() {
                read_curve(&point_dir(out, r.index.0, r.index.1).join("curve.csv"))
            } else {
                None
            },
        })
        .collect();
    v.extend(subs.iter().map(|s| StoredPoint {
        params: s.params,
        label: format!("s{}", s.index),
        d_hat: s.d_hat.value,
        diameter: s.diameter.value,
        lambda1: None,
        grid_index: None,
        curve: read_curve(&sub_dir(out, s.index).join("curve.csv")),
    }));
    v
}

/// Reads every stored report under `dir`, rebuilds the aggregate and writes
/// it with the plots to `out`.
pub fn regenerate(dir: &Path, out: &Path) -> Result<Aggregate, SweepError> {
    let mut reports: Vec<MetricReport> = Vec::new();
    let mut subs: Vec<SubReport> = Vec::new();
    for (sub, is_sub) in [("points", false), ("sub", true)] {
        let root = dir.join(sub);
        let Ok(entries) = fs::read_dir(&root) else {
            continue;
        };
        let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for p in paths {
            let file = p.join("report.json");
            if is_sub {
                if let Some(r) = read_json::<SubReport>(&file) {
                    subs.push(r);
                }
            } else if let Some(r) = read_json::<MetricReport>(&file) {
                reports.push(r);
            }
        }
    }
    reports.sort_by_key(|r| r.index);
    subs.sort_by_key(|s| s.index);
    fs::create_dir_all(out).map_err(io_err(out))?;
    let total = reports.iter().map(|r| r.timings.total_s).sum::<f64>()
        + subs.iter().map(|s| s.timings.total_s).sum::<f64>();
    let agg = aggregate(&reports, &subs, total);
    write_json(&out.join("aggregate.json"), &agg)?;
    let stored = load_curves(dir, &reports, &subs);
    crate::plot::emit_plots(&stored, &out.join("plots")).map_err(io_err(out))?;
    Ok(agg)
}

/// `V̄(r)` and its branch for the CLI.
pub fn model_at(params: [f64; 3], r: f64) -> su2geom::Result<(f64, Branch)> {
    let model = VolumeModel::new(params[0], params[1], params[2].is_finite().then_some(params[2]))?;
    Ok((model_volume(&model, &r), model.branch(&r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_config(dir: &Path) -> SweepConfig {
        SweepConfig::from_json(&format!(
            r#"{{"a1_grid": [1.0], "a3_grid": [1.0], "n_samples": 3000, "seed": 4, "output_dir": {:?}}}"#,
            dir.to_str().unwrap()
        ))
        .unwrap()
    }

    fn read(dir: &Path, name: &str) -> Vec<u8> {
        fs::read(dir.join("points/p0_0").join(name)).unwrap()
    }

    #[test]
    fn round_point_is_deterministic_and_resumable() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let first = run_sweep(&round_config(a.path()), Some(2)).unwrap();
        run_sweep(&round_config(b.path()), Some(1)).unwrap();
        for name in ["curve.csv", "spectrum.csv"] {
            assert_eq!(read(a.path(), name), read(b.path(), name), "{name} differs");
        }

        let r = &first.reports[0];
        assert!(r.failure.is_none());
        assert!((r.lambda1_spectral.unwrap() - 0.75).abs() < 1e-12);
        let diam = r.diameter.value.unwrap();
        assert!(
            (diam / (2.0 * std::f64::consts::PI) - 1.0).abs() < 0.03,
            "diameter {diam}"
        );
        assert!(a.path().join("plots").read_dir().unwrap().count() >= 3);

        fs::remove_file(a.path().join("aggregate.json")).unwrap();
        let again = run_sweep(&round_config(a.path()), None).unwrap();
        assert_eq!(again.reused, 1);
        assert_eq!(again.reports[0].d_hat, r.d_hat);
        assert!(a.path().join("aggregate.json").exists());
    }

    #[test]
    fn changed_settings_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        run_sweep(&round_config(dir.path()), None).unwrap();
        let mut cfg = round_config(dir.path());
        cfg.seed = 5;
        assert_eq!(run_sweep(&cfg, None).unwrap().reused, 0);
    }
}
