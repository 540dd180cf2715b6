use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use su2geom::distance::{build_distance_field, refine_distance, round_distance, GraphConfig};
use su2geom::spectrum::{lambda1_exact, spectrum_table};
use su2geom::volume::{doubling_estimate, estimate_curve, ratio_band, VolumeModel};
use su2geom_harness::config::{RGridSpec, SweepConfig};
use su2geom_harness::params::{metric_from, parse_params, parse_point};
use su2geom_harness::sweep::{model_at, regenerate, run_sweep};

const EXIT_CONFIG: u8 = 2;
const EXIT_POINT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(name = "su2geom", about = "Geometry of left-invariant metrics on SU(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline over the configured (a1, 1, a3) grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides the master seed of the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte Carlo ball volumes around the identity, written as CSV.
    Volume {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Keep the neighbour-graph anisotropy gate.
        #[arg(long)]
        gate: bool,
    },
    /// Laplacian spectrum through spin `jmax`, written as CSV.
    Spectrum {
        #[command(flatten)]
        metric: MetricArgs,
        /// Largest spin, an integer or half-integer.
        #[arg(long, default_value_t = 10.0)]
        jmax: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Graph and refined distance from the identity to a point.
    Distance {
        #[command(flatten)]
        metric: MetricArgs,
        /// Unit quaternion q0,q1,q2,q3.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The volume model and its branch at radius `r`.
    Model {
        #[arg(long)]
        params: String,
        #[arg(long)]
        r: f64,
    },
    /// Rebuilds the aggregate and plots from a sweep directory.
    Report {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Either sorted parameters `a1,a2,a3` (any values, `inf` allowed) or a raw
/// 3×3 form in the Pauli basis.
#[derive(clap::Args)]
struct MetricArgs {
    #[arg(long)]
    params: Option<String>,
    /// Nine row-major entries of the quadratic form.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::FAILURE
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("config error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("plain data"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep {
            config,
            workers,
            seed,
        } => {
            let mut cfg = match SweepConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            match run_sweep(&cfg, workers) {
                Ok(out) => {
                    print_json(&out.aggregate);
                    eprintln!(
                        "{} points ({} reused), output in {}",
                        out.reports.len(),
                        out.reused,
                        cfg.output_dir.display()
                    );
                    if out.aggregate.failures.is_empty() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_POINT_FAILURE)
                    }
                }
                Err(e) => fail(e),
            }
        }
        Command::Volume {
            metric,
            n,
            k,
            seed,
            out,
            gate,
        } => {
            let m = match metric_from(metric.params.as_deref(), metric.q.as_deref()) {
                Ok(m) => m,
                Err(e) => return config_error(e),
            };
            let mut gcfg = GraphConfig::new(n, k, seed);
            if !gate {
                gcfg = gcfg.without_gate();
            }
            let model = match VolumeModel::from_metric(&m) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let result = build_distance_field(&m, &gcfg).and_then(|f| {
                let curve = estimate_curve(&f, &RGridSpec::default().grid(m.params()))?;
                Ok((f, curve))
            });
            let (field, curve) = match result {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let written = File::create(&out).and_then(|f| curve.write_csv(&model, BufWriter::new(f)));
            if let Err(e) = written {
                return fail(format!("{}: {e}", out.display()));
            }
            match doubling_estimate(&curve) {
                Ok(d) => println!("doubling estimate: {d:.4}"),
                Err(e) => println!("doubling estimate: unavailable ({e})"),
            }
            if let Ok((lo, hi)) = ratio_band(&curve, &model) {
                println!("ratio band v/V̄: [{lo:.4}, {hi:.4}]");
            }
            println!("graph tolerance: {:.4}", field.tol());
            ExitCode::SUCCESS
        }
        Command::Spectrum { metric, jmax, out } => {
            let m = match metric_from(metric.params.as_deref(), metric.q.as_deref()) {
                Ok(m) => m,
                Err(e) => return config_error(e),
            };
            let two_j = 2.0 * jmax;
            if !(two_j >= 0.0 && two_j.fract() == 0.0) {
                return config_error(format!("jmax = {jmax} is not a non-negative half-integer"));
            }
            let table = match spectrum_table(&m, two_j as u32) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let written = File::create(&out).and_then(|f| table.write_csv(BufWriter::new(f)));
            if let Err(e) = written {
                return fail(format!("{}: {e}", out.display()));
            }
            if let Some(l) = table.lambda1() {
                println!("lambda1 (spectral): {l:.12}");
            }
            if let Ok(l) = lambda1_exact(&m) {
                println!("lambda1 (closed form): {l:.12}");
            }
            println!(
                "entries: {}, multiplicity total: {}",
                table.entries.len(),
                table.total_multiplicity()
            );
            ExitCode::SUCCESS
        }
        Command::Distance {
            metric,
            point,
            n,
            k,
            seed,
        } => {
            let m = match metric_from(metric.params.as_deref(), metric.q.as_deref()) {
                Ok(m) => m,
                Err(e) => return config_error(e),
            };
            let x = match parse_point(&point) {
                Ok(x) => x,
                Err(e) => return config_error(e),
            };
            let field = match build_distance_field(&m, &GraphConfig::new(n, k, seed).without_gate()) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let graph = field.distance_to(x);
            let refined = refine_distance(&m, x, graph);
            let d111 = round_distance(x);
            println!("graph estimate:   {graph:.9}");
            println!("refined estimate: {refined:.9}");
            println!("graph tolerance:  {:.4}", field.tol());
            println!("lower bound a1·d111: {:.9}", m.a1() * d111);
            println!("upper bound a3·d111: {:.9}", m.a3() * d111);
            ExitCode::SUCCESS
        }
        Command::Model { params, r } => {
            let p = match parse_params(&params) {
                Ok(p) => p,
                Err(e) => return config_error(e),
            };
            match model_at(p, r) {
                Ok((v, b)) => {
                    println!("V̄({r}) = {v:.12e}");
                    println!("branch {} ({b}, exponent {})", b.id(), b.exponent());
                    ExitCode::SUCCESS
                }
                Err(e) => config_error(e),
            }
        }
        Command::Report { dir, out } => match regenerate(&dir, &out) {
            Ok(agg) => {
                print_json(&agg);
                if agg.failures.is_empty() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_POINT_FAILURE)
                }
            }
            Err(e) => fail(e),
        },
    }
}
