//! Sweeps over the `(a1, 1, a3)` grid, self-describing JSON reports, CSV
//! curves and spectra, static SVG plots.

pub mod config;
pub mod params;
pub mod plot;
pub mod report;
pub mod sweep;

pub use config::{ConfigError, SweepConfig};
pub use report::{Aggregate, MetricReport, SubReport, Verdict};
pub use sweep::{run_sweep, SweepOutcome};
