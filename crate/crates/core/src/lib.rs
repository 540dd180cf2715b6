//! Left-invariant Riemannian and sub-Riemannian geometry on SU(2).
//!
//! Group elements are unit quaternions, algebra elements are coordinates in the
//! Pauli Milnor basis `{e1, e2, e3}` with `[e1, e2] = e3` cyclically. Metrics are
//! parametrized by `a1 <= a2 <= a3 <= inf`. On top of this the crate estimates
//! distances (neighbour graphs plus geodesic shooting), Haar ball volumes, and
//! Laplacian spectra through Peter–Weyl.

pub mod algebra;
pub mod distance;
pub mod error;
pub mod linalg;
pub mod matrix2;
pub mod metric;
pub mod sampling;
pub mod scalar;
pub mod spectrum;
pub mod volume;

pub use algebra::{bracket, exp, log};
pub use error::{Error, Result};
pub use metric::MetricKind;
pub use scalar::{Field, Real};

/// Double-precision group element.
pub type GroupElement = algebra::GroupElement<f64>;
/// Double-precision algebra vector.
pub type AlgebraVector = algebra::AlgebraVector<f64>;
/// Double-precision metric.
pub type MetricSpec = metric::MetricSpec<f64>;

pub type GroupElementF32 = algebra::GroupElement<f32>;
pub type AlgebraVectorF32 = algebra::AlgebraVector<f32>;
pub type MetricSpecF32 = metric::MetricSpec<f32>;
