//! Scalar abstractions.
//!
//! Geometry (quaternions, metrics, eigen-solvers) runs over any IEEE float
//! through [`Real`]. The piecewise volume and counting models only need field
//! arithmetic and an order, so they run over [`Field`], which also covers
//! exact rationals.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// Floating point: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Below this |ρ| the `sin ρ / ρ` style quotients switch to Taylor series.
    const SERIES_THRESHOLD: f64 = 1e-4;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Machine epsilon as an `f64`, used to scale tolerances for f32.
    fn eps_f64() -> f64 {
        Self::epsilon().to_f64().unwrap_or(f64::EPSILON)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field arithmetic: floats and exact rationals.
pub trait Field: Num + Clone + PartialOrd + Debug {}

impl<T: Num + Clone + PartialOrd + Debug> Field for T {}

/// Integer power by repeated multiplication; exact for rationals.
pub fn powi<T: Field>(x: &T, n: u32) -> T {
    let mut acc = T::one();
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}

/// Smaller of two partially ordered values (first wins on ties or NaN).
pub fn min_of<T: Field>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn powi_rational_is_exact() {
        let x = BigRational::new(3.into(), 7.into());
        assert_eq!(powi(&x, 4), BigRational::new(81.into(), 2401.into()));
        assert_eq!(powi(&2.0_f64, 10), 1024.0);
        assert_eq!(powi(&x, 0), BigRational::from_integer(1.into()));
    }

    #[test]
    fn lit_roundtrip() {
        assert_eq!(<f32 as Real>::lit(0.5), 0.5_f32);
        assert!(<f32 as Real>::eps_f64() > <f64 as Real>::eps_f64());
    }
}
