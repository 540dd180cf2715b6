//! 2×2 complex realization of SU(2) and su(2).
//!
//! Only used as an independent oracle for the quaternion code.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::algebra::{AlgebraVector, GroupElement};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Mat2<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { m: [[z, z], [z, z]] }
    }

    pub fn identity() -> Self {
        Self::scalar(T::one())
    }

    pub fn scalar(s: T) -> Self {
        let mut out = Self::zero();
        out.m[0][0] = Complex::new(s, T::zero());
        out.m[1][1] = Complex::new(s, T::zero());
        out
    }

    /// Pauli Milnor basis element `e_i`.
    pub fn pauli(i: usize) -> Self {
        let h = T::lit(0.5);
        let z = T::zero();
        let c = |re: T, im: T| Complex::new(re, im);
        let m = match i {
            1 => [[c(z, z), c(z, -h)], [c(z, -h), c(z, z)]],
            2 => [[c(z, z), c(-h, z)], [c(h, z), c(z, z)]],
            3 => [[c(z, -h), c(z, z)], [c(z, z), c(z, h)]],
            _ => panic!("basis index must be 1, 2 or 3"),
        };
        Self { m }
    }

    pub fn from_algebra(v: AlgebraVector<T>) -> Self {
        Self::pauli(1).scale(v.x1) + Self::pauli(2).scale(v.x2) + Self::pauli(3).scale(v.x3)
    }

    pub fn from_group(x: GroupElement<T>) -> Self {
        let two = T::lit(2.0);
        Self::scalar(x.q0)
            + Self::pauli(1).scale(two * x.q1)
            + Self::pauli(2).scale(two * x.q2)
            + Self::pauli(3).scale(two * x.q3)
    }

    /// Reads back the quaternion of a matrix of the form `q0·I + Σ qᵢ·2eᵢ`.
    pub fn to_group(self) -> GroupElement<T> {
        let m = self.m;
        let h = T::lit(0.5);
        GroupElement::new(
            (m[0][0].re + m[1][1].re) * h,
            -(m[0][1].im + m[1][0].im) * h,
            (m[1][0].re - m[0][1].re) * h,
            (m[1][1].im - m[0][0].im) * h,
        )
    }

    /// Reads back Milnor coordinates of a traceless skew-Hermitian matrix.
    pub fn to_algebra(self) -> AlgebraVector<T> {
        let g = self.to_group();
        let two = T::lit(2.0);
        AlgebraVector::new(two * g.q1, two * g.q2, two * g.q3)
    }

    pub fn scale(self, s: T) -> Self {
        let mut out = self;
        for row in out.m.iter_mut() {
            for c in row.iter_mut() {
                *c = *c * s;
            }
        }
        out
    }

    pub fn det(self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }

    pub fn max_abs_diff(self, other: Self) -> T {
        let mut d = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }

    /// Truncated power series `Σ_{n<terms} Aⁿ/n!`.
    pub fn exp_series(self, terms: usize) -> Self {
        let mut acc = Self::identity();
        let mut term = Self::identity();
        for n in 1..terms {
            term = (term * self).scale(T::one() / T::from_usize(n).unwrap());
            acc = acc + term;
        }
        acc
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][j] + o.m[i][j];
            }
        }
        out
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-T::one())
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn milnor_identities_for_pauli_basis() {
        let e = |i| Mat2::<f64>::pauli(i);
        let quarter = Mat2::scalar(-0.25);
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            assert_eq!(e(i) * e(i), quarter);
            assert_eq!(e(i) * e(j), e(k).scale(0.5));
            assert_eq!(e(i) * e(j) + e(j) * e(i), Mat2::zero());
            assert_eq!(e(i).commutator(e(j)), e(k));
        }
    }

    #[test]
    fn group_roundtrip() {
        let x = GroupElement::new(0.5_f64, 0.5, -0.5, 0.5);
        assert_eq!(Mat2::from_group(x).to_group(), x);
        assert!((Mat2::from_group(x).det().re - 1.0).abs() < 1e-15);
    }
}
