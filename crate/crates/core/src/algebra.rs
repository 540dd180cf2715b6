//! SU(2) and su(2) in quaternion form.
//!
//! A group element `x = q0·I + q1·(2e₁) + q2·(2e₂) + q3·(2e₃)` is stored as the
//! unit quaternion `(q0, q1, q2, q3)`, where `{e₁, e₂, e₃}` is the Pauli
//! standard Milnor basis. The scaled elements `2eᵢ` multiply like the
//! quaternion units `i, j, k`. An algebra element `x1·e₁ + x2·e₂ + x3·e₃` is
//! stored by its three coordinates; the bracket is the cross product.
//!
//! Near ρ = 0 the quotients `sin ρ / ρ` and `ρ / sin ρ` are evaluated with a
//! five-term Taylor series.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point of SU(2) as a unit quaternion.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct GroupElement<T> {
    pub q0: T,
    pub q1: T,
    pub q2: T,
    pub q3: T,
}

/// An element of su(2) in Milnor coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct AlgebraVector<T> {
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

impl<T: Real> AlgebraVector<T> {
    pub fn new(x1: T, x2: T, x3: T) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// The Milnor basis vector `e_i`, `i ∈ {1, 2, 3}`.
    pub fn basis(i: usize) -> Self {
        let mut v = [T::zero(); 3];
        v[i - 1] = T::one();
        Self::from_array(v)
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn dot(self, other: Self) -> T {
        self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    /// Norm for the negative Killing form (the Milnor basis is orthonormal).
    pub fn killing_norm(self) -> T {
        self.dot(self).sqrt()
    }

    /// ρ = ½·|x|, so that ρ² = det of the 2×2 realization.
    pub fn rho(self) -> T {
        self.killing_norm() / T::lit(2.0)
    }

    pub fn scale(self, c: T) -> Self {
        Self::new(self.x1 * c, self.x2 * c, self.x3 * c)
    }

    pub fn max_abs_diff(self, other: Self) -> T {
        (self.x1 - other.x1)
            .abs()
            .max((self.x2 - other.x2).abs())
            .max((self.x3 - other.x3).abs())
    }
}

impl<T: Real> Add for AlgebraVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl<T: Real> Sub for AlgebraVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl<T: Real> Neg for AlgebraVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl<T: Real> GroupElement<T> {
    pub fn new(q0: T, q1: T, q2: T, q3: T) -> Self {
        Self { q0, q1, q2, q3 }
    }

    /// Builds an element and rejects inputs that are not unit-norm within `1e-9`.
    pub fn try_new(q0: T, q1: T, q2: T, q3: T) -> Result<Self> {
        let x = Self::new(q0, q1, q2, q3);
        let dev = (x.norm() - T::one()).abs();
        if !(dev <= T::lit(1e-9).max(T::epsilon() * T::lit(64.0))) {
            return Err(Error::InvalidInput(format!(
                "quaternion norm deviates from 1 by {dev}"
            )));
        }
        Ok(x)
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    /// −I, the unique element whose logarithm is not unique.
    pub fn minus_identity() -> Self {
        Self::new(-T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [T; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn norm(self) -> T {
        (self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3).sqrt()
    }

    pub fn renormalize(self) -> Self {
        let n = self.norm();
        Self::new(self.q0 / n, self.q1 / n, self.q2 / n, self.q3 / n)
    }

    pub fn inverse(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    /// tr x = 2·q0.
    pub fn trace(self) -> T {
        self.q0 + self.q0
    }

    /// Quaternion product without renormalization.
    pub fn mul_unnormalized(self, y: Self) -> Self {
        let x = self;
        Self::new(
            x.q0 * y.q0 - x.q1 * y.q1 - x.q2 * y.q2 - x.q3 * y.q3,
            x.q0 * y.q1 + x.q1 * y.q0 + (x.q2 * y.q3 - x.q3 * y.q2),
            x.q0 * y.q2 + x.q2 * y.q0 + (x.q3 * y.q1 - x.q1 * y.q3),
            x.q0 * y.q3 + x.q3 * y.q0 + (x.q1 * y.q2 - x.q2 * y.q1),
        )
    }

    /// Group product `x·y`, renormalized.
    pub fn multiply(self, y: Self) -> Self {
        self.mul_unnormalized(y).renormalize()
    }

    /// `x⁻¹·y`. Swapping the arguments yields exactly the inverse, bit for bit.
    pub fn relative(self, y: Self) -> Self {
        let x = self;
        let s = x.q0 * y.q0 + x.q1 * y.q1 + x.q2 * y.q2 + x.q3 * y.q3;
        let v1 = (x.q0 * y.q1 - y.q0 * x.q1) - (x.q2 * y.q3 - x.q3 * y.q2);
        let v2 = (x.q0 * y.q2 - y.q0 * x.q2) - (x.q3 * y.q1 - x.q1 * y.q3);
        let v3 = (x.q0 * y.q3 - y.q0 * x.q3) - (x.q1 * y.q2 - x.q2 * y.q1);
        Self::new(s, v1, v2, v3)
    }

    /// Euclidean distance between quaternion representatives.
    pub fn quaternion_distance(self, other: Self) -> T {
        let d = [
            self.q0 - other.q0,
            self.q1 - other.q1,
            self.q2 - other.q2,
            self.q3 - other.q3,
        ];
        d.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt()
    }

    pub fn is_near_minus_identity(self, tol: T) -> bool {
        self.quaternion_distance(Self::minus_identity()) < tol
    }

    fn vector_norm(self) -> T {
        (self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3).sqrt()
    }
}

impl<T: Real> Mul for GroupElement<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(rhs)
    }
}

/// `sin ρ / ρ`.
pub fn sinc<T: Real>(rho: T) -> T {
    if rho.abs() < T::lit(T::SERIES_THRESHOLD) {
        let r2 = rho * rho;
        T::one()
            - r2 / T::lit(6.0)
                * (T::one()
                    - r2 / T::lit(20.0) * (T::one() - r2 / T::lit(42.0) * (T::one() - r2 / T::lit(72.0))))
    } else {
        rho.sin() / rho
    }
}

/// `ρ / sin ρ` for `ρ ∈ [0, π)`.
pub fn inv_sinc<T: Real>(rho: T) -> T {
    if rho.abs() < T::lit(T::SERIES_THRESHOLD) {
        let r2 = rho * rho;
        T::one()
            + r2 * (T::lit(1.0 / 6.0)
                + r2 * (T::lit(7.0 / 360.0) + r2 * (T::lit(31.0 / 15120.0) + r2 * T::lit(127.0 / 604800.0))))
    } else {
        rho / rho.sin()
    }
}

/// `exp(v) = cos ρ·I + (sin ρ / ρ)·v`.
pub fn exp<T: Real>(v: AlgebraVector<T>) -> GroupElement<T> {
    let rho = v.rho();
    let c = sinc(rho) / T::lit(2.0);
    GroupElement::new(rho.cos(), c * v.x1, c * v.x2, c * v.x3)
}

/// Principal logarithm with `ρ ∈ [0, π)`.
///
/// Fails with [`Error::Antipode`] within `1e-12` of −I.
pub fn log<T: Real>(x: GroupElement<T>) -> Result<AlgebraVector<T>> {
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    if x.is_near_minus_identity(tol) {
        return Err(Error::Antipode);
    }
    let s = x.vector_norm();
    // ρ = arccos(q0) for unit quaternions; atan2 keeps full precision near 0 and π.
    let rho = s.atan2(x.q0);
    let c = if rho < T::lit(T::SERIES_THRESHOLD) || s == T::zero() {
        inv_sinc(rho)
    } else {
        rho / s
    } * T::lit(2.0);
    Ok(AlgebraVector::new(c * x.q1, c * x.q2, c * x.q3))
}

/// Milnor bracket `[u, v]`, the cross product in Milnor coordinates.
pub fn bracket<T: Real>(u: AlgebraVector<T>, v: AlgebraVector<T>) -> AlgebraVector<T> {
    AlgebraVector::new(
        u.x2 * v.x3 - u.x3 * v.x2,
        u.x3 * v.x1 - u.x1 * v.x3,
        u.x1 * v.x2 - u.x2 * v.x1,
    )
}

/// 3×3 matrix of `Ad_y` in Milnor coordinates (row-major).
pub fn adjoint_matrix<T: Real>(y: GroupElement<T>) -> [[T; 3]; 3] {
    let y = y.renormalize();
    let (w, a, b, c) = (y.q0, y.q1, y.q2, y.q3);
    let two = T::lit(2.0);
    let one = T::one();
    [
        [
            one - two * (b * b + c * c),
            two * (a * b - w * c),
            two * (a * c + w * b),
        ],
        [
            two * (a * b + w * c),
            one - two * (a * a + c * c),
            two * (b * c - w * a),
        ],
        [
            two * (a * c - w * b),
            two * (b * c + w * a),
            one - two * (a * a + b * b),
        ],
    ]
}

/// Some `y` with `adjoint_matrix(y) = r` for a rotation `r` (the sign of `y` is arbitrary).
pub fn from_rotation<T: Real>(r: &[[T; 3]; 3]) -> GroupElement<T> {
    let one = T::one();
    let quarter = T::lit(0.25);
    let two = T::lit(2.0);
    let tr = r[0][0] + r[1][1] + r[2][2];
    let q = if tr > T::zero() {
        let s = (tr + one).sqrt() * two;
        GroupElement::new(
            quarter * s,
            (r[2][1] - r[1][2]) / s,
            (r[0][2] - r[2][0]) / s,
            (r[1][0] - r[0][1]) / s,
        )
    } else if r[0][0] >= r[1][1] && r[0][0] >= r[2][2] {
        let s = (one + r[0][0] - r[1][1] - r[2][2]).sqrt() * two;
        GroupElement::new(
            (r[2][1] - r[1][2]) / s,
            quarter * s,
            (r[0][1] + r[1][0]) / s,
            (r[0][2] + r[2][0]) / s,
        )
    } else if r[1][1] >= r[2][2] {
        let s = (one + r[1][1] - r[0][0] - r[2][2]).sqrt() * two;
        GroupElement::new(
            (r[0][2] - r[2][0]) / s,
            (r[0][1] + r[1][0]) / s,
            quarter * s,
            (r[1][2] + r[2][1]) / s,
        )
    } else {
        let s = (one + r[2][2] - r[0][0] - r[1][1]).sqrt() * two;
        GroupElement::new(
            (r[1][0] - r[0][1]) / s,
            (r[0][2] + r[2][0]) / s,
            (r[1][2] + r[2][1]) / s,
            quarter * s,
        )
    };
    q.renormalize()
}

/// `Ad_y v = y·v·y⁻¹`.
pub fn adjoint<T: Real>(y: GroupElement<T>, v: AlgebraVector<T>) -> AlgebraVector<T> {
    let m = adjoint_matrix(y);
    let x = v.to_array();
    let row = |r: [T; 3]| r[0] * x[0] + r[1] * x[1] + r[2] * x[2];
    AlgebraVector::new(row(m[0]), row(m[1]), row(m[2]))
}

/// One-parameter subgroup `exp(s·e_i)`.
pub fn exp_axis<T: Real>(i: usize, s: T) -> GroupElement<T> {
    exp(AlgebraVector::basis(i).scale(s))
}

/// `H(u, v) = exp(−u e₁)·exp(−v e₂)·exp(u e₁)·exp(v e₂)` as a product of exponentials.
pub fn commutator_h<T: Real>(u: T, v: T) -> GroupElement<T> {
    exp_axis(1, -u)
        .mul_unnormalized(exp_axis(2, -v))
        .mul_unnormalized(exp_axis(1, u))
        .mul_unnormalized(exp_axis(2, v))
        .renormalize()
}

/// Closed-form trigonometric expression for `H(u, v)`.
pub fn commutator_h_closed_form<T: Real>(u: T, v: T) -> GroupElement<T> {
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    let one = T::one();
    let half = T::lit(0.5);
    // Coefficients of I, e₁, e₂, e₃; quaternion components are half the eᵢ coefficients.
    let c0 = half * ((one + cu) + cv * (one - cu));
    let c1 = -((one - cv) * su);
    let c2 = sv * (one - cu);
    let c3 = sv * su;
    GroupElement::new(c0, half * c1, half * c2, half * c3)
}

/// `h(u, v) = log H(u, v) / (uv)`, continuously extended to the axes.
pub fn commutator_h_normalized<T: Real>(u: T, v: T) -> Result<AlgebraVector<T>> {
    let tiny = T::lit(1e-9);
    if u.abs() < tiny && v.abs() < tiny {
        return Ok(AlgebraVector::basis(3));
    }
    if u.abs() < tiny {
        // ∂_u log H at u = 0, divided by v.
        let (sv, cv) = v.sin_cos();
        return Ok(AlgebraVector::new((cv - T::one()) / v, T::zero(), sv / v));
    }
    if v.abs() < tiny {
        let (su, cu) = u.sin_cos();
        return Ok(AlgebraVector::new(T::zero(), (T::one() - cu) / u, su / u));
    }
    Ok(log(commutator_h(u, v))?.scale(T::one() / (u * v)))
}

/// Coordinates of the second kind, `exp(y1 e₁)·exp(y2 e₂)·exp(y3 e₃)`.
pub fn coords_second_kind<T: Real>(y1: T, y2: T, y3: T) -> GroupElement<T> {
    exp_axis(1, y1)
        .mul_unnormalized(exp_axis(2, y2))
        .mul_unnormalized(exp_axis(3, y3))
        .renormalize()
}

/// Coordinates of the first kind, `exp(x1 e₁ + x2 e₂ + x3 e₃)`.
pub fn coords_first_kind<T: Real>(x1: T, x2: T, x3: T) -> GroupElement<T> {
    exp(AlgebraVector::new(x1, x2, x3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: GroupElement<f64>, b: GroupElement<f64>, tol: f64) -> bool {
        a.quaternion_distance(b) < tol
    }

    #[test]
    fn identity_is_neutral() {
        let x = exp(AlgebraVector::new(0.3, -1.2, 0.7));
        assert!(close(GroupElement::identity() * x, x, 1e-15));
        assert!(close(x * GroupElement::identity(), x, 1e-15));
    }

    #[test]
    fn scaled_pauli_products() {
        let i = GroupElement::new(0.0, 1.0, 0.0, 0.0);
        let j = GroupElement::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(i * i, GroupElement::new(-1.0, 0.0, 0.0, 0.0));
        assert_eq!(i * j, GroupElement::new(0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn exp_special_values() {
        assert_eq!(exp(AlgebraVector::<f64>::zero()), GroupElement::identity());
        let x = exp(AlgebraVector::new(2.0 * PI, 0.0, 0.0));
        assert!(close(x, GroupElement::minus_identity(), 1e-15));
        let y = exp(AlgebraVector::new(PI, 0.0, 0.0));
        assert!(close(y, GroupElement::new(0.0, 1.0, 0.0, 0.0), 1e-15));
    }

    #[test]
    fn log_special_values() {
        assert_eq!(
            log(GroupElement::<f64>::identity()).unwrap(),
            AlgebraVector::zero()
        );
        let v = log(GroupElement::new(0.3_f64.cos(), 0.3_f64.sin(), 0.0, 0.0)).unwrap();
        assert!(v.max_abs_diff(AlgebraVector::new(0.6, 0.0, 0.0)) < 1e-15);
        assert_eq!(log(GroupElement::<f64>::minus_identity()), Err(Error::Antipode));
        let near = GroupElement::new(-1.0, 1e-13, 0.0, 0.0);
        assert_eq!(log(near), Err(Error::Antipode));
    }

    #[test]
    fn series_branch_is_continuous() {
        for &r in &[0.99e-4, 1.01e-4, 1e-6, 1e-9] {
            assert!((sinc(r) - (r as f64).sin() / r).abs() <= 2.0 * f64::EPSILON);
            assert!((inv_sinc(r) - r / (r as f64).sin()).abs() <= 2.0 * f64::EPSILON);
        }
        assert_eq!(sinc(0.0_f64), 1.0);
        let v = AlgebraVector::new(1e-5, -2e-5, 3e-6);
        let back = log(exp(v)).unwrap();
        assert!(back.max_abs_diff(v) < 1e-20);
    }

    #[test]
    fn rotation_roundtrip() {
        for v in [
            [0.3_f64, -0.2, 0.9],
            [3.0, 0.1, 0.0],
            [0.0, -3.1, 0.2],
            [0.1, 0.2, -3.05],
        ] {
            let y = exp(AlgebraVector::from_array(v));
            let r = adjoint_matrix(y);
            let back = adjoint_matrix(from_rotation(&r));
            for i in 0..3 {
                for j in 0..3 {
                    assert!((r[i][j] - back[i][j]).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn adjoint_rotates_e2_towards_e3() {
        for &s in &[0.0_f64, 0.4, 1.7, -2.9, 6.0] {
            let got = adjoint(exp_axis(1, s), AlgebraVector::basis(2));
            let want = AlgebraVector::new(0.0, s.cos(), s.sin());
            assert!(got.max_abs_diff(want) < 1e-15, "s = {s}");
        }
        let v = AlgebraVector::new(0.1, 0.2, 0.3);
        assert_eq!(adjoint(GroupElement::identity(), v), v);
    }

    #[test]
    fn bracket_relations() {
        let e = |i| AlgebraVector::<f64>::basis(i);
        assert_eq!(bracket(e(1), e(2)), e(3));
        assert_eq!(bracket(e(2), e(3)), e(1));
        assert_eq!(bracket(e(3), e(1)), e(2));
        let v = AlgebraVector::new(0.3, -0.1, 2.0);
        assert_eq!(bracket(v, v), AlgebraVector::zero());
    }

    #[test]
    fn commutator_special_values() {
        for &u in &[0.0, 0.5, 3.0, -1.0] {
            assert!(close(commutator_h(u, 0.0), GroupElement::identity(), 1e-15));
        }
        assert!(close(commutator_h(PI, PI), GroupElement::minus_identity(), 1e-15));
        assert!(close(
            commutator_h_closed_form(PI, PI),
            GroupElement::minus_identity(),
            1e-15
        ));
        let h = commutator_h_normalized(1e-3, 1e-3).unwrap();
        assert!(h.max_abs_diff(AlgebraVector::basis(3)) < 1e-3);
        assert_eq!(
            commutator_h_normalized(0.0, 0.0).unwrap(),
            AlgebraVector::basis(3)
        );
    }

    #[test]
    fn commutator_axis_limits_are_continuous() {
        let v = 0.8;
        let on_axis = commutator_h_normalized(0.0, v).unwrap();
        let near = commutator_h_normalized(1e-6, v).unwrap();
        assert!(on_axis.max_abs_diff(near) < 1e-5);
        let off = commutator_h_normalized(v, 1e-6).unwrap();
        let axis = commutator_h_normalized(v, 0.0).unwrap();
        assert!(off.max_abs_diff(axis) < 1e-5);
    }

    #[test]
    fn second_kind_degenerates_to_one_factor() {
        assert_eq!(coords_second_kind(0.0, 0.0, 0.0), GroupElement::<f64>::identity());
        assert!(close(coords_second_kind(0.9, 0.0, 0.0), exp_axis(1, 0.9), 1e-16));
    }

    #[test]
    fn relative_is_exactly_antisymmetric() {
        let x = exp(AlgebraVector::new(0.3, 1.1, -0.4));
        let y = exp(AlgebraVector::new(-2.0, 0.5, 0.9));
        assert_eq!(x.relative(y), y.relative(x).inverse());
        assert!(close(x.relative(y), x.inverse() * y, 1e-15));
    }

    #[test]
    fn f32_smoke() {
        let v = AlgebraVector::new(0.3_f32, -0.2, 0.1);
        let back = log(exp(v)).unwrap();
        assert!(back.max_abs_diff(v) < 1e-6);
    }

    #[test]
    fn try_new_rejects_non_unit() {
        assert!(GroupElement::try_new(1.0, 0.1, 0.0, 0.0).is_err());
        assert!(GroupElement::try_new(0.6, 0.8, 0.0, 0.0).is_ok());
    }
}
