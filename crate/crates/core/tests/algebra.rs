use std::f64::consts::PI;

use proptest::prelude::*;
use su2geom::algebra::{
    adjoint, adjoint_matrix, bracket, commutator_h, commutator_h_closed_form, commutator_h_normalized,
    coords_second_kind, exp_axis, AlgebraVector, GroupElement,
};
use su2geom::linalg::{mat3_det, mat3_identity, mat3_max_abs_diff, mat3_mul, mat3_transpose};
use su2geom::matrix2::Mat2;
use su2geom::{exp, log, Error};

fn vector(scale: f64) -> impl Strategy<Value = AlgebraVector<f64>> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(a, b, c)| AlgebraVector::new(a, b, c))
}

fn element() -> impl Strategy<Value = GroupElement<f64>> {
    vector(2.0 * PI).prop_map(exp)
}

fn diff(x: GroupElement<f64>, y: GroupElement<f64>) -> f64 {
    x.quaternion_distance(y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn exp_log_round_trip(v in vector(2.0 * PI)) {
        prop_assume!(v.rho() < PI - 0.01);
        prop_assert!(log(exp(v)).unwrap().max_abs_diff(v) < 1e-10);
    }

    #[test]
    fn exp_matches_matrix_series(v in vector(4.0)) {
        let series = Mat2::from_algebra(v).exp_series(40);
        prop_assert!(series.max_abs_diff(Mat2::from_group(exp(v))) < 1e-12);
    }

    #[test]
    fn multiply_is_associative(x in element(), y in element(), z in element()) {
        prop_assert!(diff((x * y) * z, x * (y * z)) < 1e-12);
        prop_assert!((x.multiply(y).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn adjoint_is_a_rotation(y in element()) {
        let r = adjoint_matrix(y);
        let rtr = mat3_mul(&mat3_transpose(&r), &r);
        prop_assert!(mat3_max_abs_diff(&rtr, &mat3_identity()) < 1e-12);
        prop_assert!((mat3_det(&r) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adjoint_preserves_bracket(y in element(), u in vector(2.0), v in vector(2.0)) {
        let lhs = adjoint(y, bracket(u, v));
        prop_assert!(lhs.max_abs_diff(bracket(adjoint(y, u), adjoint(y, v))) < 1e-11);
    }

    #[test]
    fn bracket_is_matrix_commutator(u in vector(2.0), v in vector(2.0)) {
        let c = Mat2::from_algebra(u).commutator(Mat2::from_algebra(v));
        prop_assert!(c.max_abs_diff(Mat2::from_algebra(bracket(u, v))) < 1e-12);
        prop_assert!(bracket(u, u).max_abs_diff(AlgebraVector::zero()) == 0.0);
    }

    #[test]
    fn jacobi_identity(u in vector(2.0), v in vector(2.0), w in vector(2.0)) {
        let s = bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v));
        prop_assert!(s.max_abs_diff(AlgebraVector::zero()) < 1e-12);
    }

    #[test]
    fn square_is_minus_determinant(v in vector(5.0)) {
        let a = Mat2::from_algebra(v);
        let det = a.det();
        prop_assert!(det.im.abs() < 1e-14);
        prop_assert!((det.re - v.rho() * v.rho()).abs() < 1e-12);
        prop_assert!((a * a).max_abs_diff(Mat2::scalar(-det.re)) < 1e-12);
    }

    #[test]
    fn conjugation_rotates_plane(s in -PI..PI, t in -4.0..4.0f64, th in -PI..PI) {
        let lhs = exp_axis(1, s) * exp(AlgebraVector::new(0.0, t * th.cos(), t * th.sin())) * exp_axis(1, -s);
        let rhs = exp(AlgebraVector::new(0.0, t * (th + s).cos(), t * (th + s).sin()));
        prop_assert!(diff(lhs, rhs) < 1e-11);
    }

    #[test]
    fn second_kind_conjugation(s in -PI..PI, t in -4.0..4.0f64) {
        let lhs = coords_second_kind(s, t, 0.0) * exp_axis(1, -s);
        let rhs = exp(AlgebraVector::new(0.0, t * s.cos(), t * s.sin()));
        prop_assert!(diff(lhs, rhs) < 1e-11);
    }

    #[test]
    fn commutator_closed_form(u in -7.0..7.0f64, v in -7.0..7.0f64) {
        prop_assert!(diff(commutator_h(u, v), commutator_h_closed_form(u, v)) < 1e-12);
        prop_assert!(diff(commutator_h(u, 0.0), GroupElement::identity()) < 1e-15);
    }
}

#[test]
fn long_products_stay_unit() {
    let xs: Vec<GroupElement<f64>> = (0..97)
        .map(|i| exp(AlgebraVector::new(0.3 * i as f64, 1.1, -0.7)))
        .collect();
    let mut acc = GroupElement::identity();
    for i in 0..10_000 {
        acc = acc.mul_unnormalized(xs[i % xs.len()]);
        if i % 64 == 63 {
            acc = acc.renormalize();
        }
        assert!((acc.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn antipode_has_no_logarithm() {
    assert_eq!(
        log(exp(AlgebraVector::new(2.0 * PI, 0.0, 0.0))),
        Err(Error::Antipode)
    );
    assert!(diff(exp_axis(1, PI), GroupElement::new(0.0, 1.0, 0.0, 0.0)) < 1e-15);
}

#[test]
fn commutator_limits() {
    assert!(diff(commutator_h(PI, PI), GroupElement::minus_identity()) < 1e-12);
    let h = commutator_h_normalized(1e-3, 1e-3).unwrap();
    assert!(h.max_abs_diff(AlgebraVector::basis(3)) < 1e-3);
}

#[test]
fn single_precision_agrees() {
    let v = AlgebraVector::new(0.4f32, -1.2, 0.9);
    let w = AlgebraVector::new(0.4f64, -1.2, 0.9);
    let (x, y) = (exp(v), exp(w));
    assert!((x.q0 as f64 - y.q0).abs() < 1e-6);
    assert!((log(x).unwrap().x3 as f64 - 0.9).abs() < 1e-5);
}
