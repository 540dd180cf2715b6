use std::f64::consts::PI;

use proptest::prelude::*;
use su2geom::algebra::{adjoint_matrix, bracket, AlgebraVector};
use su2geom::linalg::{mat3_conjugate_diag, mat3_max_abs_diff, Mat3};
use su2geom::{exp, MetricSpec};

fn rotation() -> impl Strategy<Value = Mat3<f64>> {
    (-PI..PI, -PI..PI, -PI..PI).prop_map(|(a, b, c)| adjoint_matrix(exp(AlgebraVector::new(a, b, c))))
}

fn params() -> impl Strategy<Value = [f64; 3]> {
    (0.05..1.0f64, 1.0..20.0f64).prop_map(|(a1, a3)| [a1, 1.0, a3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn diagonalize_recovers_params(a in params(), r in rotation(), s in rotation()) {
        let q = mat3_conjugate_diag(&r, a.map(|x| x * x));
        let m = MetricSpec::diagonalize(q).unwrap();
        for i in 0..3 {
            prop_assert!((m.params()[i] - a[i]).abs() < 1e-10 * a[2]);
        }
        // Reassembly.
        let back = mat3_conjugate_diag(m.frame(), m.params().map(|x| x * x));
        prop_assert!(mat3_max_abs_diff(&back, &q) < 1e-10 * a[2] * a[2]);
        // Conjugating again leaves the parameters unchanged.
        let m2 = MetricSpec::diagonalize(mat3_conjugate_diag(&s, m.params().map(|x| x * x))).unwrap();
        for i in 0..3 {
            prop_assert!((m2.params()[i] - m.params()[i]).abs() < 1e-10 * a[2]);
        }
    }

    #[test]
    fn frame_is_a_milnor_basis(a in params(), r in rotation()) {
        let m = MetricSpec::diagonalize(mat3_conjugate_diag(&r, a.map(|x| x * x))).unwrap();
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let b = bracket(m.frame_vector(i), m.frame_vector(j));
            prop_assert!(b.max_abs_diff(m.frame_vector(k)) < 1e-10);
        }
    }

    #[test]
    fn norm_in_frame(a in params(), x in -2.0..2.0f64, y in -2.0..2.0f64, z in -2.0..2.0f64) {
        let m = MetricSpec::from_params(a[0], a[1], a[2]).unwrap();
        let v = AlgebraVector::new(x, y, z);
        let want = ((a[0] * x).powi(2) + (a[1] * y).powi(2) + (a[2] * z).powi(2)).sqrt();
        prop_assert!((m.norm(v) - want).abs() < 1e-12 * (1.0 + want));
    }

    #[test]
    fn ricci_ratios_above_bound(a in params()) {
        let m = MetricSpec::from_params(a[0], a[1], a[2]).unwrap();
        let bound = m.ricci_lower_bound().unwrap();
        for r in m.ricci_ratios().unwrap() {
            prop_assert!(r >= bound - 1e-12);
        }
    }
}

#[test]
fn ricci_formula_is_symmetric_in_the_other_two() {
    // Ric(e1,e1) depends on (a2, a3) only through (a2² − a3²)² and a2² a3².
    let ric = |a: [f64; 3]| -> f64 {
        let d = a[1] * a[1] - a[2] * a[2];
        (a[0].powi(4) - d * d) / (2.0 * a[1] * a[1] * a[2] * a[2])
    };
    let m = MetricSpec::from_params(0.4, 1.0, 3.0).unwrap();
    let r = m.ricci().unwrap();
    assert!((r[0] - ric([0.4, 1.0, 3.0])).abs() < 1e-12);
    assert!((ric([0.4, 1.0, 3.0]) - ric([0.4, 3.0, 1.0])).abs() < 1e-12);
    // Round metric: Ric = ½ g.
    let round = MetricSpec::bi_invariant().ricci().unwrap();
    assert!(round.iter().all(|x| (x - 0.5).abs() < 1e-15));
}

#[test]
fn rejects_bad_forms() {
    assert!(MetricSpec::diagonalize([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
    assert!(MetricSpec::diagonalize([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
    assert!(MetricSpec::from_params(2.0, 1.0, 3.0).is_err());
    assert!(MetricSpec::from_params(1.0, 1.0, f64::INFINITY).is_ok());
}
