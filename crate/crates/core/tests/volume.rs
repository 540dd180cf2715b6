use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use su2geom::distance::{build_distance_field, GraphConfig};
use su2geom::volume::{
    doubling_estimate, estimate_curve, log_grid, model_doubling, model_volume, ratio_band, regularity_excess,
    round_ball_volume, Branch, VolumeCurve, VolumeModel,
};
use su2geom::MetricSpec;

fn model() -> impl Strategy<Value = VolumeModel<f64>> {
    (0.01..1.0f64, 1.0..100.0f64, any::<bool>())
        .prop_map(|(a1, a3, sub)| VolumeModel::new(a1, 1.0, (!sub).then_some(a3)).unwrap())
}

fn rational() -> impl Strategy<Value = VolumeModel<BigRational>> {
    (1i64..=64, 64i64..=64 * 64, any::<bool>()).prop_map(|(n1, n3, sub)| {
        let q = |n| BigRational::new(BigInt::from(n), BigInt::from(64));
        VolumeModel::new(q(n1), q(64), (!sub).then(|| q(n3))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn model_nondecreasing(p in model(), r in 1e-4..3.0f64, k in 1.0..4.0f64) {
        prop_assert!(model_volume(&p, &(k * r)) >= model_volume(&p, &r) * (1.0 - 1e-12));
        prop_assert!(model_volume(&p, &r) <= 1.0);
    }

    #[test]
    fn model_saturates_past_a2(p in model(), r in 1.0..10.0f64) {
        prop_assert_eq!(model_volume(&p, &r), 1.0);
    }

    #[test]
    fn model_doubling_below_k4(p in model(), r in 0.0..3.0f64, k in 1.0..8.0f64) {
        prop_assert!(model_doubling(&p, &r, &k) <= k.powi(4) * (1.0 + 1e-12));
    }

    #[test]
    fn exact_continuity(p in rational()) {
        let [b1, b2, b3] = p.breakpoints();
        let pairs = [
            (b1, Branch::Euclidean, Branch::Heisenberg),
            (b2, Branch::Heisenberg, Branch::Collapse),
            (b3, Branch::Collapse, Branch::Saturated),
        ];
        for (b, lo, hi) in pairs {
            if lo == Branch::Euclidean && p.a3.is_none() {
                continue;
            }
            prop_assert_eq!(p.branch_value(lo, &b), p.branch_value(hi, &b));
        }
    }

    #[test]
    fn exact_doubling_below_k4(p in rational(), rn in 0i64..=256, kn in 64i64..=512) {
        let r = BigRational::new(BigInt::from(rn), BigInt::from(128));
        let k = BigRational::new(BigInt::from(kn), BigInt::from(64));
        let k4 = &k * &k * &k * &k;
        prop_assert!(model_doubling(&p, &r, &k) <= k4);
    }
}

#[test]
fn synthetic_curve_has_unit_band() {
    let p = VolumeModel::new(0.1, 1.0, Some(10.0)).unwrap();
    let c = VolumeCurve::synthetic(&p, &log_grid(1e-3, 2.5, 64), 1_000_000_000);
    let (lo, hi) = ratio_band(&c, &p).unwrap();
    assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
}

#[test]
fn round_curve_against_closed_form() {
    let m = MetricSpec::bi_invariant();
    let f = build_distance_field(&m, &GraphConfig::new(8000, 16, 5).without_gate()).unwrap();
    let grid = log_grid(0.3, 8.0, 48);
    let c = estimate_curve(&f, &grid).unwrap();

    assert!(c.v_hat.windows(2).all(|w| w[0] <= w[1]));
    assert!(c.v_hat.iter().all(|v| (0.0..=1.0).contains(v)));
    for (r, v) in c.r_grid.iter().zip(&c.v_hat) {
        if *r >= 1.05 * c.diameter {
            assert_eq!(*v, 1.0);
        }
    }
    for (i, r) in c.r_grid.iter().enumerate() {
        if [1.0, 2.0, std::f64::consts::PI, 4.0]
            .iter()
            .any(|x| (r / x - 1.0).abs() < 0.04)
        {
            let exact = round_ball_volume(*r);
            let allowance = 3.0 * c.stderr[i] + 0.05 * exact;
            assert!(
                (c.v_hat[i] - exact).abs() <= allowance,
                "r = {r}: {} vs {exact}",
                c.v_hat[i]
            );
        }
    }

    let d = doubling_estimate(&c).unwrap();
    assert!(regularity_excess(&c, d) <= 1.0);
}

#[test]
fn round_doubling_near_eight_at_small_radii() {
    let m = MetricSpec::bi_invariant();
    let cfg = GraphConfig::new(8000, 16, 6).without_gate().localized(1.6);
    let f = build_distance_field(&m, &cfg).unwrap();
    let c = estimate_curve(&f, &log_grid(0.2, 1.6, 24)).unwrap();
    let d = doubling_estimate(&c).unwrap();
    assert!((7.0..=9.0).contains(&d), "doubling {d}");
}

#[test]
fn band_is_scale_invariant() {
    let m = MetricSpec::from_params(0.5, 1.0, 2.0).unwrap();
    let cfg = GraphConfig::new(3000, 16, 8).without_gate();
    let grid = log_grid(0.02, 2.5, 48);
    let c1 = estimate_curve(&build_distance_field(&m, &cfg).unwrap(), &grid).unwrap();
    let m2 = m.scale(3.0).unwrap();
    let grid2: Vec<f64> = grid.iter().map(|r| 3.0 * r).collect();
    let c2 = estimate_curve(&build_distance_field(&m2, &cfg).unwrap(), &grid2).unwrap();
    let p1 = VolumeModel::from_metric(&m).unwrap();
    let p2 = VolumeModel::from_metric(&m2).unwrap();
    let (lo1, hi1) = ratio_band(&c1, &p1).unwrap();
    let (lo2, hi2) = ratio_band(&c2, &p2).unwrap();
    let slack = c1.stderr.iter().cloned().fold(0.0, f64::max) * 3.0;
    assert!(
        (lo1 - lo2).abs() <= slack.max(1e-9) * lo1.max(1.0),
        "{lo1} vs {lo2}"
    );
    assert!(
        (hi1 - hi2).abs() <= slack.max(1e-9) * hi1.max(1.0),
        "{hi1} vs {hi2}"
    );
}
