use std::sync::OnceLock;

use su2geom::distance::{
    build_distance_field, chord_length, circle_distance, refine_distance, round_distance, DistanceField,
    GraphConfig,
};
use su2geom::sampling::{haar_samples, point_seed};
use su2geom::MetricSpec;

const SEED: u64 = 17;

fn field(a3: f64) -> DistanceField {
    let m = MetricSpec::from_params(0.5, 1.0, a3).unwrap();
    build_distance_field(&m, &GraphConfig::new(4000, 16, SEED).without_gate()).unwrap()
}

fn base() -> &'static DistanceField {
    static F: OnceLock<DistanceField> = OnceLock::new();
    F.get_or_init(|| field(2.0))
}

#[test]
fn sandwich_between_scaled_round_distances() {
    let f = base();
    let tol = f.tol();
    for (x, d) in f.points().iter().zip(f.dist()) {
        let r = round_distance(*x);
        assert!(*d >= 0.5 * r - tol, "d = {d}, lower {}", 0.5 * r);
        assert!(*d <= 2.0 * r * (1.0 + tol), "d = {d}, upper {}", 2.0 * r);
    }
}

#[test]
fn reroot_is_symmetric() {
    let f = base();
    let n = f.points().len();
    let picks: Vec<usize> = (1..20).map(|i| (i * 197) % n).collect();
    let rows: Vec<Vec<f64>> = picks.iter().map(|&p| f.reroot(p)).collect();
    for (a, ra) in picks.iter().zip(&rows) {
        for (b, rb) in picks.iter().zip(&rows) {
            let (x, y) = (ra[*b], rb[*a]);
            assert!((x - y).abs() <= 2.0 * f.tol() * x.max(y) + 1e-12, "{x} vs {y}");
        }
    }
}

#[test]
fn distance_grows_with_a3() {
    let small = base();
    let large = field(4.0);
    assert_eq!(small.points().len(), large.points().len());
    let tol = small.tol().max(large.tol());
    let worse = small
        .dist()
        .iter()
        .zip(large.dist())
        .filter(|(s, l)| **l < **s * (1.0 - tol))
        .count();
    assert_eq!(worse, 0);
}

#[test]
fn close_to_circle() {
    let f = base();
    for (x, d) in f.points().iter().zip(f.dist()).step_by(40) {
        assert!(circle_distance(*x, 1000) <= *d * (1.0 + f.tol()) + 1e-12);
    }
}

#[test]
fn chord_is_left_invariant() {
    let m = MetricSpec::from_params(0.3, 1.0, 5.0).unwrap();
    let g = haar_samples(300, point_seed(SEED, 1, 2));
    for w in g.chunks_exact(3) {
        let (h, x, y) = (w[0], w[1], w[2]);
        let (Ok(a), Ok(b)) = (chord_length(&m, x, y), chord_length(&m, h * x, h * y)) else {
            continue;
        };
        assert!((a - b).abs() < 1e-12 * (1.0 + a));
    }
}

#[test]
fn refinement_never_increases() {
    let f = base();
    let m = f.metric();
    for (x, d) in f.points().iter().zip(f.dist()).step_by(100) {
        let r = refine_distance(m, *x, *d);
        assert!(r <= *d + 1e-12, "{r} > {d}");
        assert!(r >= 0.5 * round_distance(*x) - 1e-9);
    }
}

#[test]
fn same_seed_same_field() {
    let a = base();
    let b = field(2.0);
    assert_eq!(a.dist(), b.dist());
}
