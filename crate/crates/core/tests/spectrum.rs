use su2geom::spectrum::{irrep_eigenvalues, lambda1_exact, spectrum_table};
use su2geom::MetricSpec;

const A1: [f64; 5] = [1.0, 0.5, 0.2, 0.1, 0.05];
const A3: [f64; 5] = [1.0, 2.0, 5.0, 10.0, 20.0];

#[test]
fn lambda1_matches_closed_form_on_grid() {
    for a1 in A1 {
        for a3 in A3 {
            let m = MetricSpec::from_params(a1, 1.0, a3).unwrap();
            let table = spectrum_table(&m, 16).unwrap();
            let got = table.lambda1().unwrap();
            let want = lambda1_exact(&m).unwrap();
            assert!(
                (got - want).abs() <= 1e-9 * want,
                "({a1}, 1, {a3}): {got} vs {want}"
            );
        }
    }
}

#[test]
fn casimir_on_round_metric() {
    for two_j in 0..12u32 {
        let j = two_j as f64 / 2.0;
        for ev in irrep_eigenvalues([1.0, 1.0, 1.0], two_j).unwrap() {
            assert!((ev - j * (j + 1.0)).abs() < 1e-10);
        }
    }
}

#[test]
fn sub_laplacian_is_decreasing_limit() {
    let (a1, a2) = (0.3, 1.0);
    for two_j in 1..8u32 {
        let limit = irrep_eigenvalues([a1, a2, f64::INFINITY], two_j).unwrap();
        let mut prev: Option<Vec<f64>> = None;
        for a3 in [1.0, 10.0, 100.0, 1e3, 1e4, 1e5] {
            let ev = irrep_eigenvalues([a1, a2, a3], two_j).unwrap();
            for (e, l) in ev.iter().zip(&limit) {
                assert!(*e >= *l - 1e-9);
            }
            if let Some(p) = &prev {
                for (e, q) in ev.iter().zip(p) {
                    assert!(*e <= *q + 1e-9);
                }
            }
            prev = Some(ev);
        }
        // Eigenvalues are affine in 1/a3², so the gap at 1e5 is O(1e-10·j²).
        for (e, l) in prev.unwrap().iter().zip(&limit) {
            assert!((e - l).abs() < 1e-9 * (1.0 + two_j as f64).powi(2));
        }
    }
}

#[test]
fn heat_trace_decays_at_twice_the_gap() {
    for (a1, a3) in [(1.0, 1.0), (0.5, 2.0), (0.2, 5.0)] {
        let m = MetricSpec::from_params(a1, 1.0, a3).unwrap();
        let table = spectrum_table(&m, 64).unwrap();
        let direct: f64 = table.entries.iter().map(|(l, k)| *k as f64 * (-l).exp()).sum();
        assert!((table.heat_trace(1.0).unwrap() - direct).abs() < 1e-9 * direct);
        let l1 = table.lambda1().unwrap();
        let mult = table.entries[1].1 as f64;
        // Diameter lies between π a2 and 2π a2.
        let diam = std::f64::consts::PI;
        for t in [diam * diam, 3.0 * diam * diam, 10.0 * diam * diam] {
            // heat_trace(2t) − 1, summed without the constant mode to avoid cancellation.
            let excess: f64 = table.entries[1..]
                .iter()
                .map(|(l, k)| *k as f64 * (-2.0 * l * t).exp())
                .sum();
            let ratio = excess / (-2.0 * l1 * t).exp();
            assert!(ratio >= mult * (1.0 - 1e-9), "({a1}, 1, {a3}), t = {t}: {ratio}");
            assert!(
                ratio <= 2.0 * table.total_multiplicity() as f64,
                "({a1}, 1, {a3}), t = {t}: {ratio}"
            );
        }
    }
}
