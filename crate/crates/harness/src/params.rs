//! Parsing of metric arguments: `a1,a2,a3` (with `inf`) or a 3×3 form.

use su2geom::{GroupElement, MetricSpec};

fn numbers(s: &str, count: usize, what: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("{what}: bad number {t:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    if v.len() != count {
        return Err(format!(
            "{what}: expected {count} comma-separated values, got {}",
            v.len()
        ));
    }
    Ok(v)
}

/// `a1,a2,a3` with `0 < a1 ≤ a2 ≤ a3 ≤ inf`.
pub fn parse_params(s: &str) -> Result<[f64; 3], String> {
    let v = numbers(s, 3, "params")?;
    Ok([v[0], v[1], v[2]])
}

/// Nine row-major entries of a symmetric positive-definite form in the Pauli basis.
pub fn parse_form(s: &str) -> Result<[[f64; 3]; 3], String> {
    let v = numbers(s, 9, "q")?;
    Ok([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
}

/// Unit quaternion `q0,q1,q2,q3`; renormalized when within `1e-6` of unit length.
pub fn parse_point(s: &str) -> Result<GroupElement, String> {
    let v = numbers(s, 4, "point")?;
    GroupElement::try_new(v[0], v[1], v[2], v[3]).or_else(|_| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (n - 1.0).abs() < 1e-6 {
            Ok(GroupElement::new(v[0] / n, v[1] / n, v[2] / n, v[3] / n))
        } else {
            Err(format!("point: norm {n} is not 1"))
        }
    })
}

/// The metric from either `--params` or `--q`.
pub fn metric_from(params: Option<&str>, q: Option<&str>) -> Result<MetricSpec, String> {
    match (params, q) {
        (Some(p), None) => {
            let [a1, a2, a3] = parse_params(p)?;
            MetricSpec::from_params(a1, a2, a3).map_err(|e| e.to_string())
        }
        (None, Some(q)) => MetricSpec::diagonalize(parse_form(q)?).map_err(|e| e.to_string()),
        _ => Err("give exactly one of --params or --q".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_accept_infinity() {
        let p = parse_params("1, 1, inf").unwrap();
        assert!(p[2].is_infinite());
        assert!(parse_params("1,2").is_err());
        assert!(metric_from(Some("2,1,1"), None).is_err());
        let m = metric_from(None, Some("4,0,0,0,1,0,0,0,9")).unwrap();
        assert_eq!(m.params(), [1.0, 2.0, 3.0]);
    }

    #[test]
    fn point_is_normalized() {
        let x = parse_point("1,0,0,1e-9").unwrap();
        assert!((x.norm() - 1.0).abs() < 1e-15);
        assert!(parse_point("2,0,0,0").is_err());
    }
}
