//! Dense symmetric eigen-solvers: cyclic Jacobi and implicit-shift QL for
//! tridiagonal matrices.

use crate::scalar::Real;

/// Row-major 3×3 matrix.
pub type Mat3<T> = [[T; 3]; 3];

pub fn mat3_identity<T: Real>() -> Mat3<T> {
    let mut m = [[T::zero(); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn mat3_mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    out
}

pub fn mat3_transpose<T: Real>(a: &Mat3<T>) -> Mat3<T> {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn mat3_det<T: Real>(a: &Mat3<T>) -> T {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn mat3_vec<T: Real>(a: &Mat3<T>, v: [T; 3]) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    }
    out
}

pub fn mat3_max_abs_diff<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> T {
    let mut d = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            d = d.max((a[i][j] - b[i][j]).abs());
        }
    }
    d
}

/// `R·diag(d)·Rᵀ`.
pub fn mat3_conjugate_diag<T: Real>(r: &Mat3<T>, d: [T; 3]) -> Mat3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(T::zero(), |acc, k| acc + r[i][k] * d[k] * r[j][k]);
        }
    }
    out
}

/// Eigen-decomposition of a dense symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<T> {
    /// Ascending; ties keep the order in which the sweep left them.
    pub values: Vec<T>,
    /// Column `k` (entries `vectors[i * n + k]`) belongs to `values[k]`.
    pub vectors: Vec<T>,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations on a row-major `n×n` symmetric matrix, sweeping
/// pairs `(p, q)` in lexicographic order until the off-diagonal Frobenius
/// norm drops below `tol` (absolute) or `max_sweeps` is reached.
pub fn jacobi_symmetric<T: Real>(a: &[T], n: usize, tol: T, max_sweeps: usize) -> SymmetricEigen<T> {
    assert_eq!(a.len(), n * n, "matrix must be n×n");
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let off_norm = |m: &[T]| -> T {
        let mut s = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                s = s + m[p * n + q] * m[p * n + q];
            }
        }
        (s + s).sqrt()
    };

    let mut sweeps = 0;
    while sweeps < max_sweeps && off_norm(&m) > tol {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the sweep order inside degenerate eigenspaces.
    order.sort_by(|&i, &j| {
        m[i * n + i]
            .partial_cmp(&m[j * n + j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    SymmetricEigen {
        values,
        vectors,
        sweeps,
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (`e.len() == d.len() - 1`), ascending. Implicit QL with
/// Wilkinson shifts.
pub fn tridiagonal_eigenvalues<T: Real>(d: &[T], e: &[T]) -> Vec<T> {
    let n = d.len();
    if n == 0 {
        return Vec::new();
    }
    assert_eq!(e.len() + 1, n, "sub-diagonal length must be n - 1");
    let mut d = d.to_vec();
    let mut e: Vec<T> = e.iter().copied().chain(std::iter::once(T::zero())).collect();
    let two = T::lit(2.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60 * n.max(1), "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs() * g.signum());
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonal_input_is_sorted_copy() {
        let a = [4.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 9.0];
        let eig = jacobi_symmetric(&a, 3, 1e-14, 50);
        assert_eq!(eig.values, vec![1.0, 4.0, 9.0]);
        assert_eq!(eig.sweeps, 0);
    }

    #[test]
    fn jacobi_reconstructs_matrix() {
        let a = [2.0, 1.0, 0.5, 1.0, 3.0, -0.25, 0.5, -0.25, 1.5];
        let eig = jacobi_symmetric(&a, 3, 1e-14, 50);
        for i in 0..3 {
            for j in 0..3 {
                let r: f64 = (0..3)
                    .map(|k| eig.vectors[i * 3 + k] * eig.values[k] * eig.vectors[j * 3 + k])
                    .sum();
                assert!((r - a[i * 3 + j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn tridiagonal_matches_jacobi() {
        let n = 9;
        let d: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() * 3.0).collect();
        let e: Vec<f64> = (0..n - 1).map(|i| 1.0 + (i as f64).cos()).collect();
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            dense[i * n + i] = d[i];
            if i + 1 < n {
                dense[i * n + i + 1] = e[i];
                dense[(i + 1) * n + i] = e[i];
            }
        }
        let jac = jacobi_symmetric(&dense, n, 1e-14, 100);
        let ql = tridiagonal_eigenvalues(&d, &e);
        for (a, b) in jac.values.iter().zip(&ql) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn tridiagonal_trivial_sizes() {
        assert!(tridiagonal_eigenvalues::<f64>(&[], &[]).is_empty());
        assert_eq!(tridiagonal_eigenvalues(&[2.5], &[]), vec![2.5]);
        let two = tridiagonal_eigenvalues(&[0.0_f64, 0.0], &[1.0]);
        assert!((two[0] + 1.0).abs() < 1e-15 && (two[1] - 1.0).abs() < 1e-15);
    }
}
