//! Left-invariant (sub-)Riemannian metrics on SU(2).
//!
//! A metric is an inner product `Q` on su(2), written in the Pauli basis.
//! Diagonalizing `Q` with an orthonormal, positively oriented eigenbasis gives a
//! standard Milnor frame and the parameters `a1 ≤ a2 ≤ a3`; `a3 = ∞` encodes the
//! sub-Riemannian geometry whose horizontal space is spanned by the first two
//! frame vectors.

use std::fmt;

use crate::algebra::AlgebraVector;
use crate::error::{Error, Result};
use crate::linalg::{jacobi_symmetric, mat3_conjugate_diag, mat3_det, mat3_identity, mat3_vec, Mat3};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Riemannian,
    /// `a3 = ∞`: horizontal distribution spanned by the first two frame vectors.
    SubRiemannian,
    /// `a2 = a3 = ∞`. Representable for diagnostics; only [`MetricSpec::norm`] accepts it.
    Degenerate,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Riemannian => "riemannian",
            MetricKind::SubRiemannian => "subriemannian2",
            MetricKind::Degenerate => "subriemannian-degenerate",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec<T> {
    /// Finite part of the quadratic form in the Pauli basis. For the
    /// sub-Riemannian kinds this is the form restricted to the horizontal
    /// frame vectors (zero on the vertical ones).
    q: Mat3<T>,
    params: [T; 3],
    /// Columns are the Milnor frame vectors in Pauli coordinates.
    frame: Mat3<T>,
    kind: MetricKind,
}

const SYMMETRY_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-12;
const JACOBI_TOL: f64 = 1e-14;

impl<T: Real> MetricSpec<T> {
    /// The bi-invariant metric `g(1,1,1)`.
    pub fn bi_invariant() -> Self {
        Self::from_params(T::one(), T::one(), T::one()).expect("valid parameters")
    }

    /// `g(a1, a2, a3)`: diagonal in the Pauli basis. `a3` (and for the
    /// degenerate kind `a2`) may be `+∞`.
    pub fn from_params(a1: T, a2: T, a3: T) -> Result<Self> {
        Self::with_frame([a1, a2, a3], mat3_identity())
    }

    /// Metric with parameters `params` along the columns of `frame`.
    pub fn with_frame(params: [T; 3], frame: Mat3<T>) -> Result<Self> {
        let [a1, a2, a3] = params;
        let valid = a1 > T::zero() && a1.is_finite() && a1 <= a2 && a2 <= a3 && !a1.is_nan();
        if !valid || a2.is_nan() || a3.is_nan() {
            return Err(Error::InvalidParams(format!(
                "need 0 < a1 <= a2 <= a3 <= inf with finite a1, got ({a1}, {a2}, {a3})"
            )));
        }
        let kind = if a2.is_infinite() {
            MetricKind::Degenerate
        } else if a3.is_infinite() {
            MetricKind::SubRiemannian
        } else {
            MetricKind::Riemannian
        };
        let sq = params.map(|a| if a.is_finite() { a * a } else { T::zero() });
        Ok(Self {
            q: mat3_conjugate_diag(&frame, sq),
            params,
            frame,
            kind,
        })
    }

    /// Diagonalizes an SPD form given in the Pauli basis.
    ///
    /// Cyclic Jacobi with a fixed sweep order, eigenvalues sorted ascending
    /// (stable), and the first column negated when the eigenbasis has
    /// determinant −1.
    pub fn diagonalize(q: Mat3<T>) -> Result<Self> {
        let scale = q
            .iter()
            .flatten()
            .fold(T::zero(), |m, &x| m.max(x.abs()))
            .max(T::one());
        let sym_tol = T::lit(SYMMETRY_TOL).max(T::epsilon() * T::lit(8.0)) * scale;
        for i in 0..3 {
            for j in 0..3 {
                if !q[i][j].is_finite() {
                    return Err(Error::NotSpd(format!("entry ({i},{j}) is not finite")));
                }
                if (q[i][j] - q[j][i]).abs() > sym_tol {
                    return Err(Error::NotSpd(format!(
                        "asymmetric entries ({i},{j}): {} vs {}",
                        q[i][j], q[j][i]
                    )));
                }
            }
        }
        let flat: Vec<T> = q.iter().flatten().copied().collect();
        let tol = T::lit(JACOBI_TOL).max(T::epsilon() * T::lit(4.0)) * scale;
        let eig = jacobi_symmetric(&flat, 3, tol, 100);
        if !(eig.values[0] > T::lit(POSITIVITY_TOL)) {
            return Err(Error::NotSpd(format!(
                "smallest eigenvalue {} is not positive",
                eig.values[0]
            )));
        }
        let mut frame = [[T::zero(); 3]; 3];
        for (i, row) in frame.iter_mut().enumerate() {
            for (k, c) in row.iter_mut().enumerate() {
                *c = eig.vectors[i * 3 + k];
            }
        }
        if mat3_det(&frame) < T::zero() {
            for row in frame.iter_mut() {
                row[0] = -row[0];
            }
        }
        let params = [eig.values[0].sqrt(), eig.values[1].sqrt(), eig.values[2].sqrt()];
        let mut m = Self::with_frame(params, frame)?;
        // Keep the caller's form; the reconstruction only differs by rounding.
        m.q = q;
        Ok(m)
    }

    pub fn params(&self) -> [T; 3] {
        self.params
    }

    pub fn a1(&self) -> T {
        self.params[0]
    }

    pub fn a2(&self) -> T {
        self.params[1]
    }

    pub fn a3(&self) -> T {
        self.params[2]
    }

    pub fn q(&self) -> &Mat3<T> {
        &self.q
    }

    pub fn frame(&self) -> &Mat3<T> {
        &self.frame
    }

    /// Frame vector `i ∈ {1,2,3}` as an algebra element.
    pub fn frame_vector(&self, i: usize) -> AlgebraVector<T> {
        let c = i - 1;
        AlgebraVector::new(self.frame[0][c], self.frame[1][c], self.frame[2][c])
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn is_riemannian(&self) -> bool {
        self.kind == MetricKind::Riemannian
    }

    pub fn is_diagonal_frame(&self) -> bool {
        self.frame == mat3_identity()
    }

    /// Multiplies every length by `c`.
    pub fn scale(&self, c: T) -> Result<Self> {
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        let mut out = self.clone();
        out.params = self.params.map(|a| a * c);
        let c2 = c * c;
        for row in out.q.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * c2;
            }
        }
        Ok(out)
    }

    /// Components of `v` along the frame.
    pub fn frame_components(&self, v: AlgebraVector<T>) -> [T; 3] {
        let x = v.to_array();
        let mut out = [T::zero(); 3];
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.frame[0][k] * x[0] + self.frame[1][k] * x[1] + self.frame[2][k] * x[2];
        }
        out
    }

    /// `|v|_g = √(vᵀQv)`; `+∞` for non-horizontal vectors of sub-Riemannian kinds.
    pub fn norm(&self, v: AlgebraVector<T>) -> T {
        let vertical_tol = T::lit(1e-12);
        match self.kind {
            MetricKind::Riemannian => {
                let x = v.to_array();
                let qx = mat3_vec(&self.q, x);
                (x[0] * qx[0] + x[1] * qx[1] + x[2] * qx[2]).max(T::zero()).sqrt()
            }
            MetricKind::SubRiemannian | MetricKind::Degenerate => {
                let c = self.frame_components(v);
                let horizontal = if self.kind == MetricKind::SubRiemannian {
                    2
                } else {
                    1
                };
                if c[horizontal..].iter().any(|x| x.abs() > vertical_tol) {
                    return T::infinity();
                }
                (0..horizontal)
                    .fold(T::zero(), |acc, i| {
                        let w = self.params[i] * c[i];
                        acc + w * w
                    })
                    .sqrt()
            }
        }
    }

    /// Diagonal Ricci curvature `Ric(eᵢ, eᵢ)` in the Milnor frame.
    pub fn ricci(&self) -> Result<[T; 3]> {
        self.require_riemannian()?;
        let a = self.params;
        let two = T::lit(2.0);
        let mut out = [T::zero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let (ai2, aj2, ak2) = (a[i] * a[i], a[j] * a[j], a[k] * a[k]);
            let diff = aj2 - ak2;
            *o = (ai2 * ai2 - diff * diff) / (two * aj2 * ak2);
        }
        Ok(out)
    }

    /// `Ric(eᵢ,eᵢ) / g(eᵢ,eᵢ)`.
    pub fn ricci_ratios(&self) -> Result<[T; 3]> {
        let ric = self.ricci()?;
        let a = self.params;
        Ok([0, 1, 2].map(|i| ric[i] / (a[i] * a[i])))
    }

    /// `−½ (a3 / (a1 a2))²`, the lower bound for all Ricci ratios.
    pub fn ricci_lower_bound(&self) -> Result<T> {
        self.require_riemannian()?;
        let [a1, a2, a3] = self.params;
        let r = a3 / (a1 * a2);
        Ok(-T::lit(0.5) * r * r)
    }

    /// Frame index (1-based) attaining the smallest Ricci ratio.
    pub fn ricci_min_index(&self) -> Result<usize> {
        let r = self.ricci_ratios()?;
        let mut best = 0;
        for i in 1..3 {
            if r[i] < r[best] {
                best = i;
            }
        }
        Ok(best + 1)
    }

    /// Replaces each parameter by `min(aᵢ, 1/ε)`; the result is Riemannian.
    pub fn epsilon_truncate(&self, eps: T) -> Result<Self> {
        if !(eps > T::zero() && eps <= T::one()) {
            return Err(Error::InvalidInput(format!(
                "epsilon must lie in (0, 1], got {eps}"
            )));
        }
        let cap = T::one() / eps;
        Self::with_frame(self.params.map(|a| a.min(cap)), self.frame)
    }

    /// `16π² a1 a2 a3`: Riemannian volume of SU(2) over the Haar probability.
    pub fn riemannian_volume_factor(&self) -> Result<T> {
        self.require_riemannian()?;
        let [a1, a2, a3] = self.params;
        Ok(T::lit(16.0) * T::PI() * T::PI() * a1 * a2 * a3)
    }

    pub fn require_riemannian(&self) -> Result<()> {
        match self.kind {
            MetricKind::Riemannian => Ok(()),
            MetricKind::SubRiemannian => Err(Error::SubRiemannianUnsupported),
            MetricKind::Degenerate => Err(Error::DegenerateUnsupported),
        }
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.kind == MetricKind::Degenerate {
            Err(Error::DegenerateUnsupported)
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bracket, exp, AlgebraVector};
    use crate::linalg::{mat3_max_abs_diff, mat3_mul, mat3_transpose};

    fn rotation(v: [f64; 3]) -> Mat3<f64> {
        crate::algebra::adjoint_matrix(exp(AlgebraVector::from_array(v)))
    }

    #[test]
    fn identity_form() {
        let m = MetricSpec::diagonalize(mat3_identity::<f64>()).unwrap();
        assert_eq!(m.params(), [1.0, 1.0, 1.0]);
        assert_eq!(*m.frame(), mat3_identity());
    }

    #[test]
    fn diagonal_form_sorted() {
        let q = [[4.0_f64, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 9.0]];
        let m = MetricSpec::diagonalize(q).unwrap();
        let p = m.params();
        assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] - 2.0).abs() < 1e-15 && (p[2] - 3.0).abs() < 1e-15);
        assert!((mat3_det(m.frame()) - 1.0).abs() < 1e-14);
        assert!(mat3_max_abs_diff(&mat3_conjugate_diag(m.frame(), [1.0, 4.0, 9.0]), &q) < 1e-14);
    }

    #[test]
    fn rotated_form_recovers_params_and_milnor_frame() {
        let r = rotation([0.4, -1.3, 2.2]);
        let q = mat3_conjugate_diag(&r, [1.0, 4.0, 9.0]);
        let m = MetricSpec::diagonalize(q).unwrap();
        for (got, want) in m.params().iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let f = |i| m.frame_vector(i);
        assert!(bracket(f(1), f(2)).max_abs_diff(f(3)) < 1e-12);
        assert!(bracket(f(2), f(3)).max_abs_diff(f(1)) < 1e-12);
        assert!(bracket(f(3), f(1)).max_abs_diff(f(2)) < 1e-12);
        let rtr = mat3_mul(&mat3_transpose(m.frame()), m.frame());
        assert!(mat3_max_abs_diff(&rtr, &mat3_identity()) < 1e-13);
    }

    #[test]
    fn reflection_gets_orientation_fix() {
        // A permutation with determinant −1 as the natural eigenbasis.
        let q = [[9.0_f64, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 1.0]];
        let m = MetricSpec::diagonalize(q).unwrap();
        assert!((mat3_det(m.frame()) - 1.0).abs() < 1e-14);
        assert!(bracket(m.frame_vector(1), m.frame_vector(2)).max_abs_diff(m.frame_vector(3)) < 1e-14);
    }

    #[test]
    fn rejects_non_spd() {
        let asym = [[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(MetricSpec::diagonalize(asym), Err(Error::NotSpd(_))));
        let indefinite = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(
            MetricSpec::diagonalize(indefinite),
            Err(Error::NotSpd(_))
        ));
        let singular = [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(MetricSpec::diagonalize(singular), Err(Error::NotSpd(_))));
    }

    #[test]
    fn invalid_params() {
        assert!(MetricSpec::from_params(2.0, 1.0, 3.0).is_err());
        assert!(MetricSpec::from_params(0.0, 1.0, 3.0).is_err());
        assert!(MetricSpec::from_params(f64::NAN, 1.0, 3.0).is_err());
        assert!(MetricSpec::from_params(f64::INFINITY, f64::INFINITY, f64::INFINITY).is_err());
    }

    #[test]
    fn scale_params() {
        let m = MetricSpec::from_params(1.0, 2.0, 3.0).unwrap();
        assert_eq!(m.scale(1.0).unwrap(), m);
        assert_eq!(m.scale(2.0).unwrap().params(), [2.0, 4.0, 6.0]);
        assert_eq!(m.scale(2.0).unwrap().q()[2][2], 36.0);
        assert!(m.scale(0.0).is_err());
    }

    #[test]
    fn norms() {
        let m = MetricSpec::from_params(1.0, 2.0, 3.0).unwrap();
        assert_eq!(m.norm(AlgebraVector::zero()), 0.0);
        assert_eq!(m.norm(AlgebraVector::basis(2)), 2.0);
        let sub = MetricSpec::from_params(1.0, 1.0, f64::INFINITY).unwrap();
        assert_eq!(sub.kind(), MetricKind::SubRiemannian);
        assert_eq!(sub.norm(AlgebraVector::basis(3)), f64::INFINITY);
        assert_eq!(sub.norm(AlgebraVector::new(3.0, 4.0, 0.0)), 5.0);
        let deg = MetricSpec::from_params(0.5, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(deg.kind(), MetricKind::Degenerate);
        assert_eq!(deg.norm(AlgebraVector::basis(1)), 0.5);
        assert_eq!(deg.norm(AlgebraVector::basis(2)), f64::INFINITY);
        assert!(deg.ricci().is_err());
    }

    #[test]
    fn ricci_values() {
        let round = MetricSpec::<f64>::bi_invariant().ricci().unwrap();
        assert_eq!(round, [0.5, 0.5, 0.5]);
        let berger = MetricSpec::from_params(1.0_f64, 1.0, 2.0)
            .unwrap()
            .ricci()
            .unwrap();
        assert!((berger[0] + 1.0).abs() < 1e-15);
        let sub = MetricSpec::from_params(1.0, 1.0, f64::INFINITY).unwrap();
        assert_eq!(sub.ricci(), Err(Error::SubRiemannianUnsupported));
    }

    #[test]
    fn ricci_extremal_index_for_berger_family() {
        // Large a3 with a1 = a2: the minimum ratio sits on e1 (and e2), not e3.
        let m = MetricSpec::from_params(1.0, 1.0, 10.0).unwrap();
        let r = m.ricci_ratios().unwrap();
        assert_eq!(m.ricci_min_index().unwrap(), 1);
        assert_eq!(r[0], r[1]);
        assert!(r[2] > r[0]);
    }

    #[test]
    fn epsilon_truncation() {
        let m = MetricSpec::from_params(1.0, 2.0, 3.0).unwrap();
        assert_eq!(m.epsilon_truncate(0.1).unwrap(), m);
        let sub = MetricSpec::from_params(1.0, 1.0, f64::INFINITY).unwrap();
        let t = sub.epsilon_truncate(0.1).unwrap();
        assert_eq!(t.params(), [1.0, 1.0, 10.0]);
        assert!(t.is_riemannian());
        let sub2 = MetricSpec::from_params(0.5, 1.0, f64::INFINITY).unwrap();
        assert_eq!(sub2.epsilon_truncate(0.01).unwrap().params(), [0.5, 1.0, 100.0]);
        assert!(sub.epsilon_truncate(0.0).is_err());
    }
}
