//! Laplacian spectra through Peter–Weyl.
//!
//! On the spin-`j` irrep the generators are `Eₖ = −i·Jₖ` with `Jₖ` the usual
//! angular momentum matrices, so `−Σ aₖ⁻² Eₖ² = Σ aₖ⁻² Jₖ²`. In the basis
//! `|j, m⟩` this is real and only couples `m` with `m ± 2`: it splits into two
//! symmetric tridiagonal blocks, one per parity of `j − m`. Each eigenvalue of
//! the irrep enters the group spectrum with multiplicity `2j + 1`.
//!
//! Spins are passed as `two_j = 2j`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{jacobi_symmetric, tridiagonal_eigenvalues};
use crate::metric::MetricSpec;
use crate::scalar::{powi, Field};

type M = MetricSpec<f64>;

/// Largest irrep dimension `2j + 1`.
pub const MAX_DIM: usize = 512;
/// Eigenvalues closer than this are merged.
pub const MERGE_TOL: f64 = 1e-9;
/// Largest omitted heat-trace tail accepted by [`SpectrumTable::heat_trace`].
pub const TRACE_TOL: f64 = 1e-8;
/// Off-diagonal tolerance of the Jacobi solver.
pub const JACOBI_TOL: f64 = 1e-13;

/// Row-major complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add_scaled(&self, o: &CMatrix, s: Complex64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + s * b).collect(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, o: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A − A*|`.
    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}

/// `dπ_j(e₁), dπ_j(e₂), dπ_j(e₃)` on `C^{2j+1}`, basis `m = j, j−1, …, −j`.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepGenerators {
    pub two_j: u32,
    pub e: [CMatrix; 3],
}

impl IrrepGenerators {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `EᵢEⱼ − EⱼEᵢ`.
    pub fn commutator(&self, i: usize, j: usize) -> CMatrix {
        let a = self.e[i].mul(&self.e[j]);
        let b = self.e[j].mul(&self.e[i]);
        a.add_scaled(&b, Complex64::new(-1.0, 0.0))
    }

    /// `−(E₁² + E₂² + E₃²)`.
    pub fn casimir(&self) -> CMatrix {
        let mut c = CMatrix::zeros(self.dim());
        for e in &self.e {
            c = c.add_scaled(&e.mul(e), Complex64::new(-1.0, 0.0));
        }
        c
    }
}

fn check_dim(two_j: u32) -> Result<usize> {
    let dim = two_j as usize + 1;
    if dim > MAX_DIM {
        return Err(Error::CutoffExceeded { dim, cap: MAX_DIM });
    }
    Ok(dim)
}

/// `⟨m|J₊|m−1⟩ = √(j(j+1) − m(m−1))`, with `m = j − k` for basis index `k`.
fn ladder(two_j: u32, k: usize) -> f64 {
    let j = two_j as f64 / 2.0;
    let m = j - k as f64;
    (j * (j + 1.0) - m * (m - 1.0)).sqrt()
}

/// Ladder-operator construction of the spin-`j` generators.
pub fn irrep_generators(two_j: u32) -> Result<IrrepGenerators> {
    let n = check_dim(two_j)?;
    let j = two_j as f64 / 2.0;
    let mut e1 = CMatrix::zeros(n);
    let mut e2 = CMatrix::zeros(n);
    let mut e3 = CMatrix::zeros(n);
    for k in 0..n {
        let m = j - k as f64;
        // E₃ = −i J_z.
        e3.data[k * n + k] = Complex64::new(0.0, -m);
        if k + 1 < n {
            // J₊ maps index k+1 (m−1) to k (m): entry (k, k+1).
            let c = ladder(two_j, k) / 2.0;
            // J_x = (J₊ + J₋)/2, J_y = (J₊ − J₋)/(2i); E = −iJ.
            e1.data[k * n + k + 1] = Complex64::new(0.0, -c);
            e1.data[(k + 1) * n + k] = Complex64::new(0.0, -c);
            e2.data[k * n + k + 1] = Complex64::new(-c, 0.0);
            e2.data[(k + 1) * n + k] = Complex64::new(c, 0.0);
        }
    }
    Ok(IrrepGenerators {
        two_j,
        e: [e1, e2, e3],
    })
}

/// `aᵢ⁻²`, zero for infinite parameters.
fn inverse_squares(params: [f64; 3]) -> [f64; 3] {
    params.map(|a| if a.is_finite() { 1.0 / (a * a) } else { 0.0 })
}

/// `−Σ aᵢ⁻² Eᵢ'²` with `Eᵢ'` the generators of the metric's Milnor frame;
/// infinite parameters are dropped (sub-Laplacian).
pub fn laplacian_matrix(g: &IrrepGenerators, m: &M) -> CMatrix {
    let c = inverse_squares(m.params());
    let f = m.frame();
    let n = g.dim();
    let mut out = CMatrix::zeros(n);
    for (i, &ci) in c.iter().enumerate() {
        if ci == 0.0 {
            continue;
        }
        let mut fi = CMatrix::zeros(n);
        for (r, e) in g.e.iter().enumerate() {
            fi = fi.add_scaled(e, Complex64::new(f[r][i], 0.0));
        }
        out = out.add_scaled(&fi.mul(&fi), Complex64::new(-ci, 0.0));
    }
    out
}

/// Eigenvalues of a Hermitian matrix by Jacobi on the real embedding
/// `[[Re, −Im], [Im, Re]]`, whose spectrum is that of the matrix doubled.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.n;
    let big = 2 * n;
    let mut a = vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            let z = h.get(i, j);
            a[i * big + j] = z.re;
            a[(i + n) * big + (j + n)] = z.re;
            a[(i + n) * big + j] = z.im;
            a[i * big + (j + n)] = -z.im;
        }
    }
    let eig = jacobi_symmetric(&a, big, JACOBI_TOL, 100);
    eig.values.into_iter().step_by(2).collect()
}

/// Eigenvalues of `−Σ aᵢ⁻² Eᵢ²` on the spin-`j` irrep from the two
/// tridiagonal parity blocks, ascending.
pub fn irrep_eigenvalues(params: [f64; 3], two_j: u32) -> Result<Vec<f64>> {
    let n = check_dim(two_j)?;
    let [c1, c2, c3] = inverse_squares(params);
    let j = two_j as f64 / 2.0;
    let cas = j * (j + 1.0);
    let diag = |k: usize| {
        let m = j - k as f64;
        0.5 * (c1 + c2) * (cas - m * m) + c3 * m * m
    };
    // ⟨k|L|k+2⟩ = (c1 − c2)/4 · ⟨m|J₊²|m−2⟩.
    let off = |k: usize| 0.25 * (c1 - c2) * ladder(two_j, k) * ladder(two_j, k + 1);
    let mut values = Vec::with_capacity(n);
    for start in 0..2.min(n) {
        let idx: Vec<usize> = (start..n).step_by(2).collect();
        let d: Vec<f64> = idx.iter().map(|&k| diag(k)).collect();
        let e: Vec<f64> = idx.windows(2).map(|w| off(w[0])).collect();
        values.extend(tridiagonal_eigenvalues(&d, &e));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Lower bound for the eigenvalues on the spin-`j` irrep:
/// `j/b² + j²/c²` with `b ≤ c` the two largest parameters.
///
/// `Σ aᵢ⁻² Jᵢ² ⪰ c⁻² J² + (b⁻² − c⁻²)(J² − J_z'²)` along the axis of `c`,
/// and `J² − J_z'² ⪰ j`.
pub fn irrep_lower_bound(params: [f64; 3], two_j: u32) -> f64 {
    let mut a = params;
    a.sort_by(f64::total_cmp);
    let [_, b, c] = inverse_squares(a);
    let j = two_j as f64 / 2.0;
    j * b + j * j * c
}

/// Upper bound for `Σ_{2j' > two_j} (2j'+1)² e^{−t λ_min(j')}` from
/// [`irrep_lower_bound`]; the terms decay at least geometrically.
pub fn tail_bound(params: [f64; 3], two_j: u32, t: f64) -> f64 {
    let term = |k: u32| ((k + 1) as f64).powi(2) * (-t * irrep_lower_bound(params, k)).exp();
    let mut k = two_j + 1;
    let mut sum = 0.0;
    let mut cur = term(k);
    loop {
        let next = term(k + 1);
        sum += cur;
        if cur == 0.0 {
            return sum;
        }
        let ratio = next / cur;
        // Ratios decrease in k, so past a ratio below one the rest is geometric.
        if ratio < 0.5 {
            return sum + next / (1.0 - ratio);
        }
        if k > 1 << 24 {
            return f64::INFINITY;
        }
        k += 1;
        cur = next;
    }
}

/// Smallest `two_j` with `λ_min(j + ½) > 50/t_min` and omitted heat-trace
/// tail at `t_min` below [`TRACE_TOL`].
pub fn adaptive_two_j_max(params: [f64; 3], t_min: f64) -> Result<u32> {
    if !(t_min > 0.0) {
        return Err(Error::InvalidInput(format!("need t_min > 0, got {t_min}")));
    }
    let need = 50.0 / t_min;
    for two_j in 0..MAX_DIM as u32 {
        if irrep_lower_bound(params, two_j + 1) > need && tail_bound(params, two_j, t_min) < TRACE_TOL {
            return Ok(two_j);
        }
    }
    Err(Error::CutoffExceeded {
        dim: MAX_DIM + 1,
        cap: MAX_DIM,
    })
}

/// Merged group spectrum through a spin cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable {
    pub params: [f64; 3],
    /// `(λ, multiplicity)`, ascending, first entry `(0, 1)`.
    pub entries: Vec<(f64, u64)>,
    pub two_j_max: u32,
    /// Reference time of `truncation_bound`.
    pub reference_time: f64,
    /// Bound on the omitted heat-trace tail at `reference_time`.
    pub truncation_bound: f64,
}

/// Eigenvalues of all irreps with `2j ≤ two_j_max`, merged within
/// [`MERGE_TOL`]. The truncation bound is reported at time 1.
pub fn spectrum_table(m: &M, two_j_max: u32) -> Result<SpectrumTable> {
    spectrum_table_at(m, two_j_max, 1.0)
}

/// [`spectrum_table`] with the cutoff chosen by [`adaptive_two_j_max`].
pub fn spectrum_table_for_time(m: &M, t_min: f64) -> Result<SpectrumTable> {
    let two_j = adaptive_two_j_max(m.params(), t_min)?;
    spectrum_table_at(m, two_j, t_min)
}

fn spectrum_table_at(m: &M, two_j_max: u32, reference_time: f64) -> Result<SpectrumTable> {
    m.require_nondegenerate()?;
    check_dim(two_j_max)?;
    let params = m.params();
    let per_irrep: Vec<(u32, Vec<f64>)> = (0..=two_j_max)
        .into_par_iter()
        .map(|k| irrep_eigenvalues(params, k).map(|v| (k, v)))
        .collect::<Result<_>>()?;
    let mut all: Vec<(f64, u64)> = per_irrep
        .into_iter()
        .flat_map(|(k, v)| v.into_iter().map(move |l| (l, (k + 1) as u64)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut entries: Vec<(f64, u64)> = Vec::new();
    let mut anchor = f64::NEG_INFINITY;
    for (l, mult) in all {
        match entries.last_mut() {
            Some(last) if l - anchor <= MERGE_TOL => last.1 += mult,
            _ => {
                anchor = l;
                entries.push((l, mult));
            }
        }
    }
    // The constants: the spin-0 eigenvalue is exactly zero.
    debug_assert!(entries[0] == (0.0, 1));
    Ok(SpectrumTable {
        params,
        entries,
        two_j_max,
        reference_time,
        truncation_bound: tail_bound(params, two_j_max, reference_time),
    })
}

impl SpectrumTable {
    /// Smallest nonzero eigenvalue.
    pub fn lambda1(&self) -> Option<f64> {
        self.entries.get(1).map(|e| e.0)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Every omitted eigenvalue is at least this.
    pub fn safe_limit(&self) -> f64 {
        irrep_lower_bound(self.params, self.two_j_max + 1)
    }

    /// `#{i : λᵢ < s}` with multiplicity.
    pub fn weyl_count(&self, s: f64) -> Result<u64> {
        let safe_limit = self.safe_limit();
        if s > safe_limit {
            return Err(Error::CountTruncated { s, safe_limit });
        }
        Ok(self.entries.iter().take_while(|e| e.0 < s).map(|e| e.1).sum())
    }

    /// Bound on the omitted tail of the heat trace at `time`.
    pub fn tail_at(&self, time: f64) -> f64 {
        tail_bound(self.params, self.two_j_max, time)
    }

    /// `Σ mult·e^{−time·λ}`.
    pub fn heat_trace(&self, time: f64) -> Result<f64> {
        if !(time > 0.0) {
            return Err(Error::InvalidInput(format!("need time > 0, got {time}")));
        }
        let bound = self.tail_at(time);
        if bound > TRACE_TOL {
            return Err(Error::TraceTruncated { time, bound });
        }
        // Largest terms last for a slightly better sum.
        Ok(self
            .entries
            .iter()
            .rev()
            .map(|&(l, mult)| mult as f64 * (-time * l).exp())
            .sum())
    }

    /// Rows `a1,a2,a3,lambda,multiplicity`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "a1,a2,a3,lambda,multiplicity")?;
        let [a1, a2, a3] = self.params;
        for &(l, mult) in &self.entries {
            writeln!(w, "{a1},{a2},{a3},{l:.17e},{mult}")?;
        }
        Ok(())
    }
}

/// `min{¼(a1⁻² + a2⁻² + a3⁻²), a2⁻² + a3⁻²}`.
pub fn lambda1_exact(m: &M) -> Result<f64> {
    m.require_riemannian()?;
    let [a1, a2, a3] = m.params();
    let (c1, c2, c3) = (1.0 / (a1 * a1), 1.0 / (a2 * a2), 1.0 / (a3 * a3));
    Ok((0.25 * (c1 + c2 + c3)).min(c2 + c3))
}

/// The counting model as a function of `u = √t`:
/// `1`, `a2² u²`, `a1² a2² u⁴`, `a1 a2 a3 u³`, switching at
/// `u = 1/a2`, `1/a1`, `a3/(a1 a2)`. Equals `1 / V̄(1/u)`.
pub fn weyl_model_sqrt<T: Field>(a: [T; 3], u: &T) -> T {
    let [a1, a2, a3] = a;
    let a1a2 = a1.clone() * a2.clone();
    if a2.clone() * u.clone() <= T::one() {
        T::one()
    } else if a1.clone() * u.clone() <= T::one() {
        powi(&a2, 2) * powi(u, 2)
    } else if a1a2.clone() * u.clone() <= a3 {
        powi(&a1a2, 2) * powi(u, 4)
    } else {
        a1a2 * a3 * powi(u, 3)
    }
}

/// [`weyl_model_sqrt`] at `u = √t`.
pub fn weyl_model(m: &M, t: f64) -> Result<f64> {
    m.require_riemannian()?;
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("need t > 0, got {t}")));
    }
    Ok(weyl_model_sqrt(m.params(), &t.sqrt()))
}
