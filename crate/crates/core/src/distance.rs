//! Distance estimation for `d_(a1,a2,a3)`.
//!
//! The global estimator is a k-nearest-neighbour graph on Haar samples with
//! chord weights `|log(x⁻¹y)|_g` and Dijkstra from the identity. A chord is the
//! length of a one-parameter subgroup joining its endpoints, so every graph
//! path is a real curve and graph distances are upper bounds. Geodesic
//! shooting (rigid-body equations, RK4) refines single points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use crate::algebra::{self, from_rotation, inv_sinc, log, AlgebraVector, GroupElement};
use crate::error::{Error, Result};
use crate::metric::{MetricKind, MetricSpec};
use crate::sampling::{haar_samples_in_ball, haar_samples_in_slab, slab_ball_measure};
use crate::scalar::Real;
use crate::volume::round_ball_volume;

type G = GroupElement<f64>;
type V = AlgebraVector<f64>;
type M = MetricSpec<f64>;

/// Default threshold for the anisotropy gate.
pub const ANISOTROPY_LIMIT: f64 = 0.5;

/// `2·arccos(q0)`, the distance from the identity for `g(1,1,1)`.
pub fn round_distance(x: G) -> f64 {
    2.0 * x.q0.clamp(-1.0, 1.0).acos()
}

/// Bi-invariant distance between two elements.
pub fn round_distance_between(x: G, y: G) -> f64 {
    round_distance(x.relative(y))
}

/// `|log(x⁻¹y)|_g`.
pub fn chord_length(m: &M, x: G, y: G) -> Result<f64> {
    Ok(m.norm(log(x.relative(y))?))
}

/// Chord lengths for a metric with a fixed Milnor frame.
///
/// Points are conjugated once into the frame (`x ↦ c⁻¹xc` with `Ad_c` the
/// frame), after which `|log q|_g = (ρ / sin ρ)·2·√(Σ aᵢ² qᵢ²)`.
#[derive(Clone, Debug)]
struct ChordKernel {
    a2: [f64; 3],
    conj: G,
    /// Also try two-factor curves `t ↦ exp(tA)·exp(t·s·f₃)` (see [`GraphConfig::precession`]).
    precession: bool,
}

impl ChordKernel {
    fn new(m: &M) -> Self {
        let a = m.params();
        Self {
            a2: [a[0] * a[0], a[1] * a[1], a[2] * a[2]],
            conj: from_rotation(m.frame()),
            precession: false,
        }
    }

    fn with_precession(mut self, on: bool) -> Self {
        self.precession = on;
        self
    }

    /// Squared ranking key for neighbour selection, computed only when
    /// `bound` (a lower bound for it) is at most `worst`.
    #[inline]
    fn key(&self, q: &G, worst: f64) -> Option<f64> {
        let lsq = self.lower_sq(q);
        let boxed = if self.precession {
            // Heisenberg-type box: horizontal part plus `4π a1 a2 |v₃|` with `v₃ ≈ 2 q3`.
            let h = 4.0 * (self.a2[0] * q.q1 * q.q1 + self.a2[1] * q.q2 * q.q2);
            h + 8.0 * PI * (self.a2[0] * self.a2[1]).sqrt() * q.q3.abs()
        } else {
            f64::INFINITY
        };
        if lsq.min(boxed) > worst {
            return None;
        }
        let c = self.chord(q, lsq);
        Some((c * c).min(boxed))
    }

    /// Length of the cheapest known curve from the identity to `q` (frame coordinates).
    #[inline]
    fn weight(&self, q: &G) -> f64 {
        let c = self.chord(q, self.lower_sq(q));
        if self.precession {
            c.min(self.precession_length(q))
        } else {
            c
        }
    }

    /// Speed bound of `t ↦ exp(tA)·exp(tB)` with `B = s·f₃` and `exp(A)exp(B) = q`.
    ///
    /// The velocity is `Ad_{exp(-tB)}(A + B)`, a rotation of `w = A + B` about
    /// `f₃`, so the length is at most `√(a₃² w₃² + max(a₁², a₂²)|w_h|²)`, with
    /// equality when `a₁ = a₂`.
    fn two_factor_length(&self, q: &G, s: f64) -> f64 {
        let (sn, cs) = (0.5 * s).sin_cos();
        // q·exp(-B), exp(-B) = (cos(s/2), 0, 0, -sin(s/2)).
        let r = G::new(
            q.q0 * cs + q.q3 * sn,
            q.q1 * cs - q.q2 * sn,
            q.q2 * cs + q.q1 * sn,
            q.q3 * cs - q.q0 * sn,
        );
        let vn = (r.q1 * r.q1 + r.q2 * r.q2 + r.q3 * r.q3).sqrt();
        let ah2 = self.a2[0].max(self.a2[1]);
        let len = |f: f64| {
            let w = [f * r.q1, f * r.q2, f * r.q3 + s];
            (self.a2[2] * w[2] * w[2] + ah2 * (w[0] * w[0] + w[1] * w[1])).sqrt()
        };
        if vn == 0.0 {
            return len(0.0);
        }
        // Principal logarithm `v̂·θ` and the branch `v̂·(θ − 4π)`.
        let theta = 2.0 * vn.atan2(r.q0);
        len(theta / vn).min(len((theta - 4.0 * PI) / vn))
    }

    fn precession_length(&self, q: &G) -> f64 {
        const GRID: usize = 96;
        const LADDER: i32 = 24;
        let span = 4.0 * PI;
        let step = 2.0 * span / GRID as f64;
        let mut best = (f64::INFINITY, 0.0, step);
        let try_s = |s: f64, width: f64, best: &mut (f64, f64, f64)| {
            let l = self.two_factor_length(q, s);
            if l < best.0 {
                *best = (l, s, width);
            }
        };
        for i in 0..=GRID {
            try_s(-span + step * i as f64, step, &mut best);
        }
        // Near-vertical targets: the optimum has `exp(A) ≈ −I`, in a valley of
        // width comparable to the horizontal part around `s = z ∓ 2π`.
        let z = 2.0 * q.q3.atan2(q.q0);
        for centre in [z - 2.0 * PI, z + 2.0 * PI] {
            for k in 0..LADDER {
                let d = 0.5f64.powi(k);
                try_s(centre + d, d, &mut best);
                try_s(centre - d, d, &mut best);
            }
            try_s(centre, 0.5f64.powi(LADDER), &mut best);
        }
        let (mut lo, mut hi) = (best.1 - best.2, best.1 + best.2);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let mut f1 = self.two_factor_length(q, x1);
        let mut f2 = self.two_factor_length(q, x2);
        for _ in 0..40 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = self.two_factor_length(q, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = self.two_factor_length(q, x2);
            }
        }
        let mut out = best.0.min(f1).min(f2);
        if q.q1 == 0.0 && q.q2 == 0.0 {
            // Exactly vertical: `A` is any vector of length 2π and the loop is
            // horizontal, of length `a_h·√(4π|z| − z²)` with `|z| ≤ 2π`.
            let zz = z.abs().min(4.0 * PI - z.abs());
            let ah = self.a2[0].max(self.a2[1]).sqrt();
            out = out.min(ah * (4.0 * PI * zz - zz * zz).max(0.0).sqrt());
        }
        out
    }

    fn to_frame(&self, x: G) -> G {
        self.conj
            .inverse()
            .mul_unnormalized(x)
            .mul_unnormalized(self.conj)
    }

    /// `2·√(Σ aᵢ² qᵢ²)`, a lower bound for the chord of `q`.
    #[inline]
    fn lower_sq(&self, q: &G) -> f64 {
        4.0 * (self.a2[0] * q.q1 * q.q1 + self.a2[1] * q.q2 * q.q2 + self.a2[2] * q.q3 * q.q3)
    }

    /// Chord of a relative element already expressed in the frame.
    #[inline]
    fn chord(&self, q: &G, lower_sq: f64) -> f64 {
        let s = (q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3).sqrt();
        let rho = s.atan2(q.q0);
        let f = if rho < <f64 as Real>::SERIES_THRESHOLD || s == 0.0 {
            inv_sinc(rho)
        } else {
            rho / s
        };
        f * lower_sq.sqrt()
    }
}

/// Neighbour graph parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphConfig {
    /// Number of Haar samples (the identity is added on top).
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Threshold of the anisotropy gate; `None` disables the gate.
    pub anisotropy_limit: Option<f64>,
    /// Relax through parents as well as graph edges (see [`build_distance_field`]).
    pub any_angle: bool,
    /// Sample only the round ball of this radius around the identity.
    /// `None` samples the whole group.
    pub radius: Option<f64>,
    /// Further restrict samples to `|⟨q, f₃⟩| ≤ h` around the plane of the
    /// first two Milnor axes.
    pub slab: Option<f64>,
    /// Weight edges by the shorter of the chord and the best two-factor curve
    /// `exp(tA)·exp(t·s·f₃)`, and rank neighbours with a Heisenberg-type box.
    pub precession: bool,
}

impl GraphConfig {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            seed,
            anisotropy_limit: Some(ANISOTROPY_LIMIT),
            any_angle: true,
            radius: None,
            slab: None,
            precession: false,
        }
    }

    pub fn without_gate(mut self) -> Self {
        self.anisotropy_limit = None;
        self
    }

    /// Localized field on the round ball of radius `r` (see [`DistanceField::valid_radius`]).
    pub fn localized(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    /// Slab of half-width `h` (see [`slab_valid_radius`]).
    pub fn slab(mut self, h: f64) -> Self {
        self.slab = Some(h);
        self
    }

    /// Enables two-factor edge curves (see [`GraphConfig::precession`]).
    pub fn with_precession(mut self) -> Self {
        self.precession = true;
        self
    }

    /// Haar measure of the sampled region.
    pub fn region_measure(&self) -> f64 {
        let r = self.radius.unwrap_or(f64::INFINITY);
        match self.slab {
            Some(h) => slab_ball_measure(r, h),
            None => self.radius.map_or(1.0, round_ball_volume),
        }
    }

    /// Plain Dijkstra over graph edges only.
    pub fn graph_only(mut self) -> Self {
        self.any_angle = false;
        self
    }
}

/// `a3/(a1 a2)·h` with `h = (16π² a1 a2 a3·μ / n)^{1/3}` the expected g-spacing
/// of `n` Haar samples spread over a region of Haar measure `μ`. Scale invariant.
pub fn anisotropy_score(m: &M, n: usize, region_measure: f64) -> f64 {
    let [a1, a2, a3] = m.params();
    let spacing = (16.0 * PI * PI * a1 * a2 * a3 * region_measure / n as f64).cbrt();
    a3 / (a1 * a2) * spacing
}

/// Symmetric neighbour graph in compressed row form.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

impl Graph {
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.weights[r])
            .map(|(&j, &w)| (j as usize, w))
    }

    /// Median length over undirected edges.
    pub fn median_edge(&self) -> f64 {
        let mut w: Vec<f64> = (0..self.len())
            .flat_map(|i| self.neighbors(i).filter(move |&(j, _)| j > i).map(|(_, w)| w))
            .collect();
        if w.is_empty() {
            return 0.0;
        }
        let mid = w.len() / 2;
        w.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
        w[mid]
    }

    /// Single-source shortest paths: distances and predecessors (`usize::MAX` for none).
    pub fn dijkstra(&self, source: usize) -> (Vec<f64>, Vec<usize>) {
        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> Ordering {
                o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
            }
        }

        let n = self.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Item(0.0, source));
        while let Some(Item(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for (v, w) in self.neighbors(u) {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u;
                    heap.push(Item(nd, v));
                }
            }
        }
        (dist, pred)
    }
}

/// Any-angle variant of Dijkstra: relaxing `u → v` also tries the chord from
/// the parent of `u` straight to `v`. Every value is still the length of a
/// concrete piecewise one-parameter-subgroup curve.
fn theta_star(graph: &Graph, kernel: &ChordKernel, framed: &[G], source: usize) -> (Vec<f64>, Vec<usize>) {
    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Item {
        fn cmp(&self, o: &Self) -> Ordering {
            o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
        }
    }
    let n = graph.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    parent[source] = source;
    heap.push(Item(0.0, source));
    while let Some(Item(d, u)) = heap.pop() {
        if done[u] || d > dist[u] {
            continue;
        }
        done[u] = true;
        let pu = parent[u];
        for (v, w) in graph.neighbors(u) {
            if done[v] {
                continue;
            }
            let mut best = (d + w, u);
            if pu != u {
                let q = framed[pu].relative(framed[v]);
                if q.q0 > -1.0 + 1e-9 {
                    let c = dist[pu] + kernel.weight(&q);
                    if c < best.0 {
                        best = (c, pu);
                    }
                }
            }
            if best.0 < dist[v] {
                dist[v] = best.0;
                parent[v] = best.1;
                heap.push(Item(best.0, v));
            }
        }
    }
    parent[source] = usize::MAX;
    (dist, parent)
}

/// Sampled distance function `p ↦ d_g(e, p)`.
#[derive(Clone, Debug)]
pub struct DistanceField {
    metric: M,
    /// Index 0 is the identity, followed by the Haar samples.
    points: Vec<G>,
    dist: Vec<f64>,
    pred: Vec<usize>,
    graph: Graph,
    config: GraphConfig,
    median_edge: f64,
    tol: f64,
    valid_radius: f64,
}

/// Builds the neighbour graph and runs Dijkstra from the identity.
pub fn build_distance_field(m: &M, cfg: &GraphConfig) -> Result<DistanceField> {
    m.require_riemannian()?;
    if cfg.n < 1000 {
        return Err(Error::InvalidInput(format!(
            "need n >= 1000 samples, got {}",
            cfg.n
        )));
    }
    if cfg.k < 8 {
        return Err(Error::InvalidInput(format!(
            "need k >= 8 neighbours, got {}",
            cfg.k
        )));
    }
    if let Some(limit) = cfg.anisotropy_limit {
        let score = anisotropy_score(m, cfg.n, cfg.region_measure());
        if score > limit {
            return Err(Error::AnisotropyTooHigh { score, limit });
        }
    }

    let outer = cfg.radius.map_or(f64::INFINITY, |r| m.a1() * r);
    let valid_radius = match cfg.slab {
        Some(h) if h > 0.0 => slab_valid_radius(m, outer.min(4.0 * PI * m.a3()), h)?,
        Some(h) => {
            return Err(Error::InvalidInput(format!(
                "slab half-width must be positive, got {h}"
            )))
        }
        None => outer,
    };
    let mut points = Vec::with_capacity(cfg.n + 1);
    points.push(G::identity());
    let radius = cfg.radius.unwrap_or(f64::INFINITY);
    match cfg.slab {
        Some(h) => points.extend(haar_samples_in_slab(cfg.n, cfg.seed, radius, m.frame(), h)),
        None => points.extend(haar_samples_in_ball(cfg.n, cfg.seed, radius)),
    }
    let kernel = ChordKernel::new(m).with_precession(cfg.precession);
    let framed: Vec<G> = points.iter().map(|&x| kernel.to_frame(x)).collect();
    let graph = knn_graph(&kernel, &framed, cfg.k);
    let (dist, pred) = if cfg.any_angle {
        theta_star(&graph, &kernel, &framed, 0)
    } else {
        graph.dijkstra(0)
    };
    let unreachable = dist.iter().filter(|d| d.is_infinite()).count();
    if unreachable > 0 {
        return Err(Error::DisconnectedGraph { unreachable });
    }
    let median_edge = graph.median_edge();
    let tol = 2.0 * median_edge / (m.a1() * PI);
    Ok(DistanceField {
        metric: m.clone(),
        points,
        dist,
        pred,
        graph,
        config: cfg.clone(),
        median_edge,
        tol,
        valid_radius,
    })
}

fn knn_graph(kernel: &ChordKernel, framed: &[G], k: usize) -> Graph {
    let n = framed.len();
    let k = k.min(n - 1);

    let lists: Vec<Vec<(f64, u32)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = framed[i];
            // Sorted ascending by (key, index).
            let mut best: Vec<(f64, u32)> = Vec::with_capacity(k + 1);
            let mut worst_sq = f64::INFINITY;
            for (j, xj) in framed.iter().enumerate() {
                if j == i {
                    continue;
                }
                let q = xi.relative(*xj);
                let Some(key) = kernel.key(&q, worst_sq) else {
                    continue;
                };
                let cand = (key, j as u32);
                if best.len() == k {
                    let last = best[k - 1];
                    if (cand.0, cand.1) >= (last.0, last.1) {
                        continue;
                    }
                    best.pop();
                }
                let pos = best.partition_point(|e| (e.0, e.1) < (cand.0, cand.1));
                best.insert(pos, cand);
                if best.len() == k {
                    worst_sq = best[k - 1].0 * (1.0 + 1e-12);
                }
            }
            best.into_iter()
                .map(|(_, j)| (kernel.weight(&xi.relative(framed[j as usize])), j))
                .collect::<Vec<_>>()
        })
        .collect();

    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for (i, list) in lists.iter().enumerate() {
        for &(w, j) in list {
            adj[i].push((j, w));
            adj[j as usize].push((i as u32, w));
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    let mut weights = Vec::new();
    offsets.push(0);
    for mut row in adj {
        row.sort_by_key(|a| a.0);
        row.dedup_by(|a, b| a.0 == b.0);
        for (j, w) in row {
            targets.push(j);
            weights.push(w);
        }
        offsets.push(targets.len());
    }
    Graph {
        offsets,
        targets,
        weights,
    }
}

impl DistanceField {
    pub fn metric(&self) -> &M {
        &self.metric
    }

    pub fn points(&self) -> &[G] {
        &self.points
    }

    pub fn dist(&self) -> &[f64] {
        &self.dist
    }

    /// Distances of the Haar samples only (the identity excluded).
    pub fn sample_dist(&self) -> &[f64] {
        &self.dist[1..]
    }

    pub fn config(&self) -> &GraphConfig {
        &self.config
    }

    pub fn n_samples(&self) -> usize {
        self.points.len() - 1
    }

    /// Haar measure of the sampled region (1 for the whole group).
    pub fn region_measure(&self) -> f64 {
        self.config.region_measure()
    }

    /// Radii `r` up to which ball volumes can be read off the field. For a
    /// localized field of round radius `R` this is `a1·R`: a curve shorter than
    /// `a1·R` never leaves the sampled region. A slab lowers it further to
    /// [`slab_valid_radius`].
    pub fn valid_radius(&self) -> f64 {
        self.valid_radius
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Median edge length `h`, the step scale of the graph.
    pub fn median_edge(&self) -> f64 {
        self.median_edge
    }

    /// Declared graph tolerance `2h/(a1 π)`.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Graph path from the identity to point `p` (inclusive).
    pub fn path_to(&self, p: usize) -> Vec<usize> {
        let mut path = vec![p];
        let mut cur = p;
        while cur != 0 {
            cur = self.pred[cur];
            if cur == usize::MAX {
                return Vec::new();
            }
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Direction of the first edge of the graph path to `p`, as an algebra vector.
    pub fn initial_direction(&self, p: usize) -> Option<V> {
        let path = self.path_to(p);
        let first = *path.get(1)?;
        log(self.points[first]).ok()
    }

    /// Distances from sample `p` (a re-rooted Dijkstra on the same graph).
    pub fn reroot(&self, p: usize) -> Vec<f64> {
        self.graph.dijkstra(p).0
    }

    /// Upper estimate of `d(e, x)` for an arbitrary element: the best
    /// `dist[p] + chord(p, x)` over all points (edge curves of the field when
    /// two-factor edges are enabled).
    pub fn distance_to(&self, x: G) -> f64 {
        let kernel = ChordKernel::new(&self.metric).with_precession(self.config.precession);
        let xf = kernel.to_frame(x);
        let mut best = f64::INFINITY;
        for (p, &d) in self.dist.iter().enumerate() {
            if d >= best {
                continue;
            }
            let q = kernel.to_frame(self.points[p]).relative(xf);
            if q.q0 <= -1.0 + 1e-12 {
                continue;
            }
            if kernel.precession {
                best = best.min(d + kernel.weight(&q));
                continue;
            }
            let lsq = kernel.lower_sq(&q);
            if d + lsq.sqrt() >= best {
                continue;
            }
            best = best.min(d + kernel.chord(&q, lsq));
        }
        best
    }

    /// Index of the farthest sample.
    pub fn farthest(&self) -> usize {
        let mut best = 0;
        for (i, &d) in self.dist.iter().enumerate() {
            if d > self.dist[best] {
                best = i;
            }
        }
        best
    }

    /// `index,q0,q1,q2,q3,dist` with a header row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,q0,q1,q2,q3,dist")?;
        for (i, (p, d)) in self.points.iter().zip(&self.dist).enumerate() {
            writeln!(w, "{i},{},{},{},{},{d}", p.q0, p.q1, p.q2, p.q3)?;
        }
        Ok(())
    }
}

/// Largest sampled distance.
pub fn diameter_estimate(f: &DistanceField) -> f64 {
    f.dist.iter().copied().fold(0.0, f64::max)
}

/// `d_(1,1,1)(S, x)` for the circle `S = {exp(s e1)}`, minimized over `samples`
/// equally spaced points of the circle.
pub fn circle_distance(x: G, samples: usize) -> f64 {
    (0..samples)
        .map(|i| {
            let s = 4.0 * PI * i as f64 / samples as f64;
            round_distance_between(algebra::exp_axis(1, s), x)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Point of a geodesic in phase space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicState {
    pub position: G,
    /// Body momentum in the Milnor frame of the metric.
    pub momentum: [f64; 3],
    /// `½ mᵀ Q⁻¹ m`.
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<GeodesicState>,
    pub dt: f64,
    /// Largest relative deviation of the energy from its initial value.
    pub energy_drift: f64,
    /// Largest relative deviation of `|m|₂` from its initial value.
    pub momentum_drift: f64,
}

impl Trajectory {
    pub fn endpoint(&self) -> G {
        self.states.last().expect("non-empty trajectory").position
    }

    /// `T·√(2E)`.
    pub fn length(&self) -> f64 {
        let t = self.dt * (self.states.len() - 1) as f64;
        t * (2.0 * self.states[0].energy).sqrt()
    }
}

/// Conservation drift above which integration is rejected.
pub const DRIFT_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
struct Flow {
    inv_a2: [f64; 3],
    frame: [[f64; 3]; 3],
}

impl Flow {
    fn new(m: &M) -> Self {
        let a = m.params();
        Self {
            inv_a2: a.map(|x| if x.is_finite() { 1.0 / (x * x) } else { 0.0 }),
            frame: *m.frame(),
        }
    }

    fn omega(&self, mom: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| self.inv_a2[i] * mom[i])
    }

    fn energy(&self, mom: [f64; 3]) -> f64 {
        0.5 * (0..3).map(|i| self.inv_a2[i] * mom[i] * mom[i]).sum::<f64>()
    }

    /// Time derivative of (position, momentum).
    fn deriv(&self, g: [f64; 4], mom: [f64; 3]) -> ([f64; 4], [f64; 3]) {
        let w = self.omega(mom);
        let f = &self.frame;
        let p = [0, 1, 2].map(|r| 0.5 * (f[r][0] * w[0] + f[r][1] * w[1] + f[r][2] * w[2]));
        // ġ = g·(0, Ω/2); ṁ = m × Ω.
        let dg = [
            -(g[1] * p[0] + g[2] * p[1] + g[3] * p[2]),
            g[0] * p[0] + (g[2] * p[2] - g[3] * p[1]),
            g[0] * p[1] + (g[3] * p[0] - g[1] * p[2]),
            g[0] * p[2] + (g[1] * p[1] - g[2] * p[0]),
        ];
        let dm = [
            mom[1] * w[2] - mom[2] * w[1],
            mom[2] * w[0] - mom[0] * w[2],
            mom[0] * w[1] - mom[1] * w[0],
        ];
        (dg, dm)
    }

    fn rk4(&self, g: [f64; 4], mom: [f64; 3], h: f64) -> ([f64; 4], [f64; 3]) {
        let add4 = |a: [f64; 4], b: [f64; 4], s: f64| [0, 1, 2, 3].map(|i| a[i] + s * b[i]);
        let add3 = |a: [f64; 3], b: [f64; 3], s: f64| [0, 1, 2].map(|i| a[i] + s * b[i]);
        let (k1g, k1m) = self.deriv(g, mom);
        let (k2g, k2m) = self.deriv(add4(g, k1g, h / 2.0), add3(mom, k1m, h / 2.0));
        let (k3g, k3m) = self.deriv(add4(g, k2g, h / 2.0), add3(mom, k2m, h / 2.0));
        let (k4g, k4m) = self.deriv(add4(g, k3g, h), add3(mom, k3m, h));
        let g1 = [0, 1, 2, 3].map(|i| g[i] + h / 6.0 * (k1g[i] + 2.0 * k2g[i] + 2.0 * k3g[i] + k4g[i]));
        let m1 = [0, 1, 2].map(|i| mom[i] + h / 6.0 * (k1m[i] + 2.0 * k2m[i] + 2.0 * k3m[i] + k4m[i]));
        let n = g1.iter().map(|c| c * c).sum::<f64>().sqrt();
        (g1.map(|c| c / n), m1)
    }

    fn endpoint(&self, mom: [f64; 3], t: f64, steps: usize) -> G {
        let mut g = [1.0, 0.0, 0.0, 0.0];
        let mut mm = mom;
        let h = t / steps as f64;
        for _ in 0..steps {
            (g, mm) = self.rk4(g, mm, h);
        }
        G::from_array(g)
    }
}

fn relative_drift(value: f64, initial: f64) -> f64 {
    let d = (value - initial).abs();
    if initial.abs() > 0.0 {
        d / initial.abs()
    } else {
        d
    }
}

/// Integrates the geodesic from the identity with initial body momentum `m0`
/// (Milnor-frame coordinates) over `[0, t]` with fixed RK4 step `dt`.
///
/// For `a3 = ∞` the flow is the normal sub-Riemannian geodesic flow.
pub fn shoot_geodesic(m: &M, m0: [f64; 3], t: f64, dt: f64) -> Result<Trajectory> {
    m.require_nondegenerate()?;
    if !(t > 0.0 && dt > 0.0 && dt <= t / 100.0 * (1.0 + 1e-12)) {
        return Err(Error::InvalidInput(format!(
            "need t > 0 and 0 < dt <= t/100, got t = {t}, dt = {dt}"
        )));
    }
    let flow = Flow::new(m);
    let steps = (t / dt).round() as usize;
    let e0 = flow.energy(m0);
    let c0 = m0.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut g = [1.0, 0.0, 0.0, 0.0];
    let mut mom = m0;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(GeodesicState {
        position: G::identity(),
        momentum: m0,
        energy: e0,
    });
    let (mut e_drift, mut c_drift) = (0.0_f64, 0.0_f64);
    for _ in 0..steps {
        (g, mom) = flow.rk4(g, mom, dt);
        let e = flow.energy(mom);
        let c = mom.iter().map(|x| x * x).sum::<f64>().sqrt();
        e_drift = e_drift.max(relative_drift(e, e0));
        c_drift = c_drift.max(relative_drift(c, c0));
        states.push(GeodesicState {
            position: G::from_array(g),
            momentum: mom,
            energy: e,
        });
    }
    let drift = e_drift.max(c_drift);
    if drift > DRIFT_LIMIT {
        return Err(Error::StepTooLarge {
            drift,
            limit: DRIFT_LIMIT,
        });
    }
    Ok(Trajectory {
        states,
        dt,
        energy_drift: e_drift,
        momentum_drift: c_drift,
    })
}

/// Unit-speed geodesics from the identity used by [`slab_valid_radius`].
const REACH_DIRECTIONS: usize = 2000;
/// The sampled directions must stay below `h / REACH_MARGIN`.
const REACH_MARGIN: f64 = 1.1;

/// Largest `r ≤ t_max` such that the metric ball `B(r)` stays in the slab
/// `|⟨q, f₃⟩| ≤ h`.
///
/// `B(r)` is swept by unit-speed geodesics of length `≤ r`; the reach is read
/// off geodesics with initial momenta on a Fibonacci sphere.
pub fn slab_valid_radius(m: &M, t_max: f64, h: f64) -> Result<f64> {
    m.require_riemannian()?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need a finite positive radius, got {t_max}"
        )));
    }
    let flow = Flow::new(m);
    let a = m.params();
    let rate = (1.0 / a[0]).max(a[2] / (a[0] * a[0]));
    let steps = ((60.0 * t_max * rate).ceil() as usize).clamp(400, 200_000);
    let dt = t_max / steps as f64;
    let f3 = m.frame_vector(3).to_array();
    let limit = h / REACH_MARGIN;
    let golden = PI * (3.0 - 5f64.sqrt());
    let exit = (0..REACH_DIRECTIONS)
        .into_par_iter()
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / REACH_DIRECTIONS as f64;
            let s = (1.0 - z * z).sqrt();
            let u = [s * (golden * i as f64).cos(), s * (golden * i as f64).sin(), z];
            let mut mom = [0, 1, 2].map(|k| a[k] * u[k]);
            let mut g = [1.0, 0.0, 0.0, 0.0];
            for step in 1..=steps {
                (g, mom) = flow.rk4(g, mom, dt);
                if (g[1] * f3[0] + g[2] * f3[1] + g[3] * f3[2]).abs() > limit {
                    return (step - 1) as f64 * dt;
                }
            }
            t_max
        })
        .reduce(|| t_max, f64::min);
    Ok(exit)
}

/// Endpoint gap below which a shooting candidate counts as reaching the target.
pub const SHOOTING_TOL: f64 = 1e-6;

struct Shooter {
    flow: Flow,
    target: G,
}

impl Shooter {
    fn steps(&self, mom: [f64; 3]) -> usize {
        let w = self.flow.omega(mom);
        let speed = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        ((60.0 * speed).ceil() as usize).clamp(200, 40_000)
    }

    fn length(&self, mom: [f64; 3]) -> f64 {
        (2.0 * self.flow.energy(mom)).sqrt()
    }

    /// `log(endpoint⁻¹·target)` in Pauli coordinates.
    fn residual(&self, mom: [f64; 3]) -> Option<[f64; 3]> {
        let end = self.flow.endpoint(mom, 1.0, self.steps(mom));
        log(end.relative(self.target)).ok().map(|v| v.to_array())
    }

    fn newton(&self, start: [f64; 3]) -> Option<([f64; 3], f64)> {
        let norm = |r: [f64; 3]| (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let mut x = start;
        let mut r = self.residual(x)?;
        let mut rn = norm(r);
        for _ in 0..40 {
            if rn < 1e-12 {
                break;
            }
            let scale = norm(x).max(1.0);
            let h = 1e-6 * scale;
            let mut jac = [[0.0; 3]; 3];
            for c in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[c] += h;
                xm[c] -= h;
                let rp = self.residual(xp)?;
                let rm = self.residual(xm)?;
                for row in 0..3 {
                    jac[row][c] = (rp[row] - rm[row]) / (2.0 * h);
                }
            }
            let step = solve3(jac, r.map(|v| -v))?;
            let mut lambda = 1.0;
            let mut improved = false;
            for _ in 0..30 {
                let cand = [0, 1, 2].map(|i| x[i] + lambda * step[i]);
                if let Some(rc) = self.residual(cand) {
                    let cn = norm(rc);
                    if cn < rn {
                        x = cand;
                        r = rc;
                        rn = cn;
                        improved = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !improved {
                break;
            }
        }
        Some((x, rn))
    }
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for c in col..4 {
                    m[row][c] -= f * m[col][c];
                }
            }
        }
    }
    Some([0, 1, 2].map(|i| m[i][3] / m[i][i]))
}

/// Shooting refinement from the chord direction `log x`.
pub fn refine_distance(m: &M, x: G, d_init: f64) -> f64 {
    let dir = log(x).unwrap_or_else(|_| AlgebraVector::basis(1));
    refine_distance_from(m, x, d_init, dir)
}

/// Shooting refinement of an upper bound `d_init` for `d(e, x)`.
///
/// Initial momenta: the direction `dir` (typically the first edge of the graph
/// path) scaled to length `d_init`, perturbed on a 3×3×3 stencil; the best
/// stencil points seed a damped Newton iteration on the endpoint gap. Among
/// candidates that reach `x` within [`SHOOTING_TOL`], the shortest length
/// (plus a3 times the gap, so the value stays an upper bound) is returned if
/// it improves on `d_init`.
pub fn refine_distance_from(m: &M, x: G, d_init: f64, dir: V) -> f64 {
    if m.kind() == MetricKind::Degenerate || !(d_init.is_finite()) || d_init <= 0.0 {
        return d_init;
    }
    let flow = Flow::new(m);
    let shooter = Shooter { flow, target: x };
    let a = m.params();
    let a2 = a.map(|v| if v.is_finite() { v * v } else { 0.0 });
    let frame_dir = m.frame_components(dir);
    let mut base = [0, 1, 2].map(|i| a2[i] * frame_dir[i]);
    let len = shooter.length(base);
    if len <= 0.0 || !len.is_finite() {
        base = [a2[0], 0.0, 0.0];
    }
    let len = shooter.length(base);
    base = base.map(|v| v * d_init / len);

    let mscale = base.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
    let delta = 0.15 * mscale;
    let mut stencil: Vec<([f64; 3], f64)> = Vec::with_capacity(27);
    for i in -1..=1 {
        for j in -1..=1 {
            for k in -1..=1 {
                let mom = [
                    base[0] + delta * i as f64,
                    base[1] + delta * j as f64,
                    base[2] + delta * k as f64,
                ];
                if let Some(r) = shooter.residual(mom) {
                    let rn = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                    stencil.push((mom, rn));
                }
            }
        }
    }
    stencil.sort_by(|p, q| p.1.total_cmp(&q.1));

    let mut best = d_init;
    let lower = a[0] * round_distance(x);
    for (start, _) in stencil.iter().take(4) {
        if let Some((mom, gap)) = shooter.newton(*start) {
            if gap < SHOOTING_TOL {
                let slack = if a[2].is_finite() { a[2] * gap } else { 0.0 };
                let cand = shooter.length(mom) + slack;
                if cand >= lower - 1e-9 && cand < best {
                    best = cand;
                }
            }
        }
    }
    best
}

/// Convergence record of the ε-approximation of a sub-Riemannian distance.
#[derive(Clone, Debug, PartialEq)]
pub struct SubDistance {
    pub value: f64,
    /// `(ε, d_ε(e, x), graph tol)` in schedule order.
    pub sequence: Vec<(f64, f64, f64)>,
    /// Whether the sequence is nondecreasing within twice the graph tolerance.
    pub monotone: bool,
}

/// `d(e, x)` for each target through the Riemannian metrics
/// `g_ε = (min(aᵢ, 1/ε))`, built on the same Haar samples for every ε.
/// Fields for strongly anisotropic `g_ε` should use [`GraphConfig::with_precession`].
pub fn sub_distance(
    m: &M,
    targets: &[G],
    eps_schedule: &[f64],
    cfg: &GraphConfig,
) -> Result<Vec<SubDistance>> {
    m.require_nondegenerate()?;
    if eps_schedule.is_empty() || eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput(
            "epsilon schedule must be non-empty and strictly decreasing".into(),
        ));
    }
    let mut sequences = vec![Vec::with_capacity(eps_schedule.len()); targets.len()];
    for &eps in eps_schedule {
        let g = m.epsilon_truncate(eps)?;
        let field = build_distance_field(&g, cfg)?;
        for (seq, &x) in sequences.iter_mut().zip(targets) {
            seq.push((eps, field.distance_to(x), field.tol()));
        }
    }
    Ok(sequences
        .into_iter()
        .map(|sequence| {
            let monotone = sequence
                .windows(2)
                .all(|w| w[0].1 <= w[1].1 * (1.0 + 2.0 * w[0].2.max(w[1].2)));
            SubDistance {
                value: sequence.last().expect("non-empty").1,
                sequence,
                monotone,
            }
        })
        .collect())
}

/// Competitor for `exp(s e3)` under `(a1, a2, ·)`: the commutator loop
/// `H(u, u)` followed by the chord to the target, minimized over `u`.
///
/// For `a3 = ∞` the chord must be horizontal, so `u` is the root of the
/// vertical component of `log(H(u, u)⁻¹·exp(s e3))` nearest `√|s|`.
pub fn heisenberg_competitor(m: &M, s: f64) -> f64 {
    let [a1, a2, a3] = m.params();
    let target = algebra::exp_axis(3, s);
    let rest = |u: f64| log(algebra::commutator_h(u, u).relative(target)).ok();
    let u0 = s.abs().sqrt();
    if !a3.is_finite() {
        if s == 0.0 {
            return 0.0;
        }
        let vertical = |u: f64| rest(u).map_or(f64::NAN, |v| v.to_array()[2]);
        let mut roots = Vec::new();
        let grid: Vec<f64> = (0..=400).map(|i| u0 * (0.25 + 1.75 * i as f64 / 400.0)).collect();
        for w in grid.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (mut flo, fhi) = (vertical(lo), vertical(hi));
            if !(flo * fhi <= 0.0) {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = vertical(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        return roots
            .into_iter()
            .filter_map(|u| {
                let v = rest(u)?.to_array();
                // The residual is horizontal up to rounding.
                let h = (a1 * a1 * v[0] * v[0] + a2 * a2 * v[1] * v[1]).sqrt();
                Some(2.0 * u * (a1 + a2) + h)
            })
            .fold(f64::INFINITY, f64::min);
    }
    let mut best = f64::INFINITY;
    for i in 1..=200 {
        let u = u0 * (0.5 + i as f64 / 200.0);
        if let Some(v) = rest(u) {
            best = best.min(2.0 * u * (a1 + a2) + m.norm(v));
        }
    }
    best
}

/// Pauli coordinates of a velocity given in the Milnor frame.
pub fn frame_velocity_to_algebra(m: &M, w: [f64; 3]) -> V {
    let f = m.frame();
    AlgebraVector::new(
        f[0][0] * w[0] + f[0][1] * w[1] + f[0][2] * w[2],
        f[1][0] * w[0] + f[1][1] * w[1] + f[1][2] * w[2],
        f[2][0] * w[0] + f[2][1] * w[1] + f[2][2] * w[2],
    )
}
