//! Explicit graphs `G` with `t(H,G)^{e(T)} < t(T,G)^{e(H)}`.
//!
//! Three constructions:
//! - the random blow-up of `T` driven by a dual certificate `y`: part `S_v`
//!   has `N^{m − y(v)q}` vertices, each cross pair over an edge `e` is kept
//!   with probability `N^{−y(e)q}`, and padding brings the total to
//!   `v(T)·N^m`;
//! - the full `d`-ary tree of height `rad(T)`, for pairs violating the
//!   radius ratio;
//! - a deterministic step graph whose part sizes and edge densities are
//!   tuned numerically, starting from the shape suggested by `y`.
//!
//! The tuner works in floating point but only proposes candidates. A
//! witness is always decided by exact big-integer homomorphism counts.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::certificates::{verify_dual, DualCertificate};
use crate::error::{Error, Result};
use crate::exactlp::{self, Cmp, Constraint, LinearProgram, Sense};
use crate::graph::Graph;
use crate::hom::{self, CostVector};
use crate::tree_catalog::Forest;
use crate::Q;

pub const DEFAULT_VERTEX_CAP: u64 = 200_000;
pub const DEFAULT_EDGE_CAP: u64 = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub vertices: u64,
    pub edges: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { vertices: DEFAULT_VERTEX_CAP, edges: DEFAULT_EDGE_CAP }
    }
}

/// Exact comparison of `t(H,G)^{e(T)}` against `t(T,G)^{e(H)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityWitness {
    /// e.g. `blowup N=3 m=2 q=3 seed=0`.
    pub construction: String,
    pub vertices: usize,
    pub edges: usize,
    pub hom_h: BigUint,
    pub hom_t: BigUint,
    pub lhs: Q,
    pub rhs: Q,
    pub separated: bool,
}

impl fmt::Display for DensityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction {}", self.construction)?;
        writeln!(f, "vertices {} edges {}", self.vertices, self.edges)?;
        writeln!(f, "hom(H,G) {}", self.hom_h)?;
        writeln!(f, "hom(T,G) {}", self.hom_t)?;
        writeln!(f, "lhs {}", crate::fraction_string(&self.lhs))?;
        writeln!(f, "rhs {}", crate::fraction_string(&self.rhs))?;
        write!(f, "separated {}", self.separated)
    }
}

/// `t(F,G) = hom(F,G)/v(G)^{v(F)}`.
pub fn density(f: &Forest, g: &Graph) -> Q {
    let n = BigUint::from(g.vertex_count());
    Q::new(hom::count_homomorphisms(f, g).into(), n.pow(f.vertex_count() as u32).into())
}

pub fn densities(h: &Forest, t: &Forest, g: &Graph) -> (Q, Q) {
    (density(h, g), density(t, g))
}

/// Evaluates both sides of the domination inequality on `g`.
pub fn witness(h: &Forest, t: &Forest, g: &Graph, construction: impl Into<String>) -> DensityWitness {
    let hom_h = hom::count_homomorphisms(h, g);
    let hom_t = hom::count_homomorphisms(t, g);
    let n = BigUint::from(g.vertex_count());
    let (eh, et) = (h.edge_count() as u32, t.edge_count() as u32);
    let (vh, vt) = (h.vertex_count() as u32, t.vertex_count() as u32);
    // compare hom_h^{eT} · n^{vT·eH} < hom_t^{eH} · n^{vH·eT} without dividing
    let left = hom_h.pow(et) * n.pow(vt * eh);
    let right = hom_t.pow(eh) * n.pow(vh * et);
    let lhs = Q::new(hom_h.pow(et).into(), n.pow(vh * et).into());
    let rhs = Q::new(hom_t.pow(eh).into(), n.pow(vt * eh).into());
    DensityWitness {
        construction: construction.into(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        hom_h,
        hom_t,
        lhs,
        rhs,
        separated: left < right,
    }
}

fn check_vertices(n: u128, caps: &Caps) -> Result<()> {
    if n > caps.vertices as u128 {
        return Err(Error::SizeGuard { vertices: n, cap: caps.vertices });
    }
    Ok(())
}

fn check_edges(m: u128, caps: &Caps) -> Result<()> {
    if m > caps.edges as u128 {
        return Err(Error::EdgeGuard { edges: m, cap: caps.edges });
    }
    Ok(())
}

/// Parameters of the random blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSpec {
    pub y: DualCertificate,
    /// Every `y·q` is an integer.
    pub q: u64,
    pub m: u64,
    pub n: u64,
    pub seed: u64,
}

fn scaled(w: &Q, q: u64) -> u64 {
    let v = w * Q::from_integer(q.into());
    assert!(v.is_integer(), "q does not clear denominators");
    v.to_integer().to_u64().expect("exponent fits in u64")
}

impl BlowupSpec {
    /// `q` is the common denominator of `y` and `m` the smallest value keeping
    /// every part non-empty, i.e. `max_v y(v)·q`.
    pub fn desk(y: DualCertificate, n: u64, seed: u64) -> Self {
        let q = y.common_denominator().to_u64().expect("denominator fits in u64");
        let m = y.vertex_weights.iter().map(|w| scaled(w, q)).max().unwrap_or(0);
        BlowupSpec { y, q, m, n, seed }
    }

    /// The `m` used in the asymptotic argument: the least integer above `q·Σy`.
    pub fn proof_m(&self) -> u64 {
        let xi = self.y.objective() * Q::from_integer(self.q.into());
        xi.floor().to_integer().to_u64().expect("fits") + 1
    }

    pub fn vertex_exponents(&self) -> Vec<u64> {
        self.y.vertex_weights.iter().map(|w| self.m.saturating_sub(scaled(w, self.q))).collect()
    }

    pub fn edge_exponents(&self) -> Vec<u64> {
        self.y.edge_weights.iter().map(|w| scaled(w, self.q)).collect()
    }

    /// `N^{m − y(v)q}` per vertex of `T`, or `None` on overflow.
    pub fn part_sizes(&self) -> Option<Vec<u128>> {
        self.vertex_exponents().iter().map(|&e| (self.n as u128).checked_pow(e.try_into().ok()?)).collect()
    }

    /// `v(T)·N^m`, or `None` on overflow.
    pub fn vertex_count(&self) -> Option<u128> {
        (self.n as u128).checked_pow(self.m.try_into().ok()?)?.checked_mul(self.y.t.vertex_count() as u128)
    }

    pub fn label(&self) -> String {
        format!("blowup N={} m={} q={} seed={}", self.n, self.m, self.q, self.seed)
    }
}

/// Builds `G_N`. Vertices of `S_v` come first in `T`'s vertex order, then
/// the padding set. Edge slot `e` draws from its own ChaCha stream.
pub fn build_blowup(spec: &BlowupSpec, caps: &Caps) -> Result<Graph> {
    let t = &spec.y.t;
    if spec.y.vertex_weights.iter().any(|w| scaled(w, spec.q) > spec.m) {
        return Err(Error::CertificateInvalid("m below some y(v)·q".into()));
    }
    let total = spec.vertex_count().ok_or(Error::SizeGuard { vertices: u128::MAX, cap: caps.vertices })?;
    check_vertices(total, caps)?;
    let sizes: Vec<usize> = spec.part_sizes().expect("bounded by total").into_iter().map(|s| s as usize).collect();
    let mut offset = vec![0usize; sizes.len() + 1];
    for (v, s) in sizes.iter().enumerate() {
        offset[v + 1] = offset[v] + s;
    }
    let edge_exps = spec.edge_exponents();
    let expected: f64 = t
        .edges()
        .iter()
        .zip(&edge_exps)
        .map(|(&(a, b), &x)| sizes[a] as f64 * sizes[b] as f64 * (spec.n as f64).powi(-(x as i32)))
        .sum();
    check_edges(expected as u128, caps)?;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); total as usize];
    for (e, (&(a, b), &x)) in t.edges().iter().zip(&edge_exps).enumerate() {
        let (sa, sb) = (sizes[a] as u64, sizes[b] as u64);
        let cells = sa * sb;
        let mut push = |k: u64| {
            let (i, j) = (offset[a] + (k / sb) as usize, offset[b] + (k % sb) as usize);
            adj[i].push(j as u32);
            adj[j].push(i as u32);
        };
        if x == 0 {
            (0..cells).for_each(&mut push);
            continue;
        }
        let p = (spec.n as f64).powi(-(x as i32));
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(e as u64);
        let gap = Geometric::new(p).map_err(|err| Error::CertificateInvalid(err.to_string()))?;
        let mut k = gap.sample(&mut rng);
        while k < cells {
            push(k);
            k = k.saturating_add(1 + gap.sample(&mut rng));
        }
    }
    Ok(Graph::from_adjacency(adj))
}

/// Full `d`-ary tree of height `r`; vertex 0 is the root, levels are contiguous.
pub fn build_dary(d: u64, r: u32, caps: &Caps) -> Result<Graph> {
    if d < 2 || r < 1 {
        return Err(Error::Parse(format!("d-ary tree needs d >= 2 and r >= 1, got d={d} r={r}")));
    }
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=r {
        total += level;
        level = level.saturating_mul(d as u128);
    }
    check_vertices(total, caps)?;
    let n = total as usize;
    let mut edges = Vec::with_capacity(n - 1);
    for child in 1..n {
        edges.push(((child - 1) / d as usize, child));
    }
    Graph::from_edges(n, &edges)
}

/// A step graph: part `v` of `T` has `sizes[v]` vertices and the bipartite
/// graph over edge `e` has exactly `edge_counts[e]` edges, spread so that
/// degrees inside each part differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSpec {
    pub t: Forest,
    pub sizes: Vec<u64>,
    pub edge_counts: Vec<u64>,
}

impl StepSpec {
    pub fn label(&self) -> String {
        let s: Vec<String> = self.sizes.iter().map(u64::to_string).collect();
        let c: Vec<String> = self.edge_counts.iter().map(u64::to_string).collect();
        format!("step sizes={} edges={}", s.join(","), c.join(","))
    }
}

pub fn build_step(spec: &StepSpec, caps: &Caps) -> Result<Graph> {
    let t = &spec.t;
    let total: u128 = spec.sizes.iter().map(|&s| s as u128).sum();
    check_vertices(total, caps)?;
    check_edges(spec.edge_counts.iter().map(|&c| c as u128).sum(), caps)?;
    let mut offset = vec![0usize; spec.sizes.len() + 1];
    for (v, &s) in spec.sizes.iter().enumerate() {
        offset[v + 1] = offset[v] + s as usize;
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); total as usize];
    for (&(a, b), &count) in t.edges().iter().zip(&spec.edge_counts) {
        let (sa, sb) = (spec.sizes[a], spec.sizes[b]);
        if count > sa * sb {
            return Err(Error::Parse(format!("{count} edges do not fit between parts of size {sa} and {sb}")));
        }
        // cell k ↦ (k mod sa, (k mod sb + ⌊k / lcm⌋) mod sb) enumerates all sa·sb pairs once
        let l = sa.lcm(&sb);
        for k in 0..count {
            let i = offset[a] + (k % sa) as usize;
            let j = offset[b] + ((k % sb + k / l) % sb) as usize;
            adj[i].push(j as u32);
            adj[j].push(i as u32);
        }
    }
    Ok(Graph::from_adjacency(adj))
}

/// Step-graphon homomorphism density of a forest `f`: parts are the
/// vertices of `T` with weights `alpha`, edge `e` of `T` has density `p[e]`.
fn step_density(f: &Forest, t: &Forest, alpha: &[f64], p: &[f64]) -> f64 {
    let nt = t.vertex_count();
    let mut total = 1.0;
    for comp in f.components() {
        let order = crate::tree_catalog::bfs_order(f, comp[0]);
        let mut table: Vec<Vec<f64>> = vec![Vec::new(); f.vertex_count()];
        for &(v, parent) in order.iter().rev() {
            let mut vec = alpha.to_vec();
            for &c in f.neighbors(v) {
                if c == parent {
                    continue;
                }
                let child = std::mem::take(&mut table[c]);
                for (x, slot) in vec.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for &y in t.neighbors(x) {
                        s += p[t.edge_index(x, y).unwrap()] * child[y];
                    }
                    *slot *= s;
                }
            }
            table[v] = vec;
        }
        total *= table[order[0].0].iter().take(nt).sum::<f64>();
    }
    total
}

/// Minimises `f` with the Nelder–Mead simplex method.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_evals: usize) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut evals = dim + 1;
    let lerp = |a: &[f64], b: &[f64], t: f64| a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect::<Vec<f64>>();
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if (simplex[dim].1 - simplex[0].1).abs() < 1e-12 {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let reflected = lerp(&centroid, &worst.0, -1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let fe = f(&expanded);
            evals += 1;
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { lerp(&centroid, &reflected, 0.5) } else { lerp(&centroid, &worst.0, 0.5) };
            let fc = f(&contracted);
            evals += 1;
            if fc < worst.1.min(fr) {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x = lerp(&best, &entry.0, 0.5);
                    let fx = f(&x);
                    *entry = (x, fx);
                }
                evals += dim;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    (x, fx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOptions {
    pub caps: Caps,
    /// Smallest part allowed; tiny parts make the finite graph drift from the graphon.
    pub min_part: f64,
    /// Bases `B` for the starting shapes `|S_v| ∝ B^{−y(v)}`, `p_e = B^{−y(e)}`.
    pub bases: Vec<f64>,
    pub max_evals: usize,
}

impl Default for TuneOptions {
    fn default() -> Self {
        TuneOptions { caps: Caps::default(), min_part: 30.0, bases: vec![64.0, 256.0, 1024.0, 16.0], max_evals: 40_000 }
    }
}

/// Candidate step graphs for `(H,T)`, one per starting base, best first by
/// the graphon objective `e(T)·ln t(H) − e(H)·ln t(T)`.
pub fn tune_step(h: &Forest, y: &DualCertificate, opts: &TuneOptions) -> Vec<(f64, StepSpec)> {
    let t = &y.t;
    let (nt, et) = (t.vertex_count(), t.edge_count());
    let (eh_f, et_f) = (h.edge_count() as f64, et as f64);
    let vcap = 0.95 * opts.caps.vertices as f64;
    let ecap = 0.95 * opts.caps.edges as f64;
    let smin = opts.min_part;
    let unpack = |x: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let s = x[..nt].iter().map(|v| smin + v.exp()).collect();
        let p = x[nt..].iter().map(|v| 1.0 / (1.0 + (-v).exp())).collect();
        (s, p)
    };
    let objective = |x: &[f64]| -> f64 {
        let (s, p) = unpack(x);
        let n: f64 = s.iter().sum();
        let alpha: Vec<f64> = s.iter().map(|v| v / n).collect();
        let edges: f64 = t.edges().iter().zip(&p).map(|(&(a, b), pe)| s[a] * s[b] * pe).sum();
        let th = step_density(h, t, &alpha, &p);
        let tt = step_density(t, t, &alpha, &p);
        let mut val = et_f * th.ln() - eh_f * tt.ln();
        if !val.is_finite() {
            return f64::MAX;
        }
        val += 1e3 * (n / vcap).ln().max(0.0).powi(2);
        val += 1e3 * (edges / ecap).ln().max(0.0).powi(2);
        val
    };
    let yv: Vec<f64> = y.vertex_weights.iter().map(|w| w.to_f64().unwrap_or(0.0)).collect();
    let ye: Vec<f64> = y.edge_weights.iter().map(|w| w.to_f64().unwrap_or(0.0)).collect();
    let top = yv.iter().cloned().fold(f64::MIN, f64::max);
    let mut out = Vec::new();
    for &b in &opts.bases {
        let mut x0 = Vec::with_capacity(nt + et);
        for &v in &yv {
            x0.push((smin * b.powf(top - v) - smin).max(1.0).ln());
        }
        for &w in &ye {
            let p = b.powf(-w).min(0.999);
            x0.push((p / (1.0 - p)).ln());
        }
        // restart from the optimum a few times; the simplex collapses early otherwise
        let (mut x, mut fx) = (x0, f64::MAX);
        for _ in 0..4 {
            let (nx, nf) = nelder_mead(objective, &x, 1.0, opts.max_evals / 4);
            let done = nf >= fx - 1e-9;
            x = nx;
            fx = nf;
            if done {
                break;
            }
        }
        let (mut s, p) = unpack(&x);
        // the penalties are soft; shrink uniformly if the optimum still overshoots
        let n: f64 = s.iter().sum();
        let edges: f64 = t.edges().iter().zip(&p).map(|(&(a, b), pe)| s[a] * s[b] * pe).sum();
        let shrink = (vcap / n).min((ecap / edges).sqrt()).min(1.0);
        for v in s.iter_mut() {
            *v = (*v * shrink).max(smin);
        }
        let sizes: Vec<u64> = s.iter().map(|v| v.round() as u64).collect();
        let edge_counts = t
            .edges()
            .iter()
            .zip(&p)
            .map(|(&(a, b), pe)| {
                let full = sizes[a] * sizes[b];
                ((full as f64 * pe).round() as u64).min(full)
            })
            .collect();
        out.push((fx, StepSpec { t: t.clone(), sizes, edge_counts }));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Dual weighting with `y(e) = 0` on every edge and the least total vertex
/// weight. Returned only when its objective is below `e(T)`.
pub fn vertex_only_dual(h: &Forest, t: &Forest) -> Result<Option<DualCertificate>> {
    if h.edge_count() == 0 || t.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let nt = t.vertex_count();
    let eh = Q::from_integer(h.edge_count().into());
    let base = LinearProgram::new(Sense::Min, vec![Q::one(); nt]);
    let sol = exactlp::solve_lazy(&base, |y| {
        let costs = CostVector { vertex: y.to_vec(), edge: vec![Q::zero(); t.edge_count()] };
        let (min, phi) = hom::min_cost_homomorphism(h, t, &costs)?;
        if min >= eh {
            return None;
        }
        let fp = hom::footprint(&phi, h, t).expect("valid");
        Some(Constraint::new(fp.vertex.iter().map(|&m| Q::from_integer(m.into())).collect(), Cmp::Ge, eh.clone()))
    })?;
    if sol.value >= Q::from_integer(t.edge_count().into()) {
        return Ok(None);
    }
    Ok(Some(DualCertificate {
        h: crate::certificates::Pattern::Forest(h.clone()),
        t: t.clone(),
        vertex_weights: sol.primal,
        edge_weights: vec![Q::zero(); t.edge_count()],
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    /// Random blow-up for each `N` in the schedule.
    Blowup { schedule: Vec<u64>, seed: u64 },
    /// Full `d`-ary tree of height `rad(T)` for each `d` in the schedule.
    Dary { schedule: Vec<u64> },
    /// Tuned deterministic step graphs.
    Step(TuneOptions),
}

impl Construction {
    pub fn default_blowup() -> Self {
        Construction::Blowup { schedule: vec![2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 48, 64], seed: 0 }
    }

    pub fn default_dary() -> Self {
        Construction::Dary { schedule: vec![2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64] }
    }
}

/// One schedule point: an evaluated graph or the reason it was skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attempt {
    Evaluated(DensityWitness),
    Skipped { construction: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub attempts: Vec<Attempt>,
}

impl Refutation {
    /// The separating witness, if the schedule produced one (always the last attempt).
    pub fn witness(&self) -> Option<&DensityWitness> {
        match self.attempts.last() {
            Some(Attempt::Evaluated(w)) if w.separated => Some(w),
            _ => None,
        }
    }
}

fn check_certificate(h: &Forest, t: &Forest, y: &DualCertificate) -> Result<()> {
    if y.t.canonical_code() != t.canonical_code() || y.t.edges() != t.edges() {
        return Err(Error::CertificateInvalid(format!("certificate is for T={}, not {}", y.t.display_name(), t.display_name())));
    }
    let report = verify_dual(y);
    if !report.ok {
        let f = &report.failures[0];
        return Err(Error::CertificateInvalid(format!("{} (lhs {} vs rhs {})", f.constraint, f.lhs, f.rhs)));
    }
    match &y.h {
        crate::certificates::Pattern::Forest(f) if f.edges() == h.edges() && f.vertex_count() == h.vertex_count() => Ok(()),
        other => Err(Error::CertificateInvalid(format!("certificate is for H={}, not {}", other.name(), h.display_name()))),
    }
}

/// Runs `construction` until the inequality separates or the schedule ends.
/// Blow-up and step modes need a valid dual certificate; d-ary mode needs
/// `e(H)/rad(H) < e(T)/rad(T)`.
pub fn refute(h: &Forest, t: &Forest, y: Option<&DualCertificate>, construction: &Construction, caps: &Caps) -> Result<Refutation> {
    let mut attempts = Vec::new();
    let mut run = |g: Result<Graph>, label: String| -> bool {
        match g {
            Ok(g) => {
                let w = witness(h, t, &g, label);
                let done = w.separated;
                attempts.push(Attempt::Evaluated(w));
                done
            }
            Err(e) => {
                attempts.push(Attempt::Skipped { construction: label, reason: e.to_string() });
                false
            }
        }
    };
    match construction {
        Construction::Blowup { schedule, seed } => {
            let y = y.ok_or_else(|| Error::CertificateInvalid("blow-up needs a dual certificate".into()))?;
            check_certificate(h, t, y)?;
            for &n in schedule {
                let spec = BlowupSpec::desk(y.clone(), n, *seed);
                let label = spec.label();
                let g = build_blowup(&spec, caps);
                let too_big = matches!(g, Err(Error::SizeGuard { .. } | Error::EdgeGuard { .. }));
                if run(g, label) || too_big {
                    break;
                }
            }
        }
        Construction::Dary { schedule } => {
            let (rh, rt) = (h.radius(), t.radius());
            if h.edge_count() * rt >= t.edge_count() * rh {
                return Err(Error::CertificateInvalid(format!(
                    "radius ratio holds: e(H)/rad(H) = {}/{} >= e(T)/rad(T) = {}/{}",
                    h.edge_count(),
                    rh,
                    t.edge_count(),
                    rt
                )));
            }
            for &d in schedule {
                let g = build_dary(d, rt as u32, caps);
                let too_big = matches!(g, Err(Error::SizeGuard { .. }));
                if run(g, format!("dary d={d} r={rt}")) || too_big {
                    break;
                }
            }
        }
        Construction::Step(opts) => {
            let y = y.ok_or_else(|| Error::CertificateInvalid("step mode needs a dual certificate".into()))?;
            check_certificate(h, t, y)?;
            for (_, spec) in tune_step(h, y, opts) {
                let label = spec.label();
                if run(build_step(&spec, caps), label) {
                    break;
                }
            }
        }
    }
    Ok(Refutation { attempts })
}

/// Uniform random graph `G(n, p)`; used by property tests of the inequality.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("simple")
}
