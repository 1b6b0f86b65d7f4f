//! Deciding `H ⪰ T` for forests through `LP(H,T)` and its dual.
//!
//! `LP(H,T)` has one weight `w(φ)` per homomorphism, maximises
//! `Σ_e Σ_φ μ_φ(e) w(φ)` and requires every edge row and vertex row of `T`
//! to be at most 1. Its value is at most `e(T)`, with equality iff `H ⪰ T`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::certificates::{Certificate, DualCertificate, Pattern, PrimalCertificate};
use crate::error::{Error, Result};
use crate::exactlp::{self, Cmp, Constraint, LinearProgram, LpSolution, Sense, Status};
use crate::graph::Graph;
use crate::hom::{self, CostVector, Homomorphism, DEFAULT_HOM_CAP};
use crate::tree_catalog::Forest;
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Dominates,
    NotDominates,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Dominates => "DOMINATES",
            Relation::NotDominates => "NOT_DOMINATES",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Method {
    Explicit,
    LazyOracle,
    /// Decided by a closed-form condition of the given name.
    ConditionShortcut(String),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Explicit => f.write_str("explicit"),
            Method::LazyOracle => f.write_str("lazy"),
            Method::ConditionShortcut(n) => write!(f, "condition:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Enumerate `Hom(H,T)` and solve the primal.
    Explicit,
    /// Solve the dual with min-cost separation.
    Lazy,
    /// Explicit below the enumeration cap, lazy above.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub relation: Relation,
    pub certificate: Certificate,
    pub lp_value: Q,
    pub method: Method,
}

impl Verdict {
    pub fn dominates(&self) -> bool {
        self.relation == Relation::Dominates
    }
}

fn check_inputs(h: &Forest, t: &Forest) -> Result<()> {
    if h.edge_count() == 0 || t.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(())
}

/// `table[a*n+b]` = index of edge `ab` in `T`, or `u32::MAX`.
fn edge_table(t: &Forest) -> Vec<u32> {
    let n = t.vertex_count();
    let mut table = vec![u32::MAX; n * n];
    for (i, &(a, b)) in t.edges().iter().enumerate() {
        table[a * n + b] = i as u32;
        table[b * n + a] = i as u32;
    }
    table
}

/// Footprint as one row: edge counts first, then vertex counts.
fn fast_row(img: &[u32], h_edges: &[(usize, usize)], table: &[u32], nt: usize, et: usize) -> Vec<u8> {
    let mut row = vec![0u8; et + nt];
    for &(a, b) in h_edges {
        let e = table[img[a] as usize * nt + img[b] as usize];
        row[e as usize] += 1;
    }
    for &x in img {
        row[et + x as usize] += 1;
    }
    row
}

/// Distinct footprints of `Hom(H,T)` (edges first, then vertices), each with
/// its lexicographically smallest homomorphism, sorted by that representative.
fn footprint_classes(h: &Forest, t: &Forest, cap: usize) -> Result<Vec<(Vec<u8>, Homomorphism)>> {
    let count = hom::count_homomorphisms(h, &t.to_graph());
    if count > BigUint::from(cap) {
        return Err(Error::ExplosionGuard { cap });
    }
    let table = edge_table(t);
    let (nt, et) = (t.vertex_count(), t.edge_count());
    let h_edges = h.edges().to_vec();
    let mut classes: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
    hom::for_each_homomorphism(h, t, |img| {
        let row = fast_row(img, &h_edges, &table, nt, et);
        match classes.get_mut(&row) {
            Some(best) => {
                if img < best.as_slice() {
                    best.copy_from_slice(img);
                }
            }
            None => {
                classes.insert(row, img.to_vec());
            }
        }
    });
    let mut out: Vec<(Vec<u8>, Homomorphism)> =
        classes.into_iter().map(|(row, img)| (row, Homomorphism::new(img))).collect();
    out.sort_by(|a, b| a.1.cmp(&b.1));
    Ok(out)
}

fn primal_from_columns(cols: &[Vec<u8>], eh: usize, rows: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(Sense::Max, vec![Q::from_integer(eh.into()); cols.len()]);
    let one = Q::from_integer(1.into());
    for r in 0..rows {
        let coeffs = cols.iter().map(|c| Q::from_integer(c[r].into())).collect();
        lp.add(Constraint::new(coeffs, Cmp::Le, one.clone()));
    }
    lp
}

/// `LP(H,T)` with one column per homomorphism (in enumeration order).
/// Rows: one per edge of `T`, then one per vertex.
pub fn build_primal(h: &Forest, t: &Forest, cap: usize) -> Result<(LinearProgram, Vec<Homomorphism>)> {
    check_inputs(h, t)?;
    let homs = hom::enumerate_homomorphisms(h, t, cap)?;
    let table = edge_table(t);
    let cols: Vec<Vec<u8>> =
        homs.iter().map(|p| fast_row(&p.image, h.edges(), &table, t.vertex_count(), t.edge_count())).collect();
    Ok((primal_from_columns(&cols, h.edge_count(), t.edge_count() + t.vertex_count()), homs))
}

/// `DLP(H,T)` with every homomorphism row materialised. Variables are
/// `[y(v) for v in V(T)] ++ [y(e) for e in E(T)]`.
pub fn build_dual(h: &Forest, t: &Forest, cap: usize) -> Result<(LinearProgram, Vec<Homomorphism>)> {
    check_inputs(h, t)?;
    let homs = hom::enumerate_homomorphisms(h, t, cap)?;
    let mut lp = dual_base(t);
    for phi in &homs {
        lp.add(dual_row(phi, h, t));
    }
    Ok((lp, homs))
}

fn dual_base(t: &Forest) -> LinearProgram {
    LinearProgram::new(Sense::Min, vec![Q::from_integer(1.into()); t.vertex_count() + t.edge_count()])
}

fn dual_row(phi: &Homomorphism, h: &Forest, t: &Forest) -> Constraint {
    let fp = hom::footprint(phi, h, t).expect("valid homomorphism");
    let coeffs = fp.vertex.iter().chain(&fp.edge).map(|&m| Q::from_integer(m.into())).collect();
    Constraint::new(coeffs, Cmp::Ge, Q::from_integer(h.edge_count().into()))
}

fn reduced_primal(h: &Forest, t: &Forest, entries: impl IntoIterator<Item = (Homomorphism, Q)>) -> PrimalCertificate {
    let mut entries: Vec<(Homomorphism, Q)> = entries.into_iter().filter(|(_, w)| !w.is_zero()).collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    PrimalCertificate { h: h.clone(), t: t.clone(), entries }
}

fn explicit(h: &Forest, t: &Forest, cap: usize) -> Result<Verdict> {
    let classes = footprint_classes(h, t, cap)?;
    let cols: Vec<Vec<u8>> = classes.iter().map(|c| c.0.clone()).collect();
    let (nt, et) = (t.vertex_count(), t.edge_count());
    let lp = primal_from_columns(&cols, h.edge_count(), et + nt);
    let sol = exactlp::solve(&lp);
    debug_assert_eq!(sol.status, Status::Optimal);
    let target = Q::from_integer(et.into());
    if sol.value == target {
        let cert = reduced_primal(h, t, classes.into_iter().map(|c| c.1).zip(sol.primal));
        Ok(Verdict { relation: Relation::Dominates, certificate: Certificate::Primal(cert), lp_value: sol.value, method: Method::Explicit })
    } else {
        let cert = DualCertificate {
            h: Pattern::Forest(h.clone()),
            t: t.clone(),
            vertex_weights: sol.dual[et..].to_vec(),
            edge_weights: sol.dual[..et].to_vec(),
        };
        Ok(Verdict { relation: Relation::NotDominates, certificate: Certificate::Dual(cert), lp_value: sol.value, method: Method::Explicit })
    }
}

/// Solves `DLP(H,T)` by row generation. Returns the solution and the
/// generated homomorphisms, one per row.
pub fn solve_dual_lazy(h: &Forest, t: &Forest) -> Result<(LpSolution, Vec<Homomorphism>)> {
    check_inputs(h, t)?;
    let nt = t.vertex_count();
    let eh = Q::from_integer(h.edge_count().into());
    let mut generated = Vec::new();
    let sol = exactlp::solve_lazy(&dual_base(t), |y| {
        let costs = CostVector { vertex: y[..nt].to_vec(), edge: y[nt..].to_vec() };
        let (min, phi) = hom::min_cost_homomorphism(h, t, &costs)?;
        if min >= eh {
            return None;
        }
        let row = dual_row(&phi, h, t);
        generated.push(phi);
        Some(row)
    })?;
    Ok((sol, generated))
}

fn lazy(h: &Forest, t: &Forest) -> Result<Verdict> {
    let (sol, generated) = solve_dual_lazy(h, t)?;
    let (nt, et) = (t.vertex_count(), t.edge_count());
    let target = Q::from_integer(et.into());
    if sol.value == target {
        // shadow prices of the generated rows form an optimal primal weighting
        let mut merged: HashMap<Homomorphism, Q> = HashMap::new();
        for (phi, w) in generated.into_iter().zip(sol.dual) {
            *merged.entry(phi).or_insert_with(Q::zero) += w;
        }
        let cert = reduced_primal(h, t, merged);
        Ok(Verdict { relation: Relation::Dominates, certificate: Certificate::Primal(cert), lp_value: sol.value, method: Method::LazyOracle })
    } else {
        let cert = DualCertificate {
            h: Pattern::Forest(h.clone()),
            t: t.clone(),
            vertex_weights: sol.primal[..nt].to_vec(),
            edge_weights: sol.primal[nt..].to_vec(),
        };
        Ok(Verdict { relation: Relation::NotDominates, certificate: Certificate::Dual(cert), lp_value: sol.value, method: Method::LazyOracle })
    }
}

/// Decides `H ⪰ T` exactly with the default enumeration cap.
pub fn decide(h: &Forest, t: &Forest, mode: Mode) -> Result<Verdict> {
    decide_with_cap(h, t, mode, DEFAULT_HOM_CAP)
}

pub fn decide_with_cap(h: &Forest, t: &Forest, mode: Mode, cap: usize) -> Result<Verdict> {
    check_inputs(h, t)?;
    match mode {
        Mode::Explicit => explicit(h, t, cap),
        Mode::Lazy => lazy(h, t),
        Mode::Auto => {
            let count = hom::count_homomorphisms(h, &t.to_graph());
            if count.to_usize().is_some_and(|c| c <= cap) {
                explicit(h, t, cap)
            } else {
                lazy(h, t)
            }
        }
    }
}

/// Accepts a general graph `H`, for which only refutation is possible.
/// Returns a dual certificate when `LP(H,T) < e(T)`, `None` otherwise.
pub fn refutation_only(h: &Graph, t: &Forest) -> Result<Option<DualCertificate>> {
    if h.edge_count() == 0 || t.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let homs = hom::enumerate_graph_homomorphisms(h, t, DEFAULT_HOM_CAP)?;
    let (nt, et) = (t.vertex_count(), t.edge_count());
    let mut cols: Vec<Vec<u8>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for phi in &homs {
        let fp = hom::graph_footprint(phi, h, t)?;
        let row: Vec<u8> = fp.edge.iter().chain(&fp.vertex).map(|&m| m as u8).collect();
        if seen.insert(row.clone()) {
            cols.push(row);
        }
    }
    let lp = primal_from_columns(&cols, h.edge_count(), et + nt);
    let sol = exactlp::solve(&lp);
    if sol.value >= Q::from_integer(et.into()) {
        return Ok(None);
    }
    let pattern = match Forest::from_graph(h) {
        Ok(f) => Pattern::Forest(f),
        Err(_) => Pattern::Graph { graph: h.clone(), name: graph_inline(h) },
    };
    Ok(Some(DualCertificate { h: pattern, t: t.clone(), vertex_weights: sol.dual[et..].to_vec(), edge_weights: sol.dual[..et].to_vec() }))
}

fn graph_inline(g: &Graph) -> String {
    g.edges().iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect::<Vec<_>>().join(",")
}
