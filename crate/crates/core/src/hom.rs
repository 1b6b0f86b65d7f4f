//! Homomorphisms from forests: enumeration, exact counting, footprints and
//! the min-cost homomorphism oracle.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree_catalog::{bfs_order, Forest};
use crate::Q;

/// Default limit on explicitly enumerated homomorphisms.
pub const DEFAULT_HOM_CAP: usize = 2_000_000;

/// Vertex map `V(H) → V(T)`; `image[i]` is the 0-based image of vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homomorphism {
    pub image: Vec<u32>,
}

impl Homomorphism {
    pub fn new(image: Vec<u32>) -> Self {
        Homomorphism { image }
    }

    /// Builds from 1-based images.
    pub fn from_one_based(image: &[usize]) -> Self {
        Homomorphism { image: image.iter().map(|&x| x as u32 - 1).collect() }
    }

    pub fn is_homomorphism(&self, h: &Forest, t: &Forest) -> bool {
        self.image.len() == h.vertex_count()
            && self.image.iter().all(|&x| (x as usize) < t.vertex_count())
            && h.edges().iter().all(|&(u, v)| t.edge_index(self.image[u] as usize, self.image[v] as usize).is_some())
    }
}

impl fmt::Display for Homomorphism {
    /// 1-based vector `(a,b,...)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Preimage counts μ_φ over the vertices and edges of `T`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Footprint {
    pub vertex: Vec<u32>,
    pub edge: Vec<u32>,
}

impl Footprint {
    /// Row layout used by the LPs: vertices of `T` first, then edges.
    pub fn as_row(&self) -> Vec<u32> {
        self.vertex.iter().chain(&self.edge).copied().collect()
    }
}

pub fn footprint(phi: &Homomorphism, h: &Forest, t: &Forest) -> Result<Footprint> {
    if phi.image.len() != h.vertex_count() {
        return Err(Error::NotAHomomorphism(format!("{phi} has length {}, expected {}", phi.image.len(), h.vertex_count())));
    }
    if let Some(&x) = phi.image.iter().find(|&&x| x as usize >= t.vertex_count()) {
        return Err(Error::NotAHomomorphism(format!("{phi}: image {} outside T", x + 1)));
    }
    let mut fp = Footprint { vertex: vec![0; t.vertex_count()], edge: vec![0; t.edge_count()] };
    for &x in &phi.image {
        fp.vertex[x as usize] += 1;
    }
    for &(u, v) in h.edges() {
        let (a, b) = (phi.image[u] as usize, phi.image[v] as usize);
        match t.edge_index(a, b) {
            Some(e) => fp.edge[e] += 1,
            None => {
                return Err(Error::NotAHomomorphism(format!(
                    "{phi}: edge {}-{} maps to non-edge {}-{}",
                    u + 1,
                    v + 1,
                    a + 1,
                    b + 1
                )))
            }
        }
    }
    Ok(fp)
}

/// Footprint of a map from an arbitrary graph `H` into `T`.
pub fn graph_footprint(phi: &Homomorphism, h: &Graph, t: &Forest) -> Result<Footprint> {
    if phi.image.len() != h.vertex_count() || phi.image.iter().any(|&x| x as usize >= t.vertex_count()) {
        return Err(Error::NotAHomomorphism(format!("{phi} does not map V(H) into V(T)")));
    }
    let mut fp = Footprint { vertex: vec![0; t.vertex_count()], edge: vec![0; t.edge_count()] };
    for &x in &phi.image {
        fp.vertex[x as usize] += 1;
    }
    for (u, v) in h.edges() {
        match t.edge_index(phi.image[u] as usize, phi.image[v] as usize) {
            Some(e) => fp.edge[e] += 1,
            None => return Err(Error::NotAHomomorphism(format!("{phi}: edge {}-{} not preserved", u + 1, v + 1))),
        }
    }
    Ok(fp)
}

/// Homomorphisms from an arbitrary graph into `T` by backtracking, sorted,
/// or `ExplosionGuard` past `cap`.
pub fn enumerate_graph_homomorphisms(h: &Graph, t: &Forest, cap: usize) -> Result<Vec<Homomorphism>> {
    let n = h.vertex_count();
    // BFS order so that each vertex after a component root has an earlier neighbour
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let start = order.len();
        order.push(s);
        let mut i = start;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in h.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    order.push(w as usize);
                }
            }
        }
    }
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut out = Vec::new();
    let mut image = vec![0u32; n];
    fn rec(
        k: usize,
        order: &[usize],
        pos: &[usize],
        h: &Graph,
        t: &Forest,
        image: &mut Vec<u32>,
        out: &mut Vec<Homomorphism>,
        cap: usize,
    ) -> bool {
        if k == order.len() {
            out.push(Homomorphism::new(image.clone()));
            return out.len() <= cap;
        }
        let v = order[k];
        let earlier: Vec<usize> = h.neighbors(v).iter().map(|&w| w as usize).filter(|&w| pos[w] < k).collect();
        let candidates: Vec<usize> = match earlier.first() {
            Some(&w) => t.neighbors(image[w] as usize).to_vec(),
            None => (0..t.vertex_count()).collect(),
        };
        for a in candidates {
            if earlier.iter().all(|&w| t.edge_index(a, image[w] as usize).is_some()) {
                image[v] = a as u32;
                if !rec(k + 1, order, pos, h, t, image, out, cap) {
                    return false;
                }
            }
        }
        true
    }
    if !rec(0, &order, &pos, h, t, &mut image, &mut out, cap) {
        return Err(Error::ExplosionGuard { cap });
    }
    out.sort_unstable();
    Ok(out)
}

/// Vertex order in which every non-root vertex follows its parent; roots are
/// the least vertex of each component. Returns `(vertex, parent)` pairs.
fn parent_first_order(h: &Forest) -> Vec<(usize, usize)> {
    h.components().iter().flat_map(|c| bfs_order(h, c[0])).collect()
}

/// Calls `f` on every homomorphism `H → T`, in lexicographic order of the
/// image vector when `H` is labelled parent-first.
pub fn for_each_homomorphism(h: &Forest, t: &Forest, mut f: impl FnMut(&[u32])) {
    let order = parent_first_order(h);
    let mut image = vec![0u32; h.vertex_count()];
    fn rec(
        k: usize,
        order: &[(usize, usize)],
        t: &Forest,
        image: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]),
    ) {
        if k == order.len() {
            f(image);
            return;
        }
        let (v, p) = order[k];
        if p == usize::MAX {
            for a in 0..t.vertex_count() {
                image[v] = a as u32;
                rec(k + 1, order, t, image, f);
            }
        } else {
            let pa = image[p] as usize;
            for &a in t.neighbors(pa) {
                image[v] = a as u32;
                rec(k + 1, order, t, image, f);
            }
        }
    }
    rec(0, &order, t, &mut image, &mut f);
}

/// All homomorphisms `H → T` sorted by image vector, or `ExplosionGuard`
/// when there are more than `cap`.
pub fn enumerate_homomorphisms(h: &Forest, t: &Forest, cap: usize) -> Result<Vec<Homomorphism>> {
    let total = count_homomorphisms(h, &t.to_graph());
    if total > BigUint::from(cap) {
        return Err(Error::ExplosionGuard { cap });
    }
    let mut out = Vec::with_capacity(total.to_usize().unwrap_or(0));
    for_each_homomorphism(h, t, |img| out.push(Homomorphism::new(img.to_vec())));
    out.sort_unstable();
    Ok(out)
}

/// hom(H, G) by leaf-to-root dynamic programming, multiplied over components.
pub fn count_homomorphisms(h: &Forest, g: &Graph) -> BigUint {
    let mut total = BigUint::from(1u32);
    for comp in h.components() {
        let order = bfs_order(h, comp[0]);
        let c = match count_component_u128(h, g, &order) {
            Some(c) => BigUint::from(c),
            None => count_component_big(h, g, &order),
        };
        total *= c;
        if total.is_zero() {
            break;
        }
    }
    total
}

fn count_component_u128(h: &Forest, g: &Graph, order: &[(usize, usize)]) -> Option<u128> {
    let n = g.vertex_count();
    let mut table: Vec<Option<Vec<u128>>> = vec![None; h.vertex_count()];
    for &(v, p) in order.iter().rev() {
        let mut vec = vec![1u128; n];
        for &c in h.neighbors(v) {
            if c == p {
                continue;
            }
            let child = table[c].take().expect("children first");
            for (x, slot) in vec.iter_mut().enumerate() {
                if *slot == 0 {
                    continue;
                }
                let mut s: u128 = 0;
                for &y in g.neighbors(x) {
                    s = s.checked_add(child[y as usize])?;
                }
                *slot = slot.checked_mul(s)?;
            }
        }
        table[v] = Some(vec);
    }
    let root = table[order[0].0].take().unwrap();
    root.iter().try_fold(0u128, |acc, &x| acc.checked_add(x))
}

fn count_component_big(h: &Forest, g: &Graph, order: &[(usize, usize)]) -> BigUint {
    let n = g.vertex_count();
    let mut table: Vec<Option<Vec<BigUint>>> = vec![None; h.vertex_count()];
    for &(v, p) in order.iter().rev() {
        let mut vec = vec![BigUint::from(1u32); n];
        for &c in h.neighbors(v) {
            if c == p {
                continue;
            }
            let child = table[c].take().expect("children first");
            for (x, slot) in vec.iter_mut().enumerate() {
                if slot.is_zero() {
                    continue;
                }
                let mut s = BigUint::zero();
                for &y in g.neighbors(x) {
                    s += &child[y as usize];
                }
                *slot *= s;
            }
        }
        table[v] = Some(vec);
    }
    table[order[0].0].take().unwrap().into_iter().sum()
}

/// Costs on the vertices and edges of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVector {
    pub vertex: Vec<Q>,
    pub edge: Vec<Q>,
}

impl CostVector {
    pub fn zero(t: &Forest) -> Self {
        CostVector { vertex: vec![Q::zero(); t.vertex_count()], edge: vec![Q::zero(); t.edge_count()] }
    }

    /// Σ μ_φ(v)·c(v) + Σ μ_φ(e)·c(e).
    pub fn cost_of(&self, fp: &Footprint) -> Q {
        let mut s = Q::zero();
        for (c, &m) in self.vertex.iter().zip(&fp.vertex) {
            if m != 0 {
                s += c * Q::from_integer(m.into());
            }
        }
        for (c, &m) in self.edge.iter().zip(&fp.edge) {
            if m != 0 {
                s += c * Q::from_integer(m.into());
            }
        }
        s
    }
}

/// Cheapest homomorphism `H → T` under `c`, with ties broken toward the
/// smallest `T` vertex at each step. `None` when there is no homomorphism
/// (`T` has no edges but `H` does).
pub fn min_cost_homomorphism(h: &Forest, t: &Forest, c: &CostVector) -> Option<(Q, Homomorphism)> {
    let nt = t.vertex_count();
    let mut image = vec![0u32; h.vertex_count()];
    let mut total = Q::zero();
    for comp in h.components() {
        let order = bfs_order(h, comp[0]);
        // best[v][a]: cheapest subtree below v given v ↦ a; choice[v][a][k]: image of k-th child.
        let mut best: Vec<Vec<Option<Q>>> = vec![Vec::new(); h.vertex_count()];
        let mut pick: Vec<Vec<Vec<u32>>> = vec![Vec::new(); h.vertex_count()];
        for &(v, p) in order.iter().rev() {
            let kids: Vec<usize> = h.neighbors(v).iter().copied().filter(|&w| w != p).collect();
            let mut row = Vec::with_capacity(nt);
            let mut prow = Vec::with_capacity(nt);
            for a in 0..nt {
                let mut s = Some(c.vertex[a].clone());
                let mut picks = Vec::with_capacity(kids.len());
                for &k in &kids {
                    let mut m: Option<(Q, u32)> = None;
                    for &b in t.neighbors(a) {
                        if let Some(sub) = &best[k][b] {
                            let e = t.edge_index(a, b).unwrap();
                            let cand = sub + &c.edge[e];
                            if m.as_ref().is_none_or(|(mv, _)| cand < *mv) {
                                m = Some((cand, b as u32));
                            }
                        }
                    }
                    match (m, s.as_mut()) {
                        (Some((mv, b)), Some(acc)) => {
                            *acc += mv;
                            picks.push(b);
                        }
                        _ => s = None,
                    }
                }
                row.push(s);
                prow.push(picks);
            }
            best[v] = row;
            pick[v] = prow;
        }
        let root = order[0].0;
        let mut m: Option<(Q, usize)> = None;
        for a in 0..nt {
            if let Some(val) = &best[root][a] {
                if m.as_ref().is_none_or(|(mv, _)| val < mv) {
                    m = Some((val.clone(), a));
                }
            }
        }
        let (val, a) = m?;
        total += val;
        image[root] = a as u32;
        for &(v, p) in &order {
            let kids: Vec<usize> = h.neighbors(v).iter().copied().filter(|&w| w != p).collect();
            let a = image[v] as usize;
            for (k, &child) in kids.iter().enumerate() {
                image[child] = pick[v][a][k];
            }
        }
    }
    Some((total, Homomorphism::new(image)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qf};

    fn brute_count(h: &Forest, t: &Forest) -> usize {
        let (nh, nt) = (h.vertex_count(), t.vertex_count());
        let mut count = 0;
        let mut img = vec![0usize; nh];
        loop {
            if h.edges().iter().all(|&(u, v)| t.edge_index(img[u], img[v]).is_some()) {
                count += 1;
            }
            let mut i = 0;
            while i < nh {
                img[i] += 1;
                if img[i] < nt {
                    break;
                }
                img[i] = 0;
                i += 1;
            }
            if i == nh {
                return count;
            }
        }
    }

    #[test]
    fn small_counts_match_brute_force() {
        let (k2, p3, p4, s4) = (Forest::path(2), Forest::path(3), Forest::path(4), Forest::star(4));
        assert_eq!(enumerate_homomorphisms(&k2, &p4, 100).unwrap().len(), 6);
        assert_eq!(brute_count(&p3, &s4), 12);
        assert_eq!(enumerate_homomorphisms(&p3, &s4, 100).unwrap().len(), 12);
        assert_eq!(brute_count(&s4, &p4), 18);
        assert_eq!(count_homomorphisms(&s4, &p4.to_graph()), BigUint::from(18u32));
        assert_eq!(brute_count(&p4, &p4), 16);
        assert_eq!(count_homomorphisms(&p4, &p4.to_graph()), BigUint::from(16u32));
        let k1 = Forest::from_edge_list(1, &[]).unwrap();
        assert_eq!(count_homomorphisms(&k1, &p4.to_graph()), BigUint::from(4u32));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_homomorphisms(&Forest::star(5), &Forest::star(5), 10),
            Err(Error::ExplosionGuard { cap: 10 })
        );
    }

    #[test]
    fn figure_one_footprint() {
        let (p6, p4) = (Forest::path(6), Forest::path(4));
        let phi = Homomorphism::from_one_based(&[1, 2, 1, 2, 3, 4]);
        let fp = footprint(&phi, &p6, &p4).unwrap();
        assert_eq!(fp.edge, vec![3, 1, 1]);
        assert_eq!(fp.vertex, vec![2, 2, 1, 1]);
        let bad = Homomorphism::from_one_based(&[1, 3, 1, 2, 3, 4]);
        assert!(matches!(footprint(&bad, &p6, &p4), Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn alternating_map_onto_edge() {
        let fp = footprint(&Homomorphism::from_one_based(&[1, 2, 1, 2]), &Forest::path(4), &Forest::path(2)).unwrap();
        assert_eq!((fp.vertex, fp.edge), (vec![2, 2], vec![3]));
    }

    #[test]
    fn uniform_vertex_cost_gives_edge_count() {
        let (h, t) = (Forest::path(5), Forest::star(4));
        let mut c = CostVector::zero(&t);
        c.vertex = vec![qf(4, 5); 4];
        assert_eq!(min_cost_homomorphism(&h, &t, &c).unwrap().0, q(4));
        let (v, phi) = min_cost_homomorphism(&h, &t, &CostVector::zero(&t)).unwrap();
        assert_eq!(v, q(0));
        assert!(phi.is_homomorphism(&h, &t));
    }
}
