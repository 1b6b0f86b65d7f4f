//! Labeled trees and forests, free-tree enumeration, canonical codes,
//! structural invariants and the fixed catalog T1..T47.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::Q;

/// A labeled simple acyclic graph on vertices `1..=n` (stored 0-based).
///
/// Connected instances are trees; everything else is a forest. Edges are
/// kept as `(u, v)` with `u < v` in lexicographic order, and that order
/// is the edge index used by footprints and dual weights.
#[derive(Clone, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    connected: bool,
    label: Option<String>,
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_name())
    }
}

impl Forest {
    /// Validates a 1-based edge list on `n` vertices.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Forest> {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            norm.push((u.min(v) - 1, u.max(v) - 1));
        }
        let mut sorted = norm.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0 + 1, w[0].1 + 1));
        }
        for &(u, v) in &norm {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(Error::CycleDetected(u + 1, v + 1));
            }
            parent[a] = b;
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &sorted {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Forest { n, connected: n >= 1 && sorted.len() + 1 == n, edges: sorted, adj, label: None })
    }

    /// Converts a general graph, rejecting anything with a cycle.
    pub fn from_graph(g: &Graph) -> Result<Forest> {
        let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(u, v)| (u + 1, v + 1)).collect();
        Forest::from_edge_list(g.vertex_count(), &edges).map_err(|e| match e {
            Error::CycleDetected(..) => Error::NotAForest,
            other => other,
        })
    }

    /// Path on `k` vertices, edges `i-(i+1)`.
    pub fn path(k: usize) -> Forest {
        let edges: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
        Forest::from_edge_list(k, &edges).expect("path").with_label(format!("P{k}"))
    }

    /// Star on `k` vertices with centre 1.
    pub fn star(k: usize) -> Forest {
        let edges: Vec<_> = (2..=k).map(|i| (1, i)).collect();
        Forest::from_edge_list(k, &edges).expect("star").with_label(format!("S{k}"))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Forest {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// The label if present, otherwise the inline edge list.
    pub fn display_name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => self.inline(),
        }
    }

    /// Inline form `1-2,2-3,...` (1-based); a single vertex prints as `K1`.
    pub fn inline(&self) -> String {
        if self.edges.is_empty() {
            return format!("K{}", self.n);
        }
        let mut s = self.edges.iter().map(|&(u, v)| format!("{}-{}", u + 1, v + 1)).collect::<Vec<_>>().join(",");
        let max = self.edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
        if max < self.n {
            s = format!("{}:{}", self.n, s);
        }
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 0-based edges `(u, v)`, `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of the edge `{u, v}` (0-based endpoints).
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_tree(&self) -> bool {
        self.connected
    }

    pub fn is_empty_graph(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges).expect("forest edges are simple")
    }

    /// Connected components, each a sorted vertex list; ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// BFS distances from `s` (`usize::MAX` for unreachable vertices).
    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Two-colouring; each component's least vertex gets colour 0.
    pub fn bipartition(&self) -> Vec<u8> {
        let mut colour = vec![u8::MAX; self.n];
        for comp in self.components() {
            let d = self.distances_from(comp[0]);
            for v in comp {
                colour[v] = (d[v] % 2) as u8;
            }
        }
        colour
    }

    /// Size of the smaller colour class (trees).
    pub fn sigma(&self) -> usize {
        let ones = self.bipartition().iter().filter(|&&c| c == 1).count();
        ones.min(self.n - ones)
    }

    pub fn radius(&self) -> usize {
        (0..self.n).map(|v| self.eccentricity(v)).min().unwrap_or(0)
    }

    pub fn eccentricity(&self, v: usize) -> usize {
        self.distances_from(v).into_iter().filter(|&d| d != usize::MAX).max().unwrap_or(0)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() == 1
    }

    /// Non-increasing degree sequence.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Sorted multiset of unordered endpoint-degree pairs over edges.
    pub fn edge_degree_multiset(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.degree(u), self.degree(v));
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Isomorphism-invariant code. For forests the component codes are sorted
    /// and concatenated.
    pub fn canonical_code(&self) -> CanonicalCode {
        let mut parts: Vec<Vec<u8>> = self.components().iter().map(|c| self.component_code(c)).collect();
        parts.sort();
        CanonicalCode(parts.concat())
    }

    fn component_code(&self, comp: &[usize]) -> Vec<u8> {
        let ecc: Vec<usize> = comp
            .iter()
            .map(|&v| self.distances_from(v).into_iter().filter(|&d| d != usize::MAX).max().unwrap())
            .collect();
        let r = *ecc.iter().min().unwrap();
        let centers: Vec<usize> = comp.iter().zip(&ecc).filter(|(_, &e)| e == r).map(|(&v, _)| v).collect();
        match centers.as_slice() {
            [c] => {
                let mut out = vec![b'1'];
                out.extend(self.rooted_code(*c, usize::MAX));
                out
            }
            [a, b] => {
                let (x, y) = (self.rooted_code(*a, *b), self.rooted_code(*b, *a));
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                let mut out = vec![b'2'];
                out.extend(lo);
                out.extend(hi);
                out
            }
            _ => unreachable!("a tree has one or two centres"),
        }
    }

    fn rooted_code(&self, v: usize, parent: usize) -> Vec<u8> {
        let mut kids: Vec<Vec<u8>> =
            self.adj[v].iter().filter(|&&w| w != parent).map(|&w| self.rooted_code(w, v)).collect();
        kids.sort();
        let mut out = vec![b'('];
        for k in kids {
            out.extend(k);
        }
        out.push(b')');
        out
    }

    /// Relabels vertices: new label of old vertex `v` (0-based) is `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Forest {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u] + 1, perm[v] + 1)).collect();
        Forest::from_edge_list(self.n, &edges).expect("relabelling preserves validity")
    }
}

/// Canonical isomorphism code: centre-rooted AHU parenthesis encoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u8>);

pub fn canonical_code(t: &Forest) -> CanonicalCode {
    t.canonical_code()
}

/// λ value: a non-negative rational or +∞.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lambda {
    Finite(Q),
    Infinite,
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Finite(q) => write!(f, "{q}"),
            Lambda::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeInvariants {
    pub sigma: usize,
    pub radius: usize,
    /// 0-based centre vertices.
    pub centers: Vec<usize>,
    pub degree_sequence: Vec<usize>,
    pub alpha: usize,
    pub lambda: Lambda,
    pub leaf_count: usize,
    /// `(centre, ℓ)` with the centre 0-based and ℓ the number of leaves.
    pub near_star: Option<(usize, usize)>,
}

pub fn invariants(t: &Forest) -> Result<TreeInvariants> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if t.edge_count() == 0 {
        return Err(Error::EmptyTree);
    }
    let n = t.vertex_count();
    let ecc: Vec<usize> = (0..n).map(|v| t.eccentricity(v)).collect();
    let radius = *ecc.iter().min().unwrap();
    let centers = (0..n).filter(|&v| ecc[v] == radius).collect();
    Ok(TreeInvariants {
        sigma: t.sigma(),
        radius,
        centers,
        degree_sequence: t.degree_sequence(),
        alpha: independence_number(t),
        lambda: lambda(t),
        leaf_count: (0..n).filter(|&v| t.is_leaf(v)).count(),
        near_star: near_star(t),
    })
}

/// Maximum independent set size by the standard take/skip tree DP.
pub fn independence_number(t: &Forest) -> usize {
    let n = t.vertex_count();
    let mut take = vec![1usize; n];
    let mut skip = vec![0usize; n];
    for comp in t.components() {
        let order = bfs_order(t, comp[0]);
        for &(v, p) in order.iter().rev() {
            for &w in t.neighbors(v) {
                if w != p {
                    take[v] += skip[w];
                    skip[v] += take[w].max(skip[w]);
                }
            }
        }
    }
    t.components().iter().map(|c| take[c[0]].max(skip[c[0]])).sum()
}

/// `(vertex, parent)` pairs in BFS order from `root`; the root's parent is `usize::MAX`.
pub(crate) fn bfs_order(t: &Forest, root: usize) -> Vec<(usize, usize)> {
    let mut order = vec![(root, usize::MAX)];
    let mut i = 0;
    while i < order.len() {
        let (v, p) = order[i];
        i += 1;
        for &w in t.neighbors(v) {
            if w != p {
                order.push((w, v));
            }
        }
    }
    order
}

/// λ(H) = max over v of ℓ(v)/(d(v) − ℓ(v)), ℓ(v) the number of leaf neighbours.
pub fn lambda(t: &Forest) -> Lambda {
    let mut best = Lambda::Finite(Q::zero());
    for v in 0..t.vertex_count() {
        let d = t.degree(v);
        if d == 0 {
            continue;
        }
        let l = t.neighbors(v).iter().filter(|&&w| t.is_leaf(w)).count();
        let val = if l == d {
            Lambda::Infinite
        } else {
            Lambda::Finite(Q::new(BigInt::from(l), BigInt::from(d - l)))
        };
        if val > best {
            best = val;
        }
    }
    best
}

/// Smallest vertex `c` with every other vertex within distance 2 and of degree ≤ 2.
pub fn near_star(t: &Forest) -> Option<(usize, usize)> {
    if !t.is_tree() || t.edge_count() == 0 {
        return None;
    }
    let n = t.vertex_count();
    let leaves = (0..n).filter(|&v| t.is_leaf(v)).count();
    (0..n)
        .find(|&c| {
            let d = t.distances_from(c);
            (0..n).all(|v| v == c || (d[v] <= 2 && t.degree(v) <= 2))
        })
        .map(|c| (c, leaves))
}

/// Free trees on `n` vertices in level-sequence generation order
/// (Wright–Richmond–Odlyzko–McKay). Vertex i is the i-th sequence entry,
/// joined to the latest earlier vertex one level up.
pub fn generate_free_trees(n: usize) -> Vec<Forest> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![Forest::from_edge_list(1, &[]).unwrap()];
    }
    let mut out = Vec::new();
    let mut layout: Option<Vec<usize>> = Some((0..=n / 2).chain(1..(n + 1) / 2).collect());
    while let Some(l) = layout {
        layout = next_tree(l);
        if let Some(l) = &layout {
            out.push(layout_to_tree(l));
            layout = next_rooted_tree(l, None);
        }
    }
    out
}

fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] + 1 != pred[p] {
        q -= 1;
    }
    let mut result = pred.to_vec();
    for i in p..result.len() {
        result[i] = result[i - p + q];
    }
    Some(result)
}

fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut one_found = false;
    let mut m = layout.len();
    for (i, &x) in layout.iter().enumerate() {
        if x == 1 {
            if one_found {
                m = i;
                break;
            }
            one_found = true;
        }
    }
    let left = layout[1..m].iter().map(|&x| x - 1).collect();
    let rest = std::iter::once(0).chain(layout[m..].iter().copied()).collect();
    (left, rest)
}

fn next_tree(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split_tree(&candidate);
    let lh = *left.iter().max().unwrap();
    let rh = *rest.iter().max().unwrap();
    let mut valid = rh >= lh;
    if valid && rh == lh {
        if left.len() > rest.len() || (left.len() == rest.len() && left > rest) {
            valid = false;
        }
    }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut new = next_rooted_tree(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split_tree(&new);
        let h = *new_left.iter().max().unwrap();
        let len = new.len();
        for (k, lvl) in (1..=h + 1).enumerate() {
            new[len - (h + 1) + k] = lvl;
        }
    }
    Some(new)
}

fn layout_to_tree(layout: &[usize]) -> Forest {
    let mut stack: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    for (i, &lvl) in layout.iter().enumerate() {
        if let Some(&top) = stack.last() {
            let mut j = top;
            while layout[j] >= lvl {
                stack.pop();
                j = *stack.last().unwrap();
            }
            edges.push((j + 1, i + 1));
        }
        stack.push(i);
    }
    Forest::from_edge_list(layout.len(), &edges).expect("level sequence yields a tree")
}

/// One representative per isomorphism class on exactly `n` vertices,
/// sorted by canonical code.
pub fn enumerate_trees(n: usize) -> Vec<Forest> {
    let mut trees = generate_free_trees(n);
    trees.sort_by_cached_key(|t| t.canonical_code());
    trees
}

const CATALOG_TEXT: &str = include_str!("../data/catalog_t1_t47.txt");

/// The 47 labeled trees on 2..=8 vertices, in catalog order (index i is T(i+1)).
pub fn catalog() -> &'static [Forest] {
    static CATALOG: OnceLock<Vec<Forest>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_tree_list(CATALOG_TEXT).expect("bundled catalog parses"))
}

/// Catalog trees with at most `max_n` vertices (a prefix of the catalog).
pub fn catalog_up_to(max_n: usize) -> Vec<Forest> {
    catalog().iter().filter(|t| t.vertex_count() <= max_n).cloned().collect()
}

/// Alias matching the catalog's naming.
pub fn catalog_t1_t47() -> &'static [Forest] {
    catalog()
}

/// Resolves `T<i>`, `P<k>`, `S<k>`, `K1`, `K2` or an inline edge list
/// `1-2,2-3` (optionally prefixed `n:` to add isolated vertices).
pub fn resolve(name: &str) -> Result<Forest> {
    let name = name.trim();
    let num = |s: &str| s.parse::<usize>().ok().filter(|&k| k >= 1);
    if let Some(i) = name.strip_prefix('T').and_then(num) {
        return catalog().get(i - 1).cloned().ok_or_else(|| Error::UnknownLabel(name.to_string()));
    }
    if let Some(k) = name.strip_prefix('P').and_then(num) {
        return Ok(Forest::path(k));
    }
    if let Some(k) = name.strip_prefix('S').and_then(num) {
        return Ok(Forest::star(k));
    }
    match name {
        "K1" => return Ok(Forest::from_edge_list(1, &[])?.with_label("K1")),
        "K2" => return Ok(Forest::path(2).with_label("K2")),
        _ => {}
    }
    if name.contains('-') {
        let (n_prefix, body) = match name.split_once(':') {
            Some((n, body)) => (Some(n.parse::<usize>().map_err(|_| Error::UnknownLabel(name.to_string()))?), body),
            None => (None, name),
        };
        let edges = parse_edges(body).map_err(|_| Error::UnknownLabel(name.to_string()))?;
        let max = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0);
        return Forest::from_edge_list(n_prefix.unwrap_or(max).max(max), &edges);
    }
    Err(Error::UnknownLabel(name.to_string()))
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            let (a, b) = tok.trim().split_once('-').ok_or_else(|| Error::Parse(format!("edge `{tok}`")))?;
            let a = a.trim().parse().map_err(|_| Error::Parse(format!("edge `{tok}`")))?;
            let b = b.trim().parse().map_err(|_| Error::Parse(format!("edge `{tok}`")))?;
            Ok((a, b))
        })
        .collect()
}

/// Parses `<label> n=<k> edges=u1-v1,u2-v2,...` lines. Blank lines and `#`
/// comments are skipped.
pub fn parse_tree_list(text: &str) -> Result<Vec<Forest>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: `{line}`", lineno + 1));
        let mut fields = line.split_whitespace();
        let label = fields.next().ok_or_else(bad)?;
        let n: usize = fields.next().and_then(|f| f.strip_prefix("n=")).and_then(|f| f.parse().ok()).ok_or_else(bad)?;
        let edges = match fields.next() {
            Some(f) => parse_edges(f.strip_prefix("edges=").ok_or_else(bad)?)?,
            None => Vec::new(),
        };
        out.push(Forest::from_edge_list(n, &edges)?.with_label(label));
    }
    Ok(out)
}

pub fn write_tree_list(trees: &[Forest]) -> String {
    let mut s = String::new();
    for (i, t) in trees.iter().enumerate() {
        let label = t.label().map(str::to_string).unwrap_or_else(|| format!("#{}", i + 1));
        let edges = t.edges().iter().map(|&(u, v)| format!("{}-{}", u + 1, v + 1)).collect::<Vec<_>>().join(",");
        s.push_str(&format!("{label} n={} edges={edges}\n", t.vertex_count()));
    }
    s
}

/// Catalog index (1-based) of the catalog tree isomorphic to `t`.
pub fn catalog_index_of(t: &Forest) -> Option<usize> {
    let code = t.canonical_code();
    catalog().iter().position(|c| c.canonical_code() == code).map(|i| i + 1)
}
