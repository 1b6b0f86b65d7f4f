//! Brute-force oracles written against raw edge lists, sharing no code with the library.
#![allow(dead_code)]

use std::collections::VecDeque;

use homdom_core::{Forest, Q};

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Calls `f` on every vertex map `[0,nh) -> [0,nt)` in lexicographic order.
pub fn for_each_map(nh: usize, nt: usize, mut f: impl FnMut(&[usize])) {
    let mut m = vec![0usize; nh];
    loop {
        f(&m);
        let mut i = nh;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            m[i] += 1;
            if m[i] < nt {
                break;
            }
            m[i] = 0;
        }
    }
}

/// All homomorphisms found by trying every map.
pub fn brute_homs(h: &Forest, t: &Forest) -> Vec<Vec<usize>> {
    let a = adjacency(t.vertex_count(), t.edges());
    let mut out = Vec::new();
    for_each_map(h.vertex_count(), t.vertex_count(), |m| {
        if h.edges().iter().all(|&(u, v)| a[m[u]][m[v]]) {
            out.push(m.to_vec());
        }
    });
    out
}

pub fn brute_count(h: &Forest, n: usize, edges: &[(usize, usize)]) -> u64 {
    let a = adjacency(n, edges);
    let mut c = 0;
    for_each_map(h.vertex_count(), n, |m| {
        if h.edges().iter().all(|&(u, v)| a[m[u]][m[v]]) {
            c += 1;
        }
    });
    c
}

/// Edge of `t` hit by `{a,b}`.
pub fn edge_slot(t: &Forest, a: usize, b: usize) -> usize {
    t.edges().iter().position(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a)).expect("image is an edge")
}

/// `sum_v c(φ(v)) + sum_e c(φ(e))`.
pub fn map_cost(h: &Forest, t: &Forest, m: &[usize], vertex: &[Q], edge: &[Q]) -> Q {
    let mut s: Q = m.iter().map(|&x| vertex[x].clone()).sum();
    for &(u, v) in h.edges() {
        s += edge[edge_slot(t, m[u], m[v])].clone();
    }
    s
}

/// Size of the smaller colour class, by BFS 2-colouring of each component.
pub fn sigma(n: usize, edges: &[(usize, usize)]) -> usize {
    let a = adjacency(n, edges);
    let mut colour = vec![u8::MAX; n];
    let mut total = 0;
    for s in 0..n {
        if colour[s] != u8::MAX {
            continue;
        }
        let mut count = [0usize; 2];
        colour[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            count[colour[x] as usize] += 1;
            for y in 0..n {
                if a[x][y] && colour[y] == u8::MAX {
                    colour[y] = 1 - colour[x];
                    q.push_back(y);
                }
            }
        }
        total += count[0].min(count[1]);
    }
    total
}

pub fn degrees(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(u, v) in edges {
        d[u] += 1;
        d[v] += 1;
    }
    d
}

/// Number of leaves if the tree is a spider with every leg of length 1 or 2.
pub fn near_star_leaves(t: &Forest) -> Option<usize> {
    let n = t.vertex_count();
    let d = degrees(n, t.edges());
    let a = adjacency(n, t.edges());
    let leaves = d.iter().filter(|&&x| x == 1).count();
    let ok = (0..n).any(|c| {
        (0..n).all(|v| {
            if v == c {
                return true;
            }
            if a[c][v] {
                return d[v] <= 2;
            }
            d[v] == 1 && (0..n).any(|w| a[v][w] && a[c][w])
        })
    });
    ok.then_some(leaves)
}

pub fn is_path(t: &Forest) -> bool {
    let d = degrees(t.vertex_count(), t.edges());
    t.is_tree() && d.iter().all(|&x| x <= 2)
}

/// Maximum independent set size by exhaustive search.
pub fn alpha(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|s| edges.iter().all(|&(u, v)| s & (1 << u) == 0 || s & (1 << v) == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Radius by all-pairs BFS.
pub fn radius(n: usize, edges: &[(usize, usize)]) -> usize {
    let a = adjacency(n, edges);
    (0..n)
        .map(|s| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for y in 0..n {
                    if a[x][y] && dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            dist.into_iter().max().unwrap()
        })
        .min()
        .unwrap()
}
