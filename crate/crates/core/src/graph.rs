//! Plain simple graphs, used as homomorphism targets.

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edges: 0 }
    }

    /// Builds from 0-based edges. Rejects loops and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v) + 1, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u + 1));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let v = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0] as usize;
                return Err(Error::DuplicateEdge(u.min(v) + 1, u.max(v) + 1));
            }
        }
        Ok(Graph { adj, edges: edges.len() })
    }

    /// Builds from adjacency lists that are already symmetric and loop-free.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        let mut twice = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Graph { adj, edges: twice / 2 }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges as 0-based pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if (v as usize) > u {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Writes `u-v` lines with 1-based labels.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.vertex_count());
        for (u, v) in self.edges() {
            s.push_str(&format!("{}-{}\n", u + 1, v + 1));
        }
        s
    }
}
