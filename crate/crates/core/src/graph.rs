//! Finite simple undirected graphs on dense ids `0..n`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::VertexSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    nbr: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], nbr: vec![VertexSet::new(); n] }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            if !g.add_edge(u, v) {
                return Err(Error::InvalidArgument(format!("duplicate edge {u} {v}")));
            }
        }
        Ok(g)
    }

    /// Inserts `uv`; returns false if it was already present.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n() && v < self.n());
        if !self.nbr[u].insert(v) {
            return false;
        }
        self.nbr[v].insert(u);
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        true
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.nbr[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.nbr[u].contains(v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n() })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.iter().last() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// Neighbor bitmasks, for graphs with at most 64 vertices.
    pub fn masks(&self) -> Option<Vec<u64>> {
        (self.n() <= 64).then(|| self.nbr.iter().map(VertexSet::mask).collect())
    }

    /// `G[S]` together with the map from new ids to original ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_set(s)?;
        let map: Vec<usize> = s.to_vec();
        let mut inverse = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            inverse[v] = i;
        }
        let mut h = Graph::empty(map.len());
        for (i, &v) in map.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = inverse[w];
                if j != usize::MAX && i < j {
                    h.add_edge(i, j);
                }
            }
        }
        Ok((h, map))
    }

    /// Connected components of `G - removed`, ordered by smallest member.
    pub fn components(&self, removed: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_set(removed)?;
        Ok(self.components_unchecked(removed))
    }

    pub(crate) fn components_unchecked(&self, removed: &VertexSet) -> Vec<VertexSet> {
        let mut seen = removed.clone();
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen.contains(s) {
                continue;
            }
            out.push(self.flood(s, &mut seen));
        }
        out
    }

    /// The component of `G - removed` containing `start` (which must not be removed).
    pub(crate) fn component_of(&self, start: usize, removed: &VertexSet) -> VertexSet {
        let mut seen = removed.clone();
        self.flood(start, &mut seen)
    }

    fn flood(&self, start: usize, seen: &mut VertexSet) -> VertexSet {
        let mut comp = VertexSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(u) = queue.pop_front() {
            comp.insert(u);
            for &w in &self.adj[u] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components_unchecked(&VertexSet::new()).len() <= 1
    }

    /// Whether removing `s` increases the number of components.
    pub fn is_vertex_cut(&self, s: &VertexSet) -> Result<bool> {
        self.check_set(s)?;
        if s.len() == self.n() {
            return Err(Error::InvalidArgument("a vertex cut must leave at least one vertex".into()));
        }
        let before = self.components_unchecked(&VertexSet::new()).len();
        Ok(self.components_unchecked(s).len() > before)
    }

    /// `N[S]`.
    pub fn closed_neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        let mut out = s.clone();
        for v in s {
            out.union_with(&self.nbr[v]);
        }
        Ok(out)
    }

    /// Vertices outside `s` with a neighbor in `s`.
    pub fn boundary(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in s {
            out.union_with(&self.nbr[v]);
        }
        out.difference_with(s);
        out
    }

    /// Checks that `cover` is a path cover of this graph: every vertex in
    /// exactly one sequence, and each sequence an induced path.
    pub fn validate_path_cover(&self, cover: &PathCover) -> Result<(), CoverViolation> {
        let mut seen = VertexSet::new();
        for (i, path) in cover.paths.iter().enumerate() {
            if path.is_empty() {
                return Err(CoverViolation::EmptyPath { path: i });
            }
            for (j, &v) in path.iter().enumerate() {
                if v >= self.n() {
                    return Err(CoverViolation::OutOfRange { path: i, vertex: v });
                }
                if !seen.insert(v) {
                    return Err(CoverViolation::Repeated { vertex: v });
                }
                for (k, &w) in path.iter().enumerate().skip(j + 1) {
                    let adjacent = self.has_edge(v, w);
                    if k == j + 1 && !adjacent {
                        return Err(CoverViolation::NotAdjacent { path: i, u: v, v: w });
                    }
                    if k > j + 1 && adjacent {
                        return Err(CoverViolation::Chord { path: i, u: v, v: w });
                    }
                }
            }
        }
        match (0..self.n()).find(|&v| !seen.contains(v)) {
            Some(v) => Err(CoverViolation::Uncovered { vertex: v }),
            None => Ok(()),
        }
    }

    // Standard families.

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &edges).expect("valid star")
    }

    /// `P_s □ P_t` with vertex `(a, b)` at id `a * t + b`.
    pub fn grid(s: usize, t: usize) -> Self {
        let mut g = Self::empty(s * t);
        for a in 0..s {
            for b in 0..t {
                let v = a * t + b;
                if b + 1 < t {
                    g.add_edge(v, v + 1);
                }
                if a + 1 < s {
                    g.add_edge(v, v + t);
                }
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Self::from_edges(10, &edges).expect("valid petersen")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges().collect::<Vec<_>>())
    }
}

/// Ordered list of vertex sequences meant to cover a graph by induced paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCover {
    pub paths: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum CoverViolation {
    #[error("path {path} is empty")]
    EmptyPath { path: usize },
    #[error("path {path} contains out-of-range vertex {vertex}")]
    OutOfRange { path: usize, vertex: usize },
    #[error("vertex {vertex} appears more than once")]
    Repeated { vertex: usize },
    #[error("vertex {vertex} is not covered")]
    Uncovered { vertex: usize },
    #[error("path {path}: consecutive vertices {u} and {v} are not adjacent")]
    NotAdjacent { path: usize, u: usize, v: usize },
    #[error("path {path}: chord {u}-{v} makes the path non-induced")]
    Chord { path: usize, u: usize, v: usize },
}
