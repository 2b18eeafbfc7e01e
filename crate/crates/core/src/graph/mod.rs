//! Graph representations.
//!
//! [`StaticGraph`] is an immutable CSR adjacency structure with sorted
//! neighbor lists. [`WorkingGraph`] layers vertex deletion and degree-2
//! folding on top of a shared `StaticGraph`.

pub mod io;
mod set;
mod working;

pub use set::VertexSet;
pub use working::{FoldRecord, WorkingGraph};

use crate::error::{Error, Result};

/// Immutable simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    max_degree: usize,
}

impl StaticGraph {
    /// Builds a graph from raw edges. Self-loops are dropped and duplicate
    /// edges collapsed. The vertex count is `max(hint, max id + 1)`.
    pub fn from_edges(edges: &[(usize, usize)], vertex_count_hint: Option<usize>) -> Result<Self> {
        if edges.is_empty() && vertex_count_hint.is_none() {
            return Err(Error::EmptyGraph);
        }
        let max_id = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = max_id.max(vertex_count_hint.unwrap_or(0));

        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u != v {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        let mut adjacency: Vec<Vec<usize>> =
            degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for &(u, v) in edges {
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_lists(adjacency))
    }

    /// Builds from per-vertex neighbor lists that are already sorted,
    /// deduplicated, loop-free and symmetric.
    pub(crate) fn from_sorted_lists(adjacency: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        let total: usize = adjacency.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        let mut max_degree = 0;
        offsets.push(0);
        for list in adjacency {
            max_degree = max_degree.max(list.len());
            targets.extend(list);
            offsets.push(targets.len());
        }
        Self {
            offsets,
            targets,
            max_degree,
        }
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            max_degree: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    /// Subgraph induced by the vertices with `keep[v]`, relabelled
    /// contiguously. Returns the graph and the new-to-old id map.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (StaticGraph, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        let mut old_id = Vec::new();
        for v in 0..self.vertex_count() {
            if keep[v] {
                new_id[v] = old_id.len();
                old_id.push(v);
            }
        }
        let adjacency = old_id
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| keep[u])
                    .map(|&u| new_id[u])
                    .collect()
            })
            .collect();
        (Self::from_sorted_lists(adjacency), old_id)
    }

    /// True if no two members of `set` are adjacent.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| v < self.vertex_count() && self.neighbors(v).iter().all(|&u| !set.contains(u)))
    }

    /// True if every vertex outside `set` has a neighbor inside it.
    pub fn is_maximal(&self, set: &VertexSet) -> bool {
        (0..self.vertex_count())
            .filter(|&v| !set.contains(v))
            .all(|v| self.neighbors(v).iter().any(|&u| set.contains(u)))
    }

    /// Adds free vertices to `set` in ascending id order until it is maximal.
    /// Returns the number of vertices added.
    pub fn make_maximal(&self, set: &mut VertexSet) -> usize {
        let mut added = 0;
        for v in 0..self.vertex_count() {
            if !set.contains(v) && self.neighbors(v).iter().all(|&u| !set.contains(u)) {
                set.insert(v);
                added += 1;
            }
        }
        added
    }

    /// Checks the structural invariants from scratch.
    pub fn audit(&self) -> Result<(), String> {
        let mut max_degree = 0;
        for v in 0..self.vertex_count() {
            let list = self.neighbors(v);
            max_degree = max_degree.max(list.len());
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("adjacency of {v} not strictly sorted"));
            }
            for &u in list {
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if u >= self.vertex_count() || self.neighbors(u).binary_search(&v).is_err() {
                    return Err(format!("edge {v}-{u} not symmetric"));
                }
            }
        }
        if !self.targets.len().is_multiple_of(2) {
            return Err("odd adjacency total".into());
        }
        if max_degree != self.max_degree {
            return Err(format!("max_degree {} != {}", self.max_degree, max_degree));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_p3() {
        let g = StaticGraph::from_edges(&[(0, 1), (1, 2)], None).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let degrees: Vec<_> = (0..3).map(|v| g.degree(v)).collect();
        assert_eq!(degrees, vec![1, 2, 1]);
        assert_eq!(g.max_degree(), 2);
        g.audit().unwrap();
    }

    #[test]
    fn dedup_and_loops() {
        let g = StaticGraph::from_edges(&[(0, 1), (1, 0), (0, 0)], None).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        g.audit().unwrap();
    }

    #[test]
    fn hint_extends_vertex_count() {
        let g = StaticGraph::from_edges(&[(0, 1)], Some(5)).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.degree(4), 0);
        let g = StaticGraph::from_edges(&[], Some(3)).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn empty_without_hint_is_error() {
        let err = StaticGraph::from_edges(&[], None).unwrap_err();
        assert_eq!(err.to_string(), "empty graph undefined");
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = StaticGraph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)], None).unwrap();
        let (sub, map) = g.induced_subgraph(&[true, false, true, true]);
        assert_eq!(map, vec![0, 2, 3]);
        assert_eq!(sub.edge_count(), 2);
        assert!(sub.has_edge(0, 2));
        assert!(sub.has_edge(1, 2));
        assert!(!sub.has_edge(0, 1));
    }

    #[test]
    fn independence_and_maximality() {
        let g = StaticGraph::from_edges(&[(0, 1), (1, 2), (2, 3)], None).unwrap();
        let s: VertexSet = [1].into_iter().collect();
        assert!(g.is_independent(&s));
        assert!(!g.is_maximal(&s));
        let mut s = s;
        assert_eq!(g.make_maximal(&mut s), 1);
        assert_eq!(s.to_vec(), vec![1, 3]);
        assert!(!g.is_independent(&[0, 1].into_iter().collect()));
    }
}
