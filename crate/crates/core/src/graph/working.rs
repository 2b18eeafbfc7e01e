use std::sync::Arc;

use super::{StaticGraph, VertexSet};
use crate::error::{Error, Result};

/// A degree-2 fold: `folded` and its two neighbors `merged` were replaced by
/// `new_vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldRecord {
    pub new_vertex: usize,
    pub folded: usize,
    pub merged: (usize, usize),
}

/// Mutable view over a shared [`StaticGraph`] supporting vertex deletion and
/// degree-2 folding.
///
/// Fold-created vertices get ids `base.vertex_count()..` in creation order.
/// Every adjacency list (base or extra) stays sorted, since extra entries are
/// appended in increasing id order.
#[derive(Clone, Debug)]
pub struct WorkingGraph {
    base: Arc<StaticGraph>,
    alive: Vec<bool>,
    live_degree: Vec<usize>,
    /// Fold-created edges. For a base vertex, only fold ids; for a fold vertex,
    /// its whole adjacency.
    extra: Vec<Vec<usize>>,
    alive_count: usize,
    track_changes: bool,
    touched: Vec<usize>,
    edge_touches: u64,
}

impl WorkingGraph {
    pub fn new(base: Arc<StaticGraph>) -> Self {
        let n = base.vertex_count();
        Self {
            alive: vec![true; n],
            live_degree: (0..n).map(|v| base.degree(v)).collect(),
            extra: vec![Vec::new(); n],
            alive_count: n,
            base,
            track_changes: false,
            touched: Vec::new(),
            edge_touches: 0,
        }
    }

    /// Makes every vertex of `base` alive again and drops all fold vertices.
    pub fn reset_from(&mut self, base: Arc<StaticGraph>) {
        let n = base.vertex_count();
        self.alive.clear();
        self.alive.resize(n, true);
        self.live_degree.clear();
        self.live_degree.extend((0..n).map(|v| base.degree(v)));
        self.extra.truncate(n);
        self.extra.iter_mut().for_each(Vec::clear);
        self.extra.resize(n, Vec::new());
        self.alive_count = n;
        self.touched.clear();
        self.base = base;
    }

    pub fn base(&self) -> &Arc<StaticGraph> {
        &self.base
    }

    /// Total id space, including dead and fold-created vertices.
    pub fn capacity(&self) -> usize {
        self.alive.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn fold_vertex_count(&self) -> usize {
        self.alive.len() - self.base.vertex_count()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn live_degree(&self, v: usize) -> usize {
        self.live_degree[v]
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alive.len()).filter(move |&v| self.alive[v])
    }

    /// Alive neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let base: &[usize] = if v < self.base.vertex_count() {
            self.base.neighbors(v)
        } else {
            &[]
        };
        base.iter()
            .chain(self.extra[v].iter())
            .copied()
            .filter(move |&u| self.alive[u])
    }

    /// Number of adjacency entries (dead or alive) scanned by `neighbors(v)`.
    pub fn raw_degree(&self, v: usize) -> usize {
        let base = if v < self.base.vertex_count() {
            self.base.degree(v)
        } else {
            0
        };
        base + self.extra[v].len()
    }

    /// Edge test between two alive vertices; O(log Δ).
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if !self.is_alive(u) || !self.is_alive(v) || u == v {
            return false;
        }
        let n = self.base.vertex_count();
        let (lo, hi) = (u.min(v), u.max(v));
        if hi < n {
            self.base.has_edge(lo, hi)
        } else {
            self.extra[hi].binary_search(&lo).is_ok()
        }
    }

    /// Enables recording of vertices whose adjacency changed.
    pub fn set_change_tracking(&mut self, on: bool) {
        self.track_changes = on;
        self.touched.clear();
    }

    /// Drains the vertices whose live adjacency changed since the last call.
    pub fn take_touched(&mut self) -> Vec<usize> {
        std::mem::take(&mut self.touched)
    }

    /// Adjacency entries visited by mutating operations so far.
    pub fn edge_touches(&self) -> u64 {
        self.edge_touches
    }

    pub(crate) fn count_touches(&mut self, n: u64) {
        self.edge_touches += n;
    }

    fn mark_touched(&mut self, v: usize) {
        if self.track_changes {
            self.touched.push(v);
        }
    }

    /// Deletes a single alive vertex and its incident edges.
    pub fn delete_vertex(&mut self, v: usize) -> Result<()> {
        if !self.is_alive(v) {
            return Err(Error::Contract(format!("vertex {v} is not alive")));
        }
        self.kill(v);
        Ok(())
    }

    fn kill(&mut self, v: usize) {
        self.alive[v] = false;
        self.alive_count -= 1;
        self.live_degree[v] = 0;
        let n = self.base.vertex_count();
        let base = Arc::clone(&self.base);
        let base_list: &[usize] = if v < n { base.neighbors(v) } else { &[] };
        let extra = std::mem::take(&mut self.extra[v]);
        self.edge_touches += (base_list.len() + extra.len()) as u64;
        for &u in base_list.iter().chain(extra.iter()) {
            if self.alive[u] {
                self.live_degree[u] -= 1;
                self.mark_touched(u);
            }
        }
        self.extra[v] = extra;
    }

    /// Deletes `v` together with its alive neighbors and returns the removed
    /// vertices.
    pub fn delete_closed_neighborhood(&mut self, v: usize) -> Result<VertexSet> {
        if !self.is_alive(v) {
            return Err(Error::Contract(format!("vertex {v} is not alive")));
        }
        let mut removed: VertexSet = self.neighbors(v).collect();
        removed.insert(v);
        self.edge_touches += self.raw_degree(v) as u64;
        for u in removed.iter() {
            self.kill(u);
        }
        Ok(removed)
    }

    /// The two alive neighbors of a live-degree-2 vertex.
    pub fn two_neighbors(&self, u: usize) -> Option<(usize, usize)> {
        if !self.is_alive(u) || self.live_degree[u] != 2 {
            return None;
        }
        let mut it = self.neighbors(u);
        Some((it.next()?, it.next()?))
    }

    /// Folds the degree-2 vertex `u` with non-adjacent neighbors `v`, `w` into
    /// a fresh vertex adjacent to `(N(v) ∪ N(w)) \ {u}`.
    pub fn fold_degree2(&mut self, u: usize) -> Result<FoldRecord> {
        if !self.is_alive(u) {
            return Err(Error::Contract(format!("vertex {u} is not alive")));
        }
        let (v, w) = self.two_neighbors(u).ok_or_else(|| {
            Error::Precondition(format!(
                "fold needs a degree-2 vertex, {u} has degree {}",
                self.live_degree[u]
            ))
        })?;
        if self.has_edge(v, w) {
            return Err(Error::Precondition(format!(
                "neighbors {v} and {w} of {u} are adjacent"
            )));
        }
        let mut merged: Vec<usize> = self
            .neighbors(v)
            .chain(self.neighbors(w))
            .filter(|&y| y != u)
            .collect();
        self.edge_touches += (self.raw_degree(v) + self.raw_degree(w)) as u64;
        merged.sort_unstable();
        merged.dedup();

        self.kill(u);
        self.kill(v);
        self.kill(w);

        let x = self.alive.len();
        self.alive.push(true);
        self.live_degree.push(merged.len());
        self.alive_count += 1;
        for &y in &merged {
            self.extra[y].push(x);
            self.live_degree[y] += 1;
            self.mark_touched(y);
        }
        self.edge_touches += merged.len() as u64;
        self.extra.push(merged);
        self.mark_touched(x);
        Ok(FoldRecord {
            new_vertex: x,
            folded: u,
            merged: (v, w),
        })
    }

    /// Compacts the alive part into a fresh [`StaticGraph`]. Returns the graph
    /// and the compact-to-working id map.
    pub fn freeze(&self) -> (StaticGraph, Vec<usize>) {
        let mut compact = vec![usize::MAX; self.alive.len()];
        let mut ids = Vec::with_capacity(self.alive_count);
        for v in self.alive_vertices() {
            compact[v] = ids.len();
            ids.push(v);
        }
        let adjacency = ids
            .iter()
            .map(|&v| self.neighbors(v).map(|u| compact[u]).collect())
            .collect();
        (StaticGraph::from_sorted_lists(adjacency), ids)
    }

    /// Recomputes degrees and symmetry from scratch.
    pub fn audit(&self) -> Result<(), String> {
        let mut alive = 0;
        for v in 0..self.alive.len() {
            if !self.alive[v] {
                continue;
            }
            alive += 1;
            let mut degree = 0;
            let mut prev = None;
            for u in self.neighbors(v) {
                if prev.is_some_and(|p| p >= u) {
                    return Err(format!("adjacency of {v} not sorted or duplicated"));
                }
                prev = Some(u);
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.neighbors(u).any(|y| y == v) {
                    return Err(format!("edge {v}-{u} not symmetric"));
                }
                degree += 1;
            }
            if degree != self.live_degree[v] {
                return Err(format!(
                    "live_degree({v}) = {} but {} alive neighbors",
                    self.live_degree[v], degree
                ));
            }
        }
        if alive != self.alive_count {
            return Err(format!("alive_count {} != {}", self.alive_count, alive));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn working(edges: &[(usize, usize)]) -> WorkingGraph {
        WorkingGraph::new(Arc::new(StaticGraph::from_edges(edges, None).unwrap()))
    }

    fn c5() -> WorkingGraph {
        working(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    }

    #[test]
    fn delete_closed_neighborhood_on_c5() {
        let mut w = c5();
        let removed = w.delete_closed_neighborhood(0).unwrap();
        assert_eq!(removed.to_vec(), vec![0, 1, 4]);
        assert_eq!(w.alive_vertices().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(w.live_degree(2), 1);
        assert_eq!(w.live_degree(3), 1);
        w.audit().unwrap();
    }

    #[test]
    fn delete_star_center() {
        let mut w = working(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(w.delete_closed_neighborhood(0).unwrap().len(), 5);
        assert_eq!(w.alive_count(), 0);
    }

    #[test]
    fn delete_dead_vertex_is_contract_error() {
        let mut w = c5();
        w.delete_closed_neighborhood(0).unwrap();
        assert!(matches!(
            w.delete_closed_neighborhood(1),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn degrees_match_recount_after_random_deletions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut edges = Vec::new();
        for u in 0..60 {
            for v in u + 1..60 {
                if rng.gen_bool(0.1) {
                    edges.push((u, v));
                }
            }
        }
        let g = Arc::new(StaticGraph::from_edges(&edges, Some(60)).unwrap());
        let mut w = WorkingGraph::new(Arc::clone(&g));
        for v in [3, 17, 42] {
            if w.is_alive(v) {
                w.delete_closed_neighborhood(v).unwrap();
            }
        }
        for v in w.alive_vertices() {
            let recount = g.neighbors(v).iter().filter(|&&u| w.is_alive(u)).count();
            assert_eq!(w.live_degree(v), recount);
        }
        w.audit().unwrap();
    }

    #[test]
    fn fold_p3_to_isolated_vertex() {
        let mut w = working(&[(0, 1), (1, 2)]);
        let rec = w.fold_degree2(1).unwrap();
        assert_eq!(rec.new_vertex, 3);
        assert_eq!(rec.merged, (0, 2));
        assert_eq!(w.alive_count(), 1);
        assert_eq!(w.live_degree(3), 0);
        w.audit().unwrap();
    }

    #[test]
    fn fold_c5_gives_triangle() {
        let mut w = c5();
        let rec = w.fold_degree2(0).unwrap();
        let x = rec.new_vertex;
        assert_eq!(x, 5);
        assert_eq!(w.alive_vertices().collect::<Vec<_>>(), vec![2, 3, 5]);
        assert!(w.has_edge(x, 2) && w.has_edge(x, 3) && w.has_edge(2, 3));
        w.audit().unwrap();
    }

    #[test]
    fn fold_p5_middle_gives_p3() {
        let mut w = working(&[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let rec = w.fold_degree2(2).unwrap();
        let x = rec.new_vertex;
        assert_eq!(w.alive_vertices().collect::<Vec<_>>(), vec![0, 4, x]);
        assert_eq!(w.neighbors(x).collect::<Vec<_>>(), vec![0, 4]);
        assert!(!w.has_edge(0, 4));
        w.audit().unwrap();
    }

    #[test]
    fn fold_preconditions() {
        let mut tri = working(&[(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(tri.fold_degree2(0), Err(Error::Precondition(_))));
        let mut star = working(&[(0, 1), (0, 2), (0, 3)]);
        assert!(matches!(star.fold_degree2(0), Err(Error::Precondition(_))));
    }

    #[test]
    fn nested_folds_keep_lists_sorted() {
        // P7: fold 1 (merging 0,2), then the new vertex chain keeps folding.
        let mut w = working(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]);
        w.fold_degree2(1).unwrap();
        w.audit().unwrap();
        let x = w.alive_vertices().find(|&v| v >= 7).unwrap();
        assert_eq!(w.neighbors(x).collect::<Vec<_>>(), vec![3]);
        w.fold_degree2(4).unwrap();
        w.audit().unwrap();
        assert_eq!(w.alive_count(), 3);
        let (frozen, ids) = w.freeze();
        frozen.audit().unwrap();
        assert_eq!(frozen.vertex_count(), 3);
        assert_eq!(ids.len(), 3);
    }

    #[test]
    fn reset_restores_base() {
        let mut w = c5();
        w.fold_degree2(0).unwrap();
        w.delete_closed_neighborhood(2).unwrap();
        let base = Arc::clone(w.base());
        w.reset_from(base);
        assert_eq!(w.alive_count(), 5);
        assert_eq!(w.capacity(), 5);
        assert_eq!(w.fold_vertex_count(), 0);
        for v in 0..5 {
            assert_eq!(w.live_degree(v), 2);
            assert_eq!(w.live_degree(v), w.base().degree(v));
        }
        w.audit().unwrap();
    }
}
