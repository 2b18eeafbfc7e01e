//! Iterated local search in the style of Andrade, Resende and Werneck:
//! forced-insertion perturbation followed by (1,2)-swaps to exhaustion.
//!
//! The solution keeps, for every vertex, its tightness (number of solution
//! neighbors) and the XOR of its solution neighbors' ids, so the unique
//! solution neighbor of a 1-tight vertex is available in O(1).

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{StaticGraph, VertexSet};

/// Tunables of the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Outsiders drawn per perturbation pick; the oldest one is forced.
    pub tournament_size: usize,
    /// Upper bound on vertices forced in one perturbation.
    pub force_cap: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            tournament_size: 64,
            force_cap: 32,
        }
    }
}

/// Minimum-degree greedy maximal independent set, ties to the lowest id.
pub fn greedy_init(g: &StaticGraph) -> VertexSet {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).map(|v| Reverse((degree[v], v))).collect();
    let mut set = VertexSet::with_capacity(n);
    while let Some(Reverse((d, v))) = heap.pop() {
        if removed[v] || d != degree[v] {
            continue;
        }
        set.insert(v);
        removed[v] = true;
        for &u in g.neighbors(v) {
            if removed[u] {
                continue;
            }
            removed[u] = true;
            for &y in g.neighbors(u) {
                if !removed[y] {
                    degree[y] -= 1;
                    heap.push(Reverse((degree[y], y)));
                }
            }
        }
    }
    set
}

/// Geometric force count: P(c = k) = 2^-k for k below the cap; the cap
/// absorbs the tail.
pub fn sample_force_count<R: Rng + ?Sized>(rng: &mut R, cap: u32) -> u32 {
    let mut count = 1;
    while count < cap && rng.gen_bool(0.5) {
        count += 1;
    }
    count
}

/// Best solution seen during a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestTracker {
    pub best_set: VertexSet,
    pub best_size: usize,
}

impl BestTracker {
    fn observe(&mut self, state: &SolutionState) {
        if state.size() > self.best_size {
            self.best_size = state.size();
            self.best_set = state.to_set();
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BlockStats {
    pub iterations: u64,
    /// Largest number of adjacency entries visited by a single iteration.
    pub max_iteration_touches: u64,
    pub total_touches: u64,
}

/// An independent set under local search on a fixed graph.
#[derive(Clone, Debug)]
pub struct SolutionState {
    graph: Arc<StaticGraph>,
    config: SearchConfig,
    in_solution: Vec<bool>,
    tightness: Vec<u32>,
    /// XOR of the ids of solution neighbors.
    neighbor_xor: Vec<usize>,
    size: usize,
    last_out: Vec<u64>,
    iteration: u64,
    rng: ChaCha8Rng,
    outsiders: Vec<usize>,
    outsider_pos: Vec<usize>,
    /// Superset of the 0-tight outsiders.
    zero_tight: Vec<usize>,
    /// Solution vertices whose 1-tight neighborhood grew.
    candidates: Vec<usize>,
    is_candidate: Vec<bool>,
    mark: Vec<u64>,
    epoch: u64,
    edge_touches: u64,
}

impl SolutionState {
    /// Starts from `initial`, which must be independent in `graph`.
    pub fn new(
        graph: Arc<StaticGraph>,
        initial: &VertexSet,
        rng: ChaCha8Rng,
        config: SearchConfig,
    ) -> Self {
        let n = graph.vertex_count();
        let mut state = Self {
            config,
            in_solution: vec![false; n],
            tightness: vec![0; n],
            neighbor_xor: vec![0; n],
            size: 0,
            last_out: vec![0; n],
            iteration: 1,
            rng,
            outsiders: (0..n).collect(),
            outsider_pos: (0..n).collect(),
            zero_tight: (0..n).collect(),
            candidates: Vec::new(),
            is_candidate: vec![false; n],
            mark: vec![0; n],
            epoch: 0,
            edge_touches: 0,
            graph,
        };
        for v in initial.iter() {
            assert!(
                state.tightness[v] == 0 && !state.in_solution[v],
                "initial set is not independent at {v}"
            );
            state.insert(v);
        }
        state
    }

    /// Greedy start followed by a maximality pass.
    pub fn greedy(graph: Arc<StaticGraph>, rng: ChaCha8Rng, config: SearchConfig) -> Self {
        let init = greedy_init(&graph);
        let mut state = Self::new(graph, &init, rng, config);
        state.maintain_maximality();
        state
    }

    /// Replaces the solution with `set` (independent in the same graph).
    /// Removal ages and the iteration counter are kept.
    pub fn reset_to(&mut self, set: &VertexSet) {
        let n = self.in_solution.len();
        self.in_solution.iter_mut().for_each(|b| *b = false);
        self.tightness.iter_mut().for_each(|t| *t = 0);
        self.neighbor_xor.iter_mut().for_each(|x| *x = 0);
        self.size = 0;
        self.outsiders.clear();
        self.outsiders.extend(0..n);
        self.outsider_pos.clear();
        self.outsider_pos.extend(0..n);
        self.zero_tight.clear();
        self.zero_tight.extend(0..n);
        self.candidates.clear();
        self.is_candidate.iter_mut().for_each(|c| *c = false);
        for v in set.iter() {
            assert!(
                self.tightness[v] == 0,
                "reset set is not independent at {v}"
            );
            self.insert(v);
        }
    }

    pub fn graph(&self) -> &Arc<StaticGraph> {
        &self.graph
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_solution[v]
    }

    pub fn tightness(&self, v: usize) -> u32 {
        self.tightness[v]
    }

    pub fn last_out(&self, v: usize) -> u64 {
        self.last_out[v]
    }

    pub fn edge_touches(&self) -> u64 {
        self.edge_touches
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn into_rng(self) -> ChaCha8Rng {
        self.rng
    }

    pub fn to_set(&self) -> VertexSet {
        let mut set = VertexSet::with_capacity(self.in_solution.len());
        set.extend((0..self.in_solution.len()).filter(|&v| self.in_solution[v]));
        set
    }

    fn push_candidate(&mut self, x: usize) {
        if !self.is_candidate[x] {
            self.is_candidate[x] = true;
            self.candidates.push(x);
        }
    }

    fn insert(&mut self, v: usize) {
        debug_assert!(!self.in_solution[v] && self.tightness[v] == 0);
        self.in_solution[v] = true;
        self.size += 1;
        let pos = self.outsider_pos[v];
        let last = *self.outsiders.last().expect("v is an outsider");
        self.outsiders.swap_remove(pos);
        if last != v {
            self.outsider_pos[last] = pos;
        }
        let graph = Arc::clone(&self.graph);
        let nb = graph.neighbors(v);
        self.edge_touches += nb.len() as u64;
        for &u in nb {
            self.tightness[u] += 1;
            self.neighbor_xor[u] ^= v;
        }
        self.push_candidate(v);
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.in_solution[v]);
        self.in_solution[v] = false;
        self.size -= 1;
        self.last_out[v] = self.iteration;
        self.outsider_pos[v] = self.outsiders.len();
        self.outsiders.push(v);
        if self.tightness[v] == 0 {
            self.zero_tight.push(v);
        }
        let graph = Arc::clone(&self.graph);
        let nb = graph.neighbors(v);
        self.edge_touches += nb.len() as u64;
        for &u in nb {
            self.tightness[u] -= 1;
            self.neighbor_xor[u] ^= v;
            match self.tightness[u] {
                0 => self.zero_tight.push(u),
                1 => {
                    let x = self.neighbor_xor[u];
                    self.push_candidate(x);
                }
                _ => {}
            }
        }
    }

    /// Removes a solution vertex without repairing maximality.
    pub fn remove_vertex(&mut self, v: usize) {
        if self.in_solution[v] {
            self.remove(v);
        }
    }

    /// Inserts every 0-tight outsider, lowest id first. Returns the count.
    pub fn maintain_maximality(&mut self) -> usize {
        let mut pending = std::mem::take(&mut self.zero_tight);
        pending.sort_unstable();
        pending.dedup();
        let mut inserted = 0;
        for &v in &pending {
            if !self.in_solution[v] && self.tightness[v] == 0 {
                self.insert(v);
                inserted += 1;
            }
        }
        pending.clear();
        self.zero_tight = pending;
        inserted
    }

    /// Looks for a (1,2)-swap that removes `x`: two non-adjacent 1-tight
    /// neighbors of `x`.
    fn swap_at(&mut self, x: usize) -> Option<(usize, usize, usize)> {
        if !self.in_solution[x] {
            return None;
        }
        let graph = Arc::clone(&self.graph);
        let nb = graph.neighbors(x);
        self.edge_touches += nb.len() as u64;
        let tight: Vec<usize> = nb
            .iter()
            .copied()
            .filter(|&u| self.tightness[u] == 1)
            .collect();
        if tight.len() < 2 {
            return None;
        }
        for &u in &tight {
            self.epoch += 1;
            let epoch = self.epoch;
            let nu = graph.neighbors(u);
            self.edge_touches += nu.len() as u64;
            for &y in nu {
                self.mark[y] = epoch;
            }
            if let Some(&w) = tight.iter().find(|&&w| w != u && self.mark[w] != epoch) {
                return Some((x, u, w));
            }
        }
        None
    }

    /// Full scan for any (1,2)-swap; O(ε).
    pub fn find_one_two_swap(&mut self) -> Option<(usize, usize, usize)> {
        (0..self.in_solution.len()).find_map(|x| self.swap_at(x))
    }

    fn apply_swap(&mut self, (x, u, w): (usize, usize, usize)) {
        self.remove(x);
        self.insert(u);
        self.insert(w);
    }

    /// Applies (1,2)-swaps until none exists, keeping the set maximal.
    pub fn local_search(&mut self) -> usize {
        self.maintain_maximality();
        let mut swaps = 0;
        while let Some(x) = self.candidates.pop() {
            self.is_candidate[x] = false;
            if let Some(swap) = self.swap_at(x) {
                self.apply_swap(swap);
                self.maintain_maximality();
                swaps += 1;
            }
        }
        swaps
    }

    /// Draws outsiders and returns the one out of the solution the longest.
    fn tournament(&mut self) -> Option<usize> {
        if self.outsiders.is_empty() {
            return None;
        }
        (0..self.config.tournament_size.max(1))
            .map(|_| self.outsiders[self.rng.gen_range(0..self.outsiders.len())])
            .min_by_key(|&v| (self.last_out[v], v))
    }

    /// Forces `count` outsiders into the solution, evicting their solution
    /// neighbors, then restores maximality. Forced vertices are pairwise
    /// non-adjacent; a pick adjacent to an earlier one is redrawn.
    pub fn perturb_with(&mut self, count: u32) -> VertexSet {
        let mut forced = VertexSet::new();
        for _ in 0..count {
            let pick = (0..16).find_map(|_| {
                let v = self.tournament()?;
                let clash = self.graph.neighbors(v).iter().any(|&u| forced.contains(u));
                (!clash).then_some(v)
            });
            let Some(v) = pick else {
                break;
            };
            let graph = Arc::clone(&self.graph);
            for &y in graph.neighbors(v) {
                if self.in_solution[y] {
                    self.remove(y);
                }
            }
            self.edge_touches += graph.degree(v) as u64;
            self.insert(v);
            forced.insert(v);
        }
        self.maintain_maximality();
        forced
    }

    /// Perturbation with a randomly sampled force count.
    pub fn perturb(&mut self) -> VertexSet {
        if self.outsiders.is_empty() {
            return VertexSet::new();
        }
        let count = sample_force_count(&mut self.rng, self.config.force_cap);
        self.perturb_with(count)
    }

    /// Runs `m` iterations of perturbation plus swap exhaustion and returns
    /// the best solution observed, the starting one included.
    pub fn arw_block(&mut self, m: u64) -> (BestTracker, BlockStats) {
        let mut best = BestTracker {
            best_set: self.to_set(),
            best_size: self.size,
        };
        let mut stats = BlockStats::default();
        if m == 0 {
            return (best, stats);
        }
        let start = self.edge_touches;
        self.local_search();
        best.observe(self);
        for _ in 0..m {
            self.iteration += 1;
            let before = self.edge_touches;
            self.perturb();
            self.local_search();
            best.observe(self);
            stats.iterations += 1;
            stats.max_iteration_touches =
                stats.max_iteration_touches.max(self.edge_touches - before);
        }
        stats.total_touches = self.edge_touches - start;
        (best, stats)
    }

    /// Recomputes every counter from scratch.
    pub fn audit(&self) -> Result<(), String> {
        let n = self.in_solution.len();
        let mut size = 0;
        for v in 0..n {
            let nb = self.graph.neighbors(v);
            let t = nb.iter().filter(|&&u| self.in_solution[u]).count() as u32;
            let x = nb
                .iter()
                .filter(|&&u| self.in_solution[u])
                .fold(0, |acc, &u| acc ^ u);
            if t != self.tightness[v] || x != self.neighbor_xor[v] {
                return Err(format!("stale tightness at {v}"));
            }
            if self.in_solution[v] {
                size += 1;
                if t != 0 {
                    return Err(format!("solution vertex {v} has a solution neighbor"));
                }
            }
        }
        if size != self.size {
            return Err(format!("size {} != {}", self.size, size));
        }
        if self.outsiders.len() != n - size {
            return Err("outsider list out of sync".into());
        }
        Ok(())
    }

    pub fn is_maximal(&self) -> bool {
        (0..self.in_solution.len()).all(|v| self.in_solution[v] || self.tightness[v] > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle::independence_number;
    use rand::SeedableRng;

    fn state(g: StaticGraph, init: &[usize], seed: u64) -> SolutionState {
        SolutionState::new(
            Arc::new(g),
            &init.iter().copied().collect(),
            ChaCha8Rng::seed_from_u64(seed),
            SearchConfig::default(),
        )
    }

    #[test]
    fn greedy_star_and_cycle() {
        assert_eq!(greedy_init(&generate::star(4)).to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(greedy_init(&generate::cycle(5)).len(), 2);
    }

    #[test]
    fn greedy_random_is_maximal_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let g = generate::gnp(50, 0.2, &mut rng);
            let s = greedy_init(&g);
            assert!(g.is_independent(&s));
            assert!(g.is_maximal(&s));
        }
    }

    #[test]
    fn maximality_restores_p3() {
        let mut s = state(generate::path(3), &[0, 2], 1);
        s.remove_vertex(0);
        assert_eq!(s.size(), 1);
        assert_eq!(s.maintain_maximality(), 1);
        assert_eq!(s.size(), 2);
        assert_eq!(s.maintain_maximality(), 0);
        s.audit().unwrap();
    }

    #[test]
    fn maximality_on_random_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = generate::gnp(80, 0.1, &mut rng);
        let mut s = state(g, &[], 3);
        s.maintain_maximality();
        assert!(s.is_maximal());
        s.audit().unwrap();
    }

    #[test]
    fn swap_on_p3_center() {
        let mut s = state(generate::path(3), &[1], 1);
        assert_eq!(s.find_one_two_swap(), Some((1, 0, 2)));
        s.local_search();
        assert_eq!(s.size(), 2);
        s.audit().unwrap();
    }

    #[test]
    fn no_swap_on_c5_optimum_or_k3() {
        let mut s = state(generate::cycle(5), &[0, 2], 1);
        assert_eq!(s.find_one_two_swap(), None);
        let mut s = state(generate::complete(3), &[0], 1);
        assert_eq!(s.find_one_two_swap(), None);
    }

    #[test]
    fn c6_swap_reaches_three() {
        let mut s = state(generate::cycle(6), &[0, 3], 1);
        assert!(s.is_maximal());
        s.local_search();
        assert_eq!(s.size(), 3);
    }

    /// Brute-force (1,2)-swap existence.
    fn swap_exists(g: &StaticGraph, set: &VertexSet) -> bool {
        let n = g.vertex_count();
        set.iter().any(|x| {
            (0..n).any(|u| {
                (u + 1..n).any(|w| {
                    let mut t = set.clone();
                    t.remove(x);
                    !set.contains(u)
                        && !set.contains(w)
                        && t.insert(u)
                        && t.insert(w)
                        && g.is_independent(&t)
                })
            })
        })
    }

    #[test]
    fn swap_search_is_complete_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..300 {
            let n = 4 + i % 17;
            let g = generate::gnp(n, [0.15, 0.3, 0.5][i % 3], &mut rng);
            let init = {
                // A random maximal set.
                let mut order: Vec<usize> = (0..n).collect();
                use rand::seq::SliceRandom;
                order.shuffle(&mut rng);
                let mut set = VertexSet::new();
                for v in order {
                    if g.neighbors(v).iter().all(|&u| !set.contains(u)) {
                        set.insert(v);
                    }
                }
                set
            };
            let mut s = SolutionState::new(
                Arc::new(g.clone()),
                &init,
                ChaCha8Rng::seed_from_u64(0),
                SearchConfig::default(),
            );
            let found = s.find_one_two_swap();
            assert_eq!(found.is_some(), swap_exists(&g, &init), "graph {i}");
            if let Some((x, u, w)) = found {
                let mut t = init.clone();
                t.remove(x);
                t.insert(u);
                t.insert(w);
                assert!(g.is_independent(&t));
            }
        }
    }

    #[test]
    fn forced_single_on_p3() {
        let mut s = state(generate::path(3), &[0, 2], 1);
        let forced = s.perturb_with(1);
        assert_eq!(forced.len(), 1);
        assert_eq!(forced.to_vec(), vec![1]);
        s.audit().unwrap();
        assert!(s.is_maximal());
    }

    #[test]
    fn forced_batch_is_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = Arc::new(generate::gnp(40, 0.2, &mut rng));
        let mut s = SolutionState::greedy(
            Arc::clone(&g),
            ChaCha8Rng::seed_from_u64(8),
            SearchConfig::default(),
        );
        for _ in 0..200 {
            let forced = s.perturb_with(2);
            assert!(g.is_independent(&forced));
            s.audit().unwrap();
        }
    }

    #[test]
    fn force_count_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let samples: Vec<u32> = (0..10_000)
            .map(|_| sample_force_count(&mut rng, 32))
            .collect();
        let ones = samples.iter().filter(|&&c| c == 1).count() as f64 / 1e4;
        assert!((0.47..=0.53).contains(&ones), "{ones}");
        assert!(samples.iter().all(|&c| (1..=32).contains(&c)));
    }

    #[test]
    fn block_zero_returns_input() {
        let mut s = state(generate::cycle(6), &[0, 3], 1);
        let (best, stats) = s.arw_block(0);
        assert_eq!(best.best_set.to_vec(), vec![0, 3]);
        assert_eq!(stats.iterations, 0);
    }

    #[test]
    fn petersen_block_finds_optimum() {
        let g = Arc::new(generate::petersen());
        let mut s = SolutionState::greedy(
            Arc::clone(&g),
            ChaCha8Rng::seed_from_u64(1),
            SearchConfig::default(),
        );
        let (best, _) = s.arw_block(10_000);
        assert_eq!(best.best_size, 4);
        assert_eq!(best.best_size, independence_number(&g).unwrap());
        assert!(g.is_independent(&best.best_set));
    }

    #[test]
    fn block_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = Arc::new(generate::gnp(120, 0.05, &mut rng));
        let run = || {
            let mut s = SolutionState::greedy(
                Arc::clone(&g),
                ChaCha8Rng::seed_from_u64(5),
                SearchConfig::default(),
            );
            s.arw_block(2_000).0
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn reset_matches_fresh_state() {
        let g = Arc::new(generate::petersen());
        let mut s = SolutionState::greedy(
            Arc::clone(&g),
            ChaCha8Rng::seed_from_u64(1),
            SearchConfig::default(),
        );
        s.arw_block(100);
        let target: VertexSet = [0, 7].into_iter().collect();
        s.reset_to(&target);
        s.audit().unwrap();
        assert_eq!(s.to_set(), target);
        s.maintain_maximality();
        assert!(s.is_maximal());
        s.audit().unwrap();
    }

    #[test]
    fn block_keeps_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = Arc::new(generate::gnp(100, 0.08, &mut rng));
        let mut s = SolutionState::greedy(
            Arc::clone(&g),
            ChaCha8Rng::seed_from_u64(2),
            SearchConfig::default(),
        );
        let start = s.size();
        for _ in 0..20 {
            let (best, _) = s.arw_block(50);
            assert!(best.best_size >= start);
            s.audit().unwrap();
            assert!(s.is_maximal());
        }
    }
}
