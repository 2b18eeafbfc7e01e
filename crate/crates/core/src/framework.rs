//! The adaptive restart framework around the local search.
//!
//! A run kernelizes the input once (the frozen kernel), then alternates
//! blocks of `m` local-search iterations with a periodic adaptive test. A
//! failed test restarts the round: the vertices common to every solution
//! recorded during the round are fixed, their closed neighborhoods deleted
//! from the frozen kernel, optionally followed by simple reductions, and the
//! search resumes from a greedy solution of the smaller graph.

use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arw::{SearchConfig, SolutionState};
use crate::error::{Error, Result};
use crate::graph::{StaticGraph, VertexSet, WorkingGraph};
use crate::reductions::{
    extend_solution, kernelize, run_to_fixpoint, KernelResult, ReductionLog, RuleSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Light kernel, no reductions inside rounds.
    Arir1,
    /// Full kernel, no reductions inside rounds.
    Arir2,
    /// Full kernel plus simple reductions after every restart.
    Arir3,
    /// Plain local search on the input: no kernel, no restarts.
    Arw,
}

impl Variant {
    pub fn kernel_rules(self) -> RuleSet {
        match self {
            Variant::Arir1 => RuleSet::LIGHT,
            Variant::Arir2 | Variant::Arir3 => RuleSet::ADVANCED,
            Variant::Arw => RuleSet::empty(),
        }
    }

    pub fn round_rules(self) -> RuleSet {
        match self {
            Variant::Arir3 => RuleSet::SIMPLE,
            _ => RuleSet::empty(),
        }
    }

    pub fn restarts(self) -> bool {
        self != Variant::Arw
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Arir1 => "arir1",
            Variant::Arir2 => "arir2",
            Variant::Arir3 => "arir3",
            Variant::Arw => "arw",
        }
    }

    pub const ALL: [Variant; 4] = [Variant::Arir1, Variant::Arir2, Variant::Arir3, Variant::Arw];
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "arir1" | "arir-i" => Ok(Variant::Arir1),
            "arir2" | "arir-ii" => Ok(Variant::Arir2),
            "arir3" | "arir-iii" => Ok(Variant::Arir3),
            "arw" => Ok(Variant::Arw),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub variant: Variant,
    /// Local-search iterations per block.
    pub m: u64,
    /// Local-search iterations between adaptive tests.
    pub n: u64,
    pub cutoff_seconds: f64,
    pub seed: u64,
    /// Stop after this many local-search iterations regardless of time.
    pub max_iterations: Option<u64>,
    pub search: SearchConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Arir2,
            m: 10_000,
            n: 100_000,
            cutoff_seconds: 60.0,
            seed: 1,
            max_iterations: None,
            search: SearchConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.cutoff_seconds.is_nan() || self.cutoff_seconds <= 0.0 {
            return Err(Error::Config(format!(
                "cutoff must be positive, got {}",
                self.cutoff_seconds
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Continue,
    Restart,
}

/// Restart probability bookkeeping. `p` moves in steps of 0.01 and is kept
/// as an integer number of hundredths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptiveState {
    iter_num: u64,
    p_hundredths: u32,
    period: u64,
    step: u64,
}

impl AdaptiveState {
    /// `period` iterations between tests, `step` iterations per call.
    pub fn new(period: u64, step: u64) -> Self {
        Self {
            iter_num: 0,
            p_hundredths: 0,
            period: period.max(1),
            step: step.max(1),
        }
    }

    pub fn iter_num(&self) -> u64 {
        self.iter_num
    }

    pub fn p(&self) -> f64 {
        f64::from(self.p_hundredths) / 100.0
    }

    pub fn p_hundredths(&self) -> u32 {
        self.p_hundredths
    }

    /// Advances the counter; true if a test is due (a multiple of the period
    /// was reached or crossed).
    pub fn advance(&mut self) -> bool {
        let before = self.iter_num / self.period;
        self.iter_num += self.step;
        self.iter_num / self.period > before
    }

    /// The test itself: a stagnant period raises `p` by 0.01 and restarts
    /// when `draw < p`; an improving period resets `p` to 0.
    pub fn test(&mut self, improved: bool, draw: f64) -> Decision {
        if improved {
            self.p_hundredths = 0;
            return Decision::Continue;
        }
        self.p_hundredths = (self.p_hundredths + 1).min(100);
        if draw < self.p() {
            Decision::Restart
        } else {
            Decision::Continue
        }
    }

    /// `advance` followed by `test` when due. `draw` is only consumed by a
    /// stagnant test.
    pub fn adaptive_test(&mut self, improved: bool, draw: impl FnOnce() -> f64) -> Decision {
        if !self.advance() {
            return Decision::Continue;
        }
        if improved {
            self.test(true, 1.0)
        } else {
            self.test(false, draw())
        }
    }
}

/// Running intersection of the solutions recorded during one round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RirState {
    /// `None` stands for the full vertex set (nothing recorded yet).
    intersection: Option<VertexSet>,
    recorded: usize,
}

impl RirState {
    pub fn record_solution(&mut self, solution: &VertexSet) {
        match &mut self.intersection {
            Some(acc) => acc.intersect_with(solution),
            None => self.intersection = Some(solution.clone()),
        }
        self.recorded += 1;
    }

    pub fn recorded_count(&self) -> usize {
        self.recorded
    }

    /// The deletable vertices; empty when nothing has been recorded.
    pub fn deletable(&self) -> VertexSet {
        self.intersection.clone().unwrap_or_default()
    }

    pub fn clear(&mut self) {
        *self = Self::default();
    }
}

/// Fixes `S` = the recorded intersection and deletes `N[S]` from a fresh copy
/// of the frozen kernel.
pub fn rir_reduce(frozen: &Arc<StaticGraph>, rir: &RirState) -> (VertexSet, WorkingGraph) {
    let s = rir.deletable();
    let mut w = WorkingGraph::new(Arc::clone(frozen));
    for v in s.iter() {
        // `S` is independent, so no member has been deleted yet.
        w.delete_closed_neighborhood(v)
            .expect("deletable vertices form an independent set");
    }
    (s, w)
}

/// The graph searched during one round, with what is needed to map its
/// solutions back to the frozen kernel.
#[derive(Clone, Debug)]
pub struct Round {
    /// Vertices fixed by the intersection reduction (frozen-kernel ids).
    pub fixed_by_intersection: VertexSet,
    /// Simple reductions applied after the intersection reduction.
    pub simple_log: ReductionLog,
    pub search_graph: Arc<StaticGraph>,
    /// Search-graph id to round working-graph id.
    search_to_working: Vec<usize>,
    frozen_vertex_count: usize,
}

impl Round {
    pub fn build(frozen: &Arc<StaticGraph>, rir: &RirState, rules: RuleSet) -> Self {
        let (s, mut w) = rir_reduce(frozen, rir);
        let simple_log = run_to_fixpoint(&mut w, rules).log;
        let (search_graph, search_to_working) = w.freeze();
        Round {
            fixed_by_intersection: s,
            simple_log,
            search_graph: Arc::new(search_graph),
            search_to_working,
            frozen_vertex_count: frozen.vertex_count(),
        }
    }

    /// Size of the composite built from a search solution of size `k`.
    pub fn composite_size(&self, k: usize) -> usize {
        k + self.fixed_by_intersection.len() + self.simple_log.offset()
    }

    /// `I ∪ S ∪ S'` in frozen-kernel ids, with round folds undone.
    pub fn composite(&self, search_solution: &VertexSet) -> VertexSet {
        let working: VertexSet = search_solution
            .iter()
            .map(|v| self.search_to_working[v])
            .collect();
        let mut set = extend_solution(&working, &self.simple_log);
        set.union_with(&self.fixed_by_intersection);
        set
    }

    /// A search solution restricted to frozen-kernel vertices (fold-created
    /// vertices dropped), as recorded for the intersection reduction.
    pub fn to_frozen_ids(&self, search_solution: &VertexSet) -> VertexSet {
        search_solution
            .iter()
            .map(|v| self.search_to_working[v])
            .filter(|&v| v < self.frozen_vertex_count)
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub instance: String,
    pub variant: String,
    pub seed: u64,
    pub cutoff_s: f64,
    pub best_size: usize,
    pub time_to_best_s: f64,
    pub rounds: u64,
    pub restarts: u64,
    pub kernel_vertices: usize,
    pub fixed_by_kernel: usize,
    pub iterations: u64,
    pub proven_optimal: bool,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub solution: VertexSet,
    pub stats: RunStats,
}

/// Greedy clique cover size of `g`: an upper bound on α(g).
pub fn clique_cover_bound(g: &StaticGraph) -> usize {
    let n = g.vertex_count();
    let mut clique_of = vec![usize::MAX; n];
    let mut clique_size: Vec<usize> = Vec::new();
    let mut hits = vec![0usize; 0];
    let mut stamp = vec![usize::MAX; 0];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for (round, &v) in order.iter().enumerate() {
        let mut chosen = None;
        for &u in g.neighbors(v) {
            let c = clique_of[u];
            if c == usize::MAX {
                continue;
            }
            if stamp[c] != round {
                stamp[c] = round;
                hits[c] = 0;
            }
            hits[c] += 1;
            if hits[c] == clique_size[c]
                && chosen.is_none_or(|b: usize| clique_size[c] > clique_size[b])
            {
                chosen = Some(c);
            }
        }
        let c = chosen.unwrap_or_else(|| {
            clique_size.push(0);
            hits.push(0);
            stamp.push(usize::MAX);
            clique_size.len() - 1
        });
        clique_of[v] = c;
        clique_size[c] += 1;
    }
    clique_size.len()
}

/// One run of the framework on a kernelized instance.
pub struct Solver {
    config: RunConfig,
    kernel: KernelResult,
    adaptive: AdaptiveState,
    rir: RirState,
    round: Round,
    state: Option<SolutionState>,
    /// Best search solution of the current round (search-graph ids).
    current: VertexSet,
    improved_since_test: bool,
    global_best: VertexSet,
    upper_bound: usize,
    start: Instant,
    time_to_best: Duration,
    restarts: u64,
    iterations: u64,
    max_iteration_touches: u64,
}

impl Solver {
    pub fn new(graph: Arc<StaticGraph>, config: RunConfig) -> Result<Self> {
        config.validate()?;
        let start = Instant::now();
        let kernel = kernelize(graph, config.variant.kernel_rules());
        let frozen = Arc::clone(&kernel.kernel);
        let round = Round::build(&frozen, &RirState::default(), RuleSet::empty());
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        let state = SolutionState::greedy(Arc::clone(&round.search_graph), rng, config.search);
        let current = state.to_set();
        let global_best = round.composite(&current);
        let upper_bound = clique_cover_bound(&frozen);
        log::info!(
            "kernel: {} vertices, {} edges, {} fixed, {} folds",
            frozen.vertex_count(),
            frozen.edge_count(),
            kernel.fixed_count,
            kernel.fold_count
        );
        Ok(Self {
            adaptive: AdaptiveState::new(config.n, config.m),
            rir: RirState::default(),
            round,
            state: Some(state),
            current,
            improved_since_test: false,
            global_best,
            upper_bound,
            start,
            time_to_best: start.elapsed(),
            restarts: 0,
            iterations: 0,
            max_iteration_touches: 0,
            kernel,
            config,
        })
    }

    pub fn kernel(&self) -> &KernelResult {
        &self.kernel
    }

    pub fn round(&self) -> &Round {
        &self.round
    }

    pub fn adaptive(&self) -> &AdaptiveState {
        &self.adaptive
    }

    pub fn rir(&self) -> &RirState {
        &self.rir
    }

    /// Best round solution (search-graph ids).
    pub fn current(&self) -> &VertexSet {
        &self.current
    }

    /// Best composite found so far (frozen-kernel ids).
    pub fn global_best(&self) -> &VertexSet {
        &self.global_best
    }

    pub fn restarts(&self) -> u64 {
        self.restarts
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn max_iteration_touches(&self) -> u64 {
        self.max_iteration_touches
    }

    /// True once the incumbent meets the clique-cover bound of the kernel.
    pub fn is_proven_optimal(&self) -> bool {
        self.global_best.len() >= self.upper_bound
    }

    fn state(&mut self) -> &mut SolutionState {
        self.state.as_mut().expect("state present between steps")
    }

    fn offer_global(&mut self) {
        let composite = self.round.composite(&self.current);
        debug_assert!(self.kernel.kernel.is_independent(&composite));
        if composite.len() > self.global_best.len() {
            self.global_best = composite;
            self.time_to_best = self.start.elapsed();
        }
    }

    /// One outer iteration: a block of `m` iterations, the adaptive test,
    /// then either a restart or an incumbent update.
    pub fn step(&mut self) -> Decision {
        let m = self.config.m;
        let current = self.current.clone();
        let state = self.state();
        state.reset_to(&current);
        let (block, stats) = state.arw_block(m);
        self.iterations += m;
        self.max_iteration_touches = self.max_iteration_touches.max(stats.max_iteration_touches);
        let improved = block.best_size > self.current.len();
        self.improved_since_test |= improved;

        let mut decision = Decision::Continue;
        if self.config.variant.restarts() && self.adaptive.advance() {
            self.record_current();
            let improved = std::mem::take(&mut self.improved_since_test);
            let draw = if improved {
                1.0
            } else {
                self.state().rng_mut().gen::<f64>()
            };
            decision = self.adaptive.test(improved, draw);
        }
        match decision {
            Decision::Restart => self.restart_round(),
            Decision::Continue => {
                if improved {
                    self.current = block.best_set;
                    self.offer_global();
                }
            }
        }
        decision
    }

    /// Adds the round's best solution to the running intersection.
    pub fn record_current(&mut self) {
        let recorded = self.round.to_frozen_ids(&self.current);
        self.rir.record_solution(&recorded);
    }

    /// Rebuilds the round graph from the frozen kernel using the recorded
    /// intersection, then restarts from a greedy solution.
    pub fn restart_round(&mut self) {
        let frozen = Arc::clone(&self.kernel.kernel);
        self.round = Round::build(&frozen, &self.rir, self.config.variant.round_rules());
        self.rir.clear();
        let rng = self.state.take().expect("state present").into_rng();
        let state = SolutionState::greedy(
            Arc::clone(&self.round.search_graph),
            rng,
            self.config.search,
        );
        self.current = state.to_set();
        self.state = Some(state);
        self.improved_since_test = false;
        self.restarts += 1;
        log::debug!(
            "restart {}: fixed {}, search graph {} vertices",
            self.restarts,
            self.round.fixed_by_intersection.len(),
            self.round.search_graph.vertex_count()
        );
        self.offer_global();
    }

    fn budget_left(&self) -> bool {
        let elapsed = self.start.elapsed().as_secs_f64();
        elapsed < self.config.cutoff_seconds
            && self
                .config
                .max_iterations
                .is_none_or(|cap| self.iterations < cap)
    }

    /// Searches until the budget is spent or the incumbent is provably
    /// optimal, then lifts the incumbent to the input graph.
    pub fn run(mut self, original: &StaticGraph) -> Result<RunOutcome> {
        while self.kernel.kernel.vertex_count() > 0
            && !self.is_proven_optimal()
            && self.budget_left()
        {
            self.step();
        }
        self.finish(original)
    }

    pub fn finish(self, original: &StaticGraph) -> Result<RunOutcome> {
        let proven_optimal = self.is_proven_optimal();
        let mut solution = self.kernel.lift(&self.global_best)?;
        original.make_maximal(&mut solution);
        if !original.is_independent(&solution) {
            return Err(Error::Contract("lifted solution is not independent".into()));
        }
        let stats = RunStats {
            instance: String::new(),
            variant: self.config.variant.name().to_string(),
            seed: self.config.seed,
            cutoff_s: self.config.cutoff_seconds,
            best_size: solution.len(),
            time_to_best_s: self.time_to_best.as_secs_f64(),
            rounds: self.restarts + 1,
            restarts: self.restarts,
            kernel_vertices: self.kernel.kernel.vertex_count(),
            fixed_by_kernel: self.kernel.fixed_count + self.kernel.fold_count,
            iterations: self.iterations,
            proven_optimal,
            verified: true,
        };
        Ok(RunOutcome { solution, stats })
    }
}

/// Kernelizes `graph`, searches under `config`, and returns an independent,
/// maximal solution of `graph`.
pub fn run(graph: &Arc<StaticGraph>, config: &RunConfig) -> Result<RunOutcome> {
    Solver::new(Arc::clone(graph), config.clone())?.run(graph)
}
