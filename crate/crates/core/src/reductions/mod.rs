//! Exact reductions: rule tiers, the worklist fixpoint driver, and lifting
//! kernel solutions back through the undo log.

mod rules;

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use bitflags::bitflags;

pub use rules::{
    rule_domination, rule_fold2, rule_one_vertex, rule_quadrilateral, rule_triangle,
    rule_twin_edge, rule_zero_vertex,
};

use crate::error::{Error, Result};
use crate::graph::{FoldRecord, StaticGraph, VertexSet, WorkingGraph};

bitflags! {
    /// Which rules the fixpoint driver may apply.
    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
    pub struct RuleSet: u8 {
        const ZERO = 1 << 0;
        const ONE = 1 << 1;
        const TRIANGLE = 1 << 2;
        const QUADRILATERAL = 1 << 3;
        /// Degree-2 fold requiring both neighbors to have degree 2.
        const FOLD_RESTRICTED = 1 << 4;
        /// Degree-2 fold without neighbor-degree restriction.
        const FOLD = 1 << 5;
        const DOMINATION = 1 << 6;
        const TWIN_EDGE = 1 << 7;

        /// Cheap rules applied inside search rounds.
        const SIMPLE = Self::ZERO.bits() | Self::ONE.bits() | Self::TRIANGLE.bits()
            | Self::QUADRILATERAL.bits() | Self::FOLD_RESTRICTED.bits();
        /// Pendant and folding rules only.
        const LIGHT = Self::ZERO.bits() | Self::ONE.bits() | Self::FOLD.bits();
        /// Everything implemented.
        const ADVANCED = Self::SIMPLE.bits() | Self::FOLD.bits()
            | Self::DOMINATION.bits() | Self::TWIN_EDGE.bits();
    }
}

impl FromStr for RuleSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simple" => Ok(RuleSet::SIMPLE),
            "light" => Ok(RuleSet::LIGHT),
            "advanced" => Ok(RuleSet::ADVANCED),
            "none" => Ok(RuleSet::empty()),
            other => Err(format!("unknown rule set `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Record {
    /// Vertex put into the solution; its alive closed neighborhood was deleted.
    Fixed(usize),
    /// Vertex deleted because some maximum independent set avoids it.
    Excluded(usize),
    Fold(FoldRecord),
}

/// Ordered undo log of applied reductions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionLog {
    records: Vec<Record>,
}

impl ReductionLog {
    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn fixed_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r, Record::Fixed(_)))
            .count()
    }

    pub fn fold_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r, Record::Fold(_)))
            .count()
    }

    /// Exact offset between α of the reduced graph and α of the original.
    pub fn offset(&self) -> usize {
        self.fixed_count() + self.fold_count()
    }

    /// Line-oriented form: `F v`, `X v` or `D x u v w` per record.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = match r {
                Record::Fixed(v) => writeln!(out, "F {v}"),
                Record::Excluded(v) => writeln!(out, "X {v}"),
                Record::Fold(f) => writeln!(
                    out,
                    "D {} {} {} {}",
                    f.new_vertex, f.folded, f.merged.0, f.merged.1
                ),
            };
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut log = ReductionLog::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let tag = tokens.next().unwrap_or_default();
            let ids = tokens
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            let record = match (tag, ids.as_slice()) {
                ("F", &[v]) => Record::Fixed(v),
                ("X", &[v]) => Record::Excluded(v),
                ("D", &[x, u, v, w]) => Record::Fold(FoldRecord {
                    new_vertex: x,
                    folded: u,
                    merged: (v, w),
                }),
                _ => return Err(Error::parse(i + 1, format!("bad record `{line}`"))),
            };
            log.push(record);
        }
        Ok(log)
    }

    /// Re-applies the log to a fresh working copy of `base`.
    pub fn replay(&self, base: Arc<StaticGraph>) -> Result<WorkingGraph> {
        let mut w = WorkingGraph::new(base);
        for r in &self.records {
            match *r {
                Record::Fixed(v) => {
                    w.delete_closed_neighborhood(v)?;
                }
                Record::Excluded(v) => w.delete_vertex(v)?,
                Record::Fold(f) => {
                    let got = w.fold_degree2(f.folded)?;
                    if got != f {
                        return Err(Error::Contract(format!(
                            "fold replay mismatch: logged {f:?}, got {got:?}"
                        )));
                    }
                }
            }
        }
        Ok(w)
    }
}

/// Lifts a solution of the reduced graph (in working-graph ids) to the graph
/// the log was recorded on by undoing records in reverse.
pub fn extend_solution(reduced_solution: &VertexSet, log: &ReductionLog) -> VertexSet {
    let mut set = reduced_solution.clone();
    for r in log.records().iter().rev() {
        match *r {
            Record::Fixed(v) => {
                set.insert(v);
            }
            Record::Excluded(_) => {}
            Record::Fold(f) => {
                if set.remove(f.new_vertex) {
                    set.insert(f.merged.0);
                    set.insert(f.merged.1);
                } else {
                    set.insert(f.folded);
                }
            }
        }
    }
    set
}

/// Counters from one fixpoint run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FixpointStats {
    /// Rule evaluations on alive vertices.
    pub checks: u64,
    pub applications: u64,
}

#[derive(Clone, Debug, Default)]
pub struct FixpointOutcome {
    /// Vertices fixed into the solution (working-graph ids).
    pub fixed: VertexSet,
    pub log: ReductionLog,
    pub stats: FixpointStats,
}

/// Applies rules from `rules` until none applies to any alive vertex.
///
/// The worklist is a FIFO seeded with every alive vertex in ascending id.
/// After an application the vertices whose adjacency changed are re-queued;
/// rules that look at neighbor degrees or neighborhoods also re-queue the
/// neighbors of changed vertices.
pub fn run_to_fixpoint(w: &mut WorkingGraph, rules: RuleSet) -> FixpointOutcome {
    let mut out = FixpointOutcome::default();
    if rules.is_empty() {
        return out;
    }
    w.set_change_tracking(true);
    let mut queue: VecDeque<usize> = w.alive_vertices().collect();
    let mut queued = vec![false; w.capacity()];
    for &v in &queue {
        queued[v] = true;
    }
    let expand_all = rules.contains(RuleSet::DOMINATION);
    let expand_low = rules.contains(RuleSet::FOLD_RESTRICTED);

    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        if !w.is_alive(v) {
            continue;
        }
        if !apply_first(w, &mut out, rules, v) {
            continue;
        }
        out.stats.applications += 1;
        queued.resize(w.capacity(), false);
        for y in w.take_touched() {
            if !w.is_alive(y) {
                continue;
            }
            if !queued[y] {
                queued[y] = true;
                queue.push_back(y);
            }
            if expand_all || (expand_low && w.live_degree(y) <= 2) {
                let nb: Vec<usize> = w.neighbors(y).collect();
                for z in nb {
                    if !queued[z] {
                        queued[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
    }
    w.set_change_tracking(false);
    for r in out.log.records() {
        if let Record::Fixed(v) = r {
            out.fixed.insert(*v);
        }
    }
    out
}

fn apply_first(w: &mut WorkingGraph, out: &mut FixpointOutcome, rules: RuleSet, v: usize) -> bool {
    let log = &mut out.log;
    let stats = &mut out.stats;
    let mut check =
        |enabled: RuleSet, f: &mut dyn FnMut(&mut WorkingGraph, &mut ReductionLog) -> bool| {
            if rules.intersects(enabled) && w.is_alive(v) {
                stats.checks += 1;
                f(w, log)
            } else {
                false
            }
        };
    check(RuleSet::ZERO, &mut |w, l| rule_zero_vertex(w, l, v))
        || check(RuleSet::ONE, &mut |w, l| rule_one_vertex(w, l, v))
        || check(RuleSet::TRIANGLE, &mut |w, l| rule_triangle(w, l, v))
        || check(RuleSet::QUADRILATERAL, &mut |w, l| {
            rule_quadrilateral(w, l, v)
        })
        || check(RuleSet::FOLD | RuleSet::FOLD_RESTRICTED, &mut |w, l| {
            rule_fold2(w, l, v, !rules.contains(RuleSet::FOLD))
        })
        || check(RuleSet::DOMINATION, &mut |w, l| rule_domination(w, l, v))
        || check(RuleSet::TWIN_EDGE, &mut |w, l| rule_twin_edge(w, l, v))
}

/// A kernel together with what is needed to lift its solutions.
#[derive(Clone, Debug)]
pub struct KernelResult {
    pub kernel: Arc<StaticGraph>,
    /// Kernel vertex id to working-graph id.
    pub kernel_to_working: Vec<usize>,
    pub log: ReductionLog,
    pub original_vertex_count: usize,
    pub fixed_count: usize,
    pub fold_count: usize,
    pub stats: FixpointStats,
}

impl KernelResult {
    /// Lifts an independent set of the kernel (kernel ids) to the original
    /// graph.
    pub fn lift(&self, kernel_solution: &VertexSet) -> Result<VertexSet> {
        if !self.kernel.is_independent(kernel_solution) {
            return Err(Error::Contract(
                "kernel solution is not independent in the kernel".into(),
            ));
        }
        let working: VertexSet = kernel_solution
            .iter()
            .map(|v| self.kernel_to_working[v])
            .collect();
        Ok(extend_solution(&working, &self.log))
    }
}

/// Reduces `g` to a fixpoint under `rules` and freezes the remainder.
pub fn kernelize(g: Arc<StaticGraph>, rules: RuleSet) -> KernelResult {
    let original_vertex_count = g.vertex_count();
    let mut w = WorkingGraph::new(g);
    let outcome = run_to_fixpoint(&mut w, rules);
    let (kernel, kernel_to_working) = w.freeze();
    KernelResult {
        kernel: Arc::new(kernel),
        kernel_to_working,
        fixed_count: outcome.log.fixed_count(),
        fold_count: outcome.log.fold_count(),
        log: outcome.log,
        original_vertex_count,
        stats: outcome.stats,
    }
}
