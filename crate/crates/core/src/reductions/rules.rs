//! Individual exact reduction rules.
//!
//! Each rule inspects one vertex of a [`WorkingGraph`]; if the rule applies
//! it mutates the graph, appends to the [`ReductionLog`] and returns `true`.

use super::{Record, ReductionLog};
use crate::graph::WorkingGraph;

fn fix(w: &mut WorkingGraph, log: &mut ReductionLog, v: usize) {
    w.delete_closed_neighborhood(v)
        .expect("rules only fix alive vertices");
    log.push(Record::Fixed(v));
}

/// An isolated vertex is in every maximum independent set.
pub fn rule_zero_vertex(w: &mut WorkingGraph, log: &mut ReductionLog, v: usize) -> bool {
    if !w.is_alive(v) || w.live_degree(v) != 0 {
        return false;
    }
    fix(w, log, v);
    true
}

/// A pendant vertex can replace its neighbor in any maximum independent set.
pub fn rule_one_vertex(w: &mut WorkingGraph, log: &mut ReductionLog, v: usize) -> bool {
    if !w.is_alive(v) || w.live_degree(v) != 1 {
        return false;
    }
    fix(w, log, v);
    true
}

/// A degree-2 vertex whose neighbors are adjacent.
pub fn rule_triangle(w: &mut WorkingGraph, log: &mut ReductionLog, u: usize) -> bool {
    let Some((v, x)) = w.two_neighbors(u) else {
        return false;
    };
    w.count_touches(w.raw_degree(u) as u64);
    if !w.has_edge(v, x) {
        return false;
    }
    fix(w, log, u);
    true
}

/// Chordless 4-cycle `v1 u v2 w` with `u` and `w` of degree 2: both go into
/// the solution.
pub fn rule_quadrilateral(w: &mut WorkingGraph, log: &mut ReductionLog, u: usize) -> bool {
    let Some(partner) = quadrilateral_partner(w, u) else {
        return false;
    };
    fix(w, log, u);
    // `partner` lost both neighbors and is now isolated.
    fix(w, log, partner);
    true
}

fn quadrilateral_partner(w: &mut WorkingGraph, u: usize) -> Option<usize> {
    let (v1, v2) = w.two_neighbors(u)?;
    if w.has_edge(v1, v2) {
        return None;
    }
    // Scan the smaller side of N(v1) ∩ N(v2) for another degree-2 vertex.
    let (a, b) = if w.raw_degree(v1) <= w.raw_degree(v2) {
        (v1, v2)
    } else {
        (v2, v1)
    };
    w.count_touches(w.raw_degree(a) as u64);
    w.neighbors(a)
        .find(|&c| c != u && w.live_degree(c) == 2 && w.has_edge(c, b))
}

/// Degree-2 vertex with non-adjacent neighbors `v`, `w`: fold `{u, v, w}` into
/// one vertex. With `restricted`, both neighbors must have degree 2 as well.
pub fn rule_fold2(
    w: &mut WorkingGraph,
    log: &mut ReductionLog,
    u: usize,
    restricted: bool,
) -> bool {
    let Some((a, b)) = w.two_neighbors(u) else {
        return false;
    };
    if restricted && (w.live_degree(a) != 2 || w.live_degree(b) != 2) {
        return false;
    }
    if w.has_edge(a, b) {
        return false;
    }
    let rec = w.fold_degree2(u).expect("fold preconditions checked");
    log.push(Record::Fold(rec));
    true
}

/// `v` is excluded if some neighbor `u` has `N[u] ⊆ N[v]`.
pub fn rule_domination(w: &mut WorkingGraph, log: &mut ReductionLog, v: usize) -> bool {
    if !w.is_alive(v) {
        return false;
    }
    let dv = w.live_degree(v);
    let mut candidates: Vec<(usize, usize)> = w
        .neighbors(v)
        .map(|u| (w.live_degree(u), u))
        .filter(|&(du, _)| du <= dv)
        .collect();
    candidates.sort_unstable();
    let own: Vec<usize> = w.neighbors(v).collect();
    let mut work = w.raw_degree(v) as u64;
    let dominated = candidates.iter().any(|&(_, u)| {
        work += w.raw_degree(u) as u64;
        closed_subset(w.neighbors(u), v, &own)
    });
    w.count_touches(work);
    if !dominated {
        return false;
    }
    w.delete_vertex(v).expect("v is alive");
    log.push(Record::Excluded(v));
    true
}

/// Tests `N(u) \ {v} ⊆ own` where `own = N(v)` sorted; together with the
/// edge `u v` this is `N[u] ⊆ N[v]`.
fn closed_subset(neighbors_u: impl Iterator<Item = usize>, v: usize, own: &[usize]) -> bool {
    let mut j = 0;
    for y in neighbors_u {
        if y == v {
            continue;
        }
        while j < own.len() && own[j] < y {
            j += 1;
        }
        if j == own.len() || own[j] != y {
            return false;
        }
    }
    true
}

/// Non-adjacent degree-3 twins `u`, `v` with an edge inside their common
/// neighborhood: both go into the solution.
pub fn rule_twin_edge(w: &mut WorkingGraph, log: &mut ReductionLog, u: usize) -> bool {
    if !w.is_alive(u) || w.live_degree(u) != 3 {
        return false;
    }
    let nb: Vec<usize> = w.neighbors(u).collect();
    let (a, b, c) = (nb[0], nb[1], nb[2]);
    if !(w.has_edge(a, b) || w.has_edge(a, c) || w.has_edge(b, c)) {
        return false;
    }
    w.count_touches((w.raw_degree(u) + w.raw_degree(a)) as u64);
    let twin = w
        .neighbors(a)
        .find(|&t| t != u && w.live_degree(t) == 3 && w.neighbors(t).eq(nb.iter().copied()));
    let Some(twin) = twin else {
        return false;
    };
    fix(w, log, u);
    fix(w, log, twin);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::StaticGraph;
    use std::sync::Arc;

    fn working(g: StaticGraph) -> WorkingGraph {
        WorkingGraph::new(Arc::new(g))
    }

    fn edges(n: usize, e: &[(usize, usize)]) -> WorkingGraph {
        working(StaticGraph::from_edges(e, Some(n)).unwrap())
    }

    #[test]
    fn zero_vertex() {
        let mut w = edges(3, &[(0, 1)]);
        let mut log = ReductionLog::default();
        assert!(rule_zero_vertex(&mut w, &mut log, 2));
        assert!(!w.is_alive(2));
        assert!(!rule_zero_vertex(&mut w, &mut log, 0));
        assert_eq!(log.records(), &[Record::Fixed(2)]);
    }

    #[test]
    fn one_vertex_p2() {
        let mut w = working(generate::path(2));
        let mut log = ReductionLog::default();
        assert!(rule_one_vertex(&mut w, &mut log, 0));
        assert_eq!(w.alive_count(), 0);
        assert_eq!(log.fixed_count(), 1);
    }

    #[test]
    fn one_vertex_star_leaves_become_isolated() {
        let mut w = working(generate::star(4));
        let mut log = ReductionLog::default();
        assert!(rule_one_vertex(&mut w, &mut log, 1));
        assert_eq!(w.alive_vertices().collect::<Vec<_>>(), vec![2, 3, 4]);
        assert!((2..5).all(|v| w.live_degree(v) == 0));
    }

    #[test]
    fn triangle_k3_and_c4() {
        let mut w = working(generate::complete(3));
        let mut log = ReductionLog::default();
        assert!(rule_triangle(&mut w, &mut log, 0));
        assert_eq!(w.alive_count(), 0);

        let mut w = working(generate::cycle(4));
        assert!(!rule_triangle(&mut w, &mut log, 0));
    }

    #[test]
    fn quadrilateral_c4() {
        let mut w = working(generate::cycle(4));
        let mut log = ReductionLog::default();
        assert!(rule_quadrilateral(&mut w, &mut log, 0));
        assert_eq!(w.alive_count(), 0);
        assert_eq!(log.records(), &[Record::Fixed(0), Record::Fixed(2)]);
    }

    #[test]
    fn quadrilateral_not_on_c5() {
        let mut log = ReductionLog::default();
        let mut w = working(generate::cycle(5));
        for v in 0..5 {
            assert!(!rule_quadrilateral(&mut w, &mut log, v));
        }
        assert!(log.is_empty());
    }

    #[test]
    fn fold_restricted_needs_degree_two_neighbors() {
        // P4: vertex 1 has neighbors 0 (deg 1) and 2 (deg 2).
        let mut w = working(generate::path(4));
        let mut log = ReductionLog::default();
        assert!(!rule_fold2(&mut w, &mut log, 1, true));
        assert!(rule_fold2(&mut w, &mut log, 1, false));
        assert_eq!(log.fold_count(), 1);
    }

    #[test]
    fn domination_k2() {
        let mut w = working(generate::path(2));
        let mut log = ReductionLog::default();
        assert!(rule_domination(&mut w, &mut log, 0));
        assert_eq!(w.alive_vertices().collect::<Vec<_>>(), vec![1]);
        assert_eq!(log.records(), &[Record::Excluded(0)]);
    }

    #[test]
    fn domination_triangle_with_pendant() {
        // Triangle {0,1,2} with pendant 3 on vertex 0.
        let mut w = edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]);
        let mut log = ReductionLog::default();
        assert!(rule_domination(&mut w, &mut log, 0));
        assert!(!w.is_alive(0));
        assert!(!rule_domination(&mut w, &mut log, 3));
    }

    #[test]
    fn domination_not_on_c5() {
        let mut w = working(generate::cycle(5));
        let mut log = ReductionLog::default();
        assert!((0..5).all(|v| !rule_domination(&mut w, &mut log, v)));
    }

    fn twin_gadget(with_edge: bool) -> WorkingGraph {
        // u = 0, v = 1, common neighbors {2, 3, 4}.
        let mut e = vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)];
        if with_edge {
            e.push((2, 3));
        }
        edges(5, &e)
    }

    #[test]
    fn twin_with_edge() {
        let mut w = twin_gadget(true);
        let mut log = ReductionLog::default();
        assert!(rule_twin_edge(&mut w, &mut log, 0));
        assert_eq!(w.alive_count(), 0);
        assert_eq!(log.fixed_count(), 2);
    }

    #[test]
    fn twin_without_edge_is_noop() {
        let mut w = twin_gadget(false);
        let mut log = ReductionLog::default();
        assert!(!rule_twin_edge(&mut w, &mut log, 0));
    }

    #[test]
    fn twin_partial_overlap_is_noop() {
        // 0 ~ {2,3,4}, 1 ~ {2,3,5}, edge 2-3.
        let mut w = edges(6, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 5), (2, 3)]);
        let mut log = ReductionLog::default();
        assert!(!rule_twin_edge(&mut w, &mut log, 0));
        assert!(!rule_twin_edge(&mut w, &mut log, 1));
    }
}
