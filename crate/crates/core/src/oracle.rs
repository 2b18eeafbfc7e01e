//! Exact maximum independent set for graphs with at most 64 vertices.
//!
//! Branch and bound over `u64` candidate masks. Candidates of degree 0 or 1
//! (within the candidate set) are taken greedily; otherwise the search
//! branches on a maximum-degree candidate. The bound is a greedy clique
//! cover of the candidates: an independent set meets each clique at most
//! once.

use crate::error::{Error, Result};
use crate::graph::{StaticGraph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub alpha: usize,
    pub witness: VertexSet,
}

pub fn exact_mis(g: &StaticGraph) -> Result<OracleResult> {
    let n = g.vertex_count();
    if n > 64 {
        return Err(Error::OracleTooLarge(n));
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search {
        adj: &adj,
        best: 0,
        best_size: 0,
    };
    search.branch(all, 0, 0);
    let witness: VertexSet = bits(search.best).collect();
    debug_assert!(g.is_independent(&witness));
    Ok(OracleResult {
        alpha: search.best_size,
        witness,
    })
}

/// α(G) only.
pub fn independence_number(g: &StaticGraph) -> Result<usize> {
    exact_mis(g).map(|r| r.alpha)
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let v = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(v)
    })
}

struct Search<'a> {
    adj: &'a [u64],
    best: u64,
    best_size: usize,
}

impl Search<'_> {
    fn branch(&mut self, mut cand: u64, mut chosen: u64, mut size: usize) {
        // Take low-degree candidates without branching.
        loop {
            let forced = bits(cand).find(|&v| (self.adj[v] & cand).count_ones() <= 1);
            match forced {
                Some(v) => {
                    chosen |= 1 << v;
                    size += 1;
                    cand &= !(self.adj[v] | (1 << v));
                }
                None => break,
            }
        }
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return;
        }
        if size + cand.count_ones() as usize <= self.best_size
            || size + self.clique_cover(cand) <= self.best_size
        {
            return;
        }
        // Maximum degree within the candidates, lowest id on ties.
        let v = bits(cand)
            .max_by_key(|&v| ((self.adj[v] & cand).count_ones(), std::cmp::Reverse(v)))
            .expect("non-empty candidates");
        self.branch(
            cand & !(self.adj[v] | (1 << v)),
            chosen | (1 << v),
            size + 1,
        );
        self.branch(cand & !(1 << v), chosen, size);
    }

    fn clique_cover(&self, cand: u64) -> usize {
        let mut remaining = cand;
        let mut cliques = 0;
        while remaining != 0 {
            let v = remaining.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            let mut extend = remaining & self.adj[v];
            while extend != 0 {
                let u = extend.trailing_zeros() as usize;
                clique |= 1 << u;
                extend &= self.adj[u];
            }
            remaining &= !clique;
            cliques += 1;
        }
        cliques
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: enumerate every subset.
    fn brute_force_alpha(g: &StaticGraph) -> usize {
        let n = g.vertex_count();
        assert!(n <= 20);
        let adj: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
            .collect();
        (0u32..(1 << n))
            .filter(|&s| (0..n).all(|v| s & (1 << v) == 0 || adj[v] & s == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn small_families() {
        assert_eq!(independence_number(&generate::complete(4)).unwrap(), 1);
        assert_eq!(independence_number(&generate::path(4)).unwrap(), 2);
        assert_eq!(independence_number(&generate::cycle(5)).unwrap(), 2);
        assert_eq!(independence_number(&StaticGraph::empty(6)).unwrap(), 6);
    }

    #[test]
    fn petersen_alpha_four_cross_checked() {
        let g = generate::petersen();
        assert_eq!(brute_force_alpha(&g), 4);
        let r = exact_mis(&g).unwrap();
        assert_eq!(r.alpha, 4);
        assert_eq!(r.witness.len(), 4);
        assert!(g.is_independent(&r.witness));
    }

    #[test]
    fn rejects_large_graphs() {
        assert!(matches!(
            exact_mis(&StaticGraph::empty(65)),
            Err(Error::OracleTooLarge(65))
        ));
        assert_eq!(independence_number(&StaticGraph::empty(64)).unwrap(), 64);
    }

    #[test]
    fn agrees_with_enumeration_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..200 {
            let n = 1 + i % 18;
            let density = [0.1, 0.3, 0.5, 0.8][i % 4];
            let g = generate::gnp(n, density, &mut rng);
            let r = exact_mis(&g).unwrap();
            assert_eq!(r.alpha, brute_force_alpha(&g), "graph {i}");
            assert_eq!(r.witness.len(), r.alpha);
            assert!(g.is_independent(&r.witness));
        }
    }
}
