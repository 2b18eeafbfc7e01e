//! Small graph families and random generators used by tests and benches.

use rand::Rng;

use crate::graph::StaticGraph;

fn build(n: usize, edges: &[(usize, usize)]) -> StaticGraph {
    StaticGraph::from_edges(edges, Some(n)).expect("hint given")
}

pub fn path(n: usize) -> StaticGraph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    build(n, &edges)
}

pub fn cycle(n: usize) -> StaticGraph {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    if n > 2 {
        edges.push((n - 1, 0));
    }
    build(n, &edges)
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> StaticGraph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    build(leaves + 1, &edges)
}

pub fn complete(n: usize) -> StaticGraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    build(n, &edges)
}

pub fn petersen() -> StaticGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    build(10, &edges)
}

/// Erdős–Rényi G(n, p).
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> StaticGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, &edges)
}

/// Uniform random recursive tree: vertex `v` attaches to a random earlier one.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StaticGraph {
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    build(n, &edges)
}

/// Triangular grid: an `rows × cols` lattice with one diagonal per cell.
pub fn triangular_grid(rows: usize, cols: usize) -> StaticGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
                if c + 1 < cols {
                    edges.push((id(r, c), id(r + 1, c + 1)));
                }
            }
        }
    }
    build(rows * cols, &edges)
}
