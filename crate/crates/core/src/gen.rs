//! Deterministic instance generators for tests, benchmarks, and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{TemporalGraph, TimeLabel, VertexId};
use crate::oracle::BipartiteGraph;

fn numbered_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Small worked example used throughout the tests and the README: an 8
/// vertex graph with three pairwise internally disjoint routes from `s`
/// to `z` that disagree on which optimality criterion they win.
pub fn example_graph() -> TemporalGraph {
    let labels = ["s", "a", "b1", "b2", "b3", "c1", "c2", "z"];
    let id = |name: &str| labels.iter().position(|l| *l == name).unwrap();
    let edges = [
        ("s", "a", 1),
        ("s", "b1", 1),
        ("s", "c1", 3),
        ("b1", "b2", 2),
        ("b2", "b3", 3),
        ("c1", "c2", 4),
        ("b3", "z", 4),
        ("c2", "z", 5),
        ("a", "z", 5),
    ];
    TemporalGraph::from_parts(
        labels.iter().map(|s| s.to_string()).collect(),
        edges.iter().map(|&(u, v, t)| (id(u), id(v), t as TimeLabel)),
        None,
    )
    .expect("example graph is well formed")
}

/// The example graph as edge-list text in `u v t` order.
pub fn example_graph_text() -> String {
    crate::io::serialize_edge_list(&example_graph(), crate::io::EdgeListFormat::Uvt)
}

/// Gilbert-style temporal graph: `n` in `2..=max_n`, lifetime in
/// `1..=max_t`, each (pair, label) slot present independently with a
/// density drawn from `[0.2, 0.5)`. Isolated vertices are kept.
pub fn random_temporal_graph(seed: u64, max_n: usize, max_t: TimeLabel) -> TemporalGraph {
    assert!(max_n >= 2 && max_t >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let t_max = rng.random_range(1..=max_t);
    let density = rng.random_range(0.2..0.5);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            for t in 1..=t_max {
                if rng.random_bool(density) {
                    edges.push((u, v, t));
                }
            }
        }
    }
    TemporalGraph::from_parts(numbered_labels(n), edges, None)
        .expect("generated edges are canonical")
}

/// Uniform temporal graph with exactly `m` distinct time edges (or every
/// possible edge when `m` exceeds the slot count).
pub fn random_graph_edges(seed: u64, n: usize, m: usize, t_max: TimeLabel) -> TemporalGraph {
    assert!(n >= 2 && t_max >= 1);
    let slots = n * (n - 1) / 2 * t_max as usize;
    let m = m.min(slots);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = std::collections::HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u: VertexId = rng.random_range(0..n);
        let v: VertexId = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let t: TimeLabel = rng.random_range(1..=t_max);
        if chosen.insert((u.min(v), u.max(v), t)) {
            edges.push((u, v, t));
        }
    }
    TemporalGraph::from_parts(numbered_labels(n), edges, None)
        .expect("generated edges are canonical")
}

/// Random bipartite graph with side sizes in `1..=max_side` and edge
/// probability 1/2.
pub fn random_bipartite(seed: u64, max_side: usize) -> BipartiteGraph {
    assert!(max_side >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.random_range(1..=max_side);
    let b = rng.random_range(1..=max_side);
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            if rng.random_bool(0.5) {
                edges.push((i, j));
            }
        }
    }
    BipartiteGraph::new(a, b, edges).expect("generated pairs are in range")
}
