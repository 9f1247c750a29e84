#![allow(dead_code)]

use netstrength_core::Graph;
use proptest::prelude::*;

/// Arbitrary simple graph with `min_n..=max_n` nodes.
pub fn graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |mask| {
            let mut edges = Vec::new();
            let mut it = mask.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// Sparse graphs, more likely to have several components.
pub fn sparse_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=n + 2)
            .prop_map(move |edges| Graph::from_edges(n, edges).unwrap())
    })
}

/// Applies `perm` (old id -> new id).
pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.n(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap()
}

/// Node sets reachable from every node by breadth-first search.
pub fn reachability(g: &Graph) -> Vec<Vec<bool>> {
    (0..g.n())
        .map(|s| {
            let mut seen = vec![false; g.n()];
            let mut queue = std::collections::VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                for &v in g.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            seen
        })
        .collect()
}
