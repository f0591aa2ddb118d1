//! Exact expected greedy independent-set size on small graphs.
//!
//! With i.i.d. continuous weights the heaviest remaining node is uniform
//! over the survivors, so the greedy process is: pick a uniformly random
//! node, delete its closed neighborhood, repeat. The expectation therefore
//! satisfies
//!
//! ```text
//! E(S) = 1 + (1/|S|) * sum over i in S of E(S minus N[i])
//! ```
//!
//! with `E(empty) = 0`, solved here by memoized recursion over node-subset
//! bitmasks. This is independent of the greedy implementation under test,
//! which makes it a trustworthy comparison point for Monte Carlo runs.

use std::collections::HashMap;

use anyhow::ensure;
use greedylab::graph::Graph;

/// Hard cap on the subset-DP state space (2^22 masks).
pub const MAX_EXACT_NODES: usize = 22;

/// Exact `E[|greedy independent set|]` under any i.i.d. continuous weights.
pub fn exact_expected_greedy_is(g: &Graph) -> anyhow::Result<f64> {
    let n = g.node_count();
    ensure!(
        n <= MAX_EXACT_NODES,
        "exact oracle handles at most {MAX_EXACT_NODES} nodes, got {n}"
    );
    if n == 0 {
        return Ok(0.0);
    }
    let closed: Vec<u32> = (0..n)
        .map(|i| {
            g.neighbors(i)
                .iter()
                .fold(1u32 << i, |mask, &j| mask | (1 << j))
        })
        .collect();
    let full = (1u32 << n) - 1;
    let mut memo: HashMap<u32, f64> = HashMap::new();
    Ok(expected(full, &closed, &mut memo))
}

/// Exact `E[|greedy independent set|] / n`.
pub fn exact_expected_greedy_is_fraction(g: &Graph) -> anyhow::Result<f64> {
    ensure!(g.node_count() > 0, "fraction undefined on the empty graph");
    Ok(exact_expected_greedy_is(g)? / g.node_count() as f64)
}

fn expected(mask: u32, closed: &[u32], memo: &mut HashMap<u32, f64>) -> f64 {
    if mask == 0 {
        return 0.0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let mut total = 0.0;
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        total += expected(mask & !closed[i], closed, memo);
    }
    let v = 1.0 + total / mask.count_ones() as f64;
    memo.insert(mask, v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use greedylab::graph::named_graph;

    #[test]
    fn cliques_always_yield_one_node() {
        let k4 = named_graph("k4").unwrap();
        assert_eq!(exact_expected_greedy_is(&k4).unwrap(), 1.0);
        let k3 = named_graph("cycle:3").unwrap();
        assert_eq!(exact_expected_greedy_is(&k3).unwrap(), 1.0);
    }

    #[test]
    fn edgeless_graph_keeps_every_node() {
        let g = Graph::from_edges(6, &[]).unwrap();
        assert_eq!(exact_expected_greedy_is(&g).unwrap(), 6.0);
    }

    #[test]
    fn single_edge_keeps_exactly_one() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(exact_expected_greedy_is(&g).unwrap(), 1.0);
    }

    #[test]
    fn path_of_three_averages_the_two_outcomes() {
        // Picking an endpoint first (2/3 of the time) leaves the far
        // endpoint; picking the middle kills everything: 2/3*2 + 1/3*1.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let e = exact_expected_greedy_is(&g).unwrap();
        assert!((e - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn oversized_graphs_are_rejected() {
        let g = named_graph("cycle:30").unwrap();
        assert!(exact_expected_greedy_is(&g).is_err());
    }
}
