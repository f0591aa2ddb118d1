//! Behavioral checks of the greedy selections: hand-worked examples,
//! maximality properties, order invariance, and Monte Carlo determinism.

use greedylab::graph::{named_graph, Graph};
use greedylab::greedy::{
    greedy_independent_set, greedy_matching, is_independent_set, is_matching,
    is_maximal_independent_set, is_maximal_matching, monte_carlo, run_trial, Mode,
};
use greedylab::weights::{Target, WeightAssignment, WeightDist};
use proptest::prelude::*;

fn node_weights(values: Vec<f64>) -> WeightAssignment {
    WeightAssignment::from_values(
        Target::Nodes,
        values,
        WeightDist::uniform(0.0, 100.0).unwrap(),
        0,
    )
    .unwrap()
}

fn edge_weights(values: Vec<f64>) -> WeightAssignment {
    WeightAssignment::from_values(
        Target::Edges,
        values,
        WeightDist::uniform(0.0, 100.0).unwrap(),
        0,
    )
    .unwrap()
}

#[test]
fn path_center_wins() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let res = greedy_independent_set(&g, &node_weights(vec![1.0, 3.0, 2.0])).unwrap();
    assert_eq!(res.selected, vec![1]);
    assert_eq!(res.cardinality, 1);
    assert_eq!(res.total_weight, 3.0);
    // flipping the order of the outer weights leaves the center on top
    let res = greedy_independent_set(&g, &node_weights(vec![2.0, 3.0, 1.0])).unwrap();
    assert_eq!(res.selected, vec![1]);
}

#[test]
fn edgeless_graph_selects_everything() {
    let g = Graph::from_edges(5, &[]).unwrap();
    let res = greedy_independent_set(&g, &node_weights(vec![1.0, 2.0, 3.0, 4.0, 5.0])).unwrap();
    assert_eq!(res.selected, vec![0, 1, 2, 3, 4]);
    assert_eq!(res.total_weight, 15.0);
    let res = greedy_matching(&g, &edge_weights(vec![])).unwrap();
    assert!(res.selected.is_empty());
}

#[test]
fn star_matches_exactly_one_edge() {
    let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
    let res = greedy_matching(&g, &edge_weights(vec![5.0, 9.0, 1.0, 7.0, 3.0])).unwrap();
    assert_eq!(res.selected.len(), 1);
    assert_eq!(res.total_weight, 9.0);
}

#[test]
fn selection_depends_only_on_weight_order() {
    let g = named_graph("petersen").unwrap();
    for seed in 0..20 {
        let a = run_trial(&g, Mode::IndependentSet, WeightDist::uniform(0.0, 1.0).unwrap(), seed);
        // any strictly monotone reweighting preserves the comparisons
        let wa = greedylab::weights::assign_weights(
            &g,
            Target::Nodes,
            WeightDist::uniform(0.0, 1.0).unwrap(),
            seed,
        );
        let squashed = node_weights(wa.values().iter().map(|&w| w / 2.0 + 3.0).collect());
        let b = greedy_independent_set(&g, &squashed).unwrap();
        assert_eq!(a.selected, b.selected, "seed {seed}");
    }
}

#[test]
fn single_edge_matching_weight_distribution() {
    let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
    let trials = 40_000;
    let stats = monte_carlo(&g, Mode::Matching, WeightDist::exponential(1.0).unwrap(), trials, 1)
        .unwrap();
    // the single edge is always taken
    assert_eq!(stats.mean_size_frac, 1.0);
    assert_eq!(stats.var_size_frac, 0.0);
    // its weight is exp(1), spread over the two nodes
    let tol = 4.0 * stats.se_weight_per_node;
    assert!(
        (stats.mean_weight_per_node - 0.5).abs() < tol,
        "mean weight per node {} (tol {tol})",
        stats.mean_weight_per_node
    );
}

#[test]
fn monte_carlo_is_deterministic() {
    let g = named_graph("heawood").unwrap();
    let dist = WeightDist::exponential(1.0).unwrap();
    let a = monte_carlo(&g, Mode::Matching, dist, 3000, 42).unwrap();
    let b = monte_carlo(&g, Mode::Matching, dist, 3000, 42).unwrap();
    assert_eq!(a, b);
    let c = monte_carlo(&g, Mode::Matching, dist, 3000, 43).unwrap();
    assert_ne!(a.mean_size_frac, c.mean_size_frac);
    assert!(monte_carlo(&g, Mode::Matching, dist, 0, 1).is_err());
}

#[test]
fn mode_parsing() {
    assert_eq!(Mode::parse("is").unwrap(), Mode::IndependentSet);
    assert_eq!(Mode::parse("m").unwrap(), Mode::Matching);
    assert!(Mode::parse("matching").is_err());
}

fn arbitrary_graph_and_weights() -> impl Strategy<Value = (Graph, Vec<f64>, Vec<f64>)> {
    (2usize..10, any::<u32>()).prop_map(|(n, salt)| {
        // derive a pseudo-random simple graph from the salt
        let mut edges = Vec::new();
        let mut state = salt as u64 | 1;
        for u in 0..n {
            for v in (u + 1)..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 62 != 0 {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        let nw: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 + (salt % 97) as f64 / 101.0).collect();
        let mut ew: Vec<f64> = (0..g.edge_count()).map(|i| 2.0 + 1.37 * i as f64).collect();
        // shuffle edge weights deterministically so the order is nontrivial
        for i in (1..ew.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ew.swap(i, (state % (i as u64 + 1)) as usize);
        }
        (g, nw, ew)
    })
}

proptest! {
    #[test]
    fn greedy_outputs_are_maximal((g, nw, ew) in arbitrary_graph_and_weights()) {
        let res = greedy_independent_set(&g, &node_weights(nw)).unwrap();
        prop_assert!(is_independent_set(&g, &res.selected));
        prop_assert!(is_maximal_independent_set(&g, &res.selected));
        prop_assert_eq!(res.cardinality, res.selected.len());

        let res = greedy_matching(&g, &edge_weights(ew)).unwrap();
        prop_assert!(is_matching(&g, &res.selected));
        prop_assert!(is_maximal_matching(&g, &res.selected));
    }
}
