//! Cross-checks between the exact subset-DP oracle and the Monte Carlo
//! engine on small named graphs, plus frozen values obtained from an
//! independent exact-rational evaluation of the same recursion.

use greedylab::weights::WeightDist;
use greedylab::graph::named_graph;
use greedylab::greedy::{monte_carlo, Mode};
use lab::oracle::{exact_expected_greedy_is, exact_expected_greedy_is_fraction};

#[test]
fn petersen_expectation_is_eleven_thirds() {
    let g = named_graph("petersen").unwrap();
    let e = exact_expected_greedy_is(&g).unwrap();
    assert!((e - 11.0 / 3.0).abs() < 1e-12, "got {e}");
}

#[test]
fn cycle_20_matches_exact_rational_evaluation() {
    let g = named_graph("cycle:20").unwrap();
    let frac = exact_expected_greedy_is_fraction(&g).unwrap();
    assert!((frac - 0.4323323583817825).abs() < 1e-12, "got {frac}");
}

#[test]
fn heawood_expectation_is_frozen() {
    // 577/105 selected nodes on average over the 14-node graph.
    let g = named_graph("heawood").unwrap();
    let frac = exact_expected_greedy_is_fraction(&g).unwrap();
    assert!((frac - 577.0 / 1470.0).abs() < 1e-12, "got {frac}");
}

#[test]
fn cycle_fraction_approaches_the_closed_form_limit() {
    // On the n-cycle the expected selected fraction tends to (1 - e^{-2})/2,
    // and cycle:20 already sits within 1e-10 of it. A Monte Carlo run on a
    // 1000-cycle should land within sampling error of the same value.
    let limit = 0.5 * (1.0 - (-2.0f64).exp());
    let g20 = named_graph("cycle:20").unwrap();
    let f20 = exact_expected_greedy_is_fraction(&g20).unwrap();
    assert!((f20 - limit).abs() < 1e-10, "cycle:20 gave {f20} vs {limit}");

    let g = named_graph("cycle:1000").unwrap();
    let dist = WeightDist::uniform(0.0, 1.0).unwrap();
    let stats = monte_carlo(&g, Mode::IndependentSet, dist, 50_000, 20_240_817).unwrap();
    let z = (stats.mean_size_frac - limit) / stats.se_size_frac;
    assert!(
        z.abs() <= 4.0,
        "z = {z}, mean = {}, se = {}",
        stats.mean_size_frac,
        stats.se_size_frac
    );
}

#[test]
fn petersen_monte_carlo_agrees_with_the_oracle() {
    let g = named_graph("petersen").unwrap();
    let exact = exact_expected_greedy_is_fraction(&g).unwrap();
    let dist = WeightDist::uniform(0.0, 1.0).unwrap();
    let stats = monte_carlo(&g, Mode::IndependentSet, dist, 200_000, 7).unwrap();
    let z = (stats.mean_size_frac - exact) / stats.se_size_frac;
    assert!(z.abs() <= 4.0, "z = {z}");
}

#[test]
fn weight_distribution_does_not_change_the_size_law() {
    // Any i.i.d. continuous weights induce a uniformly random pick order,
    // so the selected-set size has the same law under exponential weights
    // as under uniform ones, and the oracle applies to both.
    let g = named_graph("petersen").unwrap();
    let exact = exact_expected_greedy_is_fraction(&g).unwrap();
    let dist = WeightDist::exponential(1.0).unwrap();
    let stats = monte_carlo(&g, Mode::IndependentSet, dist, 200_000, 99).unwrap();
    let z = (stats.mean_size_frac - exact) / stats.se_size_frac;
    assert!(z.abs() <= 4.0, "z = {z}");
}
