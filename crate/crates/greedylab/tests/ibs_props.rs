//! Properties of influence blocking sets: minimality among all blocking
//! supersets, independence from the center weight, the two containment
//! routes agreeing, and the increasing-path law behind escape probabilities.

use greedylab::graph::Graph;
use greedylab::ibs::{
    blocking_property_holds, containment_probability, ibs_contained, ibs_contained_direct,
    influence_blocking,
};
use greedylab::weights::{assign_weights, Target, WeightAssignment, WeightDist};

fn lcg(state: &mut u64) -> u64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    *state >> 11
}

/// Pseudo-random simple graph on n nodes with edge probability ~1/2.
fn random_graph(n: usize, seed: u64) -> Graph {
    let mut state = seed.wrapping_mul(2) | 1;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if lcg(&mut state).is_multiple_of(2) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn random_values(count: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_mul(31) | 1;
    (0..count)
        .map(|i| 1.0 + (lcg(&mut state) % 100_000) as f64 / 1000.0 + i as f64 * 1e-7)
        .collect()
}

fn mask_to_inset(mask: u32, count: usize) -> Vec<bool> {
    (0..count).map(|i| mask >> i & 1 == 1).collect()
}

#[test]
fn blocking_set_is_the_minimum_blocking_superset_nodes() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let n = 4 + (seed % 7) as usize;
        let g = random_graph(n, seed);
        let wa = WeightAssignment::from_values(
            Target::Nodes,
            random_values(n, seed),
            WeightDist::uniform(0.0, 200.0).unwrap(),
            seed,
        )
        .unwrap();
        let z_mask = 1 + (lcg(&mut { seed + 17 }) as u32 % ((1 << n) - 1));
        let z: Vec<usize> = (0..n).filter(|&i| z_mask >> i & 1 == 1).collect();
        let result = influence_blocking(&g, &wa, &z).unwrap();
        let s_mask: u32 = result.elements.iter().map(|&i| 1 << i).sum();
        assert_eq!(s_mask & z_mask, z_mask, "result must contain the query");
        assert!(blocking_property_holds(&g, &wa, &mask_to_inset(s_mask, n)));
        // every blocking superset of Z contains the computed set, so it is
        // the unique minimal one
        for mask in 0..(1u32 << n) {
            if mask & z_mask == z_mask && blocking_property_holds(&g, &wa, &mask_to_inset(mask, n))
            {
                assert_eq!(mask & s_mask, s_mask, "seed {seed}: {mask:b} lacks part of {s_mask:b}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 200);
}

#[test]
fn blocking_set_is_the_minimum_blocking_superset_edges() {
    let mut done = 0;
    for seed in 0..60u64 {
        let g = random_graph(7, seed);
        let m = g.edge_count();
        if m == 0 || m > 12 {
            continue;
        }
        let wa = WeightAssignment::from_values(
            Target::Edges,
            random_values(m, seed + 1000),
            WeightDist::uniform(0.0, 200.0).unwrap(),
            seed,
        )
        .unwrap();
        let z = vec![(seed as usize) % m];
        let z_mask = 1u32 << z[0];
        let result = influence_blocking(&g, &wa, &z).unwrap();
        let s_mask: u32 = result.elements.iter().map(|&i| 1 << i).sum();
        assert!(blocking_property_holds(&g, &wa, &mask_to_inset(s_mask, m)));
        for mask in 0..(1u32 << m) {
            if mask & z_mask == z_mask && blocking_property_holds(&g, &wa, &mask_to_inset(mask, m))
            {
                assert_eq!(mask & s_mask, s_mask);
            }
        }
        done += 1;
    }
    assert!(done >= 20, "only {done} edge instances had 1..=12 edges");
}

#[test]
fn containment_ignores_the_center_weight() {
    for seed in 0..100u64 {
        let n = 6 + (seed % 6) as usize;
        let g = random_graph(n, seed + 500);
        let z = (seed as usize) % n;
        let d = 1 + (seed as usize) % 2;
        let wa = assign_weights(&g, Target::Nodes, WeightDist::uniform(0.0, 1.0).unwrap(), seed);
        let baseline = ibs_contained(&g, &wa, z, d);
        for replacement in [1e-7, wa.value(z) * 0.6180339887, 1e7] {
            match wa.with_value(z, replacement) {
                Ok(changed) => {
                    assert_eq!(
                        ibs_contained(&g, &changed, z, d),
                        baseline,
                        "seed {seed}: changing w[{z}] to {replacement} flipped containment"
                    );
                }
                // collision with an existing weight: skip this replacement
                Err(_) => continue,
            }
        }
    }
}

#[test]
fn path_and_direct_routes_agree() {
    for seed in 0..150u64 {
        let n = 5 + (seed % 8) as usize;
        let g = random_graph(n, seed + 90_000);
        let wa = assign_weights(&g, Target::Nodes, WeightDist::exponential(1.0).unwrap(), seed);
        for d in 0..3 {
            for z in 0..n {
                assert_eq!(
                    ibs_contained(&g, &wa, z, d),
                    ibs_contained_direct(&g, &wa, z, d)
                );
            }
        }
        let m = g.edge_count();
        if m > 0 {
            let we = assign_weights(&g, Target::Edges, WeightDist::exponential(1.0).unwrap(), seed);
            for d in 0..3 {
                assert_eq!(
                    ibs_contained(&g, &we, seed as usize % m, d),
                    ibs_contained_direct(&g, &we, seed as usize % m, d)
                );
            }
        }
    }
}

#[test]
fn star_center_is_always_radius_one_contained() {
    let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
    let (p, se) = containment_probability(
        &g,
        Target::Nodes,
        0,
        1,
        WeightDist::uniform(0.0, 1.0).unwrap(),
        2000,
        5,
    )
    .unwrap();
    assert_eq!(p, 1.0);
    assert_eq!(se, 0.0);
}

#[test]
fn isolated_node_is_trivially_contained() {
    let g = Graph::from_edges(1, &[]).unwrap();
    let wa = WeightAssignment::from_values(
        Target::Nodes,
        vec![1.0],
        WeightDist::uniform(0.0, 2.0).unwrap(),
        0,
    )
    .unwrap();
    assert!(ibs_contained(&g, &wa, 0, 0));
}

#[test]
fn edge_containment_on_a_path_is_a_single_comparison() {
    // edges e0=(0,1), e1=(1,2), e2=(2,3): the set spreads from e1 to e2
    // (edge-distance 2 from e0) exactly when w(e1) < w(e2)
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let dist = WeightDist::uniform(0.0, 10.0).unwrap();
    let escapes = WeightAssignment::from_values(Target::Edges, vec![5.0, 1.0, 2.0], dist, 0).unwrap();
    assert!(!ibs_contained(&g, &escapes, 0, 1));
    let contained = WeightAssignment::from_values(Target::Edges, vec![5.0, 2.0, 1.0], dist, 0).unwrap();
    assert!(ibs_contained(&g, &contained, 0, 1));
}

#[test]
fn escape_probability_is_the_increasing_path_law() {
    // on the 6-node path with z at one end and d = 4, the blocking set
    // escapes exactly when the other five weights increase along the path:
    // probability 1/5! = 1/120
    let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
    let trials = 600_000;
    let (p, se) = containment_probability(
        &g,
        Target::Nodes,
        0,
        4,
        WeightDist::uniform(0.0, 1.0).unwrap(),
        trials,
        2024,
    )
    .unwrap();
    let expected = 1.0 - 1.0 / 120.0;
    assert!(
        (p - expected).abs() < 4.0 * se.max(1e-5),
        "containment {p} vs {expected} (se {se})"
    );
}
