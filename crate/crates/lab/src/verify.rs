//! Runtime property suites behind `lab verify`. Each check re-derives a
//! claim the library depends on: blocking-set structure and locality,
//! bonus-recursion equivalence with the greedy engine, and convergence of
//! the integer recursions to their closed-form limits.

use anyhow::{anyhow, bail, ensure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use greedylab::bonus::{compute_bonus, edge_selection_test, matched_root_edge, root_in_greedy_is};
use greedylab::dist::{
    default_truncation, limiting_pgf_x, limiting_pgf_y, x_pmf, x_pmf_chain, y_pmf, y_pmf_chain,
};
use greedylab::graph::{build_tree, generate_random_regular, Graph, TreeSpec};
use greedylab::greedy::{greedy_independent_set, greedy_matching};
use greedylab::ibs::{
    blocking_property_holds, containment_probability, ibs_contained, ibs_contained_direct,
    influence_blocking,
};
use greedylab::weights::{
    assign_weights, derive_seed, Target, WeightAssignment, WeightDist,
};

use crate::commands::convergence_budget;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn run_check(
    suite: &'static str,
    name: &'static str,
    body: impl FnOnce() -> anyhow::Result<(bool, String)>,
) -> Check {
    let (passed, detail) = match body() {
        Ok((passed, detail)) => (passed, detail),
        Err(e) => (false, format!("error: {e:#}")),
    };
    Check {
        suite,
        name,
        passed,
        detail,
    }
}

fn uniform01() -> WeightDist {
    WeightDist::uniform(0.0, 1.0).expect("unit interval is a valid range")
}

// An Erdos-Renyi-style instance with a density regime picked at random, so
// the suites see sparse, moderate, and fairly dense neighborhoods.
fn random_graph(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize) -> Graph {
    let n = rng.random_range(n_min..=n_max);
    let p = match rng.random_range(0..3u8) {
        0 => 1.5 / n as f64,
        1 => 3.0 / n as f64,
        _ => 0.35,
    };
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generated pairs are valid edges")
}

fn random_subset(rng: &mut ChaCha8Rng, universe: usize, max_len: usize) -> Vec<usize> {
    let len = rng.random_range(1..=max_len.min(universe));
    rand::seq::index::sample(rng, universe, len).into_vec()
}

fn subset_weights(
    target: Target,
    wa: &WeightAssignment,
    old_ids: &[usize],
) -> anyhow::Result<WeightAssignment> {
    let values: Vec<f64> = old_ids.iter().map(|&id| wa.value(id)).collect();
    Ok(WeightAssignment::from_values(target, values, wa.dist, wa.seed)?)
}

fn contains_sorted(sorted: &[usize], id: usize) -> bool {
    sorted.binary_search(&id).is_ok()
}

// ---------------------------------------------------------------------------
// influence blocking sets
// ---------------------------------------------------------------------------

/// Greedy restricted to an influence blocking set equals greedy on the whole
/// graph intersected with that set, exactly, for nodes and for edges.
pub fn locality_check(instances: usize) -> Check {
    run_check("ibs", "locality_identity", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6c6f63);
        let dist = uniform01();
        let mut node_cases = 0usize;
        let mut edge_cases = 0usize;
        for i in 0..instances {
            let g = random_graph(&mut rng, 2, 60);

            let wa = assign_weights(&g, Target::Nodes, dist, rng.random());
            let z = random_subset(&mut rng, g.node_count(), 3);
            let ib = influence_blocking(&g, &wa, &z)?;
            let sub = g.induced_node_subgraph(&ib.elements);
            let sub_wa = subset_weights(Target::Nodes, &wa, &sub.node_ids)?;
            let full = greedy_independent_set(&g, &wa)?;
            let local = greedy_independent_set(&sub.graph, &sub_wa)?;
            let mapped: Vec<usize> = local.selected.iter().map(|&v| sub.node_ids[v]).collect();
            let restricted: Vec<usize> = full
                .selected
                .iter()
                .copied()
                .filter(|&v| contains_sorted(&ib.elements, v))
                .collect();
            ensure!(
                mapped == restricted,
                "node locality broken on instance {i}: {mapped:?} vs {restricted:?}"
            );
            node_cases += 1;

            if g.edge_count() == 0 {
                continue;
            }
            let wa_e = assign_weights(&g, Target::Edges, dist, rng.random());
            let z_e = random_subset(&mut rng, g.edge_count(), 3);
            let ib_e = influence_blocking(&g, &wa_e, &z_e)?;
            let sub_e = g.edge_subgraph(&ib_e.elements);
            let sub_wa_e = subset_weights(Target::Edges, &wa_e, &sub_e.edge_ids)?;
            let full_m = greedy_matching(&g, &wa_e)?;
            let local_m = greedy_matching(&sub_e.graph, &sub_wa_e)?;
            let mapped: Vec<usize> = local_m.selected.iter().map(|&e| sub_e.edge_ids[e]).collect();
            let restricted: Vec<usize> = full_m
                .selected
                .iter()
                .copied()
                .filter(|&e| contains_sorted(&ib_e.elements, e))
                .collect();
            ensure!(
                mapped == restricted,
                "edge locality broken on instance {i}: {mapped:?} vs {restricted:?}"
            );
            edge_cases += 1;
        }
        Ok((
            true,
            format!("{node_cases} node and {edge_cases} edge instances, exact equality"),
        ))
    })
}

// Every blocking superset of Z must contain the computed set, and the
// computed set must itself block: that pins it as the unique minimal one.
fn check_minimal_against_brute_force(
    g: &Graph,
    wa: &WeightAssignment,
    z: &[usize],
    universe: usize,
) -> anyhow::Result<()> {
    let ib = influence_blocking(g, wa, z)?;
    let to_mask = |ids: &[usize]| ids.iter().fold(0u32, |m, &i| m | (1 << i));
    let z_mask = to_mask(z);
    let ib_mask = to_mask(&ib.elements);
    let mut inset = vec![false; universe];
    let mut seen_blocking = 0usize;
    for mask in 0..(1u32 << universe) {
        if mask & z_mask != z_mask {
            continue;
        }
        for (i, slot) in inset.iter_mut().enumerate() {
            *slot = mask & (1 << i) != 0;
        }
        if !blocking_property_holds(g, wa, &inset) {
            continue;
        }
        seen_blocking += 1;
        ensure!(
            mask & ib_mask == ib_mask,
            "blocking superset {mask:#b} misses part of the computed set {ib_mask:#b}"
        );
    }
    ensure!(seen_blocking > 0, "whole universe should always block");
    for (i, slot) in inset.iter_mut().enumerate() {
        *slot = ib_mask & (1 << i) != 0;
    }
    ensure!(
        blocking_property_holds(g, wa, &inset),
        "computed set is not blocking"
    );
    Ok(())
}

/// The increasing-path closure is contained in every blocking superset and
/// blocks itself, verified against full enumeration on small instances.
pub fn minimal_blocking_check() -> Check {
    run_check("ibs", "minimal_blocking_superset", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d696e);
        let dist = uniform01();
        let mut node_cases = 0usize;
        while node_cases < 200 {
            let g = random_graph(&mut rng, 4, 10);
            let wa = assign_weights(&g, Target::Nodes, dist, rng.random());
            let z = random_subset(&mut rng, g.node_count(), 2);
            check_minimal_against_brute_force(&g, &wa, &z, g.node_count())?;
            node_cases += 1;
        }
        let mut edge_cases = 0usize;
        while edge_cases < 25 {
            let g = random_graph(&mut rng, 5, 7);
            if g.edge_count() == 0 || g.edge_count() > 12 {
                continue;
            }
            let wa = assign_weights(&g, Target::Edges, dist, rng.random());
            let z = random_subset(&mut rng, g.edge_count(), 2);
            check_minimal_against_brute_force(&g, &wa, &z, g.edge_count())?;
            edge_cases += 1;
        }
        Ok((
            true,
            format!("{node_cases} node and {edge_cases} edge instances vs exhaustive search"),
        ))
    })
}

/// The radius-containment indicator never reads the center's own weight.
pub fn independence_check() -> Check {
    run_check("ibs", "indicator_ignores_center_weight", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x696e64);
        let dist = uniform01();
        let mut cases = 0usize;
        for graph_idx in 0..5u64 {
            let g = generate_random_regular(30, 3, 3, derive_seed(7, graph_idx), 10_000)?;
            for _ in 0..5 {
                let wa = assign_weights(&g, Target::Nodes, dist, rng.random());
                let z = rng.random_range(0..g.node_count());
                for d in 0..=3 {
                    let base = ibs_contained(&g, &wa, z, d);
                    for fresh in [1e-7, 0.618 * wa.value(z), 1e7] {
                        let Ok(replaced) = wa.with_value(z, fresh) else {
                            continue;
                        };
                        ensure!(
                            ibs_contained(&g, &replaced, z, d) == base,
                            "containment at z={z}, d={d} changed when its weight became {fresh}"
                        );
                        cases += 1;
                    }
                }
            }
            let wa_e = assign_weights(&g, Target::Edges, dist, rng.random());
            let z = rng.random_range(0..g.edge_count());
            for d in 0..=2 {
                let base = ibs_contained(&g, &wa_e, z, d);
                for fresh in [1e-7, 0.618 * wa_e.value(z), 1e7] {
                    let Ok(replaced) = wa_e.with_value(z, fresh) else {
                        continue;
                    };
                    ensure!(
                        ibs_contained(&g, &replaced, z, d) == base,
                        "edge containment at z={z}, d={d} changed under weight {fresh}"
                    );
                    cases += 1;
                }
            }
        }
        Ok((true, format!("{cases} weight replacements left the indicator unchanged")))
    })
}

/// A fixed path of k+1 nodes carries increasing weights with probability
/// 1/(k+1)!.
pub fn increasing_path_check() -> Check {
    run_check("ibs", "increasing_path_frequency", || {
        let trials: u64 = 1_000_000;
        let mut detail = String::new();
        for k in [2usize, 3] {
            let nodes = k + 1;
            let mut rng = ChaCha8Rng::seed_from_u64(0x706174 + k as u64);
            let mut hits = 0u64;
            let mut draws = vec![0.0f64; nodes];
            for _ in 0..trials {
                for slot in draws.iter_mut() {
                    *slot = rng.random();
                }
                if draws.windows(2).all(|w| w[0] < w[1]) {
                    hits += 1;
                }
            }
            let p = hits as f64 / trials as f64;
            let expected = 1.0 / (2..=nodes as u64).product::<u64>() as f64;
            let se = (expected * (1.0 - expected) / trials as f64).sqrt();
            ensure!(
                (p - expected).abs() <= 4.0 * se,
                "path of {nodes} nodes: frequency {p} vs 1/{nodes}! = {expected} (se {se:.2e})"
            );
            detail.push_str(&format!("k={k}: {p:.6} vs {expected:.6}; "));
        }
        detail.push_str(&format!("{trials} trials each, within 4 s.e."));
        Ok((true, detail))
    })
}

/// Containment outcomes for a given d on random cubic graphs, pooled over
/// several graphs, sit above the factorial tail bound.
pub fn containment_tail_check() -> Check {
    run_check("ibs", "containment_tail_bound", || {
        let dist = uniform01();
        let graphs: Vec<Graph> = (0..5u64)
            .map(|i| generate_random_regular(200, 3, 3, derive_seed(99, i), 10_000))
            .collect::<Result<_, _>>()?;
        let trials_per_graph: u64 = 10_000;
        let total = (trials_per_graph * graphs.len() as u64) as f64;
        let mut detail = String::new();
        let mut all_ok = true;
        for d in [2usize, 3, 4] {
            let mut pooled = 0.0;
            for (gi, g) in graphs.iter().enumerate() {
                let (p, _) = containment_probability(
                    g,
                    Target::Nodes,
                    0,
                    d,
                    dist,
                    trials_per_graph,
                    derive_seed(1234, (10 * d + gi) as u64),
                )?;
                pooled += p * trials_per_graph as f64;
            }
            let p = pooled / total;
            let se = (p * (1.0 - p) / total).sqrt();
            // 1 - r(r-1)^d/(d+1)! with r = 3; vacuous below d = 4.
            let bound = 1.0 - 3.0 * 2f64.powi(d as i32) / factorial(d + 1);
            let ok = p >= bound - 4.0 * se;
            all_ok &= ok;
            detail.push_str(&format!("node d={d}: {p:.4} >= {bound:.4}-4se; "));
        }
        // Edge version at d = 4: 1 - 2(r-1)^(d+1)/(d+1)!.
        let d = 4usize;
        let mut pooled = 0.0;
        for (gi, g) in graphs.iter().enumerate() {
            let (p, _) = containment_probability(
                g,
                Target::Edges,
                0,
                d,
                dist,
                trials_per_graph,
                derive_seed(4321, gi as u64),
            )?;
            pooled += p * trials_per_graph as f64;
        }
        let p = pooled / total;
        let se = (p * (1.0 - p) / total).sqrt();
        let bound = 1.0 - 2.0 * 2f64.powi(d as i32 + 1) / factorial(d + 1);
        let ok = p >= bound - 4.0 * se;
        all_ok &= ok;
        detail.push_str(&format!("edge d={d}: {p:.4} >= {bound:.4}-4se"));
        Ok((all_ok, detail))
    })
}

/// The cheap increasing-path containment test agrees with rebuilding the
/// blocking set and checking it directly.
pub fn direct_agreement_check() -> Check {
    run_check("ibs", "path_test_matches_direct_test", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x646972);
        let dist = uniform01();
        let mut cases = 0usize;
        for _ in 0..150 {
            let g = random_graph(&mut rng, 2, 12);
            let wa = assign_weights(&g, Target::Nodes, dist, rng.random());
            for z in 0..g.node_count() {
                for d in 0..=3 {
                    ensure!(
                        ibs_contained(&g, &wa, z, d) == ibs_contained_direct(&g, &wa, z, d),
                        "node tests disagree at z={z}, d={d}"
                    );
                    cases += 1;
                }
            }
            if g.edge_count() == 0 {
                continue;
            }
            let wa_e = assign_weights(&g, Target::Edges, dist, rng.random());
            for z in 0..g.edge_count() {
                for d in 0..=2 {
                    ensure!(
                        ibs_contained(&g, &wa_e, z, d) == ibs_contained_direct(&g, &wa_e, z, d),
                        "edge tests disagree at z={z}, d={d}"
                    );
                    cases += 1;
                }
            }
        }
        Ok((true, format!("{cases} queries, both characterizations agree")))
    })
}

pub fn ibs_suite() -> Vec<Check> {
    vec![
        locality_check(500),
        minimal_blocking_check(),
        independence_check(),
        increasing_path_check(),
        containment_tail_check(),
        direct_agreement_check(),
    ]
}

// ---------------------------------------------------------------------------
// bonus recursion
// ---------------------------------------------------------------------------

// Tree shapes up to 341 nodes: all-equal branching and the variant whose
// root has one extra child.
fn bonus_shapes() -> Vec<TreeSpec> {
    let mut shapes = Vec::new();
    for r in 2..=4 {
        for d in 0..=4 {
            shapes.push(TreeSpec::uniform(r, d));
        }
    }
    for d in 1..=4 {
        shapes.push(TreeSpec::root_plus_one(2, d));
        shapes.push(TreeSpec::root_plus_one(3, d));
    }
    for d in 1..=3 {
        shapes.push(TreeSpec::root_plus_one(4, d));
    }
    shapes
}

/// The bottom-up bonus recursion predicts greedy's root decisions exactly:
/// root membership and weight, the matched root edge, and per-child edge
/// selection.
pub fn bonus_equivalence_check(instances: usize) -> Check {
    run_check("bonus", "greedy_equivalence", move || {
        let shapes = bonus_shapes();
        let trees: Vec<Graph> = shapes
            .iter()
            .map(|&spec| build_tree(spec))
            .collect::<Result<_, _>>()?;
        let dist = uniform01();
        let mut rng = ChaCha8Rng::seed_from_u64(0x626f6e);
        for i in 0..instances {
            let tree = &trees[i % trees.len()];
            let wa_n = assign_weights(tree, Target::Nodes, dist, rng.random());
            let wa_e = assign_weights(tree, Target::Edges, dist, rng.random());
            let table = compute_bonus(tree, &wa_n, &wa_e)?;

            let ig = greedy_independent_set(tree, &wa_n)?;
            let expected_s = if ig.contains(0) { wa_n.value(0) } else { 0.0 };
            ensure!(
                table.s_values[0] == expected_s,
                "instance {i}: root node bonus {} but greedy gives {expected_s}",
                table.s_values[0]
            );
            ensure!(
                root_in_greedy_is(tree, &wa_n)? == ig.contains(0),
                "instance {i}: root membership prediction disagrees"
            );

            let mg = greedy_matching(tree, &wa_e)?;
            let root_matched: Option<usize> = tree
                .neighbors(0)
                .iter()
                .filter_map(|&j| tree.edge_index(0, j))
                .find(|&e| mg.contains(e));
            let expected_ms = root_matched.map_or(0.0, |e| wa_e.value(e));
            ensure!(
                table.ms_values[0] == expected_ms,
                "instance {i}: root edge bonus {} but greedy gives {expected_ms}",
                table.ms_values[0]
            );
            ensure!(
                matched_root_edge(tree, &wa_e)? == root_matched,
                "instance {i}: matched root edge prediction disagrees"
            );

            for &j in tree.neighbors(0) {
                let e = tree
                    .edge_index(0, j)
                    .ok_or_else(|| anyhow!("root edge to {j} missing"))?;
                ensure!(
                    edge_selection_test(tree, &wa_e, j)? == mg.contains(e),
                    "instance {i}: edge selection test disagrees on child {j}"
                );
            }
        }
        Ok((
            true,
            format!("{instances} trees across {} shapes, zero tolerance", shapes.len()),
        ))
    })
}

// Parent of each node in the BFS rooting at 0.
fn parents(g: &Graph) -> Vec<Option<usize>> {
    let mut parent = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    parent
}

fn subtree_nodes(parent: &[Option<usize>], root: usize) -> Vec<usize> {
    let mut inside = vec![false; parent.len()];
    inside[root] = true;
    // BFS numbering orders children after parents, so one forward sweep
    // settles membership.
    for v in root + 1..parent.len() {
        if let Some(p) = parent[v] {
            inside[v] = inside[p];
        }
    }
    (0..parent.len()).filter(|&v| inside[v]).collect()
}

/// A node's bonus is a function of its own subtree alone: recomputing on
/// the extracted subtree reproduces it bit for bit.
pub fn subtree_locality_check(instances: usize) -> Check {
    run_check("bonus", "subtree_locality", move || {
        let tree = build_tree(TreeSpec::uniform(3, 3))?;
        let parent = parents(&tree);
        let dist = uniform01();
        let mut rng = ChaCha8Rng::seed_from_u64(0x737562);
        let mut comparisons = 0usize;
        for _ in 0..instances {
            let wa_n = assign_weights(&tree, Target::Nodes, dist, rng.random());
            let wa_e = assign_weights(&tree, Target::Edges, dist, rng.random());
            let table = compute_bonus(&tree, &wa_n, &wa_e)?;
            for i in 1..tree.node_count() {
                let nodes = subtree_nodes(&parent, i);
                let sub = tree.induced_node_subgraph(&nodes);
                let new_root = sub
                    .node_ids
                    .binary_search(&i)
                    .map_err(|_| anyhow!("subtree of {i} lost its root"))?;
                let rooted = sub.graph.clone().into_rooted(new_root)?;
                let sub_wn = subset_weights(Target::Nodes, &wa_n, &sub.node_ids)?;
                let sub_we = subset_weights(Target::Edges, &wa_e, &sub.edge_ids)?;
                let local = compute_bonus(&rooted, &sub_wn, &sub_we)?;
                ensure!(
                    local.s_values[new_root] == table.s_values[i]
                        && local.ms_values[new_root] == table.ms_values[i],
                    "bonus at node {i} changed when recomputed on its subtree"
                );
                comparisons += 1;
            }
        }
        Ok((true, format!("{comparisons} subtree recomputations, bit-exact")))
    })
}

/// The chance that the root bonus vanishes matches the integer recursion's
/// mass at zero, for both the node and the edge recursion.
pub fn bonus_distribution_check(trials: u64) -> Check {
    run_check("bonus", "zero_bonus_law", move || {
        let depth = 4usize;
        let tree = build_tree(TreeSpec::uniform(3, depth))?;
        let dist = uniform01();
        let k = default_truncation(3, depth);
        let p_x0 = x_pmf(3, depth, k)?.prob(0);
        let p_y0 = y_pmf(3, depth, k)?.prob(0);

        const CHUNK: u64 = 1024;
        let chunks = trials.div_ceil(CHUNK);
        let (s_zero, ms_zero) = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = ((c + 1) * CHUNK).min(trials);
                let mut s_hits = 0u64;
                let mut ms_hits = 0u64;
                for t in lo..hi {
                    let wa_n =
                        assign_weights(&tree, Target::Nodes, dist, derive_seed(0xdf01, t));
                    let wa_e =
                        assign_weights(&tree, Target::Edges, dist, derive_seed(0xdf02, t));
                    let table = compute_bonus(&tree, &wa_n, &wa_e)
                        .expect("weights cover the tree");
                    s_hits += u64::from(table.s_values[0] == 0.0);
                    ms_hits += u64::from(table.ms_values[0] == 0.0);
                }
                (s_hits, ms_hits)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

        let tf = trials as f64;
        let mut ok = true;
        let mut detail = String::new();
        for (label, hits, expected) in
            [("node", s_zero, p_x0), ("edge", ms_zero, p_y0)]
        {
            let p = hits as f64 / tf;
            let se = (expected * (1.0 - expected) / tf).sqrt();
            // 1e-6 absorbs the truncation slack in the analytic mass.
            ok &= (p - expected).abs() <= 4.0 * se + 1e-6;
            detail.push_str(&format!("{label}: {p:.5} vs {expected:.5}; "));
        }
        detail.push_str(&format!("{trials} trials, within 4 s.e."));
        Ok((ok, detail))
    })
}

pub fn bonus_suite() -> Vec<Check> {
    vec![
        bonus_equivalence_check(2000),
        subtree_locality_check(200),
        bonus_distribution_check(400_000),
    ]
}

// ---------------------------------------------------------------------------
// integer recursions
// ---------------------------------------------------------------------------

fn factorial(k: usize) -> f64 {
    (2..=k).map(|i| i as f64).product()
}

fn sup_grid_distance(pmf: &greedylab::dist::Pmf, limit: impl Fn(f64) -> f64) -> f64 {
    (0..=100)
        .map(|i| {
            let s = i as f64 / 100.0;
            (pmf.pgf(s) - limit(s)).abs()
        })
        .fold(0.0f64, f64::max)
}

/// Depth-d generating functions approach the closed forms at factorial
/// speed: sup-grid distance stays within r(r-1)^d/(d+1)! plus tail slack.
pub fn convergence_check() -> Check {
    run_check("recursion", "pgf_convergence", || {
        let mut worst: f64 = 0.0;
        for r in [3usize, 4, 5] {
            let k = default_truncation(r, 12);
            let xs = x_pmf_chain(r, 12, k)?;
            let ys = y_pmf_chain(r, 12, k)?;
            for d in 2..=12 {
                let budget = convergence_budget(r, d) + 2.0 * xs[d].tail_mass();
                let sup = sup_grid_distance(&xs[d], |s| limiting_pgf_x(r, s));
                ensure!(
                    sup <= budget,
                    "node law r={r} d={d}: sup {sup:.3e} exceeds budget {budget:.3e}"
                );
                worst = worst.max(sup / budget);
                let budget = convergence_budget(r, d) + 2.0 * ys[d].tail_mass();
                let sup = sup_grid_distance(&ys[d], |s| limiting_pgf_y(r, s));
                ensure!(
                    sup <= budget,
                    "edge law r={r} d={d}: sup {sup:.3e} exceeds budget {budget:.3e}"
                );
                worst = worst.max(sup / budget);
            }
        }
        Ok((
            true,
            format!("r in 3..=5, d in 2..=12, both laws; worst sup/budget = {worst:.3}"),
        ))
    })
}

/// Truncated means stay pinned at 1 (node law) and r (edge law).
pub fn mean_conservation_check() -> Check {
    run_check("recursion", "mean_conservation", || {
        let mut worst: f64 = 0.0;
        for r in [3usize, 4, 5] {
            let k = default_truncation(r, 12);
            for (d, pmf) in x_pmf_chain(r, 12, k)?.iter().enumerate() {
                let err = (pmf.mean() - 1.0).abs();
                let tol = 1e-7 + k as f64 * pmf.tail_mass();
                ensure!(err <= tol, "node law r={r} d={d}: mean error {err:.3e}");
                worst = worst.max(err);
            }
            // The edge law starts at a point mass at zero; its mean is
            // pinned at r only from depth 1 on.
            for (d, pmf) in y_pmf_chain(r, 12, k)?.iter().enumerate().skip(1) {
                let err = (pmf.mean() - r as f64).abs();
                let tol = 1e-7 + k as f64 * pmf.tail_mass();
                ensure!(err <= tol, "edge law r={r} d={d}: mean error {err:.3e}");
                worst = worst.max(err);
            }
        }
        Ok((
            true,
            format!("r in 3..=5, node d in 0..=12, edge d in 1..=12; worst |error| = {worst:.3e}"),
        ))
    })
}

/// The closed-form limits satisfy their defining differential equations.
pub fn ode_check() -> Check {
    run_check("recursion", "limit_odes", || {
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for r in [3usize, 4, 5, 10] {
            for i in 1..=9 {
                let s = i as f64 / 10.0;
                let dx = (limiting_pgf_x(r, s + h) - limiting_pgf_x(r, s - h)) / (2.0 * h);
                let err = (dx - limiting_pgf_x(r, s).powi(r as i32)).abs();
                ensure!(err <= 1e-6, "node ODE fails at r={r}, s={s}: {err:.3e}");
                worst = worst.max(err);
                let root = |s: f64| limiting_pgf_y(r, s).powf(1.0 / r as f64);
                let dy = (root(s + h) - root(s - h)) / (2.0 * h);
                let err = (dy - limiting_pgf_y(r, s)).abs();
                ensure!(err <= 1e-6, "edge ODE fails at r={r}, s={s}: {err:.3e}");
                worst = worst.max(err);
            }
        }
        Ok((true, format!("central differences at h={h}; worst residual {worst:.3e}")))
    })
}

/// One more recursion step at depth 12 moves every probability by less
/// than the factorial budget: the laws have effectively converged.
pub fn fixed_point_check() -> Check {
    run_check("recursion", "fixed_point", || {
        let depth = 12usize;
        let mut worst: f64 = 0.0;
        for r in [3usize, 4, 5] {
            let k = default_truncation(r, depth + 1);
            for chain in [x_pmf_chain(r, depth + 1, k)?, y_pmf_chain(r, depth + 1, k)?] {
                let (a, b) = (&chain[depth], &chain[depth + 1]);
                let len = a.probs().len().max(b.probs().len());
                let delta = (0..len)
                    .map(|i| (a.prob(i) - b.prob(i)).abs())
                    .fold(0.0f64, f64::max);
                let budget =
                    convergence_budget(r, depth) + a.tail_mass() + b.tail_mass();
                ensure!(
                    delta <= budget,
                    "one step at r={r}, d={depth} moved a probability by {delta:.3e}"
                );
                worst = worst.max(delta / budget);
            }
        }
        Ok((true, format!("r in 3..=5 at d={depth}; worst delta/budget = {worst:.3}")))
    })
}

pub fn recursion_suite() -> Vec<Check> {
    vec![
        convergence_check(),
        mean_conservation_check(),
        ode_check(),
        fixed_point_check(),
    ]
}

/// Checks for one suite name, or every suite for "all".
pub fn verify_suite(name: &str) -> anyhow::Result<Vec<Check>> {
    match name {
        "ibs" => Ok(ibs_suite()),
        "bonus" => Ok(bonus_suite()),
        "recursion" => Ok(recursion_suite()),
        "all" => {
            let mut checks = ibs_suite();
            checks.extend(bonus_suite());
            checks.extend(recursion_suite());
            Ok(checks)
        }
        other => bail!("unknown suite {other:?}: expected ibs, bonus, recursion, or all"),
    }
}
