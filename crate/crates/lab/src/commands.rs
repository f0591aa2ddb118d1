//! The experiments behind each CLI subcommand. Every command is a pure
//! function of its arguments (seeds included), returning a [`Report`], so
//! identical invocations produce identical bytes.

use std::fs;

use anyhow::{bail, ensure, Context};
use rayon::prelude::*;

use greedylab::bounds::{
    integrate, mis_bounds, mm_bounds, mwis_bounds, mwm_bounds, table_1, table_2, table_3,
    variance_bound_is, variance_bound_is_unweighted, BoundReport, TableEntry,
};
use greedylab::dist::{default_truncation, limiting_pgf_x, limiting_pgf_y, x_pmf_chain, y_pmf_chain};
use greedylab::graph::{build_tree, generate_random_regular, named_graph, Graph, TreeSpec};
use greedylab::greedy::{greedy_independent_set, greedy_matching, monte_carlo, Mode};
use greedylab::weights::{assign_weights, derive_seed, Target, WeightDist};
use greedylab::Error;

use crate::config::{mode_token, ExperimentConfig};
use crate::oracle::{exact_expected_greedy_is, MAX_EXACT_NODES};
use crate::output::{Cell, Report};
use crate::verify;

const QUAD_TOL: f64 = 1e-9;
const CHUNK: u64 = 1024;
const GENERATOR_ATTEMPTS: usize = 10_000;

/// r(r-1)^d/(d+1)!, the sup-norm distance budget between the depth-d
/// generating function and its closed-form limit, in log space so large d
/// does not overflow.
pub fn convergence_budget(r: usize, d: usize) -> f64 {
    let rf = r as f64;
    let ln_fact: f64 = (2..=d + 1).map(|i| (i as f64).ln()).sum();
    (rf.ln() + d as f64 * (rf - 1.0).ln() - ln_fact).exp()
}

fn entry_row(e: &TableEntry) -> Vec<Cell> {
    vec![
        Cell::Int(e.table as i64),
        Cell::Int(e.r as i64),
        Cell::opt_int(e.g.map(|g| g as i64)),
        Cell::Text(e.column.to_string()),
        Cell::Float(e.value),
        Cell::opt_float(e.reference),
        Cell::opt_float(e.diff),
        Cell::Text(e.source.to_string()),
        Cell::Bool(e.flagged),
    ]
}

/// Recompute one of the three published tables next to its printed values.
pub fn cmd_tables(which: u8) -> anyhow::Result<Report> {
    let entries = match which {
        1 => table_1(),
        2 => table_2(),
        3 => table_3()?,
        other => bail!("no table {other}: expected 1, 2, or 3"),
    };
    let mut cfg = ExperimentConfig::new("tables");
    cfg.which = Some(which);
    let mut report = Report::new(
        &cfg,
        &["table", "r", "g", "column", "value", "reference", "diff", "source", "flagged"],
    );
    for e in &entries {
        report.push_row(entry_row(e));
    }
    Ok(report)
}

/// One estimated statistic next to its analytic value.
#[derive(Debug, Clone)]
pub struct TreeProbEstimate {
    pub statistic: &'static str,
    pub empirical: f64,
    pub se: f64,
    pub analytic: f64,
    pub z: f64,
}

/// Root-selection statistics on the tree whose root has r children and
/// whose other internal nodes have r-1, to depth d.
#[derive(Debug, Clone)]
pub struct TreeProbData {
    pub r: usize,
    pub d: usize,
    pub trials: u64,
    pub node_count: usize,
    pub estimates: Vec<TreeProbEstimate>,
}

fn z_score(empirical: f64, analytic: f64, se: f64) -> f64 {
    let diff = empirical - analytic;
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY * diff.signum()
    }
}

// Runs `trials` independent trials of an indicator-and-value experiment
// and returns (p_hat, se_p, mean_value, se_value). Trials are processed in
// fixed-size chunks merged in chunk order, so the result does not depend
// on the worker count.
fn indicator_value_pass<F>(trials: u64, per_trial: F) -> (f64, f64, f64, f64)
where
    F: Fn(u64) -> (bool, f64) + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let partials: Vec<(u64, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(trials);
            let mut hits = 0u64;
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for t in lo..hi {
                let (hit, value) = per_trial(t);
                if hit {
                    hits += 1;
                    sum += value;
                    sum_sq += value * value;
                }
            }
            (hits, sum, sum_sq)
        })
        .collect();
    let mut hits = 0u64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (h, s, s2) in partials {
        hits += h;
        sum += s;
        sum_sq += s2;
    }
    let tf = trials as f64;
    let p = hits as f64 / tf;
    let se_p = (p * (1.0 - p) / tf).sqrt();
    let mean = sum / tf;
    let var = (sum_sq / tf - mean * mean).max(0.0) * tf / (tf - 1.0).max(1.0);
    (p, se_p, mean, (var / tf).sqrt())
}

/// Simulates greedy selection at the root of the tree and compares against
/// the analytic values obtained from the integer recursions by quadrature.
pub fn tree_probability_data(
    r: usize,
    d: usize,
    trials: u64,
    master_seed: u64,
) -> anyhow::Result<TreeProbData> {
    ensure!(r >= 3, "tree experiment needs degree r >= 3, got {r}");
    ensure!(d >= 1, "tree experiment needs depth d >= 1, got {d}");
    ensure!(trials >= 1, "need at least one trial");
    let dist = WeightDist::uniform(0.0, 1.0)?;
    let tree = build_tree(TreeSpec::root_plus_one(r - 1, d))?;

    let is_seed = derive_seed(master_seed, 1);
    let (p_is, se_p_is, ew_is, se_ew_is) = indicator_value_pass(trials, |t| {
        let wa = assign_weights(&tree, Target::Nodes, dist, derive_seed(is_seed, t));
        let res = greedy_independent_set(&tree, &wa).expect("weights cover the tree");
        (res.contains(0), wa.value(0))
    });

    let root_edge = tree.edge_index(0, 1).expect("root has a first child");
    let m_seed = derive_seed(master_seed, 2);
    let (p_m, se_p_m, ew_m, se_ew_m) = indicator_value_pass(trials, |t| {
        let wa = assign_weights(&tree, Target::Edges, dist, derive_seed(m_seed, t));
        let res = greedy_matching(&tree, &wa).expect("weights cover the tree");
        (res.contains(root_edge), wa.value(root_edge))
    });

    // The root's children head branching-(r-1) subtrees of depth d-1, so the
    // root survives iff its weight beats r independent depth-(d-1) node
    // bonuses; the root edge competes against a depth-(d-1) bonus below and
    // a depth-d bonus through the rest of the root.
    let xs = x_pmf_chain(r - 1, d - 1, default_truncation(r - 1, d.saturating_sub(1)))?;
    let xd = xs.last().expect("chain has depth d-1");
    let p_is_analytic = integrate(|u| xd.pgf(u).powi(r as i32), 0.0, 1.0, QUAD_TOL)?;
    let ew_is_analytic = integrate(|u| u * xd.pgf(u).powi(r as i32), 0.0, 1.0, QUAD_TOL)?;

    let ys = y_pmf_chain(r - 1, d, default_truncation(r - 1, d))?;
    let (y_below, y_across) = (&ys[d - 1], &ys[d]);
    let p_m_analytic = integrate(|u| y_below.pgf(u) * y_across.pgf(u), 0.0, 1.0, QUAD_TOL)?;
    let ew_m_analytic =
        integrate(|u| u * y_below.pgf(u) * y_across.pgf(u), 0.0, 1.0, QUAD_TOL)?;

    let estimates = vec![
        TreeProbEstimate {
            statistic: "p_root_selected",
            empirical: p_is,
            se: se_p_is,
            analytic: p_is_analytic,
            z: z_score(p_is, p_is_analytic, se_p_is),
        },
        TreeProbEstimate {
            statistic: "ew_root_selected",
            empirical: ew_is,
            se: se_ew_is,
            analytic: ew_is_analytic,
            z: z_score(ew_is, ew_is_analytic, se_ew_is),
        },
        TreeProbEstimate {
            statistic: "p_root_edge_matched",
            empirical: p_m,
            se: se_p_m,
            analytic: p_m_analytic,
            z: z_score(p_m, p_m_analytic, se_p_m),
        },
        TreeProbEstimate {
            statistic: "ew_root_edge_matched",
            empirical: ew_m,
            se: se_ew_m,
            analytic: ew_m_analytic,
            z: z_score(ew_m, ew_m_analytic, se_ew_m),
        },
    ];
    Ok(TreeProbData {
        r,
        d,
        trials,
        node_count: tree.node_count(),
        estimates,
    })
}

pub fn cmd_tree_probability(
    r: usize,
    d: usize,
    trials: u64,
    master_seed: u64,
) -> anyhow::Result<Report> {
    let data = tree_probability_data(r, d, trials, master_seed)?;
    let mut cfg = ExperimentConfig::new("tree-prob");
    cfg.r = Some(r);
    cfg.d = Some(d);
    cfg.trials = Some(trials);
    cfg.master_seed = Some(master_seed);
    let mut report = Report::new(
        &cfg,
        &["statistic", "nodes", "trials", "empirical", "se", "analytic", "z"],
    );
    for e in &data.estimates {
        report.push_row(vec![
            Cell::Text(e.statistic.to_string()),
            Cell::Int(data.node_count as i64),
            Cell::Int(data.trials as i64),
            Cell::Float(e.empirical),
            Cell::Float(e.se),
            Cell::Float(e.analytic),
            Cell::Float(e.z),
        ]);
    }
    Ok(report)
}

/// Looks `source` up among the built-in graph names, falling back to
/// reading it as an edge-list file.
pub fn resolve_graph(source: &str) -> anyhow::Result<Graph> {
    match named_graph(source) {
        Ok(g) => Ok(g),
        Err(Error::UnknownName(_)) => {
            let text = fs::read_to_string(source).with_context(|| {
                format!("{source:?} is neither a built-in graph name nor a readable file")
            })?;
            Graph::from_edge_list_str(&text)
                .with_context(|| format!("parsing edge list from {source:?}"))
        }
        Err(e) => Err(e.into()),
    }
}

fn bound_cells(report: Option<&BoundReport>) -> [Cell; 3] {
    match report {
        Some(b) => [
            Cell::Float(b.limit_value),
            Cell::Float(b.lower),
            Cell::Float(b.upper),
        ],
        None => [Cell::Empty, Cell::Empty, Cell::Empty],
    }
}

/// Monte Carlo greedy statistics on one graph, with the closed-form
/// envelope (when degree and girth support it) and the exact small-graph
/// expectation (when the subset oracle can afford it) alongside.
pub fn cmd_graph_mc(
    source: &str,
    mode: Mode,
    dist: WeightDist,
    trials: u64,
    master_seed: u64,
) -> anyhow::Result<Report> {
    let g = resolve_graph(source)?;
    let stats = monte_carlo(&g, mode, dist, trials, master_seed)?;
    let n = g.node_count();
    let denom = match mode {
        Mode::IndependentSet => n,
        Mode::Matching => g.edge_count().max(1),
    };
    let size_per_node = stats.mean_size_frac * denom as f64 / n as f64;

    let regular = g.regular_degree();
    let girth = g.girth();
    let bounded = match (regular, girth) {
        (Some(r), Some(girth)) if r >= 3 && girth >= 4 => Some((r, girth)),
        _ => None,
    };
    let size_bounds = bounded
        .map(|(r, girth)| match mode {
            Mode::IndependentSet => mis_bounds(r, girth),
            Mode::Matching => mm_bounds(r, girth),
        })
        .transpose()?;
    let weight_bounds = bounded
        .map(|(r, girth)| match mode {
            Mode::IndependentSet => mwis_bounds(r, girth, dist),
            Mode::Matching => mwm_bounds(r, girth, dist),
        })
        .transpose()?;

    let exact = (matches!(mode, Mode::IndependentSet) && n <= MAX_EXACT_NODES)
        .then(|| exact_expected_greedy_is(&g))
        .transpose()?;
    let exact_frac = exact.map(|e| e / n as f64);
    let z_exact = exact_frac.map(|e| z_score(stats.mean_size_frac, e, stats.se_size_frac));

    let mut cfg = ExperimentConfig::new("graph-mc");
    cfg.graph = Some(source.to_string());
    cfg.mode = Some(mode);
    cfg.dist = Some(dist);
    cfg.trials = Some(trials);
    cfg.master_seed = Some(master_seed);
    let mut report = Report::new(
        &cfg,
        &[
            "graph",
            "nodes",
            "edges",
            "regular_degree",
            "girth",
            "mode",
            "trials",
            "mean_size_frac",
            "se_size_frac",
            "size_per_node",
            "mean_weight_per_node",
            "se_weight_per_node",
            "size_limit",
            "size_lower",
            "size_upper",
            "weight_limit",
            "weight_lower",
            "weight_upper",
            "exact_size_frac",
            "z_exact",
        ],
    );
    let [s_limit, s_lower, s_upper] = bound_cells(size_bounds.as_ref());
    let [w_limit, w_lower, w_upper] = bound_cells(weight_bounds.as_ref());
    report.push_row(vec![
        Cell::Text(source.to_string()),
        Cell::Int(n as i64),
        Cell::Int(g.edge_count() as i64),
        Cell::opt_int(regular.map(|r| r as i64)),
        Cell::opt_int(girth.map(|g| g as i64)),
        Cell::Text(mode_token(mode).to_string()),
        Cell::Int(trials as i64),
        Cell::Float(stats.mean_size_frac),
        Cell::Float(stats.se_size_frac),
        Cell::Float(size_per_node),
        Cell::Float(stats.mean_weight_per_node),
        Cell::Float(stats.se_weight_per_node),
        s_limit,
        s_lower,
        s_upper,
        w_limit,
        w_lower,
        w_upper,
        Cell::opt_float(exact_frac),
        Cell::opt_float(z_exact),
    ]);
    Ok(report)
}

/// Distance of each depth-d recursion law from its closed-form limit.
pub fn cmd_recursion(
    r: usize,
    d_max: usize,
    k_max: Option<usize>,
    variable: &str,
) -> anyhow::Result<Report> {
    let k = k_max.unwrap_or_else(|| default_truncation(r, d_max));
    let (chain, target_mean, limit): (_, f64, fn(usize, f64) -> f64) = match variable {
        "x" => (x_pmf_chain(r, d_max, k)?, 1.0, limiting_pgf_x),
        "y" => (y_pmf_chain(r, d_max, k)?, r as f64, limiting_pgf_y),
        other => bail!("unknown recursion variable {other:?}: expected x or y"),
    };
    let mut cfg = ExperimentConfig::new("recursion");
    cfg.r = Some(r);
    cfg.d_max = Some(d_max);
    cfg.k_max = Some(k);
    cfg.variable = Some(variable.to_string());
    let mut report = Report::new(&cfg, &["d", "sup_norm", "mean_error", "tail_mass", "bound"]);
    for (d, pmf) in chain.iter().enumerate() {
        let sup = (0..=100)
            .map(|i| {
                let s = i as f64 / 100.0;
                (pmf.pgf(s) - limit(r, s)).abs()
            })
            .fold(0.0f64, f64::max);
        report.push_row(vec![
            Cell::Int(d as i64),
            Cell::Float(sup),
            Cell::Float((pmf.mean() - target_mean).abs()),
            Cell::Float(pmf.tail_mass()),
            Cell::Float(convergence_budget(r, d) + 2.0 * pmf.tail_mass()),
        ]);
    }
    Ok(report)
}

/// One size of the variance-scaling study.
#[derive(Debug, Clone)]
pub struct VarianceRow {
    pub n: usize,
    pub mean_size_frac: f64,
    /// n * Var(|selection|/n), which the theory says stays O(1).
    pub n_var_size: f64,
    /// The n-independent cap 9 r^2 e^((r-1)^3) on `n_var_size`.
    pub size_cap: Option<f64>,
    pub mean_weight_per_node: f64,
    pub n_var_weight: f64,
    /// The weighted cap 9 E[W^2] r^2 e^((r-1)^3) on `n_var_weight`.
    pub weight_cap: Option<f64>,
    pub within_caps: bool,
}

/// Estimates n * Var of the greedy size and weight fractions on random
/// r-regular graphs at each n, comparing against the theoretical caps.
pub fn variance_scaling_data(
    r: usize,
    n_list: &[usize],
    trials: u64,
    dist: WeightDist,
    master_seed: u64,
) -> anyhow::Result<Vec<VarianceRow>> {
    ensure!(trials >= 2, "variance needs at least two trials, got {trials}");
    ensure!(!n_list.is_empty(), "need at least one graph size");
    let size_cap = variance_bound_is_unweighted(r, 1)?;
    let weight_cap = variance_bound_is(r, 1, dist)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for (idx, &n) in n_list.iter().enumerate() {
        let g = generate_random_regular(
            n,
            r,
            3,
            derive_seed(master_seed, idx as u64),
            GENERATOR_ATTEMPTS,
        )?;
        let stats = monte_carlo(
            &g,
            Mode::IndependentSet,
            dist,
            trials,
            derive_seed(master_seed, 1_000 + idx as u64),
        )?;
        let nf = n as f64;
        let n_var_size = nf * stats.var_size_frac;
        let n_var_weight = nf * stats.var_weight_per_node;
        // Compare in log space so the caps work even when e^((r-1)^3)
        // overflows f64.
        let within = n_var_size.ln() <= size_cap.ln_value
            && n_var_weight.ln() <= weight_cap.ln_value;
        rows.push(VarianceRow {
            n,
            mean_size_frac: stats.mean_size_frac,
            n_var_size,
            size_cap: size_cap.value,
            mean_weight_per_node: stats.mean_weight_per_node,
            n_var_weight,
            weight_cap: weight_cap.value,
            within_caps: within,
        });
    }
    Ok(rows)
}

pub fn cmd_variance_scaling(
    r: usize,
    n_list: &[usize],
    trials: u64,
    dist: WeightDist,
    master_seed: u64,
) -> anyhow::Result<Report> {
    let rows = variance_scaling_data(r, n_list, trials, dist, master_seed)?;
    let mut cfg = ExperimentConfig::new("var-scaling");
    cfg.r = Some(r);
    cfg.n_list = Some(n_list.to_vec());
    cfg.trials = Some(trials);
    cfg.dist = Some(dist);
    cfg.master_seed = Some(master_seed);
    let mut report = Report::new(
        &cfg,
        &[
            "n",
            "trials",
            "mean_size_frac",
            "n_var_size",
            "size_cap",
            "ratio_size",
            "mean_weight_per_node",
            "n_var_weight",
            "weight_cap",
            "within_caps",
        ],
    );
    let mut previous: Option<f64> = None;
    for row in &rows {
        let ratio = previous.map(|p| row.n_var_size / p);
        previous = Some(row.n_var_size);
        report.push_row(vec![
            Cell::Int(row.n as i64),
            Cell::Int(trials as i64),
            Cell::Float(row.mean_size_frac),
            Cell::Float(row.n_var_size),
            Cell::opt_float(row.size_cap),
            Cell::opt_float(ratio),
            Cell::Float(row.mean_weight_per_node),
            Cell::Float(row.n_var_weight),
            Cell::opt_float(row.weight_cap),
            Cell::Bool(row.within_caps),
        ]);
    }
    Ok(report)
}

/// Runs a verification suite and reports each check; the bool is true iff
/// everything passed.
pub fn cmd_verify(suite: &str) -> anyhow::Result<(Report, bool)> {
    let checks = verify::verify_suite(suite)?;
    let all_passed = checks.iter().all(|c| c.passed);
    let mut cfg = ExperimentConfig::new("verify");
    cfg.suite = Some(suite.to_string());
    let mut report = Report::new(&cfg, &["suite", "check", "passed", "detail"]);
    for c in &checks {
        report.push_row(vec![
            Cell::Text(c.suite.to_string()),
            Cell::Text(c.name.to_string()),
            Cell::Bool(c.passed),
            Cell::Text(c.detail.clone()),
        ]);
    }
    Ok((report, all_passed))
}
