//! Max-weight greedy selection of independent sets and matchings, plus
//! reproducible Monte Carlo estimation of the output statistics.

use rayon::prelude::*;

use crate::graph::{EdgeId, Graph, NodeId};
use crate::weights::{assign_weights, derive_seed, Target, WeightAssignment, WeightDist};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    IndependentSet,
    Matching,
}

impl Mode {
    /// Parses the CLI spellings `is` and `m`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "is" => Ok(Mode::IndependentSet),
            "m" => Ok(Mode::Matching),
            other => Err(Error::InvalidParameters(format!(
                "mode must be \"is\" or \"m\", got {other:?}"
            ))),
        }
    }

    pub fn target(self) -> Target {
        match self {
            Mode::IndependentSet => Target::Nodes,
            Mode::Matching => Target::Edges,
        }
    }
}

/// Output of one greedy run: the selected node or edge ids (sorted), their
/// count and total weight, and the seed of the weight draw that produced it.
#[derive(Debug, Clone)]
pub struct GreedyResult {
    pub mode: Mode,
    pub selected: Vec<usize>,
    pub cardinality: usize,
    pub total_weight: f64,
    pub seed: u64,
}

impl GreedyResult {
    pub fn contains(&self, id: usize) -> bool {
        self.selected.binary_search(&id).is_ok()
    }
}

pub fn is_independent_set(g: &Graph, nodes: &[NodeId]) -> bool {
    nodes
        .iter()
        .all(|&u| g.neighbors(u).iter().all(|v| !nodes.contains(v)))
}

pub fn is_maximal_independent_set(g: &Graph, nodes: &[NodeId]) -> bool {
    is_independent_set(g, nodes)
        && (0..g.node_count()).all(|u| {
            nodes.contains(&u) || g.neighbors(u).iter().any(|v| nodes.contains(v))
        })
}

pub fn is_matching(g: &Graph, edge_ids: &[EdgeId]) -> bool {
    let mut used = vec![false; g.node_count()];
    for &e in edge_ids {
        let (u, v) = g.endpoints(e);
        if used[u] || used[v] {
            return false;
        }
        used[u] = true;
        used[v] = true;
    }
    true
}

pub fn is_maximal_matching(g: &Graph, edge_ids: &[EdgeId]) -> bool {
    let mut used = vec![false; g.node_count()];
    for &e in edge_ids {
        let (u, v) = g.endpoints(e);
        used[u] = true;
        used[v] = true;
    }
    is_matching(g, edge_ids)
        && g
            .edges()
            .iter()
            .all(|&(u, v)| used[u] || used[v])
}

/// Runs greedy node selection: scan nodes in strictly decreasing weight
/// order, take a node unless a neighbor was already taken. The result is a
/// maximal independent set.
pub fn greedy_independent_set(g: &Graph, wa: &WeightAssignment) -> Result<GreedyResult> {
    wa.check_covers(Target::Nodes, g.node_count())?;
    let n = g.node_count();
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| wa.value(j).total_cmp(&wa.value(i)));
    let mut blocked = vec![false; n];
    let mut selected = Vec::new();
    let mut total_weight = 0.0;
    for i in order {
        if blocked[i] {
            continue;
        }
        selected.push(i);
        total_weight += wa.value(i);
        for &nb in g.neighbors(i) {
            blocked[nb] = true;
        }
    }
    selected.sort_unstable();
    debug_assert!(is_maximal_independent_set(g, &selected));
    Ok(GreedyResult {
        mode: Mode::IndependentSet,
        cardinality: selected.len(),
        total_weight,
        selected,
        seed: wa.seed,
    })
}

/// Runs greedy edge selection: scan edges in strictly decreasing weight
/// order, take an edge unless it shares a node with a taken edge. The result
/// is a maximal matching.
pub fn greedy_matching(g: &Graph, wa: &WeightAssignment) -> Result<GreedyResult> {
    wa.check_covers(Target::Edges, g.edge_count())?;
    let m = g.edge_count();
    let mut order: Vec<EdgeId> = (0..m).collect();
    order.sort_unstable_by(|&i, &j| wa.value(j).total_cmp(&wa.value(i)));
    let mut used = vec![false; g.node_count()];
    let mut selected = Vec::new();
    let mut total_weight = 0.0;
    for e in order {
        let (u, v) = g.endpoints(e);
        if used[u] || used[v] {
            continue;
        }
        used[u] = true;
        used[v] = true;
        selected.push(e);
        total_weight += wa.value(e);
    }
    selected.sort_unstable();
    debug_assert!(is_maximal_matching(g, &selected));
    Ok(GreedyResult {
        mode: Mode::Matching,
        cardinality: selected.len(),
        total_weight,
        selected,
        seed: wa.seed,
    })
}

/// Draws weights from `dist` with the given seed and runs one greedy pass.
pub fn run_trial(g: &Graph, mode: Mode, dist: WeightDist, seed: u64) -> GreedyResult {
    let wa = assign_weights(g, mode.target(), dist, seed);
    match mode {
        Mode::IndependentSet => greedy_independent_set(g, &wa),
        Mode::Matching => greedy_matching(g, &wa),
    }
    .expect("assign_weights covers the graph")
}

/// Sample statistics over Monte Carlo trials. `size_frac` is cardinality
/// divided by the node count (independent sets) or edge count (matchings);
/// `weight_per_node` is total weight divided by the node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub trials: u64,
    pub mean_size_frac: f64,
    pub var_size_frac: f64,
    pub se_size_frac: f64,
    pub mean_weight_per_node: f64,
    pub var_weight_per_node: f64,
    pub se_weight_per_node: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Welford {
            n,
            mean: self.mean + delta * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + delta * delta * self.n as f64 * other.n as f64 / n as f64,
        }
    }

    fn variance(self) -> f64 {
        if self.n >= 2 {
            self.m2 / (self.n - 1) as f64
        } else {
            f64::NAN
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkStats {
    frac: Welford,
    wpn: Welford,
}

// Trials are processed in fixed chunks and chunk summaries are merged in
// chunk order, so results are bit-identical for any worker count.
const CHUNK: u64 = 1024;

/// Repeated greedy runs with per-trial seeds derived from `master_seed`.
/// Deterministic given (graph, mode, dist, trials, master_seed), regardless
/// of how many rayon workers execute it.
pub fn monte_carlo(
    g: &Graph,
    mode: Mode,
    dist: WeightDist,
    trials: u64,
    master_seed: u64,
) -> Result<SampleStats> {
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be >= 1".into()));
    }
    let denom = match mode {
        Mode::IndependentSet => g.node_count(),
        Mode::Matching => g.edge_count().max(1),
    } as f64;
    let nodes = g.node_count() as f64;
    let n_chunks = trials.div_ceil(CHUNK);
    let partials: Vec<ChunkStats> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = ChunkStats::default();
            for t in c * CHUNK..trials.min((c + 1) * CHUNK) {
                let result = run_trial(g, mode, dist, derive_seed(master_seed, t));
                acc.frac.push(result.cardinality as f64 / denom);
                acc.wpn.push(result.total_weight / nodes);
            }
            acc
        })
        .collect();
    let mut frac = Welford::default();
    let mut wpn = Welford::default();
    for p in partials {
        frac = frac.merge(p.frac);
        wpn = wpn.merge(p.wpn);
    }
    Ok(SampleStats {
        trials,
        mean_size_frac: frac.mean,
        var_size_frac: frac.variance(),
        se_size_frac: (frac.variance() / trials as f64).sqrt(),
        mean_weight_per_node: wpn.mean,
        var_weight_per_node: wpn.variance(),
        se_weight_per_node: (wpn.variance() / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;

    #[test]
    fn k3_selects_one_node() {
        let g = named_graph("cycle:3").unwrap();
        let wa = WeightAssignment::from_values(
            Target::Nodes,
            vec![3.0, 2.0, 1.0],
            WeightDist::Uniform { a: 0.0, b: 10.0 },
            0,
        )
        .unwrap();
        let res = greedy_independent_set(&g, &wa).unwrap();
        assert_eq!(res.selected, vec![0]);
        assert_eq!(res.total_weight, 3.0);
    }

    #[test]
    fn monte_carlo_k3_is_exactly_third() {
        let g = named_graph("cycle:3").unwrap();
        let stats = monte_carlo(&g, Mode::IndependentSet, WeightDist::Uniform { a: 0.0, b: 1.0 }, 500, 7)
            .unwrap();
        assert_eq!(stats.mean_size_frac, 1.0 / 3.0);
        assert_eq!(stats.var_size_frac, 0.0);
    }
}
