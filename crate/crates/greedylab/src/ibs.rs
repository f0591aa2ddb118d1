//! Influence blocking sets: the closure of a query set under
//! weight-increasing paths, radius containment tests, and Monte Carlo
//! estimates of the containment probability.
//!
//! A set S blocks influence when every element of S outweighs all of its
//! neighbors outside S; the minimal such superset of Z is exactly the set of
//! elements reachable from Z by a strictly increasing path.

use rayon::prelude::*;

use crate::graph::{EdgeId, Graph, NodeId};
use crate::weights::{assign_weights, derive_seed, Target, WeightAssignment, WeightDist};
use crate::{Error, Result};

/// Closure of a query set under increasing paths.
#[derive(Debug, Clone)]
pub struct IbsResult {
    /// Sorted ids (nodes or edges, per `target`).
    pub elements: Vec<usize>,
    pub source: Vec<usize>,
    pub target: Target,
    /// Set by [`ibs_contained`]-style queries: (d, contained).
    pub radius_containment: Option<(usize, bool)>,
}

// Marks everything reachable from the seeds by strictly increasing steps;
// `skip` is excluded entirely (paths may not pass through it). Each id is
// expanded at most once, so a pass is O(edges of the relation).
fn node_closure(g: &Graph, w: &[f64], seeds: &[NodeId], skip: Option<NodeId>) -> Vec<bool> {
    let mut inset = vec![false; g.node_count()];
    let mut stack = Vec::new();
    for &s in seeds {
        if Some(s) != skip && !inset[s] {
            inset[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if Some(v) != skip && !inset[v] && w[v] > w[u] {
                inset[v] = true;
                stack.push(v);
            }
        }
    }
    inset
}

fn edge_closure(
    g: &Graph,
    incident: &[Vec<EdgeId>],
    w: &[f64],
    seeds: &[EdgeId],
    skip: Option<EdgeId>,
) -> Vec<bool> {
    let mut inset = vec![false; g.edge_count()];
    let mut stack = Vec::new();
    for &s in seeds {
        if Some(s) != skip && !inset[s] {
            inset[s] = true;
            stack.push(s);
        }
    }
    while let Some(e) = stack.pop() {
        let (u, v) = g.endpoints(e);
        for &f in incident[u].iter().chain(&incident[v]) {
            if Some(f) != skip && !inset[f] && w[f] > w[e] {
                inset[f] = true;
                stack.push(f);
            }
        }
    }
    inset
}

fn collect(inset: &[bool]) -> Vec<usize> {
    inset
        .iter()
        .enumerate()
        .filter_map(|(i, &yes)| yes.then_some(i))
        .collect()
}

/// Minimal influence blocking set containing `z`: all elements reachable from
/// `z` by a strictly increasing path (including the zero-length one). Whether
/// ids are nodes or edges follows `wa.target`.
pub fn influence_blocking(g: &Graph, wa: &WeightAssignment, z: &[usize]) -> Result<IbsResult> {
    if z.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let count = match wa.target {
        Target::Nodes => g.node_count(),
        Target::Edges => g.edge_count(),
    };
    wa.check_covers(wa.target, count)?;
    if let Some(&bad) = z.iter().find(|&&id| id >= count) {
        return Err(Error::InvalidParameters(format!(
            "query id {bad} out of range for {count} {}s",
            wa.target.label()
        )));
    }
    let w = wa.values();
    let inset = match wa.target {
        Target::Nodes => node_closure(g, w, z, None),
        Target::Edges => {
            let incident = g.incident_edges();
            edge_closure(g, &incident, w, z, None)
        }
    };
    debug_assert!(blocking_property_holds(g, wa, &inset));
    Ok(IbsResult {
        elements: collect(&inset),
        source: z.to_vec(),
        target: wa.target,
        radius_containment: None,
    })
}

/// Defining property of an influence blocking set: every member outweighs all
/// of its neighbors outside the set.
pub fn blocking_property_holds(g: &Graph, wa: &WeightAssignment, inset: &[bool]) -> bool {
    let w = wa.values();
    match wa.target {
        Target::Nodes => (0..g.node_count()).all(|u| {
            !inset[u] || g.neighbors(u).iter().all(|&v| inset[v] || w[v] < w[u])
        }),
        Target::Edges => {
            let incident = g.incident_edges();
            (0..g.edge_count()).all(|e| {
                if !inset[e] {
                    return true;
                }
                let (u, v) = g.endpoints(e);
                incident[u]
                    .iter()
                    .chain(&incident[v])
                    .all(|&f| f == e || inset[f] || w[f] < w[e])
            })
        }
    }
}

fn adjacent_elements(g: &Graph, incident: Option<&[Vec<EdgeId>]>, target: Target, z: usize) -> Vec<usize> {
    match target {
        Target::Nodes => g.neighbors(z).to_vec(),
        Target::Edges => {
            let incident = incident.expect("edge mode needs incident lists");
            let (u, v) = g.endpoints(z);
            let mut out: Vec<EdgeId> = incident[u]
                .iter()
                .chain(&incident[v])
                .copied()
                .filter(|&f| f != z)
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        }
    }
}

/// True iff the influence blocking set of z's neighborhood stays within
/// distance d of z. Uses the path criterion: no increasing path from a
/// neighbor of z, avoiding z entirely, reaches beyond distance d. When debug
/// assertions are on, the answer is cross-checked against
/// [`ibs_contained_direct`].
pub fn ibs_contained(g: &Graph, wa: &WeightAssignment, z: usize, d: usize) -> bool {
    let w = wa.values();
    let contained = match wa.target {
        Target::Nodes => {
            let dist = g.bfs_distances(z);
            let seeds = adjacent_elements(g, None, Target::Nodes, z);
            let inset = node_closure(g, w, &seeds, Some(z));
            !inset
                .iter()
                .enumerate()
                .any(|(u, &yes)| yes && dist[u] > d)
        }
        Target::Edges => {
            let incident = g.incident_edges();
            let dist = g.edge_bfs_distances(z, &incident);
            let seeds = adjacent_elements(g, Some(&incident), Target::Edges, z);
            let inset = edge_closure(g, &incident, w, &seeds, Some(z));
            !inset
                .iter()
                .enumerate()
                .any(|(e, &yes)| yes && dist[e] > d)
        }
    };
    debug_assert_eq!(contained, ibs_contained_direct(g, wa, z, d));
    contained
}

/// Same question answered from the definition: build the blocking set of the
/// closed neighborhood of z and test inclusion in the distance-d ball.
pub fn ibs_contained_direct(g: &Graph, wa: &WeightAssignment, z: usize, d: usize) -> bool {
    let (query, ball) = match wa.target {
        Target::Nodes => {
            let mut q = adjacent_elements(g, None, Target::Nodes, z);
            q.push(z);
            (q, g.node_neighborhood(z, d))
        }
        Target::Edges => {
            let incident = g.incident_edges();
            let mut q = adjacent_elements(g, Some(&incident), Target::Edges, z);
            q.push(z);
            (q, g.edge_neighborhood(z, d))
        }
    };
    let ib = influence_blocking(g, wa, &query).expect("query is nonempty");
    ib.elements.iter().all(|id| ball.binary_search(id).is_ok())
}

/// Monte Carlo estimate (with standard error) of the probability that the
/// blocking set of z's neighborhood stays within distance d, under i.i.d.
/// weights from `dist`.
pub fn containment_probability(
    g: &Graph,
    target: Target,
    z: usize,
    d: usize,
    dist: WeightDist,
    trials: u64,
    master_seed: u64,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be >= 1".into()));
    }
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let wa = assign_weights(g, target, dist, derive_seed(master_seed, t));
            u64::from(ibs_contained(g, &wa, z, d))
        })
        .sum();
    let p = hits as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    Ok((p, se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn path3(weights: [f64; 3]) -> (Graph, WeightAssignment) {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let wa = WeightAssignment::from_values(
            Target::Nodes,
            weights.to_vec(),
            WeightDist::Uniform { a: 0.0, b: 10.0 },
            0,
        )
        .unwrap();
        (g, wa)
    }

    #[test]
    fn closure_on_paths() {
        let (g, wa) = path3([3.0, 2.0, 1.0]);
        assert_eq!(influence_blocking(&g, &wa, &[0]).unwrap().elements, vec![0]);
        let (g, wa) = path3([1.0, 2.0, 3.0]);
        assert_eq!(influence_blocking(&g, &wa, &[0]).unwrap().elements, vec![0, 1, 2]);
    }

    #[test]
    fn whole_graph_is_blocking() {
        let (g, wa) = path3([2.0, 9.0, 4.0]);
        let all = influence_blocking(&g, &wa, &[0, 1, 2]).unwrap();
        assert_eq!(all.elements, vec![0, 1, 2]);
    }

    #[test]
    fn empty_query_rejected() {
        let (g, wa) = path3([1.0, 2.0, 3.0]);
        assert!(matches!(influence_blocking(&g, &wa, &[]), Err(Error::EmptyQuery)));
    }
}
