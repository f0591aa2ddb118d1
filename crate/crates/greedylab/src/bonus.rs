//! Bottom-up bonus recursion on weighted rooted trees.
//!
//! The node bonus s(i) is the weight of i if greedy selection would take i
//! within its own subtree, else 0; the edge bonus ms(i) is the weight of the
//! subtree edge at i that greedy matching would take, else 0. One upward pass
//! decides the root's fate without running the full selection.

use crate::graph::{EdgeId, Graph, NodeId};
use crate::weights::{Target, WeightAssignment};
use crate::{Error, Result};

/// Per-node bonus values; `s_values` uses node weights, `ms_values` edge
/// weights.
#[derive(Debug, Clone)]
pub struct BonusTable {
    pub s_values: Vec<f64>,
    pub ms_values: Vec<f64>,
}

fn node_bonus_inner(g: &Graph, order: &[NodeId], parent: &[NodeId], w: &[f64]) -> Vec<f64> {
    let root = order[0];
    let mut s = vec![0.0; g.node_count()];
    let mut max_child_s = vec![f64::NEG_INFINITY; g.node_count()];
    for &u in order.iter().rev() {
        let leaf = g.degree(u) == usize::from(u != root);
        s[u] = if leaf || w[u] > max_child_s[u] { w[u] } else { 0.0 };
        if u != root {
            let p = parent[u];
            if s[u] > max_child_s[p] {
                max_child_s[p] = s[u];
            }
        }
    }
    s
}

fn edge_bonus_inner(g: &Graph, order: &[NodeId], parent: &[NodeId], w: &[f64]) -> Vec<f64> {
    let root = order[0];
    let mut ms = vec![0.0; g.node_count()];
    // best[p] = max over processed children j of w(p,j) * 1{w(p,j) > ms(j)}
    let mut best = vec![0.0; g.node_count()];
    for &u in order.iter().rev() {
        ms[u] = best[u];
        if u != root {
            let p = parent[u];
            let we = w[g.edge_index(p, u).expect("tree edge exists")];
            if we > ms[u] && we > best[p] {
                best[p] = we;
            }
        }
    }
    ms
}

/// Node bonus of every node of a rooted tree.
pub fn node_bonus(g: &Graph, wa_nodes: &WeightAssignment) -> Result<Vec<f64>> {
    let (order, parent) = g.rooted_order()?;
    wa_nodes.check_covers(Target::Nodes, g.node_count())?;
    Ok(node_bonus_inner(g, &order, &parent, wa_nodes.values()))
}

/// Edge bonus of every node of a rooted tree.
pub fn edge_bonus(g: &Graph, wa_edges: &WeightAssignment) -> Result<Vec<f64>> {
    let (order, parent) = g.rooted_order()?;
    wa_edges.check_covers(Target::Edges, g.edge_count())?;
    Ok(edge_bonus_inner(g, &order, &parent, wa_edges.values()))
}

/// Both bonus tables in one bottom-up pass each.
pub fn compute_bonus(
    g: &Graph,
    wa_nodes: &WeightAssignment,
    wa_edges: &WeightAssignment,
) -> Result<BonusTable> {
    let (order, parent) = g.rooted_order()?;
    wa_nodes.check_covers(Target::Nodes, g.node_count())?;
    wa_edges.check_covers(Target::Edges, g.edge_count())?;
    Ok(BonusTable {
        s_values: node_bonus_inner(g, &order, &parent, wa_nodes.values()),
        ms_values: edge_bonus_inner(g, &order, &parent, wa_edges.values()),
    })
}

/// Whether greedy node selection on the whole tree takes the root.
pub fn root_in_greedy_is(g: &Graph, wa_nodes: &WeightAssignment) -> Result<bool> {
    let root = g.root().ok_or_else(|| Error::NotATree("graph has no root".into()))?;
    Ok(node_bonus(g, wa_nodes)?[root] > 0.0)
}

/// The root edge greedy matching takes, if any.
pub fn matched_root_edge(g: &Graph, wa_edges: &WeightAssignment) -> Result<Option<EdgeId>> {
    let root = g.root().ok_or_else(|| Error::NotATree("graph has no root".into()))?;
    let ms = edge_bonus(g, wa_edges)?;
    let w = wa_edges.values();
    let mut best: Option<(f64, EdgeId)> = None;
    for &j in g.neighbors(root) {
        let e = g.edge_index(root, j).expect("tree edge exists");
        if w[e] > ms[j] && best.is_none_or(|(bw, _)| w[e] > bw) {
            best = Some((w[e], e));
        }
    }
    Ok(best.map(|(_, e)| e))
}

/// Whether greedy matching takes the specific root edge (root, j): true iff
/// its weight beats both the child bonus ms(j) and the root's bonus
/// recomputed without the branch through j.
pub fn edge_selection_test(g: &Graph, wa_edges: &WeightAssignment, j: NodeId) -> Result<bool> {
    let root = g.root().ok_or_else(|| Error::NotATree("graph has no root".into()))?;
    let e_ij = g
        .edge_index(root, j)
        .ok_or_else(|| Error::InvalidParameters(format!("{j} is not a child of the root")))?;
    let ms = edge_bonus(g, wa_edges)?;
    let w = wa_edges.values();
    let mut ms_without_j = 0.0f64;
    for &jp in g.neighbors(root) {
        if jp == j {
            continue;
        }
        let e = g.edge_index(root, jp).expect("tree edge exists");
        if w[e] > ms[jp] {
            ms_without_j = ms_without_j.max(w[e]);
        }
    }
    Ok(w[e_ij] > ms[j].max(ms_without_j))
}
