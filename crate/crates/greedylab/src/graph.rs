//! Graph representation, girth, neighborhoods, tree builders, and a
//! rejection-sampling generator for random regular graphs.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub type NodeId = usize;
/// Index into [`Graph::edges`]; edges are stored as (min, max) pairs in
/// lexicographic order, so ids are stable for a given edge set.
pub type EdgeId = usize;

const UNSET: usize = usize::MAX;

/// Whether a graph carries a distinguished root (trees built by
/// [`build_tree`] do; everything else is `General`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    General,
    Rooted { root: NodeId },
}

/// Immutable simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
    kind: GraphKind,
}

/// A subgraph together with the maps back to the parent graph's ids.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    /// `node_ids[new] = old`
    pub node_ids: Vec<NodeId>,
    /// `edge_ids[new] = old`
    pub edge_ids: Vec<EdgeId>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicate edges,
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParseGraph("graph must have at least one node".into()));
        }
        let mut normalized: Vec<(NodeId, NodeId)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::ParseGraph(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::ParseGraph(format!("self-loop at node {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            let dup = normalized.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
            return Err(Error::ParseGraph(format!("duplicate edge ({}, {})", dup.0, dup.1)));
        }
        Ok(Self::from_valid_edges(n, normalized, GraphKind::General))
    }

    /// `edges` must already be normalized, sorted, and duplicate-free.
    fn from_valid_edges(n: usize, edges: Vec<(NodeId, NodeId)>, kind: GraphKind) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj, edges, kind }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, i: NodeId) -> usize {
        self.adj[i].len()
    }

    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.adj[i]
    }

    /// Edges as (min, max) pairs in lexicographic order; an [`EdgeId`] indexes
    /// this slice.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    pub fn edge_index(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn root(&self) -> Option<NodeId> {
        match self.kind {
            GraphKind::Rooted { root } => Some(root),
            GraphKind::General => None,
        }
    }

    /// Marks `root` as the root, verifying the graph is a tree spanning all
    /// nodes.
    pub fn into_rooted(mut self, root: NodeId) -> Result<Self> {
        if root >= self.node_count() {
            return Err(Error::NotATree(format!("root {root} out of range")));
        }
        if self.edge_count() + 1 != self.node_count() {
            return Err(Error::NotATree(format!(
                "{} edges on {} nodes",
                self.edge_count(),
                self.node_count()
            )));
        }
        let dist = self.bfs_distances(root);
        if dist.contains(&UNSET) {
            return Err(Error::NotATree("not connected".into()));
        }
        self.kind = GraphKind::Rooted { root };
        Ok(self)
    }

    /// BFS order and parents from the root; fails unless the graph is a
    /// rooted tree.
    pub(crate) fn rooted_order(&self) -> Result<(Vec<NodeId>, Vec<NodeId>)> {
        let root = self
            .root()
            .ok_or_else(|| Error::NotATree("graph has no root".into()))?;
        if self.edge_count() + 1 != self.node_count() {
            return Err(Error::NotATree(format!(
                "{} edges on {} nodes",
                self.edge_count(),
                self.node_count()
            )));
        }
        let n = self.node_count();
        let mut parent = vec![UNSET; n];
        let mut order = Vec::with_capacity(n);
        parent[root] = root;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in self.neighbors(u) {
                if parent[w] == UNSET && w != root {
                    parent[w] = u;
                    order.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::NotATree("not connected".into()));
        }
        Ok((order, parent))
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Distances from `src`; unreachable nodes get `usize::MAX`.
    pub fn bfs_distances(&self, src: NodeId) -> Vec<usize> {
        let mut dist = vec![UNSET; self.node_count()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w] == UNSET {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of the shortest cycle, or `None` for forests. BFS from every
    /// node; a non-tree edge (u, w) seen from source s closes a cycle of
    /// length dist(s,u) + dist(s,w) + 1, and the minimum over all sources is
    /// exact.
    pub fn girth(&self) -> Option<usize> {
        let n = self.node_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![UNSET; n];
        let mut parent = vec![UNSET; n];
        for src in 0..n {
            dist.fill(UNSET);
            parent.fill(UNSET);
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if dist[w] == UNSET {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w && parent[w] != u {
                        let cycle = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| cycle < b) {
                            best = Some(cycle);
                        }
                    }
                }
            }
            if best == Some(3) {
                break;
            }
        }
        best
    }

    /// All nodes at distance <= d from `i`, sorted.
    pub fn node_neighborhood(&self, i: NodeId, d: usize) -> Vec<NodeId> {
        let mut dist = vec![UNSET; self.node_count()];
        dist[i] = 0;
        let mut queue = VecDeque::from([i]);
        let mut out = vec![i];
        while let Some(u) = queue.pop_front() {
            if dist[u] == d {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w] == UNSET {
                    dist[w] = dist[u] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Per-node lists of incident edge ids.
    pub fn incident_edges(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.node_count()];
        for (eid, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(eid);
            inc[v].push(eid);
        }
        inc
    }

    /// Edge-to-edge distances from `e`, where adjacent edges (sharing a node)
    /// are at distance 1. Equals one less than the length of the shortest
    /// path containing both edges.
    pub fn edge_bfs_distances(&self, e: EdgeId, incident: &[Vec<EdgeId>]) -> Vec<usize> {
        let mut dist = vec![UNSET; self.edge_count()];
        dist[e] = 0;
        let mut queue = VecDeque::from([e]);
        while let Some(cur) = queue.pop_front() {
            let (u, v) = self.edges[cur];
            for &next in incident[u].iter().chain(&incident[v]) {
                if dist[next] == UNSET {
                    dist[next] = dist[cur] + 1;
                    queue.push_back(next);
                }
            }
        }
        dist
    }

    /// All edges at edge-distance <= d from `e`, sorted.
    pub fn edge_neighborhood(&self, e: EdgeId, d: usize) -> Vec<EdgeId> {
        let incident = self.incident_edges();
        let dist = self.edge_bfs_distances(e, &incident);
        let mut out: Vec<EdgeId> = (0..self.edge_count()).filter(|&f| dist[f] <= d).collect();
        out.sort_unstable();
        out
    }

    /// Subgraph induced by a node set (all edges with both endpoints inside).
    pub fn induced_node_subgraph(&self, nodes: &[NodeId]) -> Subgraph {
        let mut keep = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut map = vec![UNSET; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut kept: Vec<((NodeId, NodeId), EdgeId)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(_, &(u, v))| map[u] != UNSET && map[v] != UNSET)
            .map(|(eid, &(u, v))| {
                let (a, b) = (map[u], map[v]);
                ((a.min(b), a.max(b)), eid)
            })
            .collect();
        kept.sort_unstable();
        let edges: Vec<_> = kept.iter().map(|&(pair, _)| pair).collect();
        let edge_ids: Vec<_> = kept.iter().map(|&(_, eid)| eid).collect();
        Subgraph {
            graph: Graph::from_valid_edges(keep.len(), edges, GraphKind::General),
            node_ids: keep,
            edge_ids,
        }
    }

    /// Subgraph consisting of the given edges and their endpoints.
    pub fn edge_subgraph(&self, edge_ids: &[EdgeId]) -> Subgraph {
        let mut keep = edge_ids.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut nodes: Vec<NodeId> = keep
            .iter()
            .flat_map(|&e| {
                let (u, v) = self.edges[e];
                [u, v]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        let mut map = vec![UNSET; self.node_count()];
        for (new, &old) in nodes.iter().enumerate() {
            map[old] = new;
        }
        let mut kept: Vec<((NodeId, NodeId), EdgeId)> = keep
            .iter()
            .map(|&eid| {
                let (u, v) = self.edges[eid];
                let (a, b) = (map[u], map[v]);
                ((a.min(b), a.max(b)), eid)
            })
            .collect();
        kept.sort_unstable();
        let edges: Vec<_> = kept.iter().map(|&(pair, _)| pair).collect();
        let ids: Vec<_> = kept.iter().map(|&(_, eid)| eid).collect();
        Subgraph {
            graph: Graph::from_valid_edges(nodes.len(), edges, GraphKind::General),
            node_ids: nodes,
            edge_ids: ids,
        }
    }

    /// Parses the plain-text edge-list format: first line `n m`, then m lines
    /// `u v`.
    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::ParseGraph("empty input".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::ParseGraph(format!("bad header {header:?}")))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::ParseGraph(format!("bad header {header:?}")))?;
        if it.next().is_some() {
            return Err(Error::ParseGraph(format!("bad header {header:?}")));
        }
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::ParseGraph(format!("bad edge line {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::ParseGraph(format!("bad edge line {line:?}")))?;
            if it.next().is_some() {
                return Err(Error::ParseGraph(format!("bad edge line {line:?}")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::ParseGraph(format!(
                "header declares {m} edges, found {}",
                edges.len()
            )));
        }
        Self::from_edges(n, &edges)
    }

    /// Inverse of [`Graph::from_edge_list_str`].
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count(), self.edge_count());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Which regular tree family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeVariant {
    /// Every non-leaf node has exactly `branching` children.
    UniformR,
    /// The root has `branching + 1` children; other non-leaves have
    /// `branching`.
    RootRPlus1,
}

/// Parameters for [`build_tree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSpec {
    pub branching: usize,
    pub depth: usize,
    pub variant: TreeVariant,
}

impl TreeSpec {
    pub fn uniform(branching: usize, depth: usize) -> Self {
        TreeSpec {
            branching,
            depth,
            variant: TreeVariant::UniformR,
        }
    }

    pub fn root_plus_one(branching: usize, depth: usize) -> Self {
        TreeSpec {
            branching,
            depth,
            variant: TreeVariant::RootRPlus1,
        }
    }
}

/// Builds the regular rooted tree described by `spec`. Nodes are numbered in
/// BFS order (root is 0, every parent id precedes its children), and depth 0
/// is a single node.
pub fn build_tree(spec: TreeSpec) -> Result<Graph> {
    if spec.branching == 0 {
        return Err(Error::InvalidParameters("branching must be positive".into()));
    }
    let mut edges = Vec::new();
    // (first, last) id range of the current level
    let mut level = (0usize, 0usize);
    let mut next_id = 1usize;
    for depth in 0..spec.depth {
        let (first, last) = level;
        for parent in first..=last {
            let children = if depth == 0 && spec.variant == TreeVariant::RootRPlus1 {
                spec.branching + 1
            } else {
                spec.branching
            };
            for _ in 0..children {
                edges.push((parent, next_id));
                next_id += 1;
            }
        }
        level = (last + 1, next_id - 1);
    }
    let mut normalized = edges;
    normalized.sort_unstable();
    Ok(Graph::from_valid_edges(
        next_id,
        normalized,
        GraphKind::Rooted { root: 0 },
    ))
}

fn lcf_graph(n: usize, pattern: &[i64]) -> Graph {
    let mut edges = HashSet::new();
    for i in 0..n {
        edges.insert((i.min((i + 1) % n), i.max((i + 1) % n)));
        let j = (i as i64 + pattern[i % pattern.len()]).rem_euclid(n as i64) as usize;
        edges.insert((i.min(j), i.max(j)));
    }
    let mut list: Vec<_> = edges.into_iter().collect();
    list.sort_unstable();
    Graph::from_valid_edges(n, list, GraphKind::General)
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    Graph::from_edges(10, &edges).expect("petersen edge list is valid")
}

/// Fixed high-girth cubic graphs plus a few small standards. Accepts
/// `cycle(n)` or `cycle:n` for the n-cycle.
pub fn named_graph(name: &str) -> Result<Graph> {
    let name = name.trim();
    if let Some(rest) = name
        .strip_prefix("cycle")
        .map(|r| r.trim_matches(|c| c == '(' || c == ')' || c == ':'))
    {
        if !rest.is_empty() {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::UnknownName(name.to_string()))?;
            if n < 3 {
                return Err(Error::InvalidParameters("cycle needs n >= 3".into()));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            return Graph::from_edges(n, &edges);
        }
    }
    match name {
        "petersen" => Ok(petersen()),
        "heawood" => Ok(lcf_graph(14, &[5, -5])),
        "mcgee" => Ok(lcf_graph(24, &[12, 7, -7])),
        "tutte_coxeter" | "tutte-coxeter" => Ok(lcf_graph(30, &[-13, -9, 7, -7, 9, 13])),
        "k4" => Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Samples an r-regular simple graph with girth >= `girth_min` by the pairing
/// model, restarting from scratch on any loop, duplicate edge, or short
/// cycle. Deterministic given `seed`.
pub fn generate_random_regular(
    n: usize,
    r: usize,
    girth_min: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Graph> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!("degree r={r} must be >= 2")));
    }
    if n <= r {
        return Err(Error::InvalidParameters(format!("need n > r, got n={n}, r={r}")));
    }
    if !(n * r).is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("n*r = {} is odd", n * r)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<NodeId> = (0..n).flat_map(|i| std::iter::repeat_n(i, r)).collect();
    let mut seen = HashSet::with_capacity(n * r / 2);
    for _ in 0..max_attempts {
        points.shuffle(&mut rng);
        seen.clear();
        let simple = points.chunks_exact(2).all(|pair| {
            let (u, v) = (pair[0], pair[1]);
            u != v && seen.insert((u.min(v), u.max(v)))
        });
        if !simple {
            continue;
        }
        let mut edges: Vec<_> = seen.iter().copied().collect();
        edges.sort_unstable();
        let graph = Graph::from_valid_edges(n, edges, GraphKind::General);
        if girth_min > 3 && graph.girth().is_none_or(|g| g < girth_min) {
            continue;
        }
        return Ok(graph);
    }
    Err(Error::AttemptsExhausted {
        n,
        r,
        girth_min,
        attempts: max_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_node_counts() {
        let t = build_tree(TreeSpec::uniform(3, 0)).unwrap();
        assert_eq!((t.node_count(), t.edge_count()), (1, 0));
        let t = build_tree(TreeSpec::uniform(2, 2)).unwrap();
        assert_eq!((t.node_count(), t.edge_count()), (7, 6));
        let t = build_tree(TreeSpec::root_plus_one(3, 2)).unwrap();
        assert_eq!(t.node_count(), 17);
        assert_eq!(t.degree(0), 4);
    }

    #[test]
    fn bfs_numbering_parents_precede_children() {
        let t = build_tree(TreeSpec::uniform(3, 3)).unwrap();
        let (order, parent) = t.rooted_order().unwrap();
        assert_eq!(order, (0..t.node_count()).collect::<Vec<_>>());
        for (v, &p) in parent.iter().enumerate().skip(1) {
            assert!(p < v);
        }
    }

    #[test]
    fn edge_index_round_trip() {
        let g = named_graph("petersen").unwrap();
        for (eid, &(u, v)) in g.edges().iter().enumerate() {
            assert_eq!(g.edge_index(u, v), Some(eid));
            assert_eq!(g.edge_index(v, u), Some(eid));
        }
        assert_eq!(g.edge_index(0, 2), None);
    }
}
