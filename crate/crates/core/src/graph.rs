//! Immutable simple graphs keyed by actor label.
//!
//! Nodes are stored in lexicographic label order and addressed internally by
//! their position in that order, so every traversal over a [`Graph`] visits
//! actors in the same order on every platform.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An actor label exactly as read from input, minus surrounding whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ActorId(String);

impl ActorId {
    /// Returns `None` when the label is empty after trimming.
    pub fn new(label: impl AsRef<str>) -> Option<Self> {
        let trimmed = label.as_ref().trim();
        if trimmed.is_empty() {
            None
        } else {
            Some(ActorId(trimmed.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for ActorId {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        ActorId::new(&value).ok_or_else(|| "actor id must not be empty".to_owned())
    }
}

impl From<ActorId> for String {
    fn from(id: ActorId) -> String {
        id.0
    }
}

impl AsRef<str> for ActorId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Directedness {
    #[default]
    Undirected,
    Directed,
}

impl Directedness {
    pub fn is_directed(self) -> bool {
        matches!(self, Directedness::Directed)
    }
}

impl fmt::Display for Directedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Directedness::Undirected => "undirected",
            Directedness::Directed => "directed",
        })
    }
}

/// What [`Graph::build`] discarded while normalizing its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildStats {
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

/// A simple graph (no self-loops, no parallel edges).
///
/// In undirected mode `out_adj` holds the symmetric neighbor lists and
/// `in_adj` is left empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    mode: Directedness,
    nodes: Vec<ActorId>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(mode: Directedness) -> Self {
        Graph {
            mode,
            nodes: Vec::new(),
            out_adj: Vec::new(),
            in_adj: Vec::new(),
            edge_count: 0,
        }
    }

    /// Builds a simple graph from `(source, target)` pairs.
    ///
    /// Self-loops are dropped and duplicates collapsed; in undirected mode
    /// `(a, b)` and `(b, a)` are the same edge. `extra_nodes` are added even
    /// when no edge touches them.
    pub fn build<E, N>(edges: E, mode: Directedness, extra_nodes: N) -> (Graph, BuildStats)
    where
        E: IntoIterator<Item = (ActorId, ActorId)>,
        N: IntoIterator<Item = ActorId>,
    {
        let mut stats = BuildStats::default();
        let mut edge_set = BTreeSet::new();
        let mut seen = 0usize;
        for (a, b) in edges {
            if a == b {
                stats.self_loops_dropped += 1;
                continue;
            }
            seen += 1;
            let key = if mode.is_directed() || a < b { (a, b) } else { (b, a) };
            edge_set.insert(key);
        }
        stats.duplicates_collapsed = seen - edge_set.len();

        let mut node_set: BTreeSet<ActorId> = extra_nodes.into_iter().collect();
        for (a, b) in &edge_set {
            node_set.insert(a.clone());
            node_set.insert(b.clone());
        }
        let nodes: Vec<ActorId> = node_set.into_iter().collect();
        let index = |id: &ActorId| nodes.binary_search(id).expect("endpoint registered");

        let n = nodes.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = if mode.is_directed() { vec![Vec::new(); n] } else { Vec::new() };
        for (a, b) in &edge_set {
            let (ia, ib) = (index(a), index(b));
            out_adj[ia].push(ib);
            if mode.is_directed() {
                in_adj[ib].push(ia);
            } else {
                out_adj[ib].push(ia);
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }

        let graph = Graph {
            mode,
            nodes,
            out_adj,
            in_adj,
            edge_count: edge_set.len(),
        };
        (graph, stats)
    }

    /// Node-set and edge-set union of `graphs`.
    ///
    /// An empty slice yields an empty undirected graph.
    pub fn union(graphs: &[Graph]) -> Result<Graph> {
        let Some(first) = graphs.first() else {
            return Ok(Graph::empty(Directedness::default()));
        };
        let mode = first.mode;
        if let Some(other) = graphs.iter().find(|g| g.mode != mode) {
            return Err(Error::config(format!(
                "cannot union {mode} and {} graphs",
                other.mode
            )));
        }
        let edges = graphs.iter().flat_map(|g| g.edges());
        let nodes = graphs.iter().flat_map(|g| g.nodes.iter().cloned());
        Ok(Graph::build(edges, mode, nodes).0)
    }

    pub fn mode(&self) -> Directedness {
        self.mode
    }

    pub fn is_directed(&self) -> bool {
        self.mode.is_directed()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Actors in lexicographic order; positions are the node indices.
    pub fn nodes(&self) -> &[ActorId] {
        &self.nodes
    }

    pub fn index_of(&self, id: &ActorId) -> Option<usize> {
        self.nodes.binary_search(id).ok()
    }

    pub fn contains(&self, id: &ActorId) -> bool {
        self.index_of(id).is_some()
    }

    /// Out-neighbors in directed mode, all neighbors otherwise.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// In-neighbors in directed mode, all neighbors otherwise.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        if self.is_directed() {
            &self.in_adj[v]
        } else {
            &self.out_adj[v]
        }
    }

    /// Out-neighbor labels of `id` (all neighbors when undirected).
    pub fn out_neighbors(&self, id: &ActorId) -> Vec<&ActorId> {
        self.index_of(id)
            .map(|v| self.successors(v).iter().map(|&u| &self.nodes[u]).collect())
            .unwrap_or_default()
    }

    /// In-neighbor labels of `id` (all neighbors when undirected).
    pub fn in_neighbors(&self, id: &ActorId) -> Vec<&ActorId> {
        self.index_of(id)
            .map(|v| self.predecessors(v).iter().map(|&u| &self.nodes[u]).collect())
            .unwrap_or_default()
    }

    /// True when `v` has at least one incident edge.
    pub fn has_edges(&self, v: usize) -> bool {
        !self.successors(v).is_empty() || !self.predecessors(v).is_empty()
    }

    /// Edges as label pairs. Undirected edges are reported once, smaller
    /// label first.
    pub fn edges(&self) -> impl Iterator<Item = (ActorId, ActorId)> + '_ {
        self.out_adj.iter().enumerate().flat_map(move |(a, list)| {
            list.iter()
                .filter(move |&&b| self.is_directed() || a < b)
                .map(move |&b| (self.nodes[a].clone(), self.nodes[b].clone()))
        })
    }
}
