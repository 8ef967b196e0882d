//! Normalized actor-level centralities.
//!
//! Every score is scaled into `[0, 1]` against a caller-supplied network size
//! `base_n`, which must be at least the node count of the measured graph.
//! Passing the aggregated network's size instead of the graph's own size puts
//! window scores on the same scale as the aggregated ones.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ActorId, Graph};

/// Sources handled per parallel task in the Brandes pass. Partial sums are
/// reduced in chunk order, so results do not depend on the thread count.
const SOURCE_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Degree,
    InDegree,
    OutDegree,
    Closeness,
    Betweenness,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Degree => "degree",
            MetricKind::InDegree => "in_degree",
            MetricKind::OutDegree => "out_degree",
            MetricKind::Closeness => "closeness",
            MetricKind::Betweenness => "betweenness",
        }
    }

    /// Column heading used by the text report.
    pub fn title(self) -> &'static str {
        match self {
            MetricKind::Degree => "Degree Centrality",
            MetricKind::InDegree => "In-Degree Centrality",
            MetricKind::OutDegree => "Out-Degree Centrality",
            MetricKind::Closeness => "Closeness Centrality",
            MetricKind::Betweenness => "Betweenness Centrality",
        }
    }

    pub fn requires_directed(self) -> bool {
        matches!(self, MetricKind::InDegree | MetricKind::OutDegree)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "degree" => Ok(MetricKind::Degree),
            "in_degree" | "indegree" => Ok(MetricKind::InDegree),
            "out_degree" | "outdegree" => Ok(MetricKind::OutDegree),
            "closeness" => Ok(MetricKind::Closeness),
            "betweenness" => Ok(MetricKind::Betweenness),
            _ => Err(Error::config(format!("unknown metric `{s}`"))),
        }
    }
}

/// How closeness treats actors that cannot reach every other actor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosenessVariant {
    /// Sum of inverse distances, unreachable pairs contributing zero.
    #[default]
    Harmonic,
    /// Classic closeness inside the reachable set, scaled by the share of
    /// the network that set covers (Wasserman–Faust).
    WfCorrected,
}

impl fmt::Display for ClosenessVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosenessVariant::Harmonic => "harmonic",
            ClosenessVariant::WfCorrected => "wf_corrected",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationBase {
    /// Each network is normalized by its own node count.
    #[default]
    PerNetwork,
    /// Every network is normalized by the aggregated network's node count.
    AggregatedN,
}

impl fmt::Display for NormalizationBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizationBase::PerNetwork => "per_network",
            NormalizationBase::AggregatedN => "aggregated_n",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricSpec {
    pub kind: MetricKind,
    /// Only consulted when `kind` is closeness.
    pub closeness_variant: ClosenessVariant,
    pub normalization_base: NormalizationBase,
}

impl MetricSpec {
    pub fn new(kind: MetricKind) -> Self {
        MetricSpec {
            kind,
            closeness_variant: ClosenessVariant::default(),
            normalization_base: NormalizationBase::default(),
        }
    }

    pub fn with_closeness(mut self, variant: ClosenessVariant) -> Self {
        self.closeness_variant = variant;
        self
    }

    pub fn with_base(mut self, base: NormalizationBase) -> Self {
        self.normalization_base = base;
        self
    }

    pub fn validate_for(&self, graph: &Graph) -> Result<()> {
        if self.kind.requires_directed() && !graph.is_directed() {
            return Err(Error::config(format!(
                "{} requires a directed graph",
                self.kind
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeDirection {
    All,
    In,
    Out,
}

/// Scores for every node of one measured graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub metric: MetricSpec,
    pub scores: BTreeMap<ActorId, f64>,
    pub network_size: usize,
}

impl CentralityScores {
    fn from_indexed(graph: &Graph, metric: MetricSpec, base_n: usize, values: Vec<f64>) -> Self {
        CentralityScores {
            metric,
            scores: graph.nodes().iter().cloned().zip(values).collect(),
            network_size: base_n,
        }
    }

    pub fn get(&self, id: &ActorId) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

fn check_base(graph: &Graph, base_n: usize) -> Result<()> {
    if base_n == 0 {
        return Err(Error::config("normalization base must be at least 1"));
    }
    if base_n < graph.node_count() {
        return Err(Error::config(format!(
            "normalization base {base_n} is smaller than the graph's {} nodes",
            graph.node_count()
        )));
    }
    Ok(())
}

/// `deg(v) / (base_n - 1)`, or 0 when `base_n == 1`.
///
/// On a directed graph `All` counts distinct neighbors in either direction,
/// so the score stays within `[0, 1]`.
pub fn degree_centrality(
    graph: &Graph,
    direction: DegreeDirection,
    base_n: usize,
) -> Result<CentralityScores> {
    check_base(graph, base_n)?;
    let kind = match direction {
        DegreeDirection::All => MetricKind::Degree,
        DegreeDirection::In => MetricKind::InDegree,
        DegreeDirection::Out => MetricKind::OutDegree,
    };
    let spec = MetricSpec::new(kind);
    spec.validate_for(graph)?;

    let denom = base_n.saturating_sub(1);
    let values = (0..graph.node_count())
        .map(|v| {
            let deg = match direction {
                DegreeDirection::Out => graph.successors(v).len(),
                DegreeDirection::In => graph.predecessors(v).len(),
                DegreeDirection::All if graph.is_directed() => {
                    merged_len(graph.successors(v), graph.predecessors(v))
                }
                DegreeDirection::All => graph.successors(v).len(),
            };
            if denom == 0 {
                0.0
            } else {
                deg as f64 / denom as f64
            }
        })
        .collect();
    Ok(CentralityScores::from_indexed(graph, spec, base_n, values))
}

/// Size of the union of two sorted, duplicate-free lists.
fn merged_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
        count += 1;
    }
    count + (a.len() - i) + (b.len() - j)
}

/// Unweighted BFS from `source` along successor lists. Unreached nodes keep
/// `u32::MAX`.
fn bfs(graph: &Graph, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        for &w in graph.successors(v) {
            if dist[w] == u32::MAX {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
}

/// Closeness over unweighted shortest paths (outgoing paths when directed).
pub fn closeness_centrality(
    graph: &Graph,
    variant: ClosenessVariant,
    base_n: usize,
) -> Result<CentralityScores> {
    check_base(graph, base_n)?;
    let n = graph.node_count();
    let denom = base_n.saturating_sub(1) as f64;

    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::with_capacity(n)),
            |(dist, queue), v| {
                if denom == 0.0 {
                    return 0.0;
                }
                bfs(graph, v, dist, queue);
                let reached = dist.iter().enumerate().filter(|&(u, &d)| u != v && d != u32::MAX);
                match variant {
                    ClosenessVariant::Harmonic => {
                        reached.map(|(_, &d)| 1.0 / d as f64).sum::<f64>() / denom
                    }
                    ClosenessVariant::WfCorrected => {
                        let (count, total) = reached
                            .fold((0u64, 0u64), |(c, t), (_, &d)| (c + 1, t + u64::from(d)));
                        if count == 0 {
                            0.0
                        } else {
                            let r = count as f64;
                            (r / total as f64) * (r / denom)
                        }
                    }
                }
            },
        )
        .collect();

    let spec = MetricSpec::new(MetricKind::Closeness).with_closeness(variant);
    Ok(CentralityScores::from_indexed(graph, spec, base_n, values))
}

struct BrandesScratch {
    dist: Vec<u32>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            dist: vec![u32::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    /// Adds the dependencies of source `s` to `acc`.
    fn accumulate(&mut self, graph: &Graph, s: usize, acc: &mut [f64]) {
        let BrandesScratch { dist, sigma, delta, order, queue } = self;
        dist.fill(u32::MAX);
        sigma.fill(0.0);
        delta.fill(0.0);
        order.clear();
        queue.clear();

        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let next = dist[v] + 1;
            for &w in graph.successors(v) {
                if dist[w] == u32::MAX {
                    dist[w] = next;
                    queue.push_back(w);
                }
                if dist[w] == next {
                    sigma[w] += sigma[v];
                }
            }
        }

        for &w in order.iter().rev() {
            if w == s {
                continue;
            }
            let coeff = (1.0 + delta[w]) / sigma[w];
            for &v in graph.predecessors(w) {
                if dist[v] != u32::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] * coeff;
                }
            }
            acc[w] += delta[w];
        }
    }
}

/// Shortest-path betweenness via Brandes' accumulation.
///
/// Normalized by `(base_n-1)(base_n-2)/2` undirected and
/// `(base_n-1)(base_n-2)` directed; all zero when `base_n < 3`.
pub fn betweenness_centrality(graph: &Graph, base_n: usize) -> Result<CentralityScores> {
    check_base(graph, base_n)?;
    let n = graph.node_count();
    let spec = MetricSpec::new(MetricKind::Betweenness);
    if base_n < 3 {
        return Ok(CentralityScores::from_indexed(graph, spec, base_n, vec![0.0; n]));
    }

    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut scratch = BrandesScratch::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                scratch.accumulate(graph, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut raw = vec![0.0; n];
    for partial in &partials {
        for (r, p) in raw.iter_mut().zip(partial) {
            *r += p;
        }
    }

    // Undirected accumulation visits every pair from both ends, which
    // cancels the factor of two in the undirected normalizer.
    let pairs = ((base_n - 1) * (base_n - 2)) as f64;
    let values = raw.into_iter().map(|r| r / pairs).collect();
    Ok(CentralityScores::from_indexed(graph, spec, base_n, values))
}

/// Dispatches `spec` against `graph`, picking the normalization base.
pub fn compute_metric(
    graph: &Graph,
    spec: &MetricSpec,
    aggregated_n: usize,
) -> Result<CentralityScores> {
    spec.validate_for(graph)?;
    let base_n = match spec.normalization_base {
        NormalizationBase::PerNetwork => graph.node_count().max(1),
        NormalizationBase::AggregatedN => aggregated_n,
    };
    let mut scores = match spec.kind {
        MetricKind::Degree => degree_centrality(graph, DegreeDirection::All, base_n)?,
        MetricKind::InDegree => degree_centrality(graph, DegreeDirection::In, base_n)?,
        MetricKind::OutDegree => degree_centrality(graph, DegreeDirection::Out, base_n)?,
        MetricKind::Closeness => closeness_centrality(graph, spec.closeness_variant, base_n)?,
        MetricKind::Betweenness => betweenness_centrality(graph, base_n)?,
    };
    scores.metric = *spec;
    Ok(scores)
}
