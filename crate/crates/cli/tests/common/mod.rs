#![allow(dead_code)]

use lsndyn_core::{ActorId, Directedness, Graph};

pub fn id(s: &str) -> ActorId {
    ActorId::new(s).unwrap()
}

pub fn label(i: usize) -> ActorId {
    id(&format!("v{i:02}"))
}

/// Builds a graph that contains every node `0..n`, isolated or not.
pub fn graph_from(n: usize, edges: &[(usize, usize)], mode: Directedness) -> Graph {
    let pairs = edges.iter().map(|&(a, b)| (label(a), label(b)));
    Graph::build(pairs, mode, (0..n).map(label)).0
}

/// All-pairs hop distances by Floyd–Warshall over the graph's successor
/// lists; `None` when unreachable.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.node_count();
    let mut d = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(0);
        for &w in g.successors(v) {
            d[v][w] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Every shortest path from `s` to `t`, enumerated explicitly.
fn shortest_paths(g: &Graph, dist: &[Vec<Option<u32>>], s: usize, t: usize) -> Vec<Vec<usize>> {
    let Some(target_len) = dist[s][t] else { return Vec::new() };
    let mut out = Vec::new();
    let mut stack = vec![vec![s]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        if last == t {
            out.push(path);
            continue;
        }
        if path.len() as u32 > target_len {
            continue;
        }
        for &w in g.successors(last) {
            // Stay on a geodesic: each step must get exactly one hop closer.
            if dist[w][t].is_some_and(|d| d + path.len() as u32 == target_len) {
                let mut next = path.clone();
                next.push(w);
                stack.push(next);
            }
        }
    }
    out
}

/// Raw betweenness: for every ordered pair (s, t) the share of shortest
/// paths through each interior vertex. Undirected graphs count each
/// unordered pair once.
pub fn brute_force_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let dist = floyd_warshall(g);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || (!g.is_directed() && t < s) {
                continue;
            }
            let paths = shortest_paths(g, &dist, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                bc[v] += through / total;
            }
        }
    }
    bc
}

pub fn normalized_betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let pairs = ((n - 1) * (n - 2)) as f64;
    let scale = if g.is_directed() { pairs } else { pairs / 2.0 };
    brute_force_betweenness(g).into_iter().map(|b| b / scale).collect()
}

pub fn harmonic_oracle(g: &Graph, base_n: usize) -> Vec<f64> {
    let dist = floyd_warshall(g);
    (0..g.node_count())
        .map(|v| {
            if base_n < 2 {
                return 0.0;
            }
            let s: f64 = (0..g.node_count())
                .filter(|&u| u != v)
                .filter_map(|u| dist[v][u])
                .map(|d| 1.0 / f64::from(d))
                .sum();
            s / (base_n - 1) as f64
        })
        .collect()
}

pub fn wf_oracle(g: &Graph, base_n: usize) -> Vec<f64> {
    let dist = floyd_warshall(g);
    (0..g.node_count())
        .map(|v| {
            let reach: Vec<u32> = (0..g.node_count()).filter(|&u| u != v).filter_map(|u| dist[v][u]).collect();
            if reach.is_empty() || base_n < 2 {
                return 0.0;
            }
            let r = reach.len() as f64;
            let total: f64 = reach.iter().map(|&d| f64::from(d)).sum();
            (r / total) * (r / (base_n - 1) as f64)
        })
        .collect()
}

/// Degree by scanning the edge list for incidences.
pub fn incidence_degree(g: &Graph, base_n: usize) -> Vec<f64> {
    let edges: Vec<(ActorId, ActorId)> = g.edges().collect();
    g.nodes()
        .iter()
        .map(|v| {
            let mut neighbors: Vec<&ActorId> = edges
                .iter()
                .filter_map(|(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .collect();
            neighbors.sort();
            neighbors.dedup();
            if base_n < 2 { 0.0 } else { neighbors.len() as f64 / (base_n - 1) as f64 }
        })
        .collect()
}
