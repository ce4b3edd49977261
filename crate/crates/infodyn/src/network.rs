//! Graph positions: geodesic distances, positional similarity, and
//! directed triad classification.
//!
//! Two nodes occupy the same position when they relate to the rest of
//! the network in the same way, whether or not they are close to each
//! other. [`positional_correlation`] scores that directly: it compares
//! neighborhood profiles with the tie between the two nodes themselves
//! masked out, so two nodes wired to identical third parties score 1
//! even when they are not adjacent.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("DuplicateNode: {0:?} appears more than once")]
    DuplicateNode(String),
    #[error("UnknownNode: no node named {0:?}")]
    UnknownNode(String),
    #[error("SelfLoop: {0:?} cannot link to itself")]
    SelfLoop(String),
    #[error("GraphTooSmall: need at least {needed} nodes, got {got}")]
    GraphTooSmall { needed: usize, got: usize },
    #[error("NotDirected: triad classification needs a directed graph")]
    NotDirected,
}

pub type Result<T> = std::result::Result<T, NetworkError>;

/// A simple graph over named nodes, directed or undirected, stored as
/// a dense adjacency matrix. No self-loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<String>,
    directed: bool,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new(nodes: &[&str], directed: bool) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &node in nodes {
            if !seen.insert(node) {
                return Err(NetworkError::DuplicateNode(node.to_string()));
            }
        }
        Ok(Graph {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            directed,
            adj: vec![vec![false; nodes.len()]; nodes.len()],
        })
    }

    /// Builds a graph from `(from, to)` pairs; the node set is the
    /// union of endpoint names, ordered lexicographically.
    pub fn from_edge_list(edges: &[(&str, &str)], directed: bool) -> Result<Self> {
        let mut names: Vec<&str> = edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect();
        names.sort_unstable();
        names.dedup();
        let mut graph = Graph::new(&names, directed)?;
        for &(from, to) in edges {
            graph.add_edge(from, to)?;
        }
        Ok(graph)
    }

    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<()> {
        let i = self.index_of(from)?;
        let j = self.index_of(to)?;
        if i == j {
            return Err(NetworkError::SelfLoop(from.to_string()));
        }
        self.adj[i][j] = true;
        if !self.directed {
            self.adj[j][i] = true;
        }
        Ok(())
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| NetworkError::UnknownNode(name.to_string()))
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_edge(&self, from: &str, to: &str) -> Result<bool> {
        Ok(self.adj[self.index_of(from)?][self.index_of(to)?])
    }

    /// Shortest path lengths between all node pairs, following arc
    /// direction in directed graphs. `None` marks unreachable pairs;
    /// every node is at distance 0 from itself.
    pub fn geodesic_distances(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.nodes.len();
        let mut dist = vec![vec![None; n]; n];
        for start in 0..n {
            dist[start][start] = Some(0);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let d = dist[start][u].expect("queued nodes have distances");
                for v in 0..n {
                    if self.adj[u][v] && dist[start][v].is_none() {
                        dist[start][v] = Some(d + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        dist
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityMeasure {
    Pearson,
    Cosine,
}

/// Pairwise positional similarity over all node pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionMatrix {
    pub nodes: Vec<String>,
    pub measure: SimilarityMeasure,
    /// Symmetric, unit diagonal; `None` where the measure is undefined
    /// (a constant profile under Pearson, an all-zero profile under
    /// cosine).
    pub values: Vec<Vec<Option<f64>>>,
}

/// Scores every node pair by the similarity of their adjacency
/// profiles with the columns of both paired nodes masked out.
///
/// Identical masked profiles score exactly 1 under either measure,
/// before any degeneracy check: structurally interchangeable nodes are
/// certified as such even where the measure itself would be undefined.
pub fn positional_correlation(
    graph: &Graph,
    measure: SimilarityMeasure,
) -> Result<PositionMatrix> {
    let n = graph.node_count();
    if n < 3 {
        return Err(NetworkError::GraphTooSmall { needed: 3, got: n });
    }
    let mut values = vec![vec![None; n]; n];
    for i in 0..n {
        values[i][i] = Some(1.0);
        for j in i + 1..n {
            let u = masked_profile(graph, i, i, j);
            let v = masked_profile(graph, j, i, j);
            let score = if u == v {
                Some(1.0)
            } else {
                match measure {
                    SimilarityMeasure::Pearson => pearson(&u, &v),
                    SimilarityMeasure::Cosine => cosine(&u, &v),
                }
            };
            values[i][j] = score;
            values[j][i] = score;
        }
    }
    Ok(PositionMatrix {
        nodes: graph.nodes.clone(),
        measure,
        values,
    })
}

fn masked_profile(graph: &Graph, row: usize, skip_a: usize, skip_b: usize) -> Vec<f64> {
    (0..graph.node_count())
        .filter(|&c| c != skip_a && c != skip_b)
        .map(|c| if graph.adj[row][c] { 1.0 } else { 0.0 })
        .collect()
}

fn pearson(u: &[f64], v: &[f64]) -> Option<f64> {
    let n = u.len() as f64;
    let mu = u.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_u = 0.0;
    let mut var_v = 0.0;
    for (&a, &b) in u.iter().zip(v) {
        cov += (a - mu) * (b - mv);
        var_u += (a - mu) * (a - mu);
        var_v += (b - mv) * (b - mv);
    }
    if var_u == 0.0 || var_v == 0.0 {
        return None;
    }
    Some((cov / (var_u.sqrt() * var_v.sqrt())).clamp(-1.0, 1.0))
}

fn cosine(u: &[f64], v: &[f64]) -> Option<f64> {
    let dot: f64 = u.iter().zip(v).map(|(&a, &b)| a * b).sum();
    let nu: f64 = u.iter().map(|&a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|&b| b * b).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return None;
    }
    Some((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Counts of the three-node patterns in a directed graph, over all
/// C(n, 3) node triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriadCensus {
    /// Every pair connected and every directed 2-path closed by a
    /// shortcut arc.
    pub transitive: usize,
    /// Exactly three arcs forming a directed 3-cycle.
    pub cyclic: usize,
    /// Everything else, including triples with an unconnected pair.
    pub other: usize,
}

/// Classifies every node triple of a directed graph as transitive,
/// cyclic, or other.
pub fn triad_census(graph: &Graph) -> Result<TriadCensus> {
    if !graph.is_directed() {
        return Err(NetworkError::NotDirected);
    }
    let n = graph.node_count();
    if n < 3 {
        return Err(NetworkError::GraphTooSmall { needed: 3, got: n });
    }
    let mut census = TriadCensus {
        transitive: 0,
        cyclic: 0,
        other: 0,
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                match classify_triad(&graph.adj, [i, j, k]) {
                    Triad::Transitive => census.transitive += 1,
                    Triad::Cyclic => census.cyclic += 1,
                    Triad::Other => census.other += 1,
                }
            }
        }
    }
    Ok(census)
}

enum Triad {
    Transitive,
    Cyclic,
    Other,
}

fn classify_triad(adj: &[Vec<bool>], nodes: [usize; 3]) -> Triad {
    let arc = |a: usize, b: usize| adj[nodes[a]][nodes[b]];
    let connected =
        |a: usize, b: usize| arc(a, b) || arc(b, a);
    if !(connected(0, 1) && connected(0, 2) && connected(1, 2)) {
        return Triad::Other;
    }
    let arcs: usize = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]
        .iter()
        .filter(|&&(a, b)| arc(a, b))
        .count();
    let cycle = (arc(0, 1) && arc(1, 2) && arc(2, 0)) || (arc(0, 2) && arc(2, 1) && arc(1, 0));
    if arcs == 3 && cycle {
        return Triad::Cyclic;
    }
    // Transitive: each 2-path a -> b -> c implies the shortcut a -> c.
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a != b && b != c && a != c && arc(a, b) && arc(b, c) && !arc(a, c) {
                    return Triad::Other;
                }
            }
        }
    }
    Triad::Transitive
}
