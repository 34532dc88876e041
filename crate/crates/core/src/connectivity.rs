//! Device topology: an undirected graph on physical qubits.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConnectivity", into = "RawConnectivity")]
pub struct ConnectivityGraph {
    adjacency: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawConnectivity {
    n_physical: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawConnectivity> for ConnectivityGraph {
    type Error = Error;

    fn try_from(raw: RawConnectivity) -> Result<Self> {
        ConnectivityGraph::new(raw.n_physical, raw.edges)
    }
}

impl From<ConnectivityGraph> for RawConnectivity {
    fn from(g: ConnectivityGraph) -> Self {
        RawConnectivity {
            n_physical: g.n_physical(),
            edges: g.edges(),
        }
    }
}

impl ConnectivityGraph {
    pub fn new(n_physical: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![BTreeSet::new(); n_physical];
        for (a, b) in edges {
            for q in [a, b] {
                if q >= n_physical {
                    return Err(Error::QubitOutOfRange {
                        index: q,
                        n_qubits: n_physical,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidOrder(format!("self-loop on physical qubit {a}")));
            }
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        Ok(ConnectivityGraph { adjacency })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        ConnectivityGraph::new(n, edges).expect("complete graph is valid")
    }

    pub fn edgeless(n: usize) -> Self {
        ConnectivityGraph {
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    pub fn path(n: usize) -> Self {
        ConnectivityGraph::new(n, (1..n).map(|b| (b - 1, b))).expect("path graph is valid")
    }

    /// `rows x cols` square lattice, qubit `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let q = r * cols + c;
                if c + 1 < cols {
                    edges.push((q, q + 1));
                }
                if r + 1 < rows {
                    edges.push((q, q + cols));
                }
            }
        }
        ConnectivityGraph::new(rows * cols, edges).expect("grid graph is valid")
    }

    /// Parses an edge list: one `i j` pair per line, 0-based, `#` comments.
    /// The device size is one more than the largest index mentioned.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let bad = || Error::MalformedLine {
                line: i + 1,
                reason: "expected `<qubit> <qubit>`".into(),
            };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [a, b] = fields[..] else { return Err(bad()) };
            let a: usize = a.parse().map_err(|_| bad())?;
            let b: usize = b.parse().map_err(|_| bad())?;
            if a == b {
                return Err(Error::MalformedLine {
                    line: i + 1,
                    reason: format!("self-loop on qubit {a}"),
                });
            }
            edges.push((a, b));
        }
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        ConnectivityGraph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        self.edges().iter().map(|(a, b)| format!("{a} {b}\n")).collect()
    }

    pub fn n_physical(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adjacency.len() && self.adjacency[a].contains(&b)
    }

    pub fn neighbors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[q].iter().copied()
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.range(a + 1..).map(move |&b| (a, b)))
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub(crate) fn remove_edge(&mut self, a: usize, b: usize) {
        self.adjacency[a].remove(&b);
        self.adjacency[b].remove(&a);
    }

    /// BFS hop distances from `source`; `None` for unreachable qubits.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n_physical()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(q) = queue.pop_front() {
            let d = dist[q].unwrap();
            for n in self.neighbors(q) {
                if dist[n].is_none() {
                    dist[n] = Some(d + 1);
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        self.distances_from(a)[b]
    }

    /// Whether the subgraph induced by `nodes` is connected (true for zero or one node).
    pub fn induced_connected(&self, nodes: &[usize]) -> bool {
        let Some(&start) = nodes.first() else { return true };
        let inside: BTreeSet<usize> = nodes.iter().copied().collect();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(q) = stack.pop() {
            for n in self.neighbors(q) {
                if inside.contains(&n) && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        seen.len() == inside.len()
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.n_physical()).collect();
        self.induced_connected(&all)
    }

    /// SHA-256 of the canonical edge-list text, prefixed by the device size.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{}\n", self.n_physical()));
        hasher.update(self.to_text());
        hex::encode(hasher.finalize())
    }
}

/// The 27-qubit heavy-hex coupling map of the `ibmq_montreal` device.
pub fn ibmq_montreal() -> ConnectivityGraph {
    const EDGES: [(usize, usize); 28] = [
        (0, 1),
        (1, 2),
        (1, 4),
        (2, 3),
        (3, 5),
        (4, 7),
        (5, 8),
        (6, 7),
        (7, 10),
        (8, 9),
        (8, 11),
        (10, 12),
        (11, 14),
        (12, 13),
        (12, 15),
        (13, 14),
        (14, 16),
        (15, 18),
        (16, 19),
        (17, 18),
        (18, 21),
        (19, 20),
        (19, 22),
        (21, 23),
        (22, 25),
        (23, 24),
        (24, 25),
        (25, 26),
    ];
    ConnectivityGraph::new(27, EDGES).expect("static edge list is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge_list() {
        let g = ConnectivityGraph::parse("# line\n0 1\n1 2 # tail\n\n").unwrap();
        assert_eq!(g.n_physical(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 2));
        assert!(ConnectivityGraph::parse("1 1").is_err());
        assert!(ConnectivityGraph::parse("0 x").is_err());
        assert!(ConnectivityGraph::parse("0 1 2").is_err());
    }

    #[test]
    fn distances_on_path() {
        let g = ConnectivityGraph::path(5);
        assert_eq!(g.distance(0, 3), Some(3));
        let split = ConnectivityGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(split.distance(0, 3), None);
        assert!(!split.is_connected());
        assert!(split.induced_connected(&[2, 3]));
    }

    #[test]
    fn montreal_is_connected_heavy_hex() {
        let g = ibmq_montreal();
        assert_eq!(g.n_physical(), 27);
        assert_eq!(g.n_edges(), 28);
        assert!(g.is_connected());
        assert!((0..27).all(|q| g.degree(q) <= 3));
    }

    #[test]
    fn digest_is_canonical() {
        let a = ConnectivityGraph::parse("1 0\n2 1").unwrap();
        let b = ConnectivityGraph::parse("1 2\n0 1").unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), ConnectivityGraph::path(4).digest());
    }
}
