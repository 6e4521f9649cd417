use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Stored as `(i, j)` with `i < j`.
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Accepts edges in either orientation; duplicates collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("a graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::IndexOutOfRange {
                        field: "edge endpoint",
                        index: v,
                        size: n,
                    });
                }
            }
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop on vertex {i}")));
            }
            set.insert((i.min(j), i.max(j)));
        }
        Ok(Self { n, edges: set })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    /// Edge density `|E| / C(n, 2)`; zero for a single vertex.
    pub fn density(&self) -> f64 {
        let pairs = self.n * (self.n - 1) / 2;
        if pairs == 0 {
            0.0
        } else {
            self.edges.len() as f64 / pairs as f64
        }
    }

    /// Non-adjacent pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn complement_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Whether the vertices are pairwise adjacent. The empty set qualifies.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(k, &i)| {
            i < self.n && vertices[k + 1..].iter().all(|&j| i != j && self.has_edge(i, j))
        })
    }

    /// `{"n": .., "edges": [[i, j], ...]}` with 0-based endpoints.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(file.n, file.edges.into_iter().map(|[i, j]| (i, j)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
        })
        .expect("graph serializes")
    }

    /// DIMACS edge format: `c` comments, one `p edge n m` line, then `e i j`
    /// lines with 1-based vertices. The declared edge count is not enforced.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
            match parts.next() {
                None | Some("c") => {}
                Some("p") => {
                    if n.is_some() {
                        return Err(bad("duplicate problem line"));
                    }
                    let kind = parts.next().ok_or_else(|| bad("missing format"))?;
                    if kind != "edge" && kind != "col" {
                        return Err(bad("expected `p edge n m`"));
                    }
                    let count = parts
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| bad("bad vertex count"))?;
                    n = Some(count);
                }
                Some("e") => {
                    if n.is_none() {
                        return Err(bad("edge before problem line"));
                    }
                    let mut endpoint = || {
                        parts
                            .next()
                            .and_then(|s| s.parse::<usize>().ok())
                            .filter(|&v| v >= 1)
                            .ok_or_else(|| bad("bad edge endpoint"))
                    };
                    let i = endpoint()?;
                    let j = endpoint()?;
                    edges.push((i - 1, j - 1));
                }
                Some(other) => return Err(bad(&format!("unknown line type `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing `p edge` line".into()))?;
        Self::new(n, edges)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n, self.edges.len());
        for &(i, j) in &self.edges {
            out.push_str(&format!("e {} {}\n", i + 1, j + 1));
        }
        out
    }

    /// Reads JSON when the content starts with `{`, DIMACS otherwise.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if text.trim_start().starts_with('{') {
            Self::from_json(&text)
        } else {
            Self::from_dimacs(&text)
        }
    }
}

/// `G(n, p)`: each pair is an edge independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(erdos_renyi(6, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(6, 1.0, 1).unwrap(), Graph::complete(6).unwrap());
        assert!(erdos_renyi(6, 1.5, 1).is_err());
        assert!(erdos_renyi(6, -0.1, 1).is_err());
    }

    #[test]
    fn er_edge_count_is_binomial() {
        let g = erdos_renyi(100, 0.5, 42).unwrap();
        // mean 2475, sd √(4950/4)
        let sd = (4950.0f64 * 0.25).sqrt();
        assert!((g.edge_count() as f64 - 2475.0).abs() <= 4.0 * sd);
        assert_eq!(g, erdos_renyi(100, 0.5, 42).unwrap());
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c a comment\np edge 4 3\ne 1 2\ne 2 3\ne 4 3\n";
        let g = Graph::from_dimacs(text).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(Graph::from_dimacs(&g.to_dimacs()).unwrap(), g);
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::from_dimacs("e 1 2\n").is_err());
        assert!(Graph::from_dimacs("p edge 2 1\ne 0 1\n").is_err());
        assert!(Graph::from_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(Graph::from_json(r#"{"n": 2, "edges": [[0, 2]]}"#).is_err());
    }

    #[test]
    fn clique_membership() {
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert!(g.is_clique(&[]));
        assert!(g.is_clique(&[0, 1, 2]));
        assert!(!g.is_clique(&[0, 1, 3]));
        assert!(!g.is_clique(&[1, 1]));
        assert_eq!(g.complement_edges(), vec![(0, 3), (1, 3)]);
    }
}
