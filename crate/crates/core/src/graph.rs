//! Plain undirected simple graphs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    num_edges: usize,
}

impl Graph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut num_edges = 0;
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge {a}-{b} leaves 0..{n}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self loop at {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
            num_edges += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge at vertex {v}")));
            }
        }
        Ok(Graph { adj, num_edges })
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs at least 3 vertices")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Each edge once, as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Number of edges with exactly one endpoint on the `true` side.
    pub fn cut_width(&self, side: &[bool]) -> u64 {
        self.edges().filter(|&(a, b)| side[a] != side[b]).count() as u64
    }
}
