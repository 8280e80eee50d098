use serde::{Deserialize, Serialize};

/// A finite simple graph on vertices `0..n`. Edges are stored as `(i, j)`
/// with `i < j`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl EdgeGraph {
    /// Builds a graph from arbitrary pairs; orientation and duplicates are
    /// normalized away. Panics on loops or out-of-range endpoints.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(i, j)| {
                assert!(i != j, "loop at vertex {i}");
                assert!(i < n && j < n, "edge ({i},{j}) out of range for n = {n}");
                (i.min(j), i.max(j))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        EdgeGraph { n, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        EdgeGraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Position of `{i, j}` in [`Self::edges`].
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edges.binary_search(&(i.min(j), i.max(j))).ok()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge_index(i, j).is_some()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors().iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_pairs() {
        let g = EdgeGraph::new(3, [(1, 0), (0, 1), (2, 1)]);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.edge_index(2, 1), Some(1));
        assert!(!g.has_edge(0, 2));
        assert!(g.is_connected());
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn complete_graph() {
        let k = EdgeGraph::complete(6);
        assert_eq!(k.edges().len(), 15);
        assert!(k.degrees().iter().all(|&d| d == 5));
    }

    #[test]
    fn disconnected() {
        assert!(!EdgeGraph::new(4, [(0, 1), (2, 3)]).is_connected());
    }
}
