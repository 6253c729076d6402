use std::collections::HashSet;

use super::ModelError;

/// Undirected weighted edge, 0-indexed, stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: i64,
}

/// Simple undirected graph with integer edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Validates and normalizes the edge list. Endpoints are swapped so that
    /// `i < j`; insertion order is otherwise preserved.
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b, weight) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(ModelError::VertexOutOfRange { vertex: a.max(b), n: n_vertices });
            }
            if a == b {
                return Err(ModelError::SelfLoop(a));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((i, j)) {
                return Err(ModelError::DuplicateEdge(i, j));
            }
            out.push(Edge { i, j, weight });
        }
        Ok(Self { n_vertices, edges: out })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `W_tot`, the sum of all edge weights.
    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn positive_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.weight > 0).count()
    }

    pub fn negative_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.weight < 0).count()
    }

    /// Edge density `2|E| / (|V|(|V|-1))`.
    pub fn density(&self) -> f64 {
        let n = self.n_vertices as f64;
        if self.n_vertices < 2 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / (n * (n - 1.0))
    }
}
