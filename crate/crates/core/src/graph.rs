// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Immutable simple graphs with per-vertex adjacency lists.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Dense 0-based vertex index.
pub type VertexId = usize;
/// Index into [`Graph::edges`].
pub type EdgeId = usize;

/// A finite, undirected, simple graph.
///
/// Edge ids are positions in the edge list and stay stable for the lifetime
/// of the graph. Every edge `e = (u, v)` appears as `(v, e)` in the adjacency
/// list of `u` and as `(u, e)` in the adjacency list of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph on vertices `0..n`, rejecting self-loops, duplicate
    /// edges (in either orientation) and out-of-range endpoints.
    pub fn new(n: usize, edge_pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edge_pairs.len());
        for (i, &(u, v)) in edge_pairs.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::MalformedInput(format!(
                    "edge {i} ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::MalformedInput(format!(
                    "edge {i} is a self-loop at {u}"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::MalformedInput(format!(
                    "edge {i} ({u}, {v}) is a duplicate"
                )));
            }
        }
        Ok(Self::from_simple_edges(n, edge_pairs.to_vec()))
    }

    /// Builds the adjacency structure for an edge list already known to be
    /// simple and in range.
    pub(crate) fn from_simple_edges(n: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut adjacency: Vec<Vec<(VertexId, EdgeId)>> =
            degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for (e, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        let max_degree = degree.into_iter().max().unwrap_or(0);
        Self {
            n,
            edges,
            adjacency,
            max_degree,
        }
    }

    /// A graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_simple_edges(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Maximum degree, Delta.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `x`.
    #[inline]
    pub fn other_endpoint(&self, e: EdgeId, x: VertexId) -> VertexId {
        let (u, v) = self.edges[e];
        debug_assert!(x == u || x == v, "vertex {x} is not on edge {e}");
        if u == x {
            v
        } else {
            u
        }
    }

    /// `(neighbor, edge id)` pairs incident to `x`.
    pub fn neighbors(&self, x: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.adjacency[x].len()
    }

    /// Linear scan of the adjacency list of `u`.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, e)| e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.other_endpoint(2, 0), 2);
        assert_eq!(g.find_edge(0, 2), Some(2));
        assert_eq!(g.find_edge(2, 0), Some(2));
    }

    #[test]
    fn rejects_self_loop() {
        assert!(matches!(
            Graph::new(1, &[(0, 0)]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn rejects_duplicate_in_either_orientation() {
        assert!(matches!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1), (0, 1)]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn adjacency_is_symmetric_and_max_degree_exact() {
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        assert_eq!(g.max_degree(), 3);
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            assert!(g.neighbors(u).contains(&(v, e)));
            assert!(g.neighbors(v).contains(&(u, e)));
        }
        let total: usize = (0..5).map(|x| g.degree(x)).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn empty_graph() {
        let g = Graph::empty(4);
        assert_eq!(g.max_degree(), 0);
        assert_eq!(g.edge_count(), 0);
    }
}
