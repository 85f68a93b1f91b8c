//! Undirected multigraphs with a stored orientation.
//!
//! Vertices are dense indices `0..n`, and an edge's identity is its position in the edge
//! list. Loops and parallel edges are allowed. Every derived graph (contraction, deletion,
//! subgraph) carries explicit maps back to its parent so that edge labelings computed on
//! the child can be lifted.

mod lowlink;
mod menger;

pub use lowlink::{bridges, cut_vertices};
pub use menger::{two_disjoint_paths, two_paths_to_set};

use std::collections::VecDeque;

use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} has endpoint {vertex} outside 0..{n}")]
    EndpointOutOfRange { edge: EdgeId, vertex: Vertex, n: usize },
    #[error("edge {0} does not exist")]
    NoSuchEdge(EdgeId),
    #[error("edge {0} is a loop and cannot be contracted")]
    LoopContraction(EdgeId),
    #[error("structural precondition failed: {0}")]
    Structural(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        for (edge, &(a, b)) in edges.iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= n {
                    return Err(GraphError::EndpointOutOfRange { edge, vertex, n });
                }
            }
        }
        Ok(Self { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// `(tail, head)` of edge `e`.
    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (a, b) = self.edges[e];
        a == b
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    /// The endpoint of `e` that is not `v`. For a loop this is `v` itself.
    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// Edge incidences at `v`; a loop counts twice.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Incidence lists ordered by edge id: `adj[v]` holds `(edge, neighbour)` for every
    /// non-loop edge at `v`.
    pub fn adjacency(&self) -> Vec<Vec<(EdgeId, Vertex)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a != b {
                adj[a].push((e, b));
                adj[b].push((e, a));
            }
        }
        adj
    }

    pub fn components(&self) -> Components {
        self.components_avoiding(&[])
    }

    /// Components of the graph with every edge marked in `removed` ignored. An empty mask
    /// means no edge is removed.
    pub fn components_avoiding(&self, removed: &[bool]) -> Components {
        let adj = self.adjacency();
        let mut id = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if id[root] != usize::MAX {
                continue;
            }
            id[root] = count;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in &adj[v] {
                    if removed.get(e).copied().unwrap_or(false) || id[w] != usize::MAX {
                        continue;
                    }
                    id[w] = count;
                    queue.push_back(w);
                }
            }
            count += 1;
        }
        Components { id, count }
    }

    pub fn is_connected(&self) -> bool {
        self.components().count <= 1
    }

    /// Lowest-index cut vertex, together with the proper 1-separation it induces.
    ///
    /// The side containing the lowest-index edge not incident only to the cut vertex is
    /// `side1`; loops at the cut vertex are also put there.
    pub fn proper_one_separation(&self) -> Option<Separation> {
        let cut = cut_vertices(self).into_iter().position(|c| c)?;
        let adj = self.adjacency();
        // Component of G - cut that the first edge with a non-cut endpoint reaches.
        let start = self.edges.iter().find_map(|&(a, b)| {
            if a != cut {
                Some(a)
            } else if b != cut {
                Some(b)
            } else {
                None
            }
        })?;
        let mut in_first = vec![false; self.n];
        in_first[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &adj[v] {
                if w != cut && !in_first[w] {
                    in_first[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let (side1, side2) = (0..self.edge_count()).partition(|&e| {
            let (a, b) = self.edges[e];
            in_first[a] || in_first[b]
        });
        Some(Separation { side1, side2, cut_vertex: cut })
    }

    /// Contract the non-loop edge `e`, merging its endpoints into the lower index.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Contraction, GraphError> {
        if e >= self.edge_count() {
            return Err(GraphError::NoSuchEdge(e));
        }
        let (a, b) = self.edges[e];
        if a == b {
            return Err(GraphError::LoopContraction(e));
        }
        let (keep, gone) = (a.min(b), a.max(b));
        let vertex_map: Vec<Vertex> = (0..self.n)
            .map(|x| {
                let y = if x == gone { keep } else { x };
                if y > gone {
                    y - 1
                } else {
                    y
                }
            })
            .collect();
        let edge_map: Vec<EdgeId> = (0..self.edge_count()).filter(|&f| f != e).collect();
        let edges = edge_map
            .iter()
            .map(|&f| {
                let (x, y) = self.edges[f];
                (vertex_map[x], vertex_map[y])
            })
            .collect();
        Ok(Contraction { graph: Multigraph { n: self.n - 1, edges }, vertex_map, edge_map })
    }

    /// Remove the edges in `removed`; the vertex set is kept as is.
    pub fn delete_edges(&self, removed: &[EdgeId]) -> Subgraph {
        let mut mask = vec![false; self.edge_count()];
        for &e in removed {
            mask[e] = true;
        }
        let edges: Vec<EdgeId> = (0..self.edge_count()).filter(|&e| !mask[e]).collect();
        Subgraph {
            graph: Multigraph { n: self.n, edges: edges.iter().map(|&e| self.edges[e]).collect() },
            vertices: (0..self.n).collect(),
            edges,
        }
    }

    /// Subgraph on the given vertices and edges. Both lists are sorted so that the child's
    /// numbering follows the parent's; every listed edge must have both ends in `vertices`.
    pub fn subgraph(&self, vertices: &[Vertex], edges: &[EdgeId]) -> Subgraph {
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let child_edges = edges
            .iter()
            .map(|&e| {
                let (a, b) = self.edges[e];
                debug_assert!(local[a] != usize::MAX && local[b] != usize::MAX);
                (local[a], local[b])
            })
            .collect();
        Subgraph { graph: Multigraph { n: vertices.len(), edges: child_edges }, vertices, edges }
    }

    /// Vertices spanned by an edge set.
    pub fn spanned_vertices(&self, edges: &[EdgeId]) -> Vec<Vertex> {
        let mut seen = vec![false; self.n];
        for &e in edges {
            let (a, b) = self.edges[e];
            seen[a] = true;
            seen[b] = true;
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    /// The same graph with edge `e` pointing the other way.
    pub fn reverse_edge(&self, e: EdgeId) -> Multigraph {
        let mut edges = self.edges.clone();
        let (a, b) = edges[e];
        edges[e] = (b, a);
        Multigraph { n: self.n, edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component id per vertex; ids are numbered in order of each component's lowest vertex.
    pub id: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn members(&self, component: usize) -> Vec<Vertex> {
        (0..self.id.len()).filter(|&v| self.id[v] == component).collect()
    }

    pub fn groups(&self) -> Vec<Vec<Vertex>> {
        let mut groups = vec![Vec::new(); self.count];
        for (v, &c) in self.id.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }
}

/// A 1-separation `(G1, G2)`: two edge sets partitioning `E` whose spanned vertex sets meet
/// exactly in `cut_vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub side1: Vec<EdgeId>,
    pub side2: Vec<EdgeId>,
    pub cut_vertex: Vertex,
}

impl Separation {
    pub fn swapped(self) -> Self {
        Self { side1: self.side2, side2: self.side1, cut_vertex: self.cut_vertex }
    }

    /// Checks the partition, the single shared vertex, and properness.
    pub fn is_proper_for(&self, g: &Multigraph) -> bool {
        let mut seen = vec![0u8; g.edge_count()];
        for &e in self.side1.iter().chain(&self.side2) {
            if e >= seen.len() {
                return false;
            }
            seen[e] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return false;
        }
        let v1 = g.spanned_vertices(&self.side1);
        let v2 = g.spanned_vertices(&self.side2);
        let shared: Vec<_> = v1.iter().filter(|v| v2.contains(v)).copied().collect();
        shared == [self.cut_vertex] && v1.iter().any(|v| !v2.contains(v)) && v2.iter().any(|v| !v1.contains(v))
    }
}

/// Result of contracting one edge.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Multigraph,
    /// Parent vertex -> child vertex.
    pub vertex_map: Vec<Vertex>,
    /// Child edge -> parent edge.
    pub edge_map: Vec<EdgeId>,
}

/// A subgraph with the maps back to its parent.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Multigraph,
    /// Child vertex -> parent vertex.
    pub vertices: Vec<Vertex>,
    /// Child edge -> parent edge.
    pub edges: Vec<EdgeId>,
}

impl Subgraph {
    /// Parent vertex -> child vertex, `None` for vertices outside the subgraph.
    pub fn local_index(&self, parent_n: usize) -> Vec<Option<Vertex>> {
        let mut local = vec![None; parent_n];
        for (i, &v) in self.vertices.iter().enumerate() {
            local[v] = Some(i);
        }
        local
    }

    pub fn restrict_mask(&self, mask: &[bool]) -> Vec<bool> {
        self.vertices.iter().map(|&v| mask[v]).collect()
    }
}

/// A walk `v0 e1 v1 ... ek vk` with pairwise distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn trivial(v: Vertex) -> Self {
        Self { vertices: vec![v], edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().expect("path has at least one vertex")
    }

    pub fn interior(&self) -> &[Vertex] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let mut edges = self.edges.clone();
        edges.reverse();
        Path { vertices, edges }
    }

    /// The segment between vertex positions `from` and `to` (inclusive), walked from
    /// `from`; reversed when `from > to`.
    pub fn segment(&self, from: usize, to: usize) -> Path {
        if from <= to {
            Path { vertices: self.vertices[from..=to].to_vec(), edges: self.edges[from..to].to_vec() }
        } else {
            self.segment(to, from).reversed()
        }
    }

    /// Append `next`, which must start where `self` ends.
    pub fn concat(mut self, next: &Path) -> Path {
        debug_assert_eq!(self.end(), next.start());
        self.vertices.extend_from_slice(&next.vertices[1..]);
        self.edges.extend_from_slice(&next.edges);
        self
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn map(&self, vertices: &[Vertex], edges: &[EdgeId]) -> Path {
        Path {
            vertices: self.vertices.iter().map(|&v| vertices[v]).collect(),
            edges: self.edges.iter().map(|&e| edges[e]).collect(),
        }
    }

    pub fn is_valid_in(&self, g: &Multigraph) -> bool {
        if self.vertices.len() != self.edges.len() + 1 {
            return false;
        }
        let mut seen = vec![false; g.vertex_count()];
        for &v in &self.vertices {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        self.edges.iter().enumerate().all(|(i, &e)| {
            if e >= g.edge_count() {
                return false;
            }
            let (a, b) = g.edge(e);
            let (x, y) = (self.vertices[i], self.vertices[i + 1]);
            (a, b) == (x, y) || (a, b) == (y, x)
        })
    }
}
