//! Labeled simple graphs stored as symmetric GF(2) bit matrices.
//!
//! Every vertex label lives in `0..64` and owns one `u64` adjacency row, so
//! local complementation is a handful of XORs. Labels are stable: deleting a
//! vertex leaves a gap and never renumbers the survivors.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex label.
pub type Vertex = u8;

/// Number of addressable labels (`0..=63`).
pub const MAX_LABELS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not present in the graph")]
    VertexAbsent(Vertex),
    #[error("vertex {0} is already present in the graph")]
    DuplicateVertex(Vertex),
    #[error("label {0} is out of range (labels must lie in 0..=63)")]
    LabelOutOfRange(u64),
    #[error("size {0} is out of range for a named graph (1..=63)")]
    SizeOutOfRange(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {w} is not a neighbour of {v}")]
    NotNeighbour { v: Vertex, w: Vertex },
}

#[inline]
pub(crate) fn bit(v: Vertex) -> u64 {
    1u64 << v
}

/// Iterate the set bits of `mask` in ascending order.
pub fn mask_iter(mut mask: u64) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as Vertex;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn mask_of<I: IntoIterator<Item = Vertex>>(vertices: I) -> u64 {
    vertices.into_iter().fold(0, |m, v| m | bit(v))
}

/// Named graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Ring,
    Line,
    Complete,
}

impl std::str::FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ring" | "cycle" => Ok(GraphKind::Ring),
            "line" | "path" => Ok(GraphKind::Line),
            "complete" => Ok(GraphKind::Complete),
            other => Err(format!("unknown graph kind `{other}` (expected ring, line or complete)")),
        }
    }
}

/// Measurement basis for the Pauli graph actions.
///
/// `X` may name its special neighbour; when it does not, the lowest-labeled
/// neighbour is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "basis")]
pub enum PauliBasis {
    Z,
    Y,
    X {
        #[serde(default, rename = "w", skip_serializing_if = "Option::is_none")]
        special: Option<Vertex>,
    },
}

impl PauliBasis {
    /// The enumeration order used by the vertex-minor search.
    pub const SEARCH_ORDER: [PauliBasis; 3] =
        [PauliBasis::Z, PauliBasis::Y, PauliBasis::X { special: None }];

    pub fn x() -> Self {
        PauliBasis::X { special: None }
    }
}

impl fmt::Display for PauliBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PauliBasis::Z => f.write_str("Z"),
            PauliBasis::Y => f.write_str("Y"),
            PauliBasis::X { special: None } => f.write_str("X"),
            PauliBasis::X { special: Some(w) } => write!(f, "X(w={w})"),
        }
    }
}

impl std::str::FromStr for PauliBasis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" => Ok(PauliBasis::Z),
            "Y" | "y" => Ok(PauliBasis::Y),
            "X" | "x" => Ok(PauliBasis::x()),
            other => Err(format!("unknown Pauli basis `{other}` (expected X, Y or Z)")),
        }
    }
}

/// A labeled simple graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: u64,
    adj: [u64; MAX_LABELS],
}

impl Default for Graph {
    fn default() -> Self {
        Self::empty()
    }
}

impl Graph {
    pub const fn empty() -> Self {
        Graph { vertices: 0, adj: [0; MAX_LABELS] }
    }

    /// An edgeless graph on the given labels.
    pub fn with_vertices<I: IntoIterator<Item = Vertex>>(labels: I) -> Result<Self, GraphError> {
        let mut g = Graph::empty();
        for v in labels {
            g.add_vertex(v)?;
        }
        Ok(g)
    }

    /// An edgeless graph on every label in `mask`.
    pub fn from_mask(mask: u64) -> Self {
        Graph { vertices: mask, adj: [0; MAX_LABELS] }
    }

    /// Build from vertices and edges, rejecting self-loops and duplicate edges.
    pub fn from_edges<I, E>(labels: I, edges: E) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::with_vertices(labels)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Ring, line or complete graph on labels `1..=n`.
    pub fn named(kind: GraphKind, n: usize) -> Result<Self, GraphError> {
        if n == 0 || n >= MAX_LABELS {
            return Err(GraphError::SizeOutOfRange(n));
        }
        let labels = 1..=n as Vertex;
        let mut g = Graph::with_vertices(labels.clone())?;
        match kind {
            GraphKind::Line | GraphKind::Ring => {
                for v in 1..n as Vertex {
                    g.set_edge(v, v + 1, true);
                }
                // (n,1) closes the ring; for n <= 2 it is a loop or already present.
                if kind == GraphKind::Ring && n > 2 {
                    g.set_edge(n as Vertex, 1, true);
                }
            }
            GraphKind::Complete => {
                for u in labels.clone() {
                    for v in (u + 1)..=n as Vertex {
                        g.set_edge(u, v, true);
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn ring(n: usize) -> Result<Self, GraphError> {
        Self::named(GraphKind::Ring, n)
    }

    pub fn line(n: usize) -> Result<Self, GraphError> {
        Self::named(GraphKind::Line, n)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::named(GraphKind::Complete, n)
    }

    /// A path visiting `order` in sequence.
    pub fn path_through(order: &[Vertex]) -> Result<Self, GraphError> {
        Graph::from_edges(order.iter().copied(), order.windows(2).map(|w| (w[0], w[1])))
    }

    /// A cycle visiting `order` in sequence.
    pub fn cycle_through(order: &[Vertex]) -> Result<Self, GraphError> {
        let mut g = Graph::path_through(order)?;
        if order.len() > 2 {
            g.add_edge(order[order.len() - 1], order[0])?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<(), GraphError> {
        if v as usize >= MAX_LABELS {
            return Err(GraphError::LabelOutOfRange(v as u64));
        }
        if self.contains(v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.vertices |= bit(v);
        Ok(())
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check_present(u)?;
        self.check_present(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.set_edge(u, v, true);
        Ok(())
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: Vertex, v: Vertex, on: bool) {
        debug_assert!(u != v);
        if on {
            self.adj[u as usize] |= bit(v);
            self.adj[v as usize] |= bit(u);
        } else {
            self.adj[u as usize] &= !bit(v);
            self.adj[v as usize] &= !bit(u);
        }
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        (v as usize) < MAX_LABELS && self.vertices & bit(v) != 0
    }

    pub(crate) fn check_present(&self, v: Vertex) -> Result<(), GraphError> {
        if (v as usize) >= MAX_LABELS {
            Err(GraphError::LabelOutOfRange(v as u64))
        } else if !self.contains(v) {
            Err(GraphError::VertexAbsent(v))
        } else {
            Ok(())
        }
    }

    /// Bit mask of present labels.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        self.vertices
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        mask_iter(self.vertices)
    }

    pub fn len(&self) -> usize {
        self.vertices.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.vertices == 0
    }

    /// Adjacency row of `v` as a bit mask (zero for absent labels).
    #[inline]
    pub fn neighbourhood(&self, v: Vertex) -> u64 {
        self.adj.get(v as usize).copied().unwrap_or(0)
    }

    pub fn neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> {
        mask_iter(self.neighbourhood(v))
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> u32 {
        self.neighbourhood(v).count_ones()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        (v as usize) < MAX_LABELS && self.neighbourhood(u) & bit(v) != 0
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| {
            let above = if u == 63 { 0 } else { !0u64 << (u + 1) };
            mask_iter(self.adj[u as usize] & above).map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.degree(v) as usize).sum::<usize>() / 2
    }

    /// Local complementation at `v`: toggle every edge inside `N_v`.
    pub fn local_complement(&self, v: Vertex) -> Result<Graph, GraphError> {
        self.check_present(v)?;
        let mut g = *self;
        g.local_complement_in_place(v);
        Ok(g)
    }

    /// Unchecked in-place local complementation; `v` must be present.
    #[inline]
    pub fn local_complement_in_place(&mut self, v: Vertex) {
        let nb = self.adj[v as usize];
        for u in mask_iter(nb) {
            self.adj[u as usize] ^= nb & !bit(u);
        }
    }

    /// Apply a sequence of local complementations in order.
    pub fn local_complement_seq(&self, path: &[Vertex]) -> Result<Graph, GraphError> {
        let mut g = *self;
        for &v in path {
            g.check_present(v)?;
            g.local_complement_in_place(v);
        }
        Ok(g)
    }

    /// Delete `v` together with its row and column.
    pub fn delete_vertex(&self, v: Vertex) -> Result<Graph, GraphError> {
        self.check_present(v)?;
        let mut g = *self;
        g.delete_in_place(v);
        Ok(g)
    }

    #[inline]
    pub(crate) fn delete_in_place(&mut self, v: Vertex) {
        for u in mask_iter(self.adj[v as usize]) {
            self.adj[u as usize] &= !bit(v);
        }
        self.adj[v as usize] = 0;
        self.vertices &= !bit(v);
    }

    /// Subgraph induced on `mask & vertex_mask()`.
    pub fn induced(&self, mask: u64) -> Graph {
        let keep = mask & self.vertices;
        let mut g = Graph::from_mask(keep);
        for v in mask_iter(keep) {
            g.adj[v as usize] = self.adj[v as usize] & keep;
        }
        g
    }

    /// The neighbour an X measurement on `v` uses, or `None` if `v` is isolated.
    pub fn special_neighbour(&self, v: Vertex, basis: PauliBasis) -> Result<Option<Vertex>, GraphError> {
        self.check_present(v)?;
        match basis {
            PauliBasis::X { special: Some(w) } => {
                if self.contains(w) && self.has_edge(v, w) {
                    Ok(Some(w))
                } else {
                    Err(GraphError::NotNeighbour { v, w })
                }
            }
            PauliBasis::X { special: None } => Ok(mask_iter(self.adj[v as usize]).next()),
            _ => Ok(None),
        }
    }

    /// Graph action of a Pauli measurement of `v`.
    ///
    /// `Z` deletes `v`; `Y` is `Z_v ∘ τ_v`; `X` is `Z_v ∘ τ_w ∘ τ_v ∘ τ_w` for
    /// the special neighbour `w`. `X` on an isolated vertex is a plain
    /// deletion. Local-unitary byproducts are not tracked.
    pub fn measure(&self, v: Vertex, basis: PauliBasis) -> Result<Graph, GraphError> {
        let w = self.special_neighbour(v, basis)?;
        let mut g = *self;
        match basis {
            PauliBasis::Z => {}
            PauliBasis::Y => g.local_complement_in_place(v),
            PauliBasis::X { .. } => {
                if let Some(w) = w {
                    g.local_complement_in_place(w);
                    g.local_complement_in_place(v);
                    g.local_complement_in_place(w);
                }
            }
        }
        g.delete_in_place(v);
        Ok(g)
    }

    /// Toggle the edge `(u, v)`, the graph-level effect of a CZ gate.
    pub fn toggle_cz(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        self.check_present(u)?;
        self.check_present(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = *self;
        let on = !g.has_edge(u, v);
        g.set_edge(u, v, on);
        Ok(g)
    }

    /// Connected components as bit masks, ordered by their lowest label.
    pub fn component_masks(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut unseen = self.vertices;
        while unseen != 0 {
            let start = unseen & unseen.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for u in mask_iter(frontier) {
                    next |= self.adj[u as usize];
                }
                frontier = next & !comp;
                comp |= frontier;
            }
            unseen &= !comp;
            out.push(comp);
        }
        out
    }

    /// Connected components as sorted label lists, ordered by lowest label.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        self.component_masks().into_iter().map(|m| mask_iter(m).collect()).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_masks().len() <= 1
    }

    /// Upper-triangle bits over the present vertices, packed into words.
    ///
    /// Two graphs on the same vertex set are equal iff their keys are equal.
    pub fn edge_key(&self) -> Vec<u64> {
        let order: Vec<Vertex> = self.vertices().collect();
        let n = order.len();
        let bits = n * n.saturating_sub(1) / 2;
        let mut key = vec![0u64; bits.div_ceil(64).max(1)];
        let mut pos = 0usize;
        for (i, &u) in order.iter().enumerate() {
            let row = self.adj[u as usize];
            for &v in &order[i + 1..] {
                if row & bit(v) != 0 {
                    key[pos / 64] |= 1 << (pos % 64);
                }
                pos += 1;
            }
        }
        key
    }

    /// Check the structural invariants: symmetry, zero diagonal, no edges to absent labels.
    pub fn is_well_formed(&self) -> bool {
        (0..MAX_LABELS as Vertex).all(|v| {
            let row = self.adj[v as usize];
            if !self.contains(v) {
                return row == 0;
            }
            row & bit(v) == 0
                && row & !self.vertices == 0
                && mask_iter(row).all(|u| self.adj[u as usize] & bit(v) != 0)
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({self})")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::to_edgelist(self))
    }
}
