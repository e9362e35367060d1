//! Local-complementation orbits by breadth-first closure.

use std::collections::HashMap;

use crate::graph::{Graph, Vertex};
use crate::search::SearchError;

/// Default bound on the number of graphs an orbit may hold.
pub const DEFAULT_ORBIT_CAP: usize = 5_000_000;

/// The LC orbit of a graph, stored in BFS order with parent links.
///
/// Index 0 is the root. Every other member records the member it was reached
/// from and the vertex complemented on the way, so shortest LC paths from the
/// root can be rebuilt.
#[derive(Debug, Clone)]
pub struct LcOrbit {
    graphs: Vec<Graph>,
    parent: Vec<Option<(usize, Vertex)>>,
    index: HashMap<Vec<u64>, usize>,
}

impl LcOrbit {
    /// Enumerate every labeled graph reachable from `root` by local complementations.
    pub fn build(root: &Graph, cap: usize) -> Result<Self, SearchError> {
        if cap == 0 {
            return Err(SearchError::OrbitCapExceeded { cap });
        }
        let mut orbit = LcOrbit {
            graphs: vec![*root],
            parent: vec![None],
            index: HashMap::from([(root.edge_key(), 0)]),
        };
        // Isolated vertices have empty neighbourhoods; complementing them is a no-op.
        let movers: Vec<Vertex> = root.vertices().filter(|&v| root.degree(v) > 0).collect();
        let mut head = 0;
        while head < orbit.graphs.len() {
            let g = orbit.graphs[head];
            for &v in &movers {
                let mut next = g;
                next.local_complement_in_place(v);
                let key = next.edge_key();
                if orbit.index.contains_key(&key) {
                    continue;
                }
                if orbit.graphs.len() >= cap {
                    return Err(SearchError::OrbitCapExceeded { cap });
                }
                orbit.index.insert(key, orbit.graphs.len());
                orbit.graphs.push(next);
                orbit.parent.push(Some((head, v)));
            }
            head += 1;
        }
        Ok(orbit)
    }

    pub fn root(&self) -> &Graph {
        &self.graphs[0]
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }

    /// Position of `g` in the orbit, if it is a member.
    pub fn position(&self, g: &Graph) -> Option<usize> {
        if g.vertex_mask() != self.root().vertex_mask() {
            return None;
        }
        self.index.get(&g.edge_key()).copied()
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.position(g).is_some()
    }

    /// Shortest LC sequence taking the root to member `idx`.
    pub fn path_from_root(&self, mut idx: usize) -> Vec<Vertex> {
        let mut path = Vec::new();
        while let Some((p, v)) = self.parent[idx] {
            path.push(v);
            idx = p;
        }
        path.reverse();
        path
    }

    /// LC sequence taking member `idx` back to the root.
    ///
    /// Local complementations are involutions, so this is the root path reversed.
    pub fn path_to_root(&self, idx: usize) -> Vec<Vertex> {
        let mut path = self.path_from_root(idx);
        path.reverse();
        path
    }
}

/// The LC orbit of `g` in BFS order, or an error if it exceeds `cap` graphs.
pub fn lc_orbit(g: &Graph, cap: usize) -> Result<Vec<Graph>, SearchError> {
    Ok(LcOrbit::build(g, cap)?.into_graphs())
}

/// Shortest LC sequence turning `g` into `h`, if one exists.
pub fn lc_path(g: &Graph, h: &Graph, cap: usize) -> Result<Option<Vec<Vertex>>, SearchError> {
    if g.vertex_mask() != h.vertex_mask() {
        return Err(SearchError::VertexSetMismatch);
    }
    if g == h {
        return Ok(Some(Vec::new()));
    }
    // Cheap necessary condition: LC never changes the component partition.
    if g.component_masks() != h.component_masks() {
        return Ok(None);
    }
    let orbit = LcOrbit::build(g, cap)?;
    Ok(orbit.position(h).map(|i| orbit.path_from_root(i)))
}

/// Whether `h` lies in the LC orbit of `g`.
pub fn is_lc_equivalent(g: &Graph, h: &Graph, cap: usize) -> Result<bool, SearchError> {
    Ok(lc_path(g, h, cap)?.is_some())
}
