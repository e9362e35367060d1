//! Leaves, axils and twins.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{bit, mask_iter, Graph, Vertex};

/// Classification of a graph's foliage vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliageDecomposition {
    /// Degree-one vertices.
    pub leaves: BTreeSet<Vertex>,
    /// Unique neighbours of leaves.
    pub axils: BTreeSet<Vertex>,
    /// Unordered pairs `(v, w)`, `v < w`, with `N_v \ {w} = N_w \ {v}`.
    /// Pairs are reported whether or not `v` and `w` are adjacent.
    pub twins: BTreeSet<(Vertex, Vertex)>,
}

impl FoliageDecomposition {
    pub fn of(g: &Graph) -> Self {
        let mut out = FoliageDecomposition::default();
        for v in g.vertices() {
            if g.degree(v) == 1 {
                out.leaves.insert(v);
                out.axils.insert(g.neighbourhood(v).trailing_zeros() as Vertex);
            }
        }
        let order: Vec<Vertex> = g.vertices().collect();
        for (i, &v) in order.iter().enumerate() {
            let nv = g.neighbourhood(v);
            for &w in &order[i + 1..] {
                if nv & !bit(w) == g.neighbourhood(w) & !bit(v) {
                    out.twins.insert((v, w));
                }
            }
        }
        out
    }

    pub fn is_twin(&self, v: Vertex) -> bool {
        self.twins.iter().any(|&(a, b)| a == v || b == v)
    }

    /// Union of leaves, axils and twin-pair members, as a bit mask.
    pub fn member_mask(&self) -> u64 {
        let mut m = 0;
        for &v in self.leaves.iter().chain(&self.axils) {
            m |= bit(v);
        }
        for &(a, b) in &self.twins {
            m |= bit(a) | bit(b);
        }
        m
    }

    /// The foliage as a sorted vertex set.
    pub fn members(&self) -> BTreeSet<Vertex> {
        mask_iter(self.member_mask()).collect()
    }

    /// Leaves attached to `axil`, lowest label first.
    pub fn leaves_of(&self, g: &Graph, axil: Vertex) -> Vec<Vertex> {
        self.leaves.iter().copied().filter(|&l| g.has_edge(l, axil)).collect()
    }
}

impl Graph {
    pub fn foliage(&self) -> FoliageDecomposition {
        FoliageDecomposition::of(self)
    }
}
