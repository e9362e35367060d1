//! Small-graph generators for exhaustive sweeps and sampling.

use rand::Rng;

use crate::graph::{Graph, Vertex};

/// Every labeled simple graph on `labels`, `2^(n choose 2)` of them.
pub fn all_labeled_graphs(labels: &[Vertex]) -> impl Iterator<Item = Graph> + '_ {
    let pairs: Vec<(Vertex, Vertex)> = labels
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| labels[i + 1..].iter().map(move |&v| (u, v)))
        .collect();
    assert!(pairs.len() < 40, "exhaustive enumeration is limited to 9 vertices");
    let base = Graph::with_vertices(labels.iter().copied()).expect("labels are distinct and in range");
    (0u64..1 << pairs.len()).map(move |bits| {
        let mut g = base;
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                g.set_edge(u, v, true);
            }
        }
        g
    })
}

/// Erdős–Rényi graph on `labels` with edge probability `p`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, labels: &[Vertex], p: f64) -> Graph {
    let mut g = Graph::with_vertices(labels.iter().copied()).expect("labels are distinct and in range");
    for (i, &u) in labels.iter().enumerate() {
        for &v in &labels[i + 1..] {
            if rng.random_bool(p) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(all_labeled_graphs(&[]).count(), 1);
        assert_eq!(all_labeled_graphs(&[1, 2, 3]).count(), 8);
        let all: HashSet<Graph> = all_labeled_graphs(&[1, 2, 3, 4]).collect();
        assert_eq!(all.len(), 64);
        assert!(all.iter().all(Graph::is_well_formed));
    }
}
