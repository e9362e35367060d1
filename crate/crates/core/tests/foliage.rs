//! Directed checks of how leaves, axils and twins move under single LCs.

use vminor_core::harness::{verify_foliage_invariance, FOLIAGE_EXHAUSTIVE_LIMIT};
use vminor_core::{Graph, Vertex};

fn twins(g: &Graph, v: Vertex, w: Vertex) -> bool {
    g.foliage().twins.contains(&(v.min(w), v.max(w)))
}

fn leaf_of(g: &Graph, leaf: Vertex, axil: Vertex) -> bool {
    let f = g.foliage();
    g.degree(leaf) == 1 && g.has_edge(leaf, axil) && f.leaves.contains(&leaf) && f.axils.contains(&axil)
}

/// Twins 2 and 3 share neighbours 1 and 4; 5 hangs off 1.
fn adjacent_twins() -> Graph {
    Graph::from_edges(1..=5, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (1, 5)]).unwrap()
}

#[test]
fn adjacent_twins_become_leaf_and_axil() {
    let g = adjacent_twins();
    assert!(twins(&g, 2, 3));
    let h = g.local_complement(3).unwrap();
    assert!(leaf_of(&h, 2, 3), "{h}");
    let h = g.local_complement(2).unwrap();
    assert!(leaf_of(&h, 3, 2), "{h}");
}

#[test]
fn distant_twins_become_adjacent_through_a_common_neighbour() {
    let g = adjacent_twins().toggle_cz(2, 3).unwrap();
    assert!(twins(&g, 2, 3) && !g.has_edge(2, 3));
    let h = g.local_complement(4).unwrap();
    assert!(twins(&h, 2, 3) && h.has_edge(2, 3), "{h}");
    // and on to a leaf: tau_w after tau_u
    assert!(leaf_of(&h.local_complement(3).unwrap(), 2, 3));
}

#[test]
fn leaf_and_axil_become_twins_and_swap_roles() {
    let g = Graph::from_edges(1..=5, [(1, 2), (2, 3), (2, 4), (3, 4), (4, 5)]).unwrap();
    assert!(leaf_of(&g, 1, 2));
    let h = g.local_complement(2).unwrap();
    assert!(twins(&h, 1, 2) && h.has_edge(1, 2), "{h}");
    let back = h.local_complement(1).unwrap();
    assert!(leaf_of(&back, 2, 1), "{back}");
}

#[test]
fn every_lc_around_a_twin_pair_keeps_the_foliage() {
    for g in [adjacent_twins(), adjacent_twins().toggle_cz(2, 3).unwrap()] {
        let members = g.foliage().members();
        for u in g.vertices() {
            assert_eq!(g.local_complement(u).unwrap().foliage().members(), members, "{g} at {u}");
        }
    }
}

#[test]
fn two_vertex_edge_is_leaf_axil_and_twin_at_once() {
    let k2 = Graph::complete(2).unwrap();
    let f = k2.foliage();
    assert_eq!(f.leaves.len(), 2);
    assert_eq!(f.axils.len(), 2);
    assert!(twins(&k2, 1, 2));
    assert_eq!(k2.local_complement(1).unwrap(), k2);
}

#[test]
fn harness_sweep_is_clean() {
    let report = verify_foliage_invariance(FOLIAGE_EXHAUSTIVE_LIMIT, 0).unwrap();
    assert!(report.confirmed(), "{report}");
    assert_eq!(report.graphs_checked, [1u64, 2, 8, 64, 1024, 32768].iter().sum::<u64>());
    let m = report.micro_transitions;
    assert!(m.adjacent_twins_to_leaf_axil > 0 && m.leaf_axil_to_twins > 0 && m.distant_twins_to_adjacent > 0);
}
