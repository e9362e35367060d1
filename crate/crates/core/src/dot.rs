//! Graphviz DOT rendering.

use std::fmt::Write;

use crate::foliage::FoliageDecomposition;
use crate::graph::Graph;

/// Render `g` as an undirected DOT graph, vertices and edges in label order.
///
/// With a foliage highlight, leaves, axils and twins get distinct fills and an
/// `xlabel` naming every class the vertex belongs to.
pub fn to_dot(g: &Graph, highlight: Option<&FoliageDecomposition>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in g.vertices() {
        let _ = write!(out, "  {v} [label=\"{v}\"");
        if let Some(f) = highlight {
            let mut classes = Vec::new();
            if f.leaves.contains(&v) {
                classes.push("leaf");
            }
            if f.axils.contains(&v) {
                classes.push("axil");
            }
            if f.is_twin(v) {
                classes.push("twin");
            }
            let fill = match classes.first() {
                Some(&"leaf") => Some("palegreen"),
                Some(&"axil") => Some("orange"),
                Some(&"twin") => Some("lightblue"),
                _ => None,
            };
            if let Some(fill) = fill {
                let _ = write!(out, ", style=filled, fillcolor={fill}, xlabel=\"{}\"", classes.join(","));
            }
        }
        out.push_str("];\n");
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    if let Some(f) = highlight {
        for (a, b) in &f.twins {
            let _ = writeln!(out, "  {a} -- {b} [style=dotted, constraint=false, color=blue];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2() {
        let dot = to_dot(&Graph::complete(2).unwrap(), None);
        assert_eq!(dot, "graph G {\n  node [shape=circle];\n  1 [label=\"1\"];\n  2 [label=\"2\"];\n  1 -- 2;\n}\n");
    }

    #[test]
    fn four_ring() {
        let dot = to_dot(&Graph::ring(4).unwrap(), None);
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert!(dot.contains("1 -- 4;"));
    }

    #[test]
    fn foliage_annotations() {
        let l3 = Graph::line(3).unwrap();
        let f = l3.foliage();
        let dot = to_dot(&l3, Some(&f));
        assert!(dot.contains("1 [label=\"1\", style=filled, fillcolor=palegreen, xlabel=\"leaf,twin\"]"));
        assert!(dot.contains("2 [label=\"2\", style=filled, fillcolor=orange, xlabel=\"axil\"]"));
        assert!(dot.contains("3 [label=\"3\", style=filled, fillcolor=palegreen, xlabel=\"leaf,twin\"]"));
        assert!(dot.contains("1 -- 3 [style=dotted"));
    }
}
