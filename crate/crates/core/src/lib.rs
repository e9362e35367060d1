//! Graph-state manipulation at the graph level.
//!
//! Graphs are labeled simple graphs on labels `0..=63`. The crate provides
//! local complementation, the graph actions of Pauli X/Y/Z measurements, CZ
//! edge toggles, foliage (leaves, axils, twins), LC orbits and equivalence,
//! and a vertex-minor search that decides Bell-pair extraction with
//! replayable witnesses.
//!
//! ```
//! use vminor_core::{Graph, PauliBasis, BellPairTarget, SearchConfig, can_extract_bell_pairs};
//!
//! let ring = Graph::ring(6).unwrap();
//! let five = ring.measure(1, PauliBasis::Y).unwrap();
//! assert_eq!(five, Graph::cycle_through(&[2, 3, 4, 5, 6]).unwrap());
//!
//! let crossing = BellPairTarget::new((1, 3), (2, 4)).unwrap();
//! let report = can_extract_bell_pairs(&ring, &crossing, &SearchConfig::default()).unwrap();
//! assert!(!report.decision);
//! ```

pub mod dot;
pub mod enumerate;
pub mod foliage;
pub mod graph;
pub mod harness;
pub mod io;
pub mod orbit;
pub mod search;
pub mod session;

pub use dot::to_dot;
pub use foliage::FoliageDecomposition;
pub use graph::{mask_iter, mask_of, Graph, GraphError, GraphKind, PauliBasis, Vertex, MAX_LABELS};
pub use io::{parse_graph, parse_graph_auto, to_edgelist, to_json, Format, GraphDocument, ParseError};
pub use orbit::{is_lc_equivalent, lc_orbit, lc_path, LcOrbit, DEFAULT_ORBIT_CAP};
pub use search::{
    apply_leaf_axil_reduction, can_extract_bell_pairs, is_vertex_minor, BellPairTarget, MeasurementOrder,
    MeasurementSequence, MeasurementStep, SearchConfig, SearchError, SearchStats, VertexMinorReport, Witness,
    DEFAULT_BUDGET,
};
