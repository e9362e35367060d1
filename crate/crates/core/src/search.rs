//! Vertex-minor decisions by enumerating Pauli measurement sequences.
//!
//! `H < G` holds iff some choice of one Pauli basis per vertex of
//! `V(G) \ V(H)`, applied in any fixed order, leaves a graph that is
//! LC-equivalent to `H`. The search walks that tree depth-first with bases in
//! the order Z, Y, X. With pruning on, every node first strips non-target
//! isolated vertices, leaves and axils (each strip is itself one of the
//! measurements, so witnesses stay replayable), and abandons the subtree when
//! some component of `H` is already split across components of the current
//! graph.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bit, mask_iter, Graph, GraphError, PauliBasis, Vertex};
use crate::orbit::{LcOrbit, DEFAULT_ORBIT_CAP};

/// Default work budget (search nodes plus orbit members) per query.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("LC orbit exceeds the cap of {cap} graphs")]
    OrbitCapExceeded { cap: usize },
    #[error("search work budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("graphs are on different vertex sets")]
    VertexSetMismatch,
    #[error("target vertices {missing:?} are not present in the source graph")]
    NotSubset { missing: Vec<Vertex> },
    #[error("vertex {0} belongs to the target vertex set")]
    TargetVertex(Vertex),
    #[error("vertex {0} is neither a leaf nor an axil")]
    NotLeafOrAxil(Vertex),
    #[error("invalid Bell-pair target: {0}")]
    InvalidTarget(String),
    #[error("measurement sequence measures vertex {0} twice")]
    RepeatedVertex(Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl SearchError {
    /// Errors that mean "instance too large" rather than "bad input".
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, SearchError::OrbitCapExceeded { .. } | SearchError::BudgetExceeded { .. })
    }
}

/// Order in which the measured vertices are enumerated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: u64,
    pub orbit_cap: usize,
    pub pruning: bool,
    pub order: MeasurementOrder,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            orbit_cap: DEFAULT_ORBIT_CAP,
            pruning: true,
            order: MeasurementOrder::Ascending,
        }
    }
}

impl SearchConfig {
    pub fn brute_force() -> Self {
        SearchConfig { pruning: false, ..Self::default() }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        SearchConfig { budget, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementStep {
    pub vertex: Vertex,
    #[serde(flatten)]
    pub basis: PauliBasis,
}

impl fmt::Display for MeasurementStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.basis, self.vertex)
    }
}

/// An ordered list of single-vertex Pauli measurements on distinct vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasurementSequence(pub Vec<MeasurementStep>);

impl MeasurementSequence {
    pub fn new(steps: Vec<MeasurementStep>) -> Result<Self, SearchError> {
        let mut seen = 0u64;
        for s in &steps {
            if s.vertex < 64 && seen & bit(s.vertex) != 0 {
                return Err(SearchError::RepeatedVertex(s.vertex));
            }
            if s.vertex < 64 {
                seen |= bit(s.vertex);
            }
        }
        Ok(MeasurementSequence(steps))
    }

    pub fn steps(&self) -> &[MeasurementStep] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Apply the measurements left to right.
    pub fn apply(&self, g: &Graph) -> Result<Graph, GraphError> {
        self.0.iter().try_fold(*g, |g, s| g.measure(s.vertex, s.basis))
    }
}

impl fmt::Display for MeasurementSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        if parts.is_empty() {
            f.write_str("(none)")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Certificate for a positive vertex-minor decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub measurements: MeasurementSequence,
    pub lc_path: Vec<Vertex>,
}

impl Witness {
    /// Measurements first, then local complementations.
    pub fn replay(&self, g: &Graph) -> Result<Graph, GraphError> {
        self.measurements.apply(g)?.local_complement_seq(&self.lc_path)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Search-tree nodes expanded.
    pub nodes_visited: u64,
    /// Complete measurement sequences checked against the target orbit.
    pub sequences_tried: u64,
    /// Size of the target's LC orbit, if it had to be built.
    pub orbit_size: u64,
    pub isolated_reductions: u64,
    pub leaf_reductions: u64,
    pub axil_reductions: u64,
    /// Subtrees cut because a target component was already split.
    pub component_prunes: u64,
    /// Work charged against the budget.
    pub work: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMinorReport {
    pub decision: bool,
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

/// Two disjoint vertex pairs, the `K2 ∪ K2` extraction target.
///
/// Stored canonically: `a1 < a2`, `b1 < b2`, `a1 < b1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTarget", into = "RawTarget")]
pub struct BellPairTarget {
    a: (Vertex, Vertex),
    b: (Vertex, Vertex),
}

#[derive(Serialize, Deserialize)]
struct RawTarget {
    pair_a: (Vertex, Vertex),
    pair_b: (Vertex, Vertex),
}

impl TryFrom<RawTarget> for BellPairTarget {
    type Error = SearchError;

    fn try_from(raw: RawTarget) -> Result<Self, Self::Error> {
        BellPairTarget::new(raw.pair_a, raw.pair_b)
    }
}

impl From<BellPairTarget> for RawTarget {
    fn from(t: BellPairTarget) -> Self {
        RawTarget { pair_a: t.a, pair_b: t.b }
    }
}

impl BellPairTarget {
    pub fn new(pair_a: (Vertex, Vertex), pair_b: (Vertex, Vertex)) -> Result<Self, SearchError> {
        let labels = [pair_a.0, pair_a.1, pair_b.0, pair_b.1];
        if let Some(&bad) = labels.iter().find(|&&v| v >= 64) {
            return Err(SearchError::InvalidTarget(format!("label {bad} is out of range")));
        }
        if mask_of_labels(&labels).count_ones() != 4 {
            return Err(SearchError::InvalidTarget(format!("labels {labels:?} are not distinct")));
        }
        let sort = |(x, y): (Vertex, Vertex)| (x.min(y), x.max(y));
        let (mut a, mut b) = (sort(pair_a), sort(pair_b));
        if b.0 < a.0 {
            std::mem::swap(&mut a, &mut b);
        }
        Ok(BellPairTarget { a, b })
    }

    pub fn pair_a(&self) -> (Vertex, Vertex) {
        self.a
    }

    pub fn pair_b(&self) -> (Vertex, Vertex) {
        self.b
    }

    pub fn labels(&self) -> [Vertex; 4] {
        [self.a.0, self.a.1, self.b.0, self.b.1]
    }

    pub fn label_mask(&self) -> u64 {
        mask_of_labels(&self.labels())
    }

    /// `a1 < b1 < a2 < b2`.
    pub fn is_crossing(&self) -> bool {
        self.a.0 < self.b.0 && self.b.0 < self.a.1 && self.a.1 < self.b.1
    }

    /// `K2 ∪ K2` on the four labels.
    pub fn graph(&self) -> Graph {
        let mut g = Graph::from_mask(self.label_mask());
        g.set_edge(self.a.0, self.a.1, true);
        g.set_edge(self.b.0, self.b.1, true);
        g
    }
}

impl fmt::Display for BellPairTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) ({},{})", self.a.0, self.a.1, self.b.0, self.b.1)
    }
}

fn mask_of_labels(labels: &[Vertex]) -> u64 {
    labels.iter().fold(0, |m, &v| m | bit(v))
}

/// What a single leaf/axil/isolated reduction did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reduction {
    Isolated,
    Leaf,
    Axil,
}

/// Find the lowest non-target vertex that can be stripped and the measurement that strips it.
///
/// An isolated vertex or a leaf is deleted (a Z measurement). An axil `v`
/// with leaf `w` becomes `τ_w ∘ τ_v(G) \ v`, which equals an X measurement
/// of `v` with special neighbour `w` because `τ_w` is trivial while `w` is a leaf.
///
/// Deleting a leaf discards the branch where X on the leaf cuts its axil
/// loose. That branch only matters when the axil is an isolated vertex of
/// the target, so such leaves (and, symmetrically, axils whose leaf is an
/// isolated target vertex) are left to the full enumeration.
fn next_reduction(g: &Graph, keep: u64, isolated_targets: u64) -> Option<(MeasurementStep, Reduction)> {
    for v in mask_iter(g.vertex_mask() & !keep) {
        match g.degree(v) {
            0 => return Some((MeasurementStep { vertex: v, basis: PauliBasis::Z }, Reduction::Isolated)),
            1 if g.neighbourhood(v) & isolated_targets == 0 => {
                return Some((MeasurementStep { vertex: v, basis: PauliBasis::Z }, Reduction::Leaf))
            }
            1 => {}
            _ => {
                let leaf = g.neighbours(v).find(|&w| g.degree(w) == 1 && isolated_targets & bit(w) == 0);
                if let Some(w) = leaf {
                    let basis = PauliBasis::X { special: Some(w) };
                    return Some((MeasurementStep { vertex: v, basis }, Reduction::Axil));
                }
            }
        }
    }
    None
}

/// Strip one leaf or axil `v` outside `target_labels`, keeping the vertex-minor answer unchanged.
///
/// A leaf is deleted. An axil is replaced by `τ_w ∘ τ_v(G) \ v` for its
/// lowest-labeled leaf `w`. A vertex that is both (a `K2` component) is
/// treated as a leaf.
///
/// The vertex-minor answer is preserved for every target on `target_labels`
/// in which the surviving partner (the axil of a deleted leaf, or the leaf
/// of a stripped axil) is not an isolated vertex. On the line 1-2-3, X on
/// leaf 3 leaves 1 and 2 disconnected, which deleting 3 cannot reach.
pub fn apply_leaf_axil_reduction(g: &Graph, target_labels: u64, v: Vertex) -> Result<Graph, SearchError> {
    g.check_present(v)?;
    if target_labels & bit(v) != 0 {
        return Err(SearchError::TargetVertex(v));
    }
    if g.degree(v) == 1 {
        return Ok(g.delete_vertex(v)?);
    }
    let leaf = g.neighbours(v).find(|&w| g.degree(w) == 1).ok_or(SearchError::NotLeafOrAxil(v))?;
    let reduced = g.local_complement(v)?.local_complement(leaf)?.delete_vertex(v)?;
    Ok(reduced)
}

/// True when every component of `h` sits inside a single component of `g`.
fn components_compatible(g_components: &[u64], h_components: &[u64]) -> bool {
    h_components.iter().all(|&hc| g_components.iter().any(|&gc| hc & !gc == 0))
}

struct Searcher<'a> {
    target: &'a Graph,
    keep: u64,
    isolated_targets: u64,
    target_components: Vec<u64>,
    config: SearchConfig,
    orbit: Option<LcOrbit>,
    stats: SearchStats,
}

impl Searcher<'_> {
    fn charge(&mut self, units: u64) -> Result<(), SearchError> {
        self.stats.work = self.stats.work.saturating_add(units);
        if self.stats.work > self.config.budget {
            Err(SearchError::BudgetExceeded { budget: self.config.budget })
        } else {
            Ok(())
        }
    }

    /// LC path from `g` to the target, if `g` lies in the target's orbit.
    fn path_to_target(&mut self, g: &Graph) -> Result<Option<Vec<Vertex>>, SearchError> {
        if g == self.target {
            return Ok(Some(Vec::new()));
        }
        if g.component_masks() != self.target_components {
            return Ok(None);
        }
        if self.orbit.is_none() {
            let orbit = LcOrbit::build(self.target, self.config.orbit_cap)?;
            self.stats.orbit_size = orbit.len() as u64;
            self.charge(orbit.len() as u64)?;
            self.orbit = Some(orbit);
        }
        let orbit = self.orbit.as_ref().expect("orbit built above");
        Ok(orbit.position(g).map(|i| orbit.path_to_root(i)))
    }

    fn dfs(&mut self, mut g: Graph, steps: &mut Vec<MeasurementStep>) -> Result<Option<Vec<Vertex>>, SearchError> {
        self.stats.nodes_visited += 1;
        self.charge(1)?;
        let mark = steps.len();

        if self.config.pruning {
            while let Some((step, kind)) = next_reduction(&g, self.keep, self.isolated_targets) {
                g = g.measure(step.vertex, step.basis)?;
                steps.push(step);
                match kind {
                    Reduction::Isolated => self.stats.isolated_reductions += 1,
                    Reduction::Leaf => self.stats.leaf_reductions += 1,
                    Reduction::Axil => self.stats.axil_reductions += 1,
                }
            }
            if !components_compatible(&g.component_masks(), &self.target_components) {
                self.stats.component_prunes += 1;
                steps.truncate(mark);
                return Ok(None);
            }
        }

        let remaining = g.vertex_mask() & !self.keep;
        if remaining == 0 {
            self.stats.sequences_tried += 1;
            let found = self.path_to_target(&g)?;
            if found.is_none() {
                steps.truncate(mark);
            }
            return Ok(found);
        }

        let v = match self.config.order {
            MeasurementOrder::Ascending => remaining.trailing_zeros(),
            MeasurementOrder::Descending => 63 - remaining.leading_zeros(),
        } as Vertex;
        for basis in PauliBasis::SEARCH_ORDER {
            let resolved = match basis {
                PauliBasis::X { .. } => PauliBasis::X { special: g.special_neighbour(v, basis)? },
                other => other,
            };
            let child = g.measure(v, resolved)?;
            steps.push(MeasurementStep { vertex: v, basis: resolved });
            if let Some(path) = self.dfs(child, steps)? {
                return Ok(Some(path));
            }
            steps.pop();
        }
        steps.truncate(mark);
        Ok(None)
    }
}

/// Decide whether `h` is a vertex-minor of `g`.
///
/// A `true` report carries a witness that replays on `g` to exactly `h`.
/// A `false` report means every measurement sequence was ruled out.
/// Running out of budget or orbit capacity is an error, never a `false`.
pub fn is_vertex_minor(g: &Graph, h: &Graph, config: &SearchConfig) -> Result<VertexMinorReport, SearchError> {
    let keep = h.vertex_mask();
    let missing = keep & !g.vertex_mask();
    if missing != 0 {
        return Err(SearchError::NotSubset { missing: mask_iter(missing).collect() });
    }
    let mut searcher = Searcher {
        target: h,
        keep,
        isolated_targets: mask_iter(keep).filter(|&v| h.degree(v) == 0).fold(0, |m, v| m | bit(v)),
        target_components: h.component_masks(),
        config: *config,
        orbit: None,
        stats: SearchStats::default(),
    };
    let mut steps = Vec::new();
    let found = searcher.dfs(*g, &mut steps)?;
    let witness = found.map(|lc_path| Witness { measurements: MeasurementSequence(steps), lc_path });
    Ok(VertexMinorReport { decision: witness.is_some(), witness, stats: searcher.stats })
}

/// Whether the two Bell pairs of `target` can be extracted from `g`.
pub fn can_extract_bell_pairs(
    g: &Graph,
    target: &BellPairTarget,
    config: &SearchConfig,
) -> Result<VertexMinorReport, SearchError> {
    is_vertex_minor(g, &target.graph(), config)
}
