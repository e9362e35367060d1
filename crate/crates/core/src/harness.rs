//! Instance-exhaustive checks of the ring/line no-crossing results, foliage
//! invariance, and the ring-to-butterfly demonstration.
//!
//! Every instance is decided by the vertex-minor search, so a "0 violations"
//! report means every crossing quadruple up to `n_max` came back with a
//! certified `false`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{all_labeled_graphs, random_graph};
use crate::graph::{bit, Graph, GraphError, PauliBasis, Vertex};
use crate::io::{to_edgelist, GraphDocument};
use crate::orbit::LcOrbit;
use crate::search::{
    can_extract_bell_pairs, BellPairTarget, MeasurementSequence, MeasurementStep, SearchConfig, SearchError,
    VertexMinorReport,
};

/// Largest `n_max` the theorem checks accept.
pub const SEARCH_LIMIT: usize = 12;
/// `n_max` used when the caller does not ask for more.
pub const DEFAULT_N_MAX: usize = 8;
/// Exhaustive foliage sweeps stop here; larger sizes are sampled.
pub const FOLIAGE_EXHAUSTIVE_LIMIT: usize = 6;
pub const FOLIAGE_SAMPLES_PER_SIZE: usize = 2_000;
pub const FOLIAGE_SEED: u64 = 0x5EED_F011;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("n_max = {n_max} is outside the supported range {min}..={max}")]
    NMaxOutOfRange { n_max: usize, min: usize, max: usize },
    #[error("demo search failed: {0}")]
    DemoNotFound(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Ring,
    Line,
}

impl Topology {
    pub fn graph(self, n: usize) -> Result<Graph, GraphError> {
        match self {
            Topology::Ring => Graph::ring(n),
            Topology::Line => Graph::line(n),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Ring => "ring",
            Topology::Line => "line",
        })
    }
}

/// One `(n, a1, b1, a2, b2)` instance; pairs are `(a1, a2)` and `(b1, b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quadruple {
    pub n: usize,
    pub a1: Vertex,
    pub b1: Vertex,
    pub a2: Vertex,
    pub b2: Vertex,
}

impl Quadruple {
    pub fn target(&self) -> BellPairTarget {
        BellPairTarget::new((self.a1, self.a2), (self.b1, self.b2)).expect("quadruple labels are distinct")
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} ({},{}) ({},{})", self.n, self.a1, self.a2, self.b1, self.b2)
    }
}

/// Crossing quadruples `a1 < b1 < a2 < b2` on `1..=n`; rings fix `a1 = 1`.
pub fn crossing_quadruples(topology: Topology, n: usize) -> Vec<Quadruple> {
    let n8 = n as Vertex;
    let a1_range = match topology {
        Topology::Ring => 1..=1.min(n8),
        Topology::Line => 1..=n8,
    };
    let mut out = Vec::new();
    for a1 in a1_range {
        for b1 in a1 + 1..=n8 {
            for a2 in b1 + 1..=n8 {
                for b2 in a2 + 1..=n8 {
                    out.push(Quadruple { n, a1, b1, a2, b2 });
                }
            }
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form number of crossing quadruples: `C(n-1, 3)` on rings, `C(n, 4)` on lines.
pub fn expected_crossing_count(topology: Topology, n: usize) -> usize {
    match topology {
        Topology::Ring => binomial(n.saturating_sub(1), 3),
        Topology::Line => binomial(n, 4),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n: usize,
    pub quadruples: usize,
    pub infeasible: usize,
    pub feasible: usize,
    pub budget_overruns: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub topology: Topology,
    pub n_min: usize,
    pub n_max: usize,
    pub per_n: Vec<SizeSummary>,
    pub quadruples_tested: usize,
    /// Crossing instances the search found extractable.
    pub violations: Vec<Quadruple>,
    pub budget_overruns: Vec<Quadruple>,
}

impl TheoremReport {
    pub fn confirmed(&self) -> bool {
        self.violations.is_empty() && self.budget_overruns.is_empty()
    }
}

fn check_n_max(n_max: usize) -> Result<(), HarnessError> {
    if (3..=SEARCH_LIMIT).contains(&n_max) {
        Ok(())
    } else {
        Err(HarnessError::NMaxOutOfRange { n_max, min: 3, max: SEARCH_LIMIT })
    }
}

enum Outcome {
    Feasible,
    Infeasible,
    Overrun,
}

fn decide(g: &Graph, target: &BellPairTarget, config: &SearchConfig) -> Result<Outcome, HarnessError> {
    match can_extract_bell_pairs(g, target, config) {
        Ok(VertexMinorReport { decision: true, .. }) => Ok(Outcome::Feasible),
        Ok(_) => Ok(Outcome::Infeasible),
        Err(e) if e.is_resource_limit() => Ok(Outcome::Overrun),
        Err(e) => Err(e.into()),
    }
}

fn verify_no_crossing(topology: Topology, n_max: usize, config: &SearchConfig) -> Result<TheoremReport, HarnessError> {
    check_n_max(n_max)?;
    let instances: Vec<Quadruple> = (1..=n_max).flat_map(|n| crossing_quadruples(topology, n)).collect();
    let mut results = instances
        .par_iter()
        .map(|q| {
            let g = topology.graph(q.n)?;
            Ok((*q, decide(&g, &q.target(), config)?))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    results.sort_by_key(|(q, _)| *q);

    let mut report = TheoremReport {
        topology,
        n_min: 1,
        n_max,
        per_n: (1..=n_max)
            .map(|n| SizeSummary { n, quadruples: 0, infeasible: 0, feasible: 0, budget_overruns: 0 })
            .collect(),
        quadruples_tested: results.len(),
        violations: Vec::new(),
        budget_overruns: Vec::new(),
    };
    for (q, outcome) in results {
        let row = &mut report.per_n[q.n - 1];
        row.quadruples += 1;
        match outcome {
            Outcome::Infeasible => row.infeasible += 1,
            Outcome::Feasible => {
                row.feasible += 1;
                report.violations.push(q);
            }
            Outcome::Overrun => {
                row.budget_overruns += 1;
                report.budget_overruns.push(q);
            }
        }
    }
    Ok(report)
}

/// Every crossing quadruple with `a1 = 1` on rings `R_n`, `n <= n_max`, must be infeasible.
pub fn verify_ring_no_crossing(n_max: usize, config: &SearchConfig) -> Result<TheoremReport, HarnessError> {
    verify_no_crossing(Topology::Ring, n_max, config)
}

/// Every crossing quadruple on lines `L_n`, `n <= n_max`, must be infeasible.
pub fn verify_line_no_crossing(n_max: usize, config: &SearchConfig) -> Result<TheoremReport, HarnessError> {
    verify_no_crossing(Topology::Line, n_max, config)
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "no-crossing check on {}s, n = {}..={}", self.topology, self.n_min, self.n_max)?;
        writeln!(f, "{:>4} {:>10} {:>10} {:>8} {:>8}", "n", "crossing", "infeasible", "feasible", "overrun")?;
        for row in &self.per_n {
            writeln!(
                f,
                "{:>4} {:>10} {:>10} {:>8} {:>8}",
                row.n, row.quadruples, row.infeasible, row.feasible, row.budget_overruns
            )?;
        }
        writeln!(f, "quadruples tested: {}", self.quadruples_tested)?;
        for q in &self.violations {
            writeln!(f, "VIOLATION: {q}")?;
        }
        for q in &self.budget_overruns {
            writeln!(f, "BUDGET OVERRUN: {q}")?;
        }
        write!(
            f,
            "result: {}",
            if self.confirmed() { "confirmed (0 violations)" } else { "NOT confirmed" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairLayout {
    /// `a1 < a2 < b1 < b2` with at least one vertex between `a2` and `b1`.
    Disjoint,
    /// `a1 < a2 < b1 < b2` with `b1 = a2 + 1`: no separator vertex between the chains.
    Adjacent,
    /// `a1 < b1 < b2 < a2`
    Nested,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlOutcome {
    pub topology: Topology,
    pub n: usize,
    pub target: BellPairTarget,
    pub layout: PairLayout,
    /// Search decision; `None` on budget overrun.
    pub extractable: Option<bool>,
    /// For disjoint or adjacent pairs on a line: whether the Z-separator/Y-interior schedule reproduces the target exactly.
    pub constructive: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlsReport {
    pub n_max: usize,
    pub outcomes: Vec<ControlOutcome>,
    /// Disjoint line instances that failed to extract (asserted to be empty).
    pub violations: Vec<ControlOutcome>,
    pub budget_overruns: Vec<ControlOutcome>,
}

impl ControlsReport {
    pub fn confirmed(&self) -> bool {
        self.violations.is_empty() && self.budget_overruns.is_empty()
    }

    /// Recorded, not asserted: ring (or nested line) instances the search rejected.
    pub fn infeasible_recorded(&self) -> Vec<&ControlOutcome> {
        self.outcomes.iter().filter(|o| o.extractable == Some(false)).collect()
    }
}

/// Z-measure everything outside the two chains, then Y-measure the chain interiors.
pub fn line_disjoint_schedule(n: usize, target: &BellPairTarget) -> MeasurementSequence {
    let (a1, a2) = target.pair_a();
    let (b1, b2) = target.pair_b();
    let in_chain = |v: Vertex| (a1..=a2).contains(&v) || (b1..=b2).contains(&v);
    let endpoint = target.label_mask();
    let mut steps: Vec<MeasurementStep> = (1..=n as Vertex)
        .filter(|&v| !in_chain(v))
        .map(|vertex| MeasurementStep { vertex, basis: PauliBasis::Z })
        .collect();
    steps.extend(
        (1..=n as Vertex)
            .filter(|&v| in_chain(v) && endpoint & bit(v) == 0)
            .map(|vertex| MeasurementStep { vertex, basis: PauliBasis::Y }),
    );
    MeasurementSequence(steps)
}

fn noncrossing_targets(topology: Topology, n: usize) -> Vec<(BellPairTarget, PairLayout)> {
    let n8 = n as Vertex;
    let mut out = Vec::new();
    for a1 in 1..=n8 {
        if topology == Topology::Ring && a1 != 1 {
            break;
        }
        for x in a1 + 1..=n8 {
            for y in x + 1..=n8 {
                for z in y + 1..=n8 {
                    let disjoint = BellPairTarget::new((a1, x), (y, z)).expect("distinct");
                    let nested = BellPairTarget::new((a1, z), (x, y)).expect("distinct");
                    let layout = if y > x + 1 { PairLayout::Disjoint } else { PairLayout::Adjacent };
                    out.push((disjoint, layout));
                    out.push((nested, PairLayout::Nested));
                }
            }
        }
    }
    out
}

/// Positive controls: non-crossing quadruples on lines and rings.
///
/// Disjoint pairs on a line with a separator vertex between them must be
/// extractable, by search and by the explicit schedule. Adjacent and nested
/// line pairs and all ring controls are only recorded.
pub fn verify_noncrossing_controls(n_max: usize, config: &SearchConfig) -> Result<ControlsReport, HarnessError> {
    check_n_max(n_max)?;
    let mut instances = Vec::new();
    for topology in [Topology::Line, Topology::Ring] {
        for n in 4..=n_max {
            for (target, layout) in noncrossing_targets(topology, n) {
                instances.push((topology, n, target, layout));
            }
        }
    }
    let outcomes = instances
        .par_iter()
        .map(|&(topology, n, target, layout)| {
            let g = topology.graph(n)?;
            let extractable = match decide(&g, &target, config)? {
                Outcome::Feasible => Some(true),
                Outcome::Infeasible => Some(false),
                Outcome::Overrun => None,
            };
            let constructive = (topology == Topology::Line && layout != PairLayout::Nested)
                .then(|| line_disjoint_schedule(n, &target).apply(&g).map(|h| h == target.graph()))
                .transpose()?;
            Ok(ControlOutcome { topology, n, target, layout, extractable, constructive })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let violations = outcomes
        .iter()
        .filter(|o| {
            o.topology == Topology::Line
                && o.layout == PairLayout::Disjoint
                && (o.extractable == Some(false) || o.constructive == Some(false))
        })
        .cloned()
        .collect();
    let budget_overruns = outcomes.iter().filter(|o| o.extractable.is_none()).cloned().collect();
    Ok(ControlsReport { n_max, outcomes, violations, budget_overruns })
}

impl fmt::Display for ControlsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "non-crossing controls, n = 4..={}", self.n_max)?;
        writeln!(f, "{:>5} {:>8} {:>9} {:>11} {:>11} {:>8}", "topo", "layout", "instances", "extractable", "infeasible", "overrun")?;
        for topology in [Topology::Line, Topology::Ring] {
            for layout in [PairLayout::Disjoint, PairLayout::Adjacent, PairLayout::Nested] {
                let rows: Vec<&ControlOutcome> =
                    self.outcomes.iter().filter(|o| o.topology == topology && o.layout == layout).collect();
                let count = |x: Option<bool>| rows.iter().filter(|o| o.extractable == x).count();
                writeln!(
                    f,
                    "{:>5} {:>8} {:>9} {:>11} {:>11} {:>8}",
                    topology.to_string(),
                    format!("{layout:?}").to_lowercase(),
                    rows.len(),
                    count(Some(true)),
                    count(Some(false)),
                    count(None)
                )?;
            }
        }
        for o in &self.violations {
            writeln!(f, "VIOLATION: {} n={} {}", o.topology, o.n, o.target)?;
        }
        write!(f, "result: {}", if self.confirmed() { "confirmed" } else { "NOT confirmed" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliageFailure {
    pub graph: String,
    pub vertex: Vertex,
    pub check: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MicroTransitionCounts {
    /// Adjacent twins `v, w`: `τ_w` leaves `v` a leaf of axil `w`.
    pub adjacent_twins_to_leaf_axil: u64,
    /// Leaf `v` with axil `w`: `τ_w` makes `v, w` adjacent twins.
    pub leaf_axil_to_twins: u64,
    /// Non-adjacent twins with common neighbour `u`: `τ_u` makes them adjacent twins.
    pub distant_twins_to_adjacent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliageReport {
    pub n_max: usize,
    pub exhaustive_up_to: usize,
    pub samples_per_size: usize,
    pub seed: u64,
    pub graphs_checked: u64,
    pub complementations_checked: u64,
    pub micro_transitions: MicroTransitionCounts,
    pub failures: Vec<FoliageFailure>,
}

impl FoliageReport {
    pub fn confirmed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct FoliageTally {
    graphs: u64,
    complementations: u64,
    micro: MicroTransitionCounts,
    failures: Vec<FoliageFailure>,
}

impl FoliageTally {
    fn merge(mut self, other: FoliageTally) -> FoliageTally {
        self.graphs += other.graphs;
        self.complementations += other.complementations;
        self.micro.adjacent_twins_to_leaf_axil += other.micro.adjacent_twins_to_leaf_axil;
        self.micro.leaf_axil_to_twins += other.micro.leaf_axil_to_twins;
        self.micro.distant_twins_to_adjacent += other.micro.distant_twins_to_adjacent;
        self.failures.extend(other.failures);
        self
    }
}

fn is_twin_pair(g: &Graph, v: Vertex, w: Vertex) -> bool {
    g.neighbourhood(v) & !bit(w) == g.neighbourhood(w) & !bit(v)
}

/// Check foliage invariance and the leaf/axil/twin transitions on one graph.
fn check_foliage(g: &Graph) -> FoliageTally {
    let mut t = FoliageTally { graphs: 1, ..Default::default() };
    let fail = |vertex: Vertex, check: &str, t: &mut FoliageTally| {
        t.failures.push(FoliageFailure { graph: to_edgelist(g), vertex, check: check.to_string() })
    };
    let f = g.foliage();
    let members = f.member_mask();
    for v in g.vertices() {
        let mut h = *g;
        h.local_complement_in_place(v);
        t.complementations += 1;
        if h.foliage().member_mask() != members {
            fail(v, "foliage set changed", &mut t);
        }
    }
    for &(v, w) in &f.twins {
        if g.has_edge(v, w) {
            for (x, y) in [(v, w), (w, v)] {
                let mut h = *g;
                h.local_complement_in_place(y);
                t.micro.adjacent_twins_to_leaf_axil += 1;
                if h.degree(x) != 1 || !h.has_edge(x, y) {
                    fail(x, "adjacent twin did not become a leaf", &mut t);
                }
            }
        } else if let Some(u) = crate::graph::mask_iter(g.neighbourhood(v) & g.neighbourhood(w)).next() {
            let mut h = *g;
            h.local_complement_in_place(u);
            t.micro.distant_twins_to_adjacent += 1;
            if !h.has_edge(v, w) || !is_twin_pair(&h, v, w) {
                fail(v, "distant twins did not become adjacent twins", &mut t);
            }
        }
    }
    for &leaf in &f.leaves {
        let axil = g.neighbourhood(leaf).trailing_zeros() as Vertex;
        let mut h = *g;
        h.local_complement_in_place(axil);
        t.micro.leaf_axil_to_twins += 1;
        if !h.has_edge(leaf, axil) || !is_twin_pair(&h, leaf, axil) {
            fail(leaf, "leaf and axil did not become twins", &mut t);
        }
    }
    t
}

/// Foliage invariance under every single local complementation.
///
/// Sizes up to `FOLIAGE_EXHAUSTIVE_LIMIT` are exhaustive over all labeled
/// graphs; larger sizes use `samples_per_size` seeded random graphs.
pub fn verify_foliage_invariance(n_max: usize, samples_per_size: usize) -> Result<FoliageReport, HarnessError> {
    if !(1..=16).contains(&n_max) {
        return Err(HarnessError::NMaxOutOfRange { n_max, min: 1, max: 16 });
    }
    let mut tally = FoliageTally::default();
    for n in 1..=n_max.min(FOLIAGE_EXHAUSTIVE_LIMIT) {
        let labels: Vec<Vertex> = (1..=n as Vertex).collect();
        let graphs: Vec<Graph> = all_labeled_graphs(&labels).collect();
        let part = graphs.par_iter().map(check_foliage).reduce(FoliageTally::default, FoliageTally::merge);
        tally = tally.merge(part);
    }
    for n in FOLIAGE_EXHAUSTIVE_LIMIT + 1..=n_max {
        let labels: Vec<Vertex> = (1..=n as Vertex).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(FOLIAGE_SEED ^ n as u64);
        for _ in 0..samples_per_size {
            tally = tally.merge(check_foliage(&random_graph(&mut rng, &labels, 0.35)));
        }
    }
    tally.failures.sort_by(|a, b| (&a.graph, a.vertex, &a.check).cmp(&(&b.graph, b.vertex, &b.check)));
    Ok(FoliageReport {
        n_max,
        exhaustive_up_to: n_max.min(FOLIAGE_EXHAUSTIVE_LIMIT),
        samples_per_size: if n_max > FOLIAGE_EXHAUSTIVE_LIMIT { samples_per_size } else { 0 },
        seed: FOLIAGE_SEED,
        graphs_checked: tally.graphs,
        complementations_checked: tally.complementations,
        micro_transitions: tally.micro,
        failures: tally.failures,
    })
}

impl fmt::Display for FoliageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "foliage invariance, n = 1..={} (exhaustive up to {})", self.n_max, self.exhaustive_up_to)?;
        writeln!(f, "graphs checked:             {}", self.graphs_checked)?;
        writeln!(f, "complementations checked:   {}", self.complementations_checked)?;
        writeln!(f, "adjacent twins -> leaf/axil: {}", self.micro_transitions.adjacent_twins_to_leaf_axil)?;
        writeln!(f, "leaf/axil -> twins:          {}", self.micro_transitions.leaf_axil_to_twins)?;
        writeln!(f, "distant twins -> adjacent:   {}", self.micro_transitions.distant_twins_to_adjacent)?;
        for x in self.failures.iter().take(20) {
            writeln!(f, "FAILURE: {} at {}: {}", x.graph, x.vertex, x.check)?;
        }
        write!(f, "result: {} ({} failures)", if self.confirmed() { "confirmed" } else { "NOT confirmed" }, self.failures.len())
    }
}

/// One operation in a demo transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum DemoOp {
    Lc { v: Vertex },
    Measure { v: Vertex, #[serde(flatten)] basis: PauliBasis },
    Cz { u: Vertex, v: Vertex },
}

impl DemoOp {
    pub fn apply(&self, g: &Graph) -> Result<Graph, GraphError> {
        match *self {
            DemoOp::Lc { v } => g.local_complement(v),
            DemoOp::Measure { v, basis } => g.measure(v, basis),
            DemoOp::Cz { u, v } => g.toggle_cz(u, v),
        }
    }
}

impl fmt::Display for DemoOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemoOp::Lc { v } => write!(f, "lc {v}"),
            DemoOp::Measure { v, basis } => write!(f, "measure {v} {basis}"),
            DemoOp::Cz { u, v } => write!(f, "cz {u} {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoStep {
    pub op: DemoOp,
    pub graph: GraphDocument,
}

/// A replayable run from a start graph to a pair of Bell pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub start: GraphDocument,
    pub steps: Vec<DemoStep>,
    pub achieved: BellPairTarget,
}

impl Transcript {
    fn record(start: &Graph, ops: &[DemoOp], achieved: BellPairTarget) -> Result<Self, GraphError> {
        let mut g = *start;
        let mut steps = Vec::with_capacity(ops.len());
        for op in ops {
            g = op.apply(&g)?;
            steps.push(DemoStep { op: *op, graph: GraphDocument::from_graph(&g) });
        }
        Ok(Transcript { start: GraphDocument::from_graph(start), steps, achieved })
    }

    /// Replay every step; true iff each intermediate graph and the final Bell pairs match.
    pub fn replays(&self) -> bool {
        let Ok(mut g) = self.start.to_graph() else { return false };
        for step in &self.steps {
            match step.op.apply(&g) {
                Ok(next) if step.graph.to_graph().as_ref() == Ok(&next) => g = next,
                _ => return false,
            }
        }
        g == self.achieved.graph()
    }

    pub fn ops(&self) -> impl Iterator<Item = &DemoOp> {
        self.steps.iter().map(|s| &s.op)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoTranscript {
    /// LCs on the six-ring, then measurements of 3 and 6.
    pub without_cz: Transcript,
    /// LCs, one CZ between 3 and 6, then measurements (and LCs) to crossing pairs.
    pub with_cz: Transcript,
    pub crossing_target: BellPairTarget,
    /// Search verdict for extracting the crossing pairs from the plain six-ring.
    pub direct_crossing_feasible: bool,
}

impl DemoTranscript {
    pub fn replays(&self) -> bool {
        self.without_cz.replays() && self.with_cz.replays()
    }
}

fn measurement_ops(g: &Graph, seq: &[(Vertex, PauliBasis)]) -> Result<(Vec<DemoOp>, Graph), GraphError> {
    let mut g = *g;
    let mut ops = Vec::new();
    for &(v, basis) in seq {
        let basis = match basis {
            PauliBasis::X { .. } => PauliBasis::X { special: g.special_neighbour(v, basis)? },
            b => b,
        };
        g = g.measure(v, basis)?;
        ops.push(DemoOp::Measure { v, basis });
    }
    Ok((ops, g))
}

/// Reproduce the six-ring to butterfly construction.
///
/// Searches the LC orbit of `R_6` (breadth first) for a graph from which
/// measuring 3 and 6 leaves Bell pairs (2,4) and (1,5), trying Z before Y
/// before X on each vertex. For the crossing
/// pairs (1,4) and (2,5), it tries one CZ between 3 and 6 on that same
/// intermediate first, then on the rest of the orbit.
pub fn demo_ring_butterfly(config: &SearchConfig) -> Result<DemoTranscript, HarnessError> {
    let r6 = Graph::ring(6)?;
    let orbit = LcOrbit::build(&r6, config.orbit_cap)?;
    let plain_target = BellPairTarget::new((2, 4), (1, 5)).expect("distinct");
    let crossing_target = BellPairTarget::new((1, 4), (2, 5)).expect("distinct");

    // Basis pairs outermost, so plain Z deletions on an LC-transformed ring are preferred.
    let mut found = None;
    'outer: for b3 in PauliBasis::SEARCH_ORDER {
        for b6 in PauliBasis::SEARCH_ORDER {
            for (idx, g) in orbit.graphs().iter().enumerate() {
                let (ops, h) = measurement_ops(g, &[(3, b3), (6, b6)])?;
                if h == plain_target.graph() {
                    found = Some((idx, ops));
                    break 'outer;
                }
            }
        }
    }
    let (plain_idx, measure_ops) =
        found.ok_or_else(|| HarnessError::DemoNotFound("no LC sequence yields (2,4),(1,5)".into()))?;
    let mut ops: Vec<DemoOp> = orbit.path_from_root(plain_idx).into_iter().map(|v| DemoOp::Lc { v }).collect();
    ops.extend(measure_ops);
    let without_cz = Transcript::record(&r6, &ops, plain_target)?;

    let candidates = std::iter::once(plain_idx).chain((0..orbit.len()).filter(|&i| i != plain_idx));
    let mut with_cz = None;
    for idx in candidates {
        let toggled = orbit.graphs()[idx].toggle_cz(3, 6)?;
        let report = can_extract_bell_pairs(&toggled, &crossing_target, config)?;
        if let Some(w) = report.witness {
            let mut ops: Vec<DemoOp> = orbit.path_from_root(idx).into_iter().map(|v| DemoOp::Lc { v }).collect();
            ops.push(DemoOp::Cz { u: 3, v: 6 });
            ops.extend(w.measurements.steps().iter().map(|s| DemoOp::Measure { v: s.vertex, basis: s.basis }));
            ops.extend(w.lc_path.iter().map(|&v| DemoOp::Lc { v }));
            with_cz = Some(Transcript::record(&r6, &ops, crossing_target)?);
            break;
        }
    }
    let with_cz =
        with_cz.ok_or_else(|| HarnessError::DemoNotFound("no single CZ(3,6) yields (1,4),(2,5)".into()))?;

    let direct = can_extract_bell_pairs(&r6, &crossing_target, config)?;
    Ok(DemoTranscript { without_cz, with_cz, crossing_target, direct_crossing_feasible: direct.decision })
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let start = self.start.to_graph().map(|g| to_edgelist(&g)).unwrap_or_default();
        writeln!(f, "  start                {start}")?;
        for s in &self.steps {
            let g = s.graph.to_graph().map(|g| to_edgelist(&g)).unwrap_or_default();
            writeln!(f, "  {:<20} {g}", s.op.to_string())?;
        }
        write!(f, "  achieved Bell pairs  {}", self.achieved)
    }
}

impl fmt::Display for DemoTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "six-ring, LCs then measure 3 and 6:")?;
        writeln!(f, "{}", self.without_cz)?;
        writeln!(f, "six-ring, LCs, CZ(3,6), then measure:")?;
        writeln!(f, "{}", self.with_cz)?;
        write!(
            f,
            "crossing pairs {} directly from the six-ring: {}",
            self.crossing_target,
            if self.direct_crossing_feasible { "feasible" } else { "infeasible" }
        )
    }
}
