//! Independent reference implementation for cross-checking the library.
//!
//! Graphs here are plain edge sets; nothing is shared with the bit-matrix
//! code beyond reading a library graph's vertices and edges once.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use vminor_core::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefGraph {
    pub v: BTreeSet<u8>,
    pub e: BTreeSet<(u8, u8)>,
}

fn key(a: u8, b: u8) -> (u8, u8) {
    (a.min(b), a.max(b))
}

impl RefGraph {
    pub fn from_lib(g: &Graph) -> Self {
        RefGraph { v: g.vertices().collect(), e: g.edges().collect() }
    }

    pub fn new(v: impl IntoIterator<Item = u8>, e: impl IntoIterator<Item = (u8, u8)>) -> Self {
        RefGraph { v: v.into_iter().collect(), e: e.into_iter().map(|(a, b)| key(a, b)).collect() }
    }

    pub fn nb(&self, x: u8) -> BTreeSet<u8> {
        self.e
            .iter()
            .filter_map(|&(a, b)| if a == x { Some(b) } else if b == x { Some(a) } else { None })
            .collect()
    }

    /// Add the complete graph on N_x modulo 2.
    pub fn lc(&self, x: u8) -> Self {
        let nb: Vec<u8> = self.nb(x).into_iter().collect();
        let mut e = self.e.clone();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let k = key(nb[i], nb[j]);
                if !e.remove(&k) {
                    e.insert(k);
                }
            }
        }
        RefGraph { v: self.v.clone(), e }
    }

    pub fn delete(&self, x: u8) -> Self {
        let mut v = self.v.clone();
        v.remove(&x);
        RefGraph { v, e: self.e.iter().copied().filter(|&(a, b)| a != x && b != x).collect() }
    }

    /// 0 = Z, 1 = Y, 2 = X (lowest neighbour).
    pub fn measure(&self, x: u8, basis: u8) -> Self {
        match basis {
            0 => self.delete(x),
            1 => self.lc(x).delete(x),
            _ => match self.nb(x).into_iter().next() {
                Some(w) => self.lc(w).lc(x).lc(w).delete(x),
                None => self.delete(x),
            },
        }
    }

    pub fn orbit(&self) -> HashSet<RefGraph> {
        let mut seen = HashSet::from([self.clone()]);
        let mut queue = VecDeque::from([self.clone()]);
        while let Some(g) = queue.pop_front() {
            for &x in &g.v {
                let h = g.lc(x);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    pub fn components(&self) -> BTreeSet<BTreeSet<u8>> {
        let mut left = self.v.clone();
        let mut out = BTreeSet::new();
        while let Some(&s) = left.iter().next() {
            let mut comp = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for y in self.nb(x) {
                    if comp.insert(y) {
                        stack.push(y);
                    }
                }
            }
            left = &left - &comp;
            out.insert(comp);
        }
        out
    }

    pub fn foliage(&self) -> BTreeSet<u8> {
        let mut out = BTreeSet::new();
        for &x in &self.v {
            let nx = self.nb(x);
            if nx.len() == 1 {
                out.insert(x);
                out.extend(nx.iter().copied());
            }
            for &y in &self.v {
                if y != x {
                    let mut a = nx.clone();
                    a.remove(&y);
                    let mut b = self.nb(y);
                    b.remove(&x);
                    if a == b {
                        out.insert(x);
                        out.insert(y);
                    }
                }
            }
        }
        out
    }
}

/// Brute-force vertex-minor test: every basis choice for every deleted vertex,
/// then membership in the target's LC orbit.
pub struct BruteForce {
    target: RefGraph,
    orbit: HashSet<RefGraph>,
}

impl BruteForce {
    pub fn new(target: RefGraph) -> Self {
        let orbit = target.orbit();
        BruteForce { target, orbit }
    }

    pub fn decide(&self, g: &RefGraph) -> bool {
        let to_measure: Vec<u8> = g.v.difference(&self.target.v).copied().collect();
        assert!(self.target.v.is_subset(&g.v));
        let k = to_measure.len() as u32;
        (0..3u32.pow(k)).any(|mut code| {
            let mut h = g.clone();
            for &x in &to_measure {
                h = h.measure(x, (code % 3) as u8);
                code /= 3;
            }
            self.orbit.contains(&h)
        })
    }
}

pub fn brute_force_vertex_minor(g: &Graph, h: &Graph) -> bool {
    BruteForce::new(RefGraph::from_lib(h)).decide(&RefGraph::from_lib(g))
}

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vminor_core::enumerate::{all_labeled_graphs, random_graph};
use vminor_core::{is_vertex_minor, BellPairTarget, PauliBasis, SearchConfig};

pub const RANDOM_SEED: u64 = 0x5EED_0AC1E;

/// One instance: does `target` occur as a vertex-minor of `graph`?
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub target: Graph,
}

fn labels(n: u8) -> Vec<u8> {
    (1..=n).collect()
}

fn double_pairs(labels: [u8; 4]) -> Vec<Graph> {
    let [a, b, c, d] = labels;
    [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]
        .into_iter()
        .map(|(p, q)| BellPairTarget::new(p, q).unwrap().graph())
        .collect()
}

/// Exhaustive sweep: every graph on up to five labels against every graph on
/// each proper prefix of its labels (and on all of them up to four labels),
/// plus every six-label graph against the three pairings of four labels.
pub fn exhaustive_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 2..=5u8 {
        let top = if n <= 4 { n } else { n - 1 };
        let targets: Vec<Graph> = (2..=top).flat_map(|k| all_labeled_graphs(&labels(k)).collect::<Vec<_>>()).collect();
        for g in all_labeled_graphs(&labels(n)) {
            out.extend(targets.iter().map(|h| Instance { graph: g, target: *h }));
        }
    }
    let pairs = double_pairs([1, 2, 3, 4]);
    for g in all_labeled_graphs(&labels(6)) {
        out.extend(pairs.iter().map(|h| Instance { graph: g, target: *h }));
    }
    out
}

/// Seeded random instances on five to seven labels. A third of the targets
/// are Bell-pair graphs, a third random graphs on a random subset, and a
/// third built by measuring and complementing the graph itself so that
/// positive answers are well represented.
pub fn random_instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(5..=7u8);
            let p = *[0.3, 0.5, 0.7].choose(&mut rng).unwrap();
            let graph = random_graph(&mut rng, &labels(n), p);
            let mut pool = labels(n);
            pool.shuffle(&mut rng);
            let target = match i % 3 {
                0 => *double_pairs([pool[0], pool[1], pool[2], pool[3]]).choose(&mut rng).unwrap(),
                1 => {
                    let k = rng.random_range(2..=5usize);
                    random_graph(&mut rng, &pool[..k], 0.5)
                }
                _ => {
                    let k = rng.random_range(2..=4usize);
                    let mut h = graph;
                    for &v in &pool[k..] {
                        let basis = [PauliBasis::Z, PauliBasis::Y, PauliBasis::x()][rng.random_range(0..3)];
                        h = h.measure(v, basis).unwrap();
                    }
                    for _ in 0..rng.random_range(0..4) {
                        h = h.local_complement(pool[rng.random_range(0..k)]).unwrap();
                    }
                    h
                }
            };
            Instance { graph, target }
        })
        .collect()
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Tally {
    pub instances: u64,
    pub positive: u64,
    pub disagreements: u64,
    pub witnesses_checked: u64,
    pub witnesses_failed: u64,
}

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        self.instances += o.instances;
        self.positive += o.positive;
        self.disagreements += o.disagreements;
        self.witnesses_checked += o.witnesses_checked;
        self.witnesses_failed += o.witnesses_failed;
    }
}

/// Run pruned search, unpruned search and the reference oracle on one instance.
pub fn check(inst: &Instance, oracle: &BruteForce) -> Tally {
    let pruned = is_vertex_minor(&inst.graph, &inst.target, &SearchConfig::default()).unwrap();
    let plain = is_vertex_minor(&inst.graph, &inst.target, &SearchConfig::brute_force()).unwrap();
    let truth = oracle.decide(&RefGraph::from_lib(&inst.graph));
    let mut t = Tally { instances: 1, positive: truth as u64, ..Tally::default() };
    if pruned.decision != truth || plain.decision != truth {
        t.disagreements = 1;
    }
    for report in [&pruned, &plain] {
        if report.decision {
            t.witnesses_checked += 1;
            let ok = report.witness.as_ref().and_then(|w| w.replay(&inst.graph).ok()) == Some(inst.target);
            t.witnesses_failed += !ok as u64;
        }
    }
    t
}

/// Check every instance, reusing the oracle's target orbit across instances.
pub fn check_all(instances: &[Instance]) -> Tally {
    use std::collections::HashMap;
    let mut oracles: HashMap<Graph, BruteForce> = HashMap::new();
    let mut total = Tally::default();
    for inst in instances {
        let oracle = oracles.entry(inst.target).or_insert_with(|| BruteForce::new(RefGraph::from_lib(&inst.target)));
        total += check(inst, oracle);
    }
    total
}
