//! Undoable transformation sessions for the interactive explorer.
//!
//! A session is a stack of graphs, each one produced from its predecessor by
//! a single action. The store keeps a bounded number of sessions in memory and
//! evicts the least recently used one when full. Each session sits behind its
//! own mutex, so steps within a session are serialized while different
//! sessions proceed independently.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, MutexGuard};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::foliage::FoliageDecomposition;
use crate::graph::{Graph, GraphError, PauliBasis, Vertex};
use crate::io::{to_edgelist, GraphDocument};
use crate::search::{can_extract_bell_pairs, BellPairTarget, SearchConfig, Witness};

pub const DEFAULT_SESSION_CAPACITY: usize = 256;
/// Work budget for the feasibility check attached to every response.
pub const DEFAULT_CHECK_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One explorer action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum Action {
    Lc {
        v: Vertex,
    },
    Measure {
        v: Vertex,
        #[serde(flatten)]
        basis: PauliBasis,
    },
    Cz {
        u: Vertex,
        v: Vertex,
    },
    Undo,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Lc { v } => write!(f, "lc {v}"),
            Action::Measure { v, basis } => write!(f, "measure {v} {basis}"),
            Action::Cz { u, v } => write!(f, "cz {u} {v}"),
            Action::Undo => f.write_str("undo"),
        }
    }
}

impl Action {
    /// Apply a non-undo action to `g`.
    fn apply(&self, g: &Graph) -> Result<Graph, GraphError> {
        match *self {
            Action::Lc { v } => g.local_complement(v),
            Action::Measure { v, basis } => g.measure(v, basis),
            Action::Cz { u, v } => g.toggle_cz(u, v),
            Action::Undo => Ok(*g),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct HistoryEntry {
    graph: Graph,
    /// The action that produced `graph`; `None` for the initial graph.
    step: Option<Action>,
}

#[derive(Debug, Clone)]
pub struct Session {
    history: Vec<HistoryEntry>,
    target: Option<BellPairTarget>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    UnknownBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetStatus {
    pub target: BellPairTarget,
    pub crossing: bool,
    pub status: Feasibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Everything the explorer needs to render the current state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub graph: GraphDocument,
    pub edgelist: String,
    pub history_len: usize,
    /// Descriptors of the applied steps, oldest first.
    pub steps: Vec<String>,
    pub foliage: FoliageDecomposition,
    pub components: Vec<Vec<Vertex>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetStatus>,
}

impl Session {
    pub fn new(graph: Graph) -> Self {
        Session { history: vec![HistoryEntry { graph, step: None }], target: None }
    }

    pub fn current(&self) -> &Graph {
        &self.history.last().expect("history is never empty").graph
    }

    pub fn initial(&self) -> &Graph {
        &self.history[0].graph
    }

    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    pub fn steps(&self) -> Vec<Action> {
        self.history.iter().filter_map(|h| h.step).collect()
    }

    pub fn target(&self) -> Option<&BellPairTarget> {
        self.target.as_ref()
    }

    pub fn apply(&mut self, action: Action) -> Result<(), SessionError> {
        if action == Action::Undo {
            if self.history.len() == 1 {
                return Err(SessionError::NothingToUndo);
            }
            self.history.pop();
            return Ok(());
        }
        let graph = action.apply(self.current())?;
        self.history.push(HistoryEntry { graph, step: Some(action) });
        Ok(())
    }

    pub fn set_target(&mut self, target: Option<BellPairTarget>) {
        self.target = target;
    }

    /// True iff replaying the recorded steps from the initial graph reproduces every entry.
    pub fn replays(&self) -> bool {
        self.history.windows(2).all(|w| match w[1].step {
            Some(a) => a.apply(&w[0].graph).as_ref() == Ok(&w[1].graph),
            None => false,
        })
    }

    fn target_status(&self, budget: u64) -> Option<TargetStatus> {
        let target = self.target?;
        let g = self.current();
        let mut status = TargetStatus {
            target,
            crossing: target.is_crossing(),
            status: Feasibility::Infeasible,
            witness: None,
            detail: None,
        };
        if let Some(&missing) = target.labels().iter().find(|&&v| !g.contains(v)) {
            status.detail = Some(format!("target vertex {missing} is no longer in the graph"));
            return Some(status);
        }
        let config = SearchConfig::default().with_budget(budget);
        match can_extract_bell_pairs(g, &target, &config) {
            Ok(report) if report.decision => {
                status.status = Feasibility::Feasible;
                status.witness = report.witness;
            }
            Ok(_) => {}
            Err(e) => {
                status.status = Feasibility::UnknownBudget;
                status.detail = Some(e.to_string());
            }
        }
        Some(status)
    }

    pub fn view(&self, id: &str, check_budget: u64) -> SessionView {
        let g = self.current();
        SessionView {
            id: id.to_string(),
            graph: GraphDocument::from_graph(g),
            edgelist: to_edgelist(g),
            history_len: self.history.len(),
            steps: self.steps().iter().map(ToString::to_string).collect(),
            foliage: g.foliage(),
            components: g.connected_components(),
            target: self.target_status(check_budget),
        }
    }
}

struct Slot {
    session: Arc<Mutex<Session>>,
    last_used: u64,
}

#[derive(Default)]
struct StoreInner {
    sessions: HashMap<String, Slot>,
    clock: u64,
}

/// In-memory session registry with least-recently-used eviction.
pub struct SessionStore {
    capacity: usize,
    check_budget: u64,
    inner: Mutex<StoreInner>,
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new(DEFAULT_SESSION_CAPACITY, DEFAULT_CHECK_BUDGET)
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

impl SessionStore {
    pub fn new(capacity: usize, check_budget: u64) -> Self {
        SessionStore { capacity: capacity.max(1), check_budget, inner: Mutex::default() }
    }

    pub fn len(&self) -> usize {
        lock(&self.inner).sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self, graph: Graph) -> SessionView {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::new(graph);
        let view = session.view(&id, self.check_budget);
        let mut inner = lock(&self.inner);
        if inner.sessions.len() >= self.capacity {
            if let Some(oldest) = inner.sessions.iter().min_by_key(|(_, s)| s.last_used).map(|(k, _)| k.clone()) {
                inner.sessions.remove(&oldest);
            }
        }
        inner.clock += 1;
        let last_used = inner.clock;
        inner.sessions.insert(id, Slot { session: Arc::new(Mutex::new(session)), last_used });
        view
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        let mut inner = lock(&self.inner);
        inner.clock += 1;
        let now = inner.clock;
        let slot = inner.sessions.get_mut(id).ok_or_else(|| SessionError::UnknownSession(id.to_string()))?;
        slot.last_used = now;
        Ok(Arc::clone(&slot.session))
    }

    pub fn get(&self, id: &str) -> Result<SessionView, SessionError> {
        let session = self.session(id)?;
        let view = lock(&session).view(id, self.check_budget);
        Ok(view)
    }

    pub fn step(&self, id: &str, action: Action) -> Result<SessionView, SessionError> {
        let session = self.session(id)?;
        let mut s = lock(&session);
        s.apply(action)?;
        Ok(s.view(id, self.check_budget))
    }

    pub fn set_target(&self, id: &str, target: Option<BellPairTarget>) -> Result<SessionView, SessionError> {
        let session = self.session(id)?;
        let mut s = lock(&session);
        s.set_target(target);
        Ok(s.view(id, self.check_budget))
    }

    /// Run `f` on a snapshot of the session.
    pub fn with_session<T>(&self, id: &str, f: impl FnOnce(&Session) -> T) -> Result<T, SessionError> {
        let session = self.session(id)?;
        let s = lock(&session);
        Ok(f(&s))
    }

    pub fn delete(&self, id: &str) -> Result<(), SessionError> {
        lock(&self.inner)
            .sessions
            .remove(id)
            .map(|_| ())
            .ok_or_else(|| SessionError::UnknownSession(id.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_then_undo() {
        let r6 = Graph::ring(6).unwrap();
        let mut s = Session::new(r6);
        s.apply(Action::Measure { v: 1, basis: PauliBasis::Y }).unwrap();
        assert_eq!(*s.current(), Graph::cycle_through(&[2, 3, 4, 5, 6]).unwrap());
        assert!(s.replays());
        s.apply(Action::Undo).unwrap();
        assert_eq!(*s.current(), r6);
        assert_eq!(s.apply(Action::Undo), Err(SessionError::NothingToUndo));
    }

    #[test]
    fn failed_actions_leave_history_alone() {
        let mut s = Session::new(Graph::line(3).unwrap());
        assert_eq!(s.apply(Action::Lc { v: 9 }), Err(SessionError::Graph(GraphError::VertexAbsent(9))));
        assert_eq!(s.apply(Action::Cz { u: 2, v: 2 }), Err(SessionError::Graph(GraphError::SelfLoop(2))));
        assert_eq!(s.history_len(), 1);
    }

    #[test]
    fn target_status_reflects_the_current_graph() {
        let mut s = Session::new(Graph::ring(6).unwrap());
        s.set_target(Some(BellPairTarget::new((1, 3), (2, 4)).unwrap()));
        let view = s.view("x", DEFAULT_CHECK_BUDGET);
        let t = view.target.unwrap();
        assert!(t.crossing);
        assert_eq!(t.status, Feasibility::Infeasible);

        s.set_target(Some(BellPairTarget::new((1, 2), (4, 5)).unwrap()));
        let t = s.view("x", DEFAULT_CHECK_BUDGET).target.unwrap();
        assert_eq!(t.status, Feasibility::Feasible);
        assert!(t.witness.is_some());

        let t = s.view("x", 1).target.unwrap();
        assert_eq!(t.status, Feasibility::UnknownBudget);

        s.apply(Action::Measure { v: 1, basis: PauliBasis::Z }).unwrap();
        let t = s.view("x", DEFAULT_CHECK_BUDGET).target.unwrap();
        assert_eq!(t.status, Feasibility::Infeasible);
        assert!(t.detail.unwrap().contains("vertex 1"));
    }

    #[test]
    fn action_wire_format() {
        let a: Action = serde_json::from_str(r#"{"action":"measure","v":1,"basis":"Y"}"#).unwrap();
        assert_eq!(a, Action::Measure { v: 1, basis: PauliBasis::Y });
        let a: Action = serde_json::from_str(r#"{"action":"measure","v":1,"basis":"X","w":2}"#).unwrap();
        assert_eq!(a, Action::Measure { v: 1, basis: PauliBasis::X { special: Some(2) } });
        let a: Action = serde_json::from_str(r#"{"action":"cz","u":3,"v":6}"#).unwrap();
        assert_eq!(a, Action::Cz { u: 3, v: 6 });
        let a: Action = serde_json::from_str(r#"{"action":"undo"}"#).unwrap();
        assert_eq!(a, Action::Undo);
        assert_eq!(serde_json::to_string(&Action::Lc { v: 4 }).unwrap(), r#"{"action":"lc","v":4}"#);
    }

    #[test]
    fn store_evicts_least_recently_used() {
        let store = SessionStore::new(2, DEFAULT_CHECK_BUDGET);
        let a = store.create(Graph::ring(4).unwrap()).id;
        let b = store.create(Graph::ring(5).unwrap()).id;
        store.get(&a).unwrap();
        let c = store.create(Graph::ring(6).unwrap()).id;
        assert_eq!(store.len(), 2);
        assert!(store.get(&a).is_ok());
        assert_eq!(store.get(&b), Err(SessionError::UnknownSession(b.clone())));
        assert!(store.get(&c).is_ok());
        store.delete(&c).unwrap();
        assert!(store.delete(&c).is_err());
    }
}
