//! Forward uniform-cost search over the grounded state graph.
//!
//! Used as ground truth for optimal costs and as the oracle heuristic
//! provider. Among equal-cost paths the shorter one wins, then the one whose
//! action ids compare lexicographically smaller, so results are unique.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::domain::{ActionId, Condition, Domain, State};
use crate::planner::ActionSpace;

pub const DEFAULT_STATE_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalPath {
    pub actions: Vec<ActionId>,
    pub cost: f64,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("goal is unreachable from the initial state")]
    Unreachable,
    #[error("state graph exceeds {0} states")]
    BudgetExceeded(usize),
}

/// Heap entry; equal `(cost, len)` pairs are settled by comparing paths.
#[derive(PartialEq)]
struct Key {
    cost: f64,
    len: u32,
    state: u32,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.len.cmp(&other.len))
            .then(self.state.cmp(&other.state))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Node {
    cost: f64,
    len: u32,
    parent: Option<(u32, ActionId)>,
    closed: bool,
}

struct Graph {
    states: Vec<State>,
    ids: FxHashMap<State, u32>,
    nodes: Vec<Node>,
}

impl Graph {
    fn path(&self, mut at: u32) -> Vec<ActionId> {
        let mut out = Vec::with_capacity(self.nodes[at as usize].len as usize);
        while let Some((p, a)) = self.nodes[at as usize].parent {
            out.push(a);
            at = p;
        }
        out.reverse();
        out
    }

    /// Whether reaching `at` via `parent` then `a` beats its current path.
    fn improves(&self, at: u32, cost: f64, len: u32, parent: u32, a: ActionId) -> bool {
        let n = &self.nodes[at as usize];
        match cost.total_cmp(&n.cost).then(len.cmp(&n.len)) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                let mut cand = self.path(parent);
                cand.push(a);
                cand < self.path(at)
            }
        }
    }
}

/// Minimum-cost action sequence from `init` to a state containing `goal`,
/// expanding at most `max_states` states.
pub fn optimal_path(
    domain: &Domain,
    space: Option<&ActionSpace>,
    init: &State,
    goal: &Condition,
    max_states: usize,
) -> Result<OptimalPath, OracleError> {
    let actions: Vec<ActionId> = match space {
        Some(s) => s.ids().to_vec(),
        None => domain.action_ids().collect(),
    };
    let mut g = Graph {
        states: vec![init.clone()],
        ids: FxHashMap::default(),
        nodes: vec![Node {
            cost: 0.0,
            len: 0,
            parent: None,
            closed: false,
        }],
    };
    g.ids.insert(init.clone(), 0);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Key {
        cost: 0.0,
        len: 0,
        state: 0,
    }));
    let mut closed = 0usize;

    while let Some(Reverse(key)) = heap.pop() {
        let id = key.state;
        let n = &g.nodes[id as usize];
        if n.closed || n.cost != key.cost || n.len != key.len {
            continue;
        }
        if goal.is_subset(&g.states[id as usize]) {
            // every state with the same cost and length is final by now;
            // the lexicographically smallest goal path among them wins
            let mut best = g.path(id);
            while let Some(Reverse(k)) = heap.peek() {
                if k.cost != key.cost || k.len != key.len {
                    break;
                }
                let k = heap.pop().expect("peeked").0;
                let m = &g.nodes[k.state as usize];
                if !m.closed && m.cost == k.cost && m.len == k.len && goal.is_subset(&g.states[k.state as usize]) {
                    best = best.min(g.path(k.state));
                }
            }
            return Ok(OptimalPath {
                actions: best,
                cost: key.cost,
            });
        }
        if closed >= max_states {
            return Err(OracleError::BudgetExceeded(max_states));
        }
        g.nodes[id as usize].closed = true;
        closed += 1;
        for &a in &actions {
            let state = &g.states[id as usize];
            if !domain.is_applicable(state, a) {
                continue;
            }
            let next = domain.apply(state, a);
            let (cost, len) = (key.cost + domain.cost(a), key.len + 1);
            let at = match g.ids.get(&next) {
                Some(&at) => {
                    if g.nodes[at as usize].closed || !g.improves(at, cost, len, id, a) {
                        continue;
                    }
                    let n = &mut g.nodes[at as usize];
                    n.cost = cost;
                    n.len = len;
                    n.parent = Some((id, a));
                    at
                }
                None => {
                    let at = g.states.len() as u32;
                    g.ids.insert(next.clone(), at);
                    g.states.push(next);
                    g.nodes.push(Node {
                        cost,
                        len,
                        parent: Some((id, a)),
                        closed: false,
                    });
                    at
                }
            };
            heap.push(Reverse(Key { cost, len, state: at }));
        }
    }
    Err(OracleError::Unreachable)
}
