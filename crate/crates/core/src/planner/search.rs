use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::Instant;

use rustc_hash::FxHashMap;

use super::index::SupersetIndex;
use super::{indicator_of, Budget, ExpandedNode, Indicator, Outcome, PlanError, PlanResult, Problem};
use crate::bt::{self, BtNode};
use crate::domain::{is_relevant_consistent_with, regress, ActionId, Condition, RelevanceGuard};

#[derive(Clone, Copy)]
pub(super) enum Order {
    /// Insertion order; conditions already generated are never updated.
    Fifo,
    /// Smallest `h`, then smallest condition, then insertion order.
    Cost,
}

#[derive(Clone, Copy)]
pub(super) enum Credit {
    None,
    Scaled(f64),
    Free,
}

struct Pending {
    condition: Condition,
    action: Option<ActionId>,
    parent: Option<usize>,
    h: f64,
    cost: f64,
    indicator: Arc<Indicator>,
}

#[derive(PartialEq)]
struct Key {
    h: f64,
    len: usize,
    seq: u64,
    node: usize,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.h
            .total_cmp(&other.h)
            .then(self.len.cmp(&other.len))
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(super) fn run(
    problem: &Problem,
    path: &[ActionId],
    order: Order,
    credit: Credit,
    budget: &Budget,
) -> Result<PlanResult, PlanError> {
    if budget.time.is_some_and(|t| t.is_zero()) || budget.max_expansions == Some(0) {
        return Err(PlanError::InvalidBudget);
    }
    let start = Instant::now();
    let domain = problem.domain;

    let mut pending = vec![Pending {
        condition: problem.goal.clone(),
        action: None,
        parent: None,
        h: 0.0,
        cost: 0.0,
        indicator: Arc::new(indicator_of(path)),
    }];
    // best known pending node per generated condition
    let mut best: FxHashMap<Condition, usize> = FxHashMap::default();
    best.insert(problem.goal.clone(), 0);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Key {
        h: 0.0,
        len: problem.goal.len(),
        seq: 0,
        node: 0,
    }));
    let mut seq = 1u64;

    let mut expanded: Vec<ExpandedNode> = Vec::new();
    let mut closed = SupersetIndex::new();
    let mut candidates: Vec<ActionId> = Vec::new();

    let outcome = loop {
        let Some(Reverse(key)) = heap.pop() else {
            break Outcome::Exhausted;
        };
        if best.get(&pending[key.node].condition) != Some(&key.node) {
            continue;
        }
        if budget.time.is_some_and(|t| start.elapsed() > t)
            || budget.max_expansions.is_some_and(|m| expanded.len() >= m)
        {
            break Outcome::Timeout;
        }

        let node = &pending[key.node];
        let idx = expanded.len();
        expanded.push(ExpandedNode {
            condition: node.condition.clone(),
            action: node.action,
            parent: node.parent,
            h: node.h,
            cost: node.cost,
            indicator: Arc::clone(&node.indicator),
        });
        closed.insert(&node.condition);
        // drop the entry so the condition is never re-pushed by the update rule
        best.remove(&node.condition);
        if node.condition.is_subset(&problem.init) {
            break Outcome::Solved;
        }

        let c = &expanded[idx].condition;
        candidates.clear();
        for l in c {
            candidates.extend(domain.adders(l).iter().copied().filter(|&a| problem.allows(a)));
            if problem.guard == RelevanceGuard::Broad {
                candidates.extend(domain.requirers(l).iter().copied().filter(|&a| problem.allows(a)));
            }
        }
        candidates.sort_unstable();
        candidates.dedup();

        let (h_c, cost_c) = (expanded[idx].h, expanded[idx].cost);
        for &a in &candidates {
            let act = domain.action(a);
            if !is_relevant_consistent_with(c, act, problem.guard) {
                continue;
            }
            let c_a = regress(c, act);
            let ind = &expanded[idx].indicator;
            let credited = ind.get(a) > 0;
            let h_a = match credit {
                Credit::Scaled(alpha) if credited => act.cost / alpha,
                Credit::Free if credited => 0.0,
                _ => act.cost,
            };
            let h_new = h_c + h_a;
            let existing = best.get(&c_a).copied();
            match (order, existing) {
                (Order::Fifo, Some(_)) => continue,
                (Order::Cost, Some(n)) if pending[n].h <= h_new => continue,
                _ => {}
            }
            if closed.covers(&c_a) {
                continue;
            }
            let indicator = if credited {
                Arc::new(ind.decremented(a))
            } else {
                Arc::clone(ind)
            };
            let n = pending.len();
            let h_key = match order {
                Order::Fifo => 0.0,
                Order::Cost => h_new,
            };
            let len = match order {
                Order::Fifo => 0,
                Order::Cost => c_a.len(),
            };
            heap.push(Reverse(Key { h: h_key, len, seq, node: n }));
            seq += 1;
            best.insert(c_a.clone(), n);
            pending.push(Pending {
                condition: c_a,
                action: Some(a),
                parent: Some(idx),
                h: h_new,
                cost: cost_c + act.cost,
                indicator,
            });
        }
    };

    let mut children = Vec::with_capacity(expanded.len());
    children.push(bt::cond(problem.goal.clone()));
    for e in &expanded[1..] {
        let a = e.action.expect("non-goal nodes carry an action");
        children.push(BtNode::Sequence(vec![bt::cond(e.condition.clone()), bt::act(a)]));
    }
    let total_cost = (outcome == Outcome::Solved).then(|| expanded.last().map_or(0.0, |e| e.cost));
    Ok(PlanResult {
        tree: BtNode::Fallback(children),
        outcome,
        explored_count: expanded.len(),
        total_cost,
        elapsed: start.elapsed(),
        generated: seq as usize,
        expanded,
    })
}
