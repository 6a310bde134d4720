//! Backward behavior-tree planners.
//!
//! All three algorithms share one expansion loop over regressed conditions:
//!
//! * [`bt_expansion`] explores conditions first-in first-out,
//! * [`obtea`] pops the cheapest condition first and is cost-optimal,
//! * [`hbtp`] discounts actions credited by a heuristic path, either by a
//!   factor `alpha` ([`Heuristic::Optimal`]) or to zero
//!   ([`Heuristic::Satisficing`]).
//!
//! ```
//! use hbtp::domain::{parse_task, Domain};
//! use hbtp::planner::{hbtp, Budget, Heuristic, Outcome, Problem};
//!
//! let domain = Domain::parse(hbtp::fixtures::KITCHEN_MINI).unwrap();
//! let task = parse_task(hbtp::fixtures::KITCHEN_MINI_TASK, &domain).unwrap();
//! let path: Vec<_> = ["Walk_apple", "Grab_apple", "Walk_table", "Put_apple_table"]
//!     .iter()
//!     .map(|n| domain.action_id(n).unwrap())
//!     .collect();
//! let problem = Problem::new(&domain, task.init, task.goal);
//! let result = hbtp(&problem, &path, Heuristic::Satisficing, &Budget::default()).unwrap();
//! assert_eq!(result.outcome, Outcome::Solved);
//! assert_eq!(result.total_cost, Some(4.0));
//! ```

mod heuristic;
mod index;
mod record;
mod search;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bt::{self, BtNode};
use crate::domain::{ActionId, Condition, Domain, RelevanceGuard, State};

pub use heuristic::{
    alpha_lower_bound, indicator_of, path_h_alpha, path_h_alpha_unused_credit, path_h_inf, Indicator,
};
pub use record::{RunRecord, TraceEntry};

pub const DEFAULT_ALPHA: f64 = 1e6;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(5);

/// A subset of a domain's grounded actions that planning is restricted to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpace {
    ids: Vec<ActionId>,
    mask: Vec<bool>,
}

impl ActionSpace {
    pub fn full(domain: &Domain) -> Self {
        Self {
            ids: domain.action_ids().collect(),
            mask: vec![true; domain.actions().len()],
        }
    }

    pub fn from_ids(domain: &Domain, ids: impl IntoIterator<Item = ActionId>) -> Self {
        let mut mask = vec![false; domain.actions().len()];
        for id in ids {
            mask[id.index()] = true;
        }
        let ids = (0..mask.len() as u32).map(ActionId).filter(|a| mask[a.index()]).collect();
        Self { ids, mask }
    }

    pub fn contains(&self, a: ActionId) -> bool {
        self.mask.get(a.index()).copied().unwrap_or(false)
    }

    pub fn ids(&self) -> &[ActionId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn union(&self, other: &ActionSpace) -> ActionSpace {
        let mask: Vec<bool> = self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect();
        let ids = (0..mask.len() as u32).map(ActionId).filter(|a| mask[a.index()]).collect();
        ActionSpace { ids, mask }
    }
}

/// Initial state, conjunctive goal and the actions available to the planner.
#[derive(Clone, Debug)]
pub struct Problem<'a> {
    pub domain: &'a Domain,
    pub init: State,
    pub goal: Condition,
    /// `None` plans over every grounded action.
    pub space: Option<&'a ActionSpace>,
    pub guard: RelevanceGuard,
}

impl<'a> Problem<'a> {
    pub fn new(domain: &'a Domain, init: State, goal: Condition) -> Self {
        Self {
            domain,
            init,
            goal,
            space: None,
            guard: RelevanceGuard::Standard,
        }
    }

    pub fn with_space(mut self, space: &'a ActionSpace) -> Self {
        self.space = Some(space);
        self
    }

    pub fn with_guard(mut self, guard: RelevanceGuard) -> Self {
        self.guard = guard;
        self
    }

    pub fn allows(&self, a: ActionId) -> bool {
        self.space.is_none_or(|s| s.contains(a))
    }
}

/// How credited actions are discounted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Heuristic {
    /// Credited actions cost `D(a) / alpha`.
    Optimal { alpha: f64 },
    /// Credited actions cost nothing.
    Satisficing,
}

impl Heuristic {
    pub fn optimal() -> Self {
        Heuristic::Optimal { alpha: DEFAULT_ALPHA }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "btexp")]
    BtExpansion,
    #[serde(rename = "obtea")]
    Obtea,
    #[serde(rename = "hbtp-o")]
    HbtpOptimal,
    #[serde(rename = "hbtp-s")]
    HbtpSatisficing,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::BtExpansion,
        Algorithm::Obtea,
        Algorithm::HbtpOptimal,
        Algorithm::HbtpSatisficing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::BtExpansion => "btexp",
            Algorithm::Obtea => "obtea",
            Algorithm::HbtpOptimal => "hbtp-o",
            Algorithm::HbtpSatisficing => "hbtp-s",
        }
    }

    /// Whether the algorithm consumes a heuristic path.
    pub fn uses_heuristic(self) -> bool {
        matches!(self, Algorithm::HbtpOptimal | Algorithm::HbtpSatisficing)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| PlanError::UnknownAlgorithm(s.to_string()))
    }
}

/// Limits for one planner run. The run stops with [`Outcome::Timeout`] when
/// either limit is hit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub max_expansions: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            time: Some(DEFAULT_TIMEOUT),
            max_expansions: None,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            time: None,
            max_expansions: None,
        }
    }

    pub fn time(limit: Duration) -> Self {
        Self {
            time: Some(limit),
            max_expansions: None,
        }
    }

    pub fn expansions(limit: usize) -> Self {
        Self {
            time: None,
            max_expansions: Some(limit),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Solved,
    Timeout,
    Exhausted,
}

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("alpha must be at least 1, got {0}")]
    InvalidAlpha(f64),
    #[error("heuristic path action `{0}` is outside the action space")]
    ActionOutsideSpace(String),
    #[error("budget must be positive")]
    InvalidBudget,
    #[error("no goals given")]
    NoGoals,
    #[error("unknown algorithm `{0}` (expected btexp, obtea, hbtp-o or hbtp-s)")]
    UnknownAlgorithm(String),
}

/// A condition moved to the expanded set, in expansion order.
#[derive(Clone, Debug)]
pub struct ExpandedNode {
    pub condition: Condition,
    /// Action whose regression produced this condition. `None` for the goal.
    pub action: Option<ActionId>,
    /// Index of the expanded node this one was regressed from.
    pub parent: Option<usize>,
    /// Heuristic cost at expansion time.
    pub h: f64,
    /// True cost of the actions from this condition up to the goal.
    pub cost: f64,
    /// Heuristic-path credits left at this node.
    pub indicator: Arc<Indicator>,
}

#[derive(Clone, Debug)]
pub struct PlanResult {
    pub tree: BtNode,
    pub outcome: Outcome,
    /// Number of expanded conditions, the goal included.
    pub explored_count: usize,
    /// Cost of the path from the first expanded condition holding in the
    /// initial state up to the goal. `None` unless solved.
    pub total_cost: Option<f64>,
    pub elapsed: Duration,
    /// Conditions pushed onto the queue, counting updates.
    pub generated: usize,
    pub expanded: Vec<ExpandedNode>,
}

impl PlanResult {
    pub fn is_solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }

    /// Forward action sequence from the initial state to the goal along the
    /// parent chain of the solving node. Empty when unsolved.
    pub fn plan(&self) -> Vec<ActionId> {
        if !self.is_solved() {
            return Vec::new();
        }
        self.chain(self.expanded.len() - 1)
    }

    /// Actions from expanded node `i` up to the goal, in execution order.
    pub fn chain(&self, mut i: usize) -> Vec<ActionId> {
        let mut out = Vec::new();
        loop {
            let node = &self.expanded[i];
            match (node.action, node.parent) {
                (Some(a), Some(p)) => {
                    out.push(a);
                    i = p;
                }
                _ => return out,
            }
        }
    }

    /// Sum of the costs of every action leaf in the tree.
    pub fn tree_action_cost(&self, domain: &Domain) -> f64 {
        self.expanded.iter().filter_map(|n| n.action).map(|a| domain.cost(a)).sum()
    }
}

/// Plans `problem` with `algorithm`. `path` is ignored by the baselines.
pub fn plan(
    problem: &Problem,
    algorithm: Algorithm,
    path: &[ActionId],
    alpha: f64,
    budget: &Budget,
) -> Result<PlanResult, PlanError> {
    match algorithm {
        Algorithm::BtExpansion => bt_expansion(problem, budget),
        Algorithm::Obtea => obtea(problem, budget),
        Algorithm::HbtpOptimal => hbtp(problem, path, Heuristic::Optimal { alpha }, budget),
        Algorithm::HbtpSatisficing => hbtp(problem, path, Heuristic::Satisficing, budget),
    }
}

/// Heuristic behavior-tree planning guided by the action path `path`.
pub fn hbtp(problem: &Problem, path: &[ActionId], heuristic: Heuristic, budget: &Budget) -> Result<PlanResult, PlanError> {
    let credit = match heuristic {
        Heuristic::Optimal { alpha } => {
            if alpha.is_nan() || alpha < 1.0 {
                return Err(PlanError::InvalidAlpha(alpha));
            }
            search::Credit::Scaled(alpha)
        }
        Heuristic::Satisficing => search::Credit::Free,
    };
    for &a in path {
        if a.index() >= problem.domain.actions().len() {
            return Err(PlanError::ActionOutsideSpace(format!("#{}", a.0)));
        }
        if !problem.allows(a) {
            return Err(PlanError::ActionOutsideSpace(problem.domain.action_name(a).to_string()));
        }
    }
    search::run(problem, path, search::Order::Cost, credit, budget)
}

/// Cost-optimal expansion: cheapest condition first, true action costs.
pub fn obtea(problem: &Problem, budget: &Budget) -> Result<PlanResult, PlanError> {
    search::run(problem, &[], search::Order::Cost, search::Credit::None, budget)
}

/// Breadth-first expansion without cost priority. Sound and complete but
/// not cost-optimal.
pub fn bt_expansion(problem: &Problem, budget: &Budget) -> Result<PlanResult, PlanError> {
    search::run(problem, &[], search::Order::Fifo, search::Credit::None, budget)
}

/// Plans each disjunct of a DNF goal separately and joins the trees under
/// one fallback.
pub fn plan_dnf<'a>(
    problem: &Problem<'a>,
    disjuncts: &[Condition],
    mut planner: impl FnMut(&Problem<'a>) -> Result<PlanResult, PlanError>,
) -> Result<(BtNode, Vec<PlanResult>), PlanError> {
    if disjuncts.is_empty() {
        return Err(PlanError::NoGoals);
    }
    let mut results = Vec::with_capacity(disjuncts.len());
    for goal in disjuncts {
        let sub = Problem {
            goal: goal.clone(),
            ..problem.clone()
        };
        results.push(planner(&sub)?);
    }
    let tree = bt::dnf_goal_tree(results.iter().map(|r| r.tree.clone()).collect()).map_err(|_| PlanError::NoGoals)?;
    Ok((tree, results))
}

#[cfg(test)]
mod tests;
