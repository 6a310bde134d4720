//! Action-space pruning and the reflective feedback loop.
//!
//! ```
//! use hbtp::domain::{parse_task, Domain};
//! use hbtp::feedback::{plan_with_feedback, FeedbackConfig};
//! use hbtp::fixtures;
//! use hbtp::planner::Problem;
//! use hbtp::provider::ScriptedProvider;
//!
//! let d = Domain::parse(fixtures::KITCHEN_MINI).unwrap();
//! let t = parse_task(fixtures::KITCHEN_MINI_TASK, &d).unwrap();
//! let problem = Problem::new(&d, t.init, t.goal);
//! // withholds Grab until the feedback names it as missing
//! let provider = ScriptedProvider::withholding("Grab");
//! let run = plan_with_feedback(&problem, &provider, &FeedbackConfig::default(), 0).unwrap();
//! assert_eq!(run.solved_round, Some(1));
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{ActionId, Domain};
use crate::planner::{hbtp, ActionSpace, Budget, Heuristic, Outcome, PlanError, PlanResult, Problem};
use crate::provider::{FeedbackPayload, Provider, ProviderError, ReasoningResult, Request};

/// Pruned predicates `Q⁻`, objects `O⁻` and the actions `A⁻` they ground.
#[derive(Clone, Debug)]
pub struct PrunedSpace {
    pub predicates: BTreeSet<String>,
    pub objects: BTreeSet<String>,
    pub actions: ActionSpace,
    pub round: u32,
}

#[derive(Debug, Error)]
pub enum FeedbackError {
    #[error("pruned action space is empty")]
    EmptySpace,
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

impl PrunedSpace {
    /// Space from one reasoning result, restricted to `within` when given.
    pub fn new(domain: &Domain, result: &ReasoningResult, within: Option<&ActionSpace>) -> Self {
        let mut s = Self {
            predicates: BTreeSet::new(),
            objects: BTreeSet::new(),
            actions: ActionSpace::from_ids(domain, []),
            round: 0,
        };
        s.absorb(domain, result, within);
        s
    }

    /// Adds another result's predicates, objects and path; the space only
    /// grows.
    pub fn merge(&mut self, domain: &Domain, result: &ReasoningResult, within: Option<&ActionSpace>) {
        self.round += 1;
        self.absorb(domain, result, within);
    }

    fn absorb(&mut self, domain: &Domain, result: &ReasoningResult, within: Option<&ActionSpace>) {
        self.predicates.extend(result.predicates.iter().cloned());
        self.objects.extend(result.objects.iter().cloned());
        for name in &result.path {
            if let Some(a) = domain.action_id(name) {
                self.predicates.insert(domain.action_predicate(a).to_string());
                for &o in domain.action_objects(a) {
                    self.objects.insert(domain.object(o).name.clone());
                }
            }
        }
        let ids = domain.action_ids().filter(|&a| {
            within.is_none_or(|s| s.contains(a))
                && self.predicates.contains(domain.action_predicate(a))
                && domain
                    .action_objects(a)
                    .iter()
                    .all(|&o| self.objects.contains(&domain.object(o).name))
        });
        self.actions = ActionSpace::from_ids(domain, ids);
    }

    /// Action predicates and objects of the domain not yet in the space,
    /// alphabetically.
    pub fn missing(&self, domain: &Domain) -> (Vec<String>, Vec<String>) {
        let mut preds: Vec<String> = domain
            .schemas()
            .iter()
            .map(|s| s.name.clone())
            .filter(|n| !self.predicates.contains(n))
            .collect();
        preds.sort();
        let mut objs: Vec<String> = domain
            .objects()
            .iter()
            .map(|o| o.name.clone())
            .filter(|n| !self.objects.contains(n))
            .collect();
        objs.sort();
        (preds, objs)
    }
}

/// [`PrunedSpace::new`] that rejects an empty result.
pub fn prune_action_space(
    domain: &Domain,
    result: &ReasoningResult,
    within: Option<&ActionSpace>,
) -> Result<PrunedSpace, FeedbackError> {
    let s = PrunedSpace::new(domain, result, within);
    if s.actions.is_empty() {
        return Err(FeedbackError::EmptySpace);
    }
    Ok(s)
}

/// Indices of the expanded nodes ending the `k` longest parent chains.
/// Only chains ending at a node nobody was expanded from count; equal
/// lengths keep expansion order.
pub fn longest_chains(parents: &[Option<usize>], k: usize) -> Vec<usize> {
    let mut is_parent = vec![false; parents.len()];
    let mut depth = vec![0usize; parents.len()];
    for (i, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            is_parent[p] = true;
            depth[i] = depth[p] + 1;
        }
    }
    let mut leaves: Vec<usize> = (0..parents.len()).filter(|&i| !is_parent[i] && depth[i] > 0).collect();
    leaves.sort_by_key(|&i| std::cmp::Reverse(depth[i]));
    leaves.truncate(k);
    leaves
}

/// Action sequences of the `k` longest chains of a run, in execution order.
pub fn summarize_bt(domain: &Domain, run: &PlanResult, k: usize) -> Vec<Vec<String>> {
    let parents: Vec<Option<usize>> = run.expanded.iter().map(|n| n.parent).collect();
    longest_chains(&parents, k)
        .into_iter()
        .map(|i| run.chain(i).iter().map(|&a| domain.action_name(a).to_string()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackConfig {
    pub heuristic: Heuristic,
    /// Feedback rounds after the first query; 0 disables feedback.
    pub max_rounds: u32,
    pub budget: Budget,
    /// Chains summarized per failed round.
    pub k: usize,
    /// Caps the missing predicate and object lists; `None` sends them whole.
    pub missing_limit: Option<usize>,
}

impl Default for FeedbackConfig {
    fn default() -> Self {
        Self {
            heuristic: Heuristic::Satisficing,
            max_rounds: 3,
            budget: Budget::default(),
            k: 3,
            missing_limit: None,
        }
    }
}

/// One query-prune-plan round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: u32,
    /// Payload sent with this round's query.
    pub feedback: Option<FeedbackPayload>,
    pub reasoning: Option<ReasoningResult>,
    pub provider_error: Option<String>,
    pub predicates: usize,
    pub objects: usize,
    pub actions: usize,
    /// `None` when planning was skipped on an empty space.
    pub outcome: Option<Outcome>,
    pub explored_count: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug)]
pub struct FeedbackRun {
    pub rounds: Vec<RoundLog>,
    pub solved_round: Option<u32>,
    /// Last planner result, solved or not.
    pub result: Option<PlanResult>,
    /// Final `A⁻`.
    pub space: Option<ActionSpace>,
}

impl FeedbackRun {
    pub fn is_solved(&self) -> bool {
        self.solved_round.is_some()
    }

    /// Solved within `rounds` feedback rounds.
    pub fn solved_within(&self, rounds: u32) -> bool {
        self.solved_round.is_some_and(|r| r <= rounds)
    }
}

/// Queries `provider`, plans on the pruned space, and on failure feeds
/// summaries of the failed search back for up to `max_rounds` more rounds.
/// Each round's heuristic path comes from that round's answer alone while
/// the space accumulates.
pub fn plan_with_feedback(
    problem: &Problem,
    provider: &dyn Provider,
    config: &FeedbackConfig,
    task_seed: u64,
) -> Result<FeedbackRun, FeedbackError> {
    let domain = problem.domain;
    let mut run = FeedbackRun {
        rounds: Vec::new(),
        solved_round: None,
        result: None,
        space: None,
    };
    let mut pruned: Option<PrunedSpace> = None;
    let mut payload: Option<FeedbackPayload> = None;

    for round in 0..=config.max_rounds {
        let sent = payload.take();
        let req = Request {
            domain,
            init: &problem.init,
            goal: &problem.goal,
            space: problem.space,
            feedback: sent.as_ref(),
            round,
            task_seed,
        };
        let mut log = RoundLog {
            round,
            feedback: sent.clone(),
            reasoning: None,
            provider_error: None,
            predicates: 0,
            objects: 0,
            actions: 0,
            outcome: None,
            explored_count: 0,
            elapsed_ms: 0.0,
        };
        let mut hat: Vec<ActionId> = Vec::new();
        match provider.query(&req) {
            Ok(r) => {
                match &mut pruned {
                    Some(p) => p.merge(domain, &r, problem.space),
                    None => pruned = Some(PrunedSpace::new(domain, &r, problem.space)),
                }
                hat = r.path.iter().filter_map(|n| domain.action_id(n)).collect();
                log.reasoning = Some(r);
            }
            Err(e @ ProviderError::RetriesExhausted { .. }) => log.provider_error = Some(e.to_string()),
            Err(e) => return Err(e.into()),
        }

        let mut top_paths = Vec::new();
        if let Some(p) = &pruned {
            log.predicates = p.predicates.len();
            log.objects = p.objects.len();
            log.actions = p.actions.len();
            run.space = Some(p.actions.clone());
            if !p.actions.is_empty() {
                hat.retain(|&a| p.actions.contains(a));
                let sub = Problem::new(domain, problem.init.clone(), problem.goal.clone())
                    .with_space(&p.actions)
                    .with_guard(problem.guard);
                let result = hbtp(&sub, &hat, config.heuristic, &config.budget)?;
                log.outcome = Some(result.outcome);
                log.explored_count = result.explored_count;
                log.elapsed_ms = result.elapsed.as_secs_f64() * 1e3;
                let solved = result.is_solved();
                if !solved {
                    top_paths = summarize_bt(domain, &result, config.k);
                }
                run.result = Some(result);
                if solved {
                    run.solved_round = Some(round);
                    run.rounds.push(log);
                    return Ok(run);
                }
            }
        }
        run.rounds.push(log);

        let (mut missing_predicates, mut missing_objects) = match &pruned {
            Some(p) => p.missing(domain),
            None => PrunedSpace::new(domain, &ReasoningResult::default(), None).missing(domain),
        };
        if let Some(n) = config.missing_limit {
            missing_predicates.truncate(n);
            missing_objects.truncate(n);
        }
        payload = Some(FeedbackPayload {
            top_paths,
            missing_predicates,
            missing_objects,
        });
    }
    Ok(run)
}

/// JSON round log of a run.
pub fn round_log_json(run: &FeedbackRun) -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "solved_round": run.solved_round,
        "rounds": run.rounds,
    }))
    .expect("round logs serialize")
}
