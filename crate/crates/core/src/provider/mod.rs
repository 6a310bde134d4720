//! Sources of relevant predicates, objects and heuristic paths.
//!
//! ```
//! use hbtp::domain::{parse_task, Domain};
//! use hbtp::fixtures;
//! use hbtp::provider::{OracleProvider, Provider, Request};
//!
//! let d = Domain::parse(fixtures::KITCHEN_MINI).unwrap();
//! let t = parse_task(fixtures::KITCHEN_MINI_TASK, &d).unwrap();
//! let r = OracleProvider::default().query(&Request::new(&d, &t.init, &t.goal)).unwrap();
//! assert_eq!(r.path, ["Walk_apple", "Grab_apple", "Walk_table", "Put_apple_table"]);
//! assert_eq!(r.objects, ["apple", "table"]);
//! ```

mod llm;
mod perturb;
mod prompt;
mod reasoning;
pub mod stub;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{ActionId, Condition, Domain, State};
use crate::oracle::{optimal_path, OptimalPath, OracleError, DEFAULT_STATE_LIMIT};
use crate::planner::ActionSpace;

pub use llm::{prompt_hash, CacheMode, LlmConfig, LlmProvider, DEFAULT_RETRY_LIMIT};
pub use perturb::{mix_seed, perturb_path};
pub use prompt::{build_prompt, BlacklistEntry, Demo};
pub use reasoning::{
    grammar_check, parse_reasoning, render_reasoning, suggest, ReasoningParseError, ReasoningResult, Violation,
};

/// What a failed planning round reports back to the provider.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackPayload {
    pub top_paths: Vec<Vec<String>>,
    pub missing_predicates: Vec<String>,
    pub missing_objects: Vec<String>,
}

/// One reasoning query.
#[derive(Clone, Copy)]
pub struct Request<'a> {
    pub domain: &'a Domain,
    pub init: &'a State,
    pub goal: &'a Condition,
    /// Actions the answer may use. `None` means the whole domain.
    pub space: Option<&'a ActionSpace>,
    pub feedback: Option<&'a FeedbackPayload>,
    /// Feedback round, 0 for the first query.
    pub round: u32,
    /// Per-task seed for stochastic providers.
    pub task_seed: u64,
}

impl<'a> Request<'a> {
    pub fn new(domain: &'a Domain, init: &'a State, goal: &'a Condition) -> Self {
        Self {
            domain,
            init,
            goal,
            space: None,
            feedback: None,
            round: 0,
            task_seed: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("rate {0} is outside [0, 1]")]
    InvalidRate(f64),
    #[error("configuration: {0}")]
    Config(String),
    #[error("transport: {0}")]
    Transport(String),
    #[error("endpoint answered with status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed completion response: {0}")]
    Response(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("no recorded completion for prompt {0}")]
    CacheMiss(String),
    #[error("no usable answer after {attempts} attempts")]
    RetriesExhausted { attempts: u32, violations: Vec<Violation> },
}

impl ProviderError {
    /// Short machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            ProviderError::Oracle(OracleError::Unreachable) => "unreachable",
            ProviderError::Oracle(OracleError::BudgetExceeded(_)) => "oracle-budget",
            ProviderError::InvalidRate(_) => "invalid-rate",
            ProviderError::Config(_) => "config",
            ProviderError::Transport(_) => "transport",
            ProviderError::Status { status: 401 | 403, .. } => "auth",
            ProviderError::Status { .. } => "status",
            ProviderError::Response(_) => "response",
            ProviderError::Cache(_) => "cache",
            ProviderError::CacheMiss(_) => "cache-miss",
            ProviderError::RetriesExhausted { .. } => "retries-exhausted",
        }
    }
}

pub trait Provider: Send + Sync {
    fn query(&self, req: &Request) -> Result<ReasoningResult, ProviderError>;

    fn kind(&self) -> &'static str;
}

/// Which actions the oracle searches over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleScope {
    #[default]
    Full,
    /// Only actions whose objects all appear in the goal or as constants in
    /// some action schema. Exact on the household domains, where acting on
    /// any other object never helps, and far cheaper on large ones.
    GoalObjects,
}

/// Exact optimal paths by uniform-cost search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleProvider {
    pub state_limit: usize,
    pub scope: OracleScope,
}

impl Default for OracleProvider {
    fn default() -> Self {
        Self {
            state_limit: DEFAULT_STATE_LIMIT,
            scope: OracleScope::Full,
        }
    }
}

impl OracleProvider {
    pub fn with_scope(scope: OracleScope) -> Self {
        Self {
            scope,
            ..Self::default()
        }
    }

    pub fn optimal(&self, req: &Request) -> Result<OptimalPath, OracleError> {
        match self.scope {
            OracleScope::Full => optimal_path(req.domain, req.space, req.init, req.goal, self.state_limit),
            OracleScope::GoalObjects => {
                let space = goal_object_space(req.domain, req.goal, req.space);
                optimal_path(req.domain, Some(&space), req.init, req.goal, self.state_limit)
            }
        }
    }
}

/// Actions that touch only goal objects and schema constants.
pub fn goal_object_space(domain: &Domain, goal: &Condition, within: Option<&ActionSpace>) -> ActionSpace {
    let mut objs = BTreeSet::new();
    for l in goal.iter() {
        objs.extend(domain.literal(l).args.iter().copied());
    }
    for s in domain.schemas() {
        for t in s.pre.iter().chain(&s.add).chain(&s.del) {
            for term in &t.args {
                if let crate::domain::Term::Object(o) = term {
                    objs.insert(*o);
                }
            }
        }
    }
    let ids = domain.action_ids().filter(|&a| {
        within.is_none_or(|s| s.contains(a)) && domain.action_objects(a).iter().all(|o| objs.contains(o))
    });
    ActionSpace::from_ids(domain, ids)
}

impl Provider for OracleProvider {
    fn query(&self, req: &Request) -> Result<ReasoningResult, ProviderError> {
        let p = self.optimal(req)?;
        Ok(ReasoningResult::from_path(req.domain, &p.actions))
    }

    fn kind(&self) -> &'static str {
        "oracle"
    }
}

/// Oracle answers degraded by [`perturb_path`]. Predicates and objects are
/// those of the degraded path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MockProvider {
    pub correct_rate: f64,
    pub error_rate: f64,
    pub seed: u64,
    pub oracle: OracleProvider,
}

impl MockProvider {
    pub fn new(correct_rate: f64, error_rate: f64, seed: u64) -> Result<Self, ProviderError> {
        for r in [correct_rate, error_rate] {
            if !(0.0..=1.0).contains(&r) {
                return Err(ProviderError::InvalidRate(r));
            }
        }
        Ok(Self {
            correct_rate,
            error_rate,
            seed,
            oracle: OracleProvider::default(),
        })
    }

    pub fn with_oracle(mut self, oracle: OracleProvider) -> Self {
        self.oracle = oracle;
        self
    }
}

impl Provider for MockProvider {
    fn query(&self, req: &Request) -> Result<ReasoningResult, ProviderError> {
        let p = self.oracle.optimal(req)?;
        let used: BTreeSet<ActionId> = p.actions.iter().copied().collect();
        let pool: Vec<ActionId> = match req.space {
            Some(s) => s.ids().to_vec(),
            None => req.domain.action_ids().collect(),
        }
        .into_iter()
        .filter(|a| !used.contains(a))
        .collect();
        let seed = mix_seed(&[self.seed, req.task_seed, u64::from(req.round)]);
        let hat = perturb_path(&p.actions, &pool, self.correct_rate, self.error_rate, seed)?;
        Ok(ReasoningResult::from_path(req.domain, &hat))
    }

    fn kind(&self) -> &'static str {
        "mock"
    }
}

/// Oracle answers with one action predicate left out until feedback reports
/// that predicate as missing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedProvider {
    pub withheld: String,
    pub oracle: OracleProvider,
}

impl ScriptedProvider {
    pub fn withholding(predicate: &str) -> Self {
        Self {
            withheld: predicate.to_string(),
            oracle: OracleProvider::default(),
        }
    }
}

impl Provider for ScriptedProvider {
    fn query(&self, req: &Request) -> Result<ReasoningResult, ProviderError> {
        let p = self.oracle.optimal(req)?;
        let named = req
            .feedback
            .is_some_and(|f| f.missing_predicates.contains(&self.withheld));
        if named {
            return Ok(ReasoningResult::from_path(req.domain, &p.actions));
        }
        let kept: Vec<ActionId> = p
            .actions
            .iter()
            .copied()
            .filter(|&a| req.domain.action_predicate(a) != self.withheld)
            .collect();
        Ok(ReasoningResult::from_path(req.domain, &kept))
    }

    fn kind(&self) -> &'static str {
        "scripted"
    }
}

/// Serializable provider choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProviderConfig {
    Oracle(OracleProvider),
    Mock(MockProvider),
    Scripted(ScriptedProvider),
    Llm(LlmConfig),
}

impl ProviderConfig {
    pub fn build(&self) -> Result<Box<dyn Provider>, ProviderError> {
        Ok(match self {
            ProviderConfig::Oracle(p) => Box::new(p.clone()),
            ProviderConfig::Mock(p) => {
                MockProvider::new(p.correct_rate, p.error_rate, p.seed)?;
                Box::new(p.clone())
            }
            ProviderConfig::Scripted(p) => Box::new(p.clone()),
            ProviderConfig::Llm(c) => Box::new(LlmProvider::new(c.clone())?),
        })
    }
}
