use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, IteratorRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Condition, Domain, DomainError, Lit, State};
use crate::household::{self, Size};
use crate::provider::{OracleProvider, Request};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

impl Difficulty {
    pub const ALL: [Difficulty; 3] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Hard];

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Difficulty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Difficulty::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown difficulty `{s}` (expected easy, medium or hard)"))
    }
}

/// A generated task with its oracle solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub id: String,
    pub difficulty: Difficulty,
    pub s0: Vec<String>,
    pub goal: Vec<String>,
    pub optimal: Vec<String>,
    pub optimal_cost: f64,
}

impl TaskRecord {
    pub fn init(&self, domain: &Domain) -> Result<State, DomainError> {
        self.s0.iter().map(|l| domain.parse_literal(l)).collect()
    }

    pub fn goal(&self, domain: &Domain) -> Result<Condition, DomainError> {
        self.goal.iter().map(|l| domain.parse_literal(l)).collect()
    }

    /// Stable per-task seed derived from the id.
    pub fn seed(&self) -> u64 {
        self.id
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
    }
}

/// Where initial states come from.
#[derive(Clone, Debug)]
pub enum SceneSource {
    Fixed(State),
    /// Up to `max_steps` uniformly chosen applicable actions from `base`.
    RandomWalk { base: State, max_steps: usize },
    Household(Size),
}

impl SceneSource {
    fn sample(&self, domain: &Domain, rng: &mut ChaCha8Rng) -> State {
        match self {
            SceneSource::Fixed(s) => s.clone(),
            SceneSource::RandomWalk { base, max_steps } => {
                let mut s = base.clone();
                for _ in 0..rng.random_range(0..=*max_steps) {
                    let Some(a) = domain.action_ids().filter(|&a| domain.is_applicable(&s, a)).choose(rng) else {
                        break;
                    };
                    s = domain.apply(&s, a);
                }
                s
            }
            SceneSource::Household(size) => household::random_scene(*size, domain, rng),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DatasetOptions {
    /// Predicates goals may use; `None` allows all.
    pub goal_predicates: Option<Vec<String>>,
    pub oracle: OracleProvider,
    /// Sampling attempts allowed per requested task.
    pub attempts_per_task: usize,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self {
            goal_predicates: None,
            oracle: OracleProvider::default(),
            attempts_per_task: 200,
        }
    }
}

impl DatasetOptions {
    /// Household goals, with the oracle limited to goal objects.
    pub fn household() -> Self {
        Self {
            goal_predicates: Some(household::GOAL_PREDICATES.iter().map(|s| s.to_string()).collect()),
            oracle: OracleProvider::with_scope(crate::provider::OracleScope::GoalObjects),
            ..Self::default()
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("found only {found} of {wanted} distinct reachable goals")]
    InsufficientGoals { wanted: usize, found: usize },
}

/// True when two goal literals can never hold together: no action adds
/// both, and every action adding either deletes the other.
fn has_mutex_pair(domain: &Domain, goal: &Condition) -> bool {
    let lits = goal.lits();
    let excludes = |a: Lit, b: Lit| {
        domain.adders(a).iter().all(|&x| {
            let act = domain.action(x);
            act.del.contains(b) && !act.add.contains(b)
        })
    };
    lits.iter()
        .enumerate()
        .any(|(i, &a)| lits[i + 1..].iter().any(|&b| excludes(a, b) && excludes(b, a)))
}

/// `n` distinct `(s0, goal)` tasks of one difficulty, each solved by the
/// oracle. Easy goals are single literals whose optimal plan touches only
/// goal objects. Medium goals are either single literals that need another
/// object (a tool) or pairs of literals. Hard goals are triples.
pub fn generate_dataset(
    domain: &Domain,
    scenes: &SceneSource,
    n: usize,
    difficulty: Difficulty,
    seed: u64,
    opts: &DatasetOptions,
) -> Result<Vec<TaskRecord>, DatasetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let allowed: Vec<Lit> = (0..domain.literal_count() as u32)
        .map(Lit)
        .filter(|&l| !domain.adders(l).is_empty())
        .filter(|&l| {
            let pred = &domain.predicates()[domain.literal(l).pred.0 as usize].name;
            opts.goal_predicates.as_ref().is_none_or(|ps| ps.contains(pred))
        })
        .collect();
    let mut seen: FxHashSet<(State, Condition)> = FxHashSet::default();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n.saturating_mul(opts.attempts_per_task) {
        if out.len() == n {
            break;
        }
        let s0 = scenes.sample(domain, &mut rng);
        let open: Vec<Lit> = allowed.iter().copied().filter(|&l| !s0.contains(l)).collect();
        let (size, want_tool) = match difficulty {
            Difficulty::Easy => (1, Some(false)),
            Difficulty::Medium if rng.random_bool(0.5) => (1, Some(true)),
            Difficulty::Medium => (2, None),
            Difficulty::Hard => (3, None),
        };
        if open.len() < size {
            continue;
        }
        let goal = Condition::from_lits(open.choose_multiple(&mut rng, size).copied());
        if seen.contains(&(s0.clone(), goal.clone())) || has_mutex_pair(domain, &goal) {
            continue;
        }
        // goals the oracle cannot settle within its state limit are skipped
        let Ok(p) = opts.oracle.optimal(&Request::new(domain, &s0, &goal)) else {
            continue;
        };
        if let Some(tool) = want_tool {
            let goal_objs: BTreeSet<_> = goal.iter().flat_map(|l| domain.literal(l).args.iter().copied()).collect();
            let uses_tool = p
                .actions
                .iter()
                .any(|&a| domain.action_objects(a).iter().any(|o| !goal_objs.contains(o)));
            if uses_tool != tool {
                continue;
            }
        }
        let names = |c: &Condition| domain.condition_names(c).map(str::to_string).collect();
        out.push(TaskRecord {
            id: format!("{difficulty}-{:03}", out.len()),
            difficulty,
            s0: names(&s0),
            goal: names(&goal),
            optimal: p.actions.iter().map(|&a| domain.action_name(a).to_string()).collect(),
            optimal_cost: p.cost,
        });
        seen.insert((s0, goal));
    }
    if out.len() < n {
        return Err(DatasetError::InsufficientGoals {
            wanted: n,
            found: out.len(),
        });
    }
    Ok(out)
}

/// Concatenated Easy, Medium and Hard tiers of `per_tier` tasks each.
pub fn generate_tiers(
    domain: &Domain,
    scenes: &SceneSource,
    per_tier: usize,
    seed: u64,
    opts: &DatasetOptions,
) -> Result<Vec<TaskRecord>, DatasetError> {
    let mut out = Vec::new();
    for (i, d) in Difficulty::ALL.into_iter().enumerate() {
        out.extend(generate_dataset(domain, scenes, per_tier, d, seed.wrapping_add(i as u64), opts)?);
    }
    Ok(out)
}

/// One JSON object per line.
pub fn dataset_to_jsonl(tasks: &[TaskRecord]) -> String {
    tasks
        .iter()
        .map(|t| serde_json::to_string(t).expect("task records serialize") + "\n")
        .collect()
}

pub fn dataset_from_jsonl(text: &str) -> Result<Vec<TaskRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
