//! Execution simulation, dataset generation and the benchmark runner.

mod dataset;
mod exec;
mod sweep;

use std::collections::BTreeMap;
use std::io;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{ActionId, Domain};
use crate::feedback::{plan_with_feedback, FeedbackConfig};
use crate::planner::{plan, Algorithm, Budget, Heuristic, Outcome, PlanResult, Problem, DEFAULT_ALPHA};
use crate::provider::{mix_seed, OracleProvider, OracleScope, Provider, ProviderConfig, ProviderError, Request};

pub use dataset::{
    dataset_from_jsonl, dataset_to_jsonl, generate_dataset, generate_tiers, DatasetError, DatasetOptions, Difficulty,
    SceneSource, TaskRecord,
};
pub use exec::{simulate_execution, Disturbance, ExecFailure, ExecTrace};
pub use sweep::{run_sweep, sweep_csv, SweepConfig, SweepRow};

/// Where heuristic planners search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceMode {
    /// Every planner searches the whole domain.
    Full,
    /// Heuristic planners search the provider-pruned space with feedback;
    /// baselines still search the whole domain.
    Pruned,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub provider: ProviderConfig,
    pub alpha: f64,
    pub budget: Budget,
    pub repetitions: u32,
    pub mode: SpaceMode,
    pub max_feedback: u32,
    pub k_summary: usize,
    pub serial: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            provider: ProviderConfig::Oracle(OracleProvider::with_scope(OracleScope::GoalObjects)),
            alpha: DEFAULT_ALPHA,
            budget: Budget::default(),
            repetitions: 1,
            mode: SpaceMode::Full,
            max_feedback: 3,
            k_summary: 3,
            serial: false,
        }
    }
}

/// One algorithm on one task.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub task: String,
    pub difficulty: Difficulty,
    pub algorithm: Algorithm,
    pub repetition: u32,
    pub outcome: Option<Outcome>,
    pub explored_count: usize,
    /// Cost along the planner's solving chain.
    pub total_cost: Option<f64>,
    /// Cost of the actions the tree emits when executed from `s0`.
    pub executed_cost: Option<f64>,
    pub executed: Option<bool>,
    pub optimal_cost: f64,
    pub space_actions: usize,
    pub heuristic_len: usize,
    /// Feedback round that solved the task, pruned mode only.
    pub solved_round: Option<u32>,
    pub error: Option<String>,
    #[serde(skip)]
    pub tree: Option<String>,
    #[serde(skip)]
    pub planning_ms: f64,
    #[serde(skip)]
    pub provider_ms: f64,
}

impl RunRow {
    pub fn is_solved(&self) -> bool {
        self.outcome == Some(Outcome::Solved)
    }
}

fn heuristic_of(algorithm: Algorithm, alpha: f64) -> Heuristic {
    match algorithm {
        Algorithm::HbtpSatisficing => Heuristic::Satisficing,
        _ => Heuristic::Optimal { alpha },
    }
}

fn run_one(
    domain: &Domain,
    task: &TaskRecord,
    algorithm: Algorithm,
    repetition: u32,
    provider: &dyn Provider,
    cfg: &BenchConfig,
) -> RunRow {
    let mut row = RunRow {
        task: task.id.clone(),
        difficulty: task.difficulty,
        algorithm,
        repetition,
        outcome: None,
        explored_count: 0,
        total_cost: None,
        executed_cost: None,
        executed: None,
        optimal_cost: task.optimal_cost,
        space_actions: domain.actions().len(),
        heuristic_len: 0,
        solved_round: None,
        error: None,
        tree: None,
        planning_ms: 0.0,
        provider_ms: 0.0,
    };
    let (init, goal) = match (task.init(domain), task.goal(domain)) {
        (Ok(i), Ok(g)) => (i, g),
        (Err(e), _) | (_, Err(e)) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let problem = Problem::new(domain, init.clone(), goal.clone());
    let seed = mix_seed(&[task.seed(), u64::from(repetition)]);

    let result: Result<PlanResult, String> = if !algorithm.uses_heuristic() {
        plan(&problem, algorithm, &[], cfg.alpha, &cfg.budget).map_err(|e| e.to_string())
    } else if cfg.mode == SpaceMode::Pruned {
        let fc = FeedbackConfig {
            heuristic: heuristic_of(algorithm, cfg.alpha),
            max_rounds: cfg.max_feedback,
            budget: cfg.budget,
            k: cfg.k_summary,
            missing_limit: None,
        };
        let started = Instant::now();
        match plan_with_feedback(&problem, provider, &fc, seed) {
            Ok(run) => {
                let planning: f64 = run.rounds.iter().map(|r| r.elapsed_ms).sum();
                row.provider_ms = started.elapsed().as_secs_f64() * 1e3 - planning;
                row.solved_round = run.solved_round;
                row.space_actions = run.space.as_ref().map_or(0, |s| s.len());
                row.heuristic_len = run
                    .rounds
                    .last()
                    .and_then(|r| r.reasoning.as_ref())
                    .map_or(0, |r| r.path.len());
                match run.result {
                    Some(mut r) => {
                        r.elapsed = std::time::Duration::from_secs_f64(planning / 1e3);
                        Ok(r)
                    }
                    None => {
                        // every round left the pruned space empty
                        row.outcome = Some(Outcome::Exhausted);
                        return row;
                    }
                }
            }
            Err(e) => Err(e.to_string()),
        }
    } else {
        let started = Instant::now();
        let hat: Result<Vec<ActionId>, ProviderError> = provider
            .query(&Request {
                task_seed: seed,
                ..Request::new(domain, &init, &goal)
            })
            .map(|r| r.path.iter().filter_map(|n| domain.action_id(n)).collect());
        row.provider_ms = started.elapsed().as_secs_f64() * 1e3;
        match hat {
            Ok(hat) => {
                row.heuristic_len = hat.len();
                plan(&problem, algorithm, &hat, cfg.alpha, &cfg.budget).map_err(|e| e.to_string())
            }
            Err(e) => Err(e.to_string()),
        }
    };

    match result {
        Ok(r) => {
            row.outcome = Some(r.outcome);
            row.explored_count = r.explored_count;
            row.total_cost = r.total_cost;
            row.planning_ms = r.elapsed.as_secs_f64() * 1e3;
            if r.is_solved() {
                let trace = simulate_execution(&r.tree, domain, &init, &[]);
                row.executed = Some(trace.success && goal.is_subset(&trace.final_state));
                row.executed_cost = Some(trace.cost(domain));
                row.tree = Some(crate::bt::serialize(&r.tree, domain));
            }
        }
        Err(e) => row.error = Some(e),
    }
    row
}

/// Runs every algorithm on every task `repetitions` times. Rows come back
/// sorted by task, algorithm and repetition whatever the execution order.
pub fn run_benchmark(domain: &Domain, tasks: &[TaskRecord], cfg: &BenchConfig) -> Result<Vec<RunRow>, ProviderError> {
    let provider = cfg.provider.build()?;
    let jobs: Vec<(usize, Algorithm, u32)> = tasks
        .iter()
        .enumerate()
        .flat_map(|(i, _)| {
            cfg.algorithms
                .iter()
                .flat_map(move |&a| (0..cfg.repetitions).map(move |r| (i, a, r)))
        })
        .collect();
    let work = |&(i, a, r): &(usize, Algorithm, u32)| run_one(domain, &tasks[i], a, r, provider.as_ref(), cfg);
    let mut rows: Vec<RunRow> = if cfg.serial {
        jobs.iter().map(work).collect()
    } else {
        jobs.par_iter().map(work).collect()
    };
    let order = |a: Algorithm| Algorithm::ALL.iter().position(|&x| x == a).unwrap_or(usize::MAX);
    rows.sort_by(|x, y| {
        (&x.task, order(x.algorithm), x.repetition).cmp(&(&y.task, order(y.algorithm), y.repetition))
    });
    Ok(rows)
}

/// Aggregate metrics of one algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub solved: usize,
    pub errors: usize,
    pub timeout_rate: f64,
    /// Mean expanded conditions `|S⁻|` over runs that planned.
    pub mean_explored: f64,
    /// Mean executed cost `D(T)` over solved runs.
    pub mean_cost: f64,
    pub mean_optimal_cost: f64,
    pub mean_space: f64,
    pub execution_failures: usize,
    pub sr_nf: f64,
    pub sr_1f: f64,
    pub sr_3f: f64,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// Per-algorithm aggregates, in the order of [`Algorithm::ALL`].
pub fn report(rows: &[RunRow]) -> Vec<ReportRow> {
    let mut by: BTreeMap<usize, Vec<&RunRow>> = BTreeMap::new();
    for r in rows {
        let i = Algorithm::ALL.iter().position(|&a| a == r.algorithm).unwrap_or(usize::MAX);
        by.entry(i).or_default().push(r);
    }
    by.into_values()
        .map(|rs| {
            let n = rs.len();
            let planned: Vec<&&RunRow> = rs.iter().filter(|r| r.outcome.is_some()).collect();
            let solved: Vec<&&RunRow> = rs.iter().filter(|r| r.is_solved()).collect();
            let sr = |k: u32| {
                let ok = rs
                    .iter()
                    .filter(|r| r.is_solved() && r.solved_round.is_none_or(|s| s <= k))
                    .count();
                ok as f64 / n as f64
            };
            ReportRow {
                algorithm: rs[0].algorithm,
                runs: n,
                solved: solved.len(),
                errors: rs.iter().filter(|r| r.error.is_some()).count(),
                timeout_rate: rs.iter().filter(|r| r.outcome == Some(Outcome::Timeout)).count() as f64 / n as f64,
                mean_explored: mean(planned.iter().map(|r| r.explored_count as f64)),
                mean_cost: mean(solved.iter().filter_map(|r| r.executed_cost)),
                mean_optimal_cost: mean(solved.iter().map(|r| r.optimal_cost)),
                mean_space: mean(rs.iter().map(|r| r.space_actions as f64)),
                execution_failures: rs.iter().filter(|r| r.executed == Some(false)).count(),
                sr_nf: sr(0),
                sr_1f: sr(1),
                sr_3f: sr(3),
            }
        })
        .collect()
}

pub fn report_csv(report: &[ReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in report {
        w.serialize(r).expect("report rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

#[derive(Serialize)]
struct TimingRow<'a> {
    task: &'a str,
    algorithm: Algorithm,
    repetition: u32,
    domain_actions: usize,
    space_actions: usize,
    outcome: Option<Outcome>,
    planning_ms: f64,
    provider_ms: f64,
}

/// Wall-clock measurements. Kept apart from the deterministic outputs.
pub fn timing_csv(domain: &Domain, rows: &[RunRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(TimingRow {
            task: &r.task,
            algorithm: r.algorithm,
            repetition: r.repetition,
            domain_actions: domain.actions().len(),
            space_actions: r.space_actions,
            outcome: r.outcome,
            planning_ms: r.planning_ms,
            provider_ms: r.provider_ms,
        })
        .expect("timing rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn runs_jsonl(rows: &[RunRow]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("run rows serialize") + "\n")
        .collect()
}

/// Serialized trees of solved runs, one JSON object per line.
pub fn trees_jsonl(rows: &[RunRow]) -> String {
    rows.iter()
        .filter_map(|r| {
            let tree: serde_json::Value = serde_json::from_str(r.tree.as_ref()?).ok()?;
            let line = serde_json::json!({
                "task": r.task,
                "algorithm": r.algorithm,
                "repetition": r.repetition,
                "tree": tree,
            });
            Some(line.to_string() + "\n")
        })
        .collect()
}

/// Writes `runs.jsonl`, `trees.jsonl`, `report.csv` and `timing.csv` into
/// `dir`. All but `timing.csv` are reproducible byte for byte.
pub fn write_outputs(dir: &Path, domain: &Domain, rows: &[RunRow]) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("runs.jsonl"), runs_jsonl(rows))?;
    std::fs::write(dir.join("trees.jsonl"), trees_jsonl(rows))?;
    std::fs::write(dir.join("report.csv"), report_csv(&report(rows)))?;
    std::fs::write(dir.join("timing.csv"), timing_csv(domain, rows))?;
    Ok(())
}

#[cfg(test)]
mod tests;
