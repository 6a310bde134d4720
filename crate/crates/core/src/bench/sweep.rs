use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{ActionId, Domain};
use crate::planner::{plan, Algorithm, Budget, Outcome, Problem, DEFAULT_ALPHA};
use crate::provider::{mix_seed, perturb_path, ProviderError};

use super::TaskRecord;

/// Grid of heuristic-path qualities to plan with.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub correct_rates: Vec<f64>,
    pub error_rates: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub alpha: f64,
    pub budget: Budget,
    pub seed: u64,
    pub serial: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            correct_rates: vec![0.2, 0.4, 0.6, 0.8, 1.0],
            error_rates: vec![0.0, 0.2, 0.4],
            algorithms: vec![Algorithm::HbtpOptimal, Algorithm::HbtpSatisficing],
            alpha: DEFAULT_ALPHA,
            budget: Budget::default(),
            seed: 0,
            serial: false,
        }
    }
}

/// Mean results of one algorithm at one `(correct, error)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub correct_rate: f64,
    pub error_rate: f64,
    pub tasks: usize,
    pub solved: usize,
    pub timeouts: usize,
    pub mean_explored: f64,
}

/// Plans every task on the full space with the task's optimal path
/// perturbed to each grid cell.
pub fn run_sweep(domain: &Domain, tasks: &[TaskRecord], cfg: &SweepConfig) -> Result<Vec<SweepRow>, ProviderError> {
    for &r in cfg.correct_rates.iter().chain(&cfg.error_rates) {
        if !(0.0..=1.0).contains(&r) {
            return Err(ProviderError::InvalidRate(r));
        }
    }
    let mut cells = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &e in &cfg.error_rates {
            for &c in &cfg.correct_rates {
                cells.push((algorithm, c, e));
            }
        }
    }
    let one = |t: &TaskRecord, algorithm: Algorithm, c: f64, e: f64| -> Option<(Outcome, usize)> {
        let init = t.init(domain).ok()?;
        let goal = t.goal(domain).ok()?;
        let opt: Vec<ActionId> = t.optimal.iter().filter_map(|n| domain.action_id(n)).collect();
        let pool: Vec<ActionId> = domain.action_ids().filter(|a| !opt.contains(a)).collect();
        let seed = mix_seed(&[cfg.seed, t.seed()]);
        let hat = perturb_path(&opt, &pool, c, e, seed).ok()?;
        let r = plan(&Problem::new(domain, init, goal), algorithm, &hat, cfg.alpha, &cfg.budget).ok()?;
        Some((r.outcome, r.explored_count))
    };
    let cell = |&(algorithm, c, e): &(Algorithm, f64, f64)| {
        let results: Vec<(Outcome, usize)> = tasks.iter().filter_map(|t| one(t, algorithm, c, e)).collect();
        let n = results.len();
        SweepRow {
            algorithm,
            correct_rate: c,
            error_rate: e,
            tasks: n,
            solved: results.iter().filter(|r| r.0 == Outcome::Solved).count(),
            timeouts: results.iter().filter(|r| r.0 == Outcome::Timeout).count(),
            mean_explored: if n == 0 {
                0.0
            } else {
                results.iter().map(|r| r.1 as f64).sum::<f64>() / n as f64
            },
        }
    };
    Ok(if cfg.serial {
        cells.iter().map(cell).collect()
    } else {
        cells.par_iter().map(cell).collect()
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("sweep rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}
