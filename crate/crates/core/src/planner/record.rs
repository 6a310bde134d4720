use serde::{Deserialize, Serialize};

use super::{Algorithm, Outcome, PlanResult};
use crate::domain::Domain;

/// One expanded condition in a run record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub condition: Vec<String>,
    pub action: Option<String>,
    pub parent: Option<usize>,
    pub h: f64,
}

/// JSON summary of a planner run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub outcome: Outcome,
    pub explored_count: usize,
    pub total_cost: Option<f64>,
    pub elapsed_ms: f64,
    pub plan: Vec<String>,
    pub trace: Vec<TraceEntry>,
}

impl PlanResult {
    pub fn record(&self, domain: &Domain, algorithm: Algorithm) -> RunRecord {
        RunRecord {
            algorithm,
            outcome: self.outcome,
            explored_count: self.explored_count,
            total_cost: self.total_cost,
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
            plan: self.plan().into_iter().map(|a| domain.action_name(a).to_string()).collect(),
            trace: self
                .expanded
                .iter()
                .map(|n| TraceEntry {
                    condition: domain.condition_names(&n.condition).map(str::to_string).collect(),
                    action: n.action.map(|a| domain.action_name(a).to_string()),
                    parent: n.parent,
                    h: n.h,
                })
                .collect(),
        }
    }
}
