use serde::{Deserialize, Serialize};

use crate::bt::{BtNode, Status};
use crate::domain::{ActionId, Condition, Domain, State};

/// Literals forced in or out of the state after a given step.
#[derive(Clone, Debug, PartialEq)]
pub struct Disturbance {
    /// Applied after this many actions have run.
    pub after_step: usize,
    pub add: Condition,
    pub remove: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExecFailure {
    /// The tree returned Failure: no branch applies in the current state.
    NoBranch { state: Vec<String> },
    StepCapExceeded { cap: usize },
    /// An emitted action was not applicable.
    Precondition { action: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExecTrace {
    pub success: bool,
    pub steps: usize,
    pub actions: Vec<ActionId>,
    pub failure: Option<ExecFailure>,
    pub final_state: State,
}

impl ExecTrace {
    pub fn cost(&self, domain: &Domain) -> f64 {
        self.actions.iter().map(|&a| domain.cost(a)).sum()
    }
}

/// Ticks `tree` from `s0`, applying each emitted action, until it returns
/// Success or Failure or `10 × (children of the root)` steps have run.
pub fn simulate_execution(tree: &BtNode, domain: &Domain, s0: &State, disturbances: &[Disturbance]) -> ExecTrace {
    let cap = 10 * tree.arity().max(1);
    let mut state = s0.clone();
    let mut actions = Vec::new();
    let done = |success, actions, failure, state| ExecTrace {
        success,
        steps: 0,
        actions,
        failure,
        final_state: state,
    };
    loop {
        let tick = tree.tick(&state);
        let mut trace = match tick.status {
            Status::Success => done(true, actions, None, state),
            Status::Failure => {
                let names = domain.condition_names(&state).map(str::to_string).collect();
                done(false, actions, Some(ExecFailure::NoBranch { state: names }), state)
            }
            Status::Running => {
                if actions.len() >= cap {
                    done(false, actions, Some(ExecFailure::StepCapExceeded { cap }), state)
                } else {
                    let a = tick.action.expect("running ticks carry an action");
                    match domain.apply_checked(&state, a) {
                        Ok(next) => {
                            state = next;
                            actions.push(a);
                            for d in disturbances.iter().filter(|d| d.after_step == actions.len()) {
                                state = state.difference(&d.remove).union(&d.add);
                            }
                            continue;
                        }
                        Err(_) => {
                            let failure = ExecFailure::Precondition {
                                action: domain.action_name(a).to_string(),
                            };
                            done(false, actions, Some(failure), state)
                        }
                    }
                }
            }
        };
        trace.steps = trace.actions.len();
        return trace;
    }
}
