use super::{Condition, Domain, DomainError, State};

/// An initial state and a conjunctive goal over some domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskSpec {
    pub init: State,
    pub goal: Condition,
}

/// Parses a task file:
///
/// ```text
/// s0: Near(fridge)
/// goal: On(apple,table) & Clean(apple)
/// ```
pub fn parse_task(text: &str, domain: &Domain) -> Result<TaskSpec, TaskParseError> {
    let mut init = None;
    let mut goal = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or(TaskParseError::Syntax { line: i + 1 })?;
        let cond = domain
            .parse_condition(value)
            .map_err(|source| TaskParseError::Literal { line: i + 1, source })?;
        match key.trim() {
            "s0" => init = Some(cond),
            "goal" => goal = Some(cond),
            other => {
                return Err(TaskParseError::UnknownKey {
                    line: i + 1,
                    key: other.to_string(),
                })
            }
        }
    }
    Ok(TaskSpec {
        init: init.ok_or(TaskParseError::Missing("s0"))?,
        goal: goal.ok_or(TaskParseError::Missing("goal"))?,
    })
}

pub fn render_task(task: &TaskSpec, domain: &Domain) -> String {
    let s0: Vec<&str> = domain.condition_names(&task.init).collect();
    let goal: Vec<&str> = domain.condition_names(&task.goal).collect();
    format!("s0: {}\ngoal: {}\n", s0.join(", "), goal.join(" & "))
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TaskParseError {
    #[error("line {line}: expected `key: value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {source}")]
    Literal { line: usize, source: DomainError },
    #[error("missing `{0}:` line")]
    Missing(&'static str),
}
