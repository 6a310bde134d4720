use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domain::{Condition, Domain, ALL};

use super::FeedbackPayload;

/// One worked example shown to the model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demo {
    pub goals: String,
    pub path: Vec<String>,
    pub predicates: Vec<String>,
    pub objects: Vec<String>,
}

impl Demo {
    fn new(goals: &str, path: &[&str], predicates: &[&str], objects: &[&str]) -> Self {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
        Self {
            goals: goals.to_string(),
            path: own(path),
            predicates: own(predicates),
            objects: own(objects),
        }
    }

    /// The two household demonstrations used when none are configured.
    pub fn defaults() -> Vec<Demo> {
        vec![
            Demo::new(
                "IsSwitchedOn_candle",
                &["Walk_candle", "SwitchOn_candle"],
                &["Walk", "SwitchOn"],
                &["candle"],
            ),
            Demo::new(
                "IsClean_peach & IsIn_peach_fridge",
                &[
                    "Walk_peach",
                    "RightGrab_peach",
                    "Walk_faucet",
                    "SwitchOn_faucet",
                    "Wash_peach",
                    "Walk_fridge",
                    "Open_fridge",
                    "RightPutIn_peach_fridge",
                ],
                &["Walk", "RightGrab", "SwitchOn", "Wash", "Open", "RightPutIn"],
                &["peach", "faucet", "fridge"],
            ),
        ]
    }
}

/// A rejected output and the reasons it was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlacklistEntry {
    pub attempt: u32,
    pub violations: Vec<String>,
}

const SYSTEM: &str = "\
[Condition Predicates] Lists all predicates representing conditions and their optional parameter sets.
[Action Predicates] Lists all the actions, specifying their associated costs in parentheses.
[Objects] Lists all parameter sets. The objects are categorized for a compact representation.
[Few-shot Demonstrations] Illustrates mappings from goals to a Heuristic Path, Relevant Action Predicates and Relevant Objects.
- Heuristic Path: the sequence of actions with the lowest total cost to achieve the goals.
- Relevant Action Predicates: action predicates representing the actions required to achieve the goals.
- Relevant Objects: nouns representing all items or entities involved in accomplishing the goals.
1. Analyze the goal under [Task] to identify the heuristic path, relevant action predicates and relevant objects. The goal is a conjunction of [Condition Predicates].
2. Begin with 'Heuristic Path:' followed by a comma-separated list of actions, using an underscore between the verb and each object. Minimize the total cost.
3. Then 'Relevant Action Predicates:' followed by a comma-separated list of the verbs used by these actions.
4. Then 'Relevant Objects:' followed by a comma-separated list of the objects used by these actions.
5. Use only names from the lists above. If an item does not exist, replace it with the closest available match.
6. Do not repeat any mistake listed under [Blacklist].
7. Follow the format of [Few-shot Demonstrations] exactly, without extra explanations, headings or blank lines.
";

fn underscored(domain: &Domain, c: &Condition) -> String {
    c.iter()
        .map(|l| {
            let info = domain.literal(l);
            let mut s = domain.predicates()[info.pred.0 as usize].name.clone();
            for &o in &info.args {
                s.push('_');
                s.push_str(&domain.object(o).name);
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" & ")
}

/// Builds the reasoning prompt. Output depends only on the arguments.
pub fn build_prompt(
    domain: &Domain,
    init: &Condition,
    goal: &Condition,
    demos: &[Demo],
    blacklist: &[BlacklistEntry],
    feedback: Option<&FeedbackPayload>,
) -> String {
    let cat = |c: crate::domain::CatId| format!("<{}>", domain.category(c).name);
    let mut out = String::from("[Condition Predicates]\n");
    for p in domain.predicates() {
        let mut line = p.name.clone();
        for &c in &p.params {
            line.push('_');
            line.push_str(&cat(c));
        }
        let _ = writeln!(out, "{line}");
    }

    out.push_str("\n[Action Predicates]\n");
    for s in domain.schemas() {
        let mut line = s.name.clone();
        for p in &s.params {
            line.push('_');
            line.push_str(&cat(p.category));
        }
        let _ = writeln!(out, "{line} ({})", s.cost);
    }

    out.push_str("\n[Objects]\n");
    let named: Vec<_> = (0..domain.categories().len() as u32)
        .map(crate::domain::CatId)
        .filter(|&c| c != ALL)
        .collect();
    for &c in &named {
        let members: Vec<String> = domain
            .category(c)
            .members
            .iter()
            .map(|&o| format!("'{}'", domain.object(o).name))
            .collect();
        let _ = writeln!(out, "{} = [{}]", cat(c), members.join(", "));
    }
    let union: Vec<String> = named.iter().map(|&c| cat(c)).collect();
    let _ = writeln!(out, "<{}> = {}", domain.category(ALL).name, union.join(" + "));

    if !demos.is_empty() {
        out.push_str("\n[Few-shot Demonstrations]\n");
        for (i, d) in demos.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "Goals: {}", d.goals);
            out.push_str(&super::render_reasoning(&d.path, &d.predicates, &d.objects));
        }
    }

    if !blacklist.is_empty() {
        out.push_str("\n[Blacklist]\nThese outputs were rejected:\n");
        for e in blacklist {
            for v in &e.violations {
                let _ = writeln!(out, "- attempt {}: {v}", e.attempt);
            }
        }
    }

    if let Some(f) = feedback {
        out.push_str("\n[Feedback]\nPlanning with the previous answer failed. Longest explored action sequences:\n");
        for (i, p) in f.top_paths.iter().enumerate() {
            let _ = writeln!(out, "{}. {}", i + 1, p.join(", "));
        }
        let _ = writeln!(out, "Action predicates not yet considered: {}", f.missing_predicates.join(", "));
        let _ = writeln!(out, "Objects not yet considered: {}", f.missing_objects.join(", "));
    }

    out.push_str("\n[System]\n");
    out.push_str(SYSTEM);
    let _ = write!(
        out,
        "\n[Task]\nInitial State: {}\nGoals: {}\n",
        underscored(domain, init),
        underscored(domain, goal)
    );
    out
}
