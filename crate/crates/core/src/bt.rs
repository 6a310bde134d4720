//! Behavior trees made of fallback and sequence composites over condition
//! and action leaves.
//!
//! Planner output is always flat: a root fallback whose first child is the
//! goal condition, followed by one `Sequence(condition, action)` per expanded
//! condition in expansion order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{ActionId, Condition, Domain, State};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BtNode {
    Fallback(Vec<BtNode>),
    Sequence(Vec<BtNode>),
    Condition(Condition),
    Action(ActionId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Success,
    Failure,
    Running,
}

/// Outcome of one tick. `action` is set exactly when `status` is `Running`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TickResult {
    pub status: Status,
    pub action: Option<ActionId>,
}

impl TickResult {
    pub const SUCCESS: TickResult = TickResult {
        status: Status::Success,
        action: None,
    };
    pub const FAILURE: TickResult = TickResult {
        status: Status::Failure,
        action: None,
    };

    pub fn running(action: ActionId) -> Self {
        TickResult {
            status: Status::Running,
            action: Some(action),
        }
    }
}

#[derive(Debug, Error)]
pub enum BtError {
    #[error("a {0} node needs at least one child")]
    EmptyComposite(&'static str),
    #[error("no goals given")]
    NoGoals,
    #[error("malformed behavior tree document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown action `{0}` in behavior tree")]
    UnknownAction(String),
    #[error("unknown literal `{0}` in behavior tree")]
    UnknownLiteral(String),
    #[error("unsupported document format `{0}`")]
    Format(String),
}

/// Builds a fallback node. Fallback children are spliced in place, so
/// `fallback([fallback([x, y]), z])` is `Fallback(x, y, z)`.
pub fn fallback(children: impl IntoIterator<Item = BtNode>) -> Result<BtNode, BtError> {
    let mut flat = Vec::new();
    for child in children {
        match child {
            BtNode::Fallback(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    if flat.is_empty() {
        return Err(BtError::EmptyComposite("fallback"));
    }
    Ok(BtNode::Fallback(flat))
}

pub fn sequence(children: impl IntoIterator<Item = BtNode>) -> Result<BtNode, BtError> {
    let children: Vec<BtNode> = children.into_iter().collect();
    if children.is_empty() {
        return Err(BtError::EmptyComposite("sequence"));
    }
    Ok(BtNode::Sequence(children))
}

pub fn cond(c: Condition) -> BtNode {
    BtNode::Condition(c)
}

pub fn act(a: ActionId) -> BtNode {
    BtNode::Action(a)
}

/// Joins independently planned trees for the disjuncts of a DNF goal under
/// one fallback. Subtrees are kept intact as children.
pub fn dnf_goal_tree(subtrees: Vec<BtNode>) -> Result<BtNode, BtError> {
    if subtrees.is_empty() {
        return Err(BtError::NoGoals);
    }
    Ok(BtNode::Fallback(subtrees))
}

impl BtNode {
    pub fn tick(&self, s: &State) -> TickResult {
        match self {
            BtNode::Condition(c) => {
                if c.is_subset(s) {
                    TickResult::SUCCESS
                } else {
                    TickResult::FAILURE
                }
            }
            BtNode::Action(a) => TickResult::running(*a),
            BtNode::Fallback(children) => children
                .iter()
                .map(|c| c.tick(s))
                .find(|r| r.status != Status::Failure)
                .unwrap_or(TickResult::FAILURE),
            BtNode::Sequence(children) => children
                .iter()
                .map(|c| c.tick(s))
                .find(|r| r.status != Status::Success)
                .unwrap_or(TickResult::SUCCESS),
        }
    }

    pub fn children(&self) -> &[BtNode] {
        match self {
            BtNode::Fallback(c) | BtNode::Sequence(c) => c,
            _ => &[],
        }
    }

    /// Number of direct children (0 for leaves).
    pub fn arity(&self) -> usize {
        self.children().len()
    }

    /// `(condition, action)` pairs of a planner-shaped tree, in child order.
    pub fn expansions(&self) -> Vec<(&Condition, ActionId)> {
        self.children()
            .iter()
            .filter_map(|child| match child {
                BtNode::Sequence(pair) => match pair.as_slice() {
                    [BtNode::Condition(c), BtNode::Action(a)] => Some((c, *a)),
                    _ => None,
                },
                _ => None,
            })
            .collect()
    }

    /// Root fallback, goal condition first, then only `Sequence(cond, act)`.
    pub fn is_planner_shaped(&self) -> bool {
        match self {
            BtNode::Fallback(children) => {
                matches!(children.first(), Some(BtNode::Condition(_))) && self.expansions().len() + 1 == children.len()
            }
            _ => false,
        }
    }

    pub fn to_doc(&self, domain: &Domain) -> NodeDoc {
        match self {
            BtNode::Fallback(c) => NodeDoc::Fallback(c.iter().map(|n| n.to_doc(domain)).collect()),
            BtNode::Sequence(c) => NodeDoc::Sequence(c.iter().map(|n| n.to_doc(domain)).collect()),
            BtNode::Condition(c) => NodeDoc::Condition(domain.condition_names(c).map(str::to_string).collect()),
            BtNode::Action(a) => NodeDoc::Action(domain.action_name(*a).to_string()),
        }
    }

    pub fn from_doc(doc: &NodeDoc, domain: &Domain) -> Result<BtNode, BtError> {
        Ok(match doc {
            NodeDoc::Fallback(c) => {
                if c.is_empty() {
                    return Err(BtError::EmptyComposite("fallback"));
                }
                BtNode::Fallback(c.iter().map(|n| BtNode::from_doc(n, domain)).collect::<Result<_, _>>()?)
            }
            NodeDoc::Sequence(c) => {
                if c.is_empty() {
                    return Err(BtError::EmptyComposite("sequence"));
                }
                BtNode::Sequence(c.iter().map(|n| BtNode::from_doc(n, domain)).collect::<Result<_, _>>()?)
            }
            NodeDoc::Condition(lits) => BtNode::Condition(
                lits.iter()
                    .map(|l| domain.parse_literal(l).map_err(|_| BtError::UnknownLiteral(l.clone())))
                    .collect::<Result<_, _>>()?,
            ),
            NodeDoc::Action(name) => {
                BtNode::Action(domain.action_id(name).ok_or_else(|| BtError::UnknownAction(name.clone()))?)
            }
        })
    }

    /// Indented human-readable rendering.
    pub fn render(&self, domain: &Domain) -> String {
        let mut out = String::new();
        self.render_into(domain, 0, &mut out);
        out
    }

    fn render_into(&self, domain: &Domain, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match self {
            BtNode::Fallback(c) | BtNode::Sequence(c) => {
                let label = if matches!(self, BtNode::Fallback(_)) { "? fallback" } else { "-> sequence" };
                let _ = writeln!(out, "{pad}{label}");
                for child in c {
                    child.render_into(domain, depth + 1, out);
                }
            }
            BtNode::Condition(c) => {
                let _ = writeln!(out, "{pad}{}", domain.format_condition(c));
            }
            BtNode::Action(a) => {
                let _ = writeln!(out, "{pad}! {}", domain.action_name(*a));
            }
        }
    }
}

pub const BT_FORMAT: &str = "hbtp.bt.v1";

/// JSON shape of a tree node. Conditions list literal names in canonical
/// order; actions are referenced by grounded name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum NodeDoc {
    Fallback(Vec<NodeDoc>),
    Sequence(Vec<NodeDoc>),
    Condition(Vec<String>),
    Action(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    format: String,
    root: NodeDoc,
}

/// Serializes a tree to its canonical JSON document.
pub fn serialize(tree: &BtNode, domain: &Domain) -> String {
    let doc = TreeDoc {
        format: BT_FORMAT.to_string(),
        root: tree.to_doc(domain),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("tree documents always serialize");
    text.push('\n');
    text
}

pub fn deserialize(text: &str, domain: &Domain) -> Result<BtNode, BtError> {
    let doc: TreeDoc = serde_json::from_str(text)?;
    if doc.format != BT_FORMAT {
        return Err(BtError::Format(doc.format));
    }
    BtNode::from_doc(&doc.root, domain)
}
