//! Ground predicate-logic domains: objects with categories, condition
//! predicates, action schemas, and the grounded action set.
//!
//! Everything is interned at parse time. Literals, objects and actions are
//! small integer ids; a [`Condition`] is a sorted id vector, so the set
//! operations used by regression and subset checks are linear merges.

mod condition;
mod parse;
mod task;

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use condition::{Condition, Lit, State};
pub use parse::ParseError;
pub use task::{parse_task, render_task, TaskParseError, TaskSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObjId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PredId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CatId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchemaId(pub u32);

/// Index of a grounded action. Ids follow the lexicographic order of action
/// names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionId(pub u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The implicit category holding every object.
pub const ALL: CatId = CatId(0);
pub const ALL_NAME: &str = "ALL";

#[derive(Clone, Debug)]
pub struct Object {
    pub name: String,
    /// Declared categories, excluding the implicit `ALL`.
    pub categories: Vec<CatId>,
}

#[derive(Clone, Debug)]
pub struct Category {
    pub name: String,
    pub members: Vec<ObjId>,
}

#[derive(Clone, Debug)]
pub struct Predicate {
    pub name: String,
    pub params: Vec<CatId>,
}

#[derive(Clone, Debug)]
pub struct LiteralInfo {
    pub pred: PredId,
    pub args: Vec<ObjId>,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Param(usize),
    Object(ObjId),
    /// Matches every category-valid object. Only allowed in delete lists.
    Wildcard,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiteralTemplate {
    pub pred: PredId,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct Param {
    pub name: String,
    pub category: CatId,
}

/// An action schema before grounding, e.g. `Put(x: GRABBABLE, y: SURFACE)`.
#[derive(Clone, Debug)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<Param>,
    pub pre: Vec<LiteralTemplate>,
    pub add: Vec<LiteralTemplate>,
    pub del: Vec<LiteralTemplate>,
    pub cost: f64,
    /// Predicates whose added literals are mutually exclusive: adding one
    /// deletes every other grounding of the same predicate.
    pub mutex: Vec<PredId>,
}

/// A ground action instance such as `Put_apple_table`.
#[derive(Clone, Debug)]
pub struct GroundedAction {
    pub name: String,
    pub schema: SchemaId,
    pub args: Vec<ObjId>,
    pub pre: Condition,
    pub add: Condition,
    pub del: Condition,
    pub cost: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("unknown literal `{0}`")]
    UnknownLiteral(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("precondition of `{action}` does not hold: missing {missing}")]
    PreconditionViolated { action: String, missing: String },
}

/// A parsed and grounded planning domain. Immutable after construction.
#[derive(Debug)]
pub struct Domain {
    pub(crate) name: Option<String>,
    pub(crate) objects: Vec<Object>,
    pub(crate) categories: Vec<Category>,
    pub(crate) predicates: Vec<Predicate>,
    pub(crate) literals: Vec<LiteralInfo>,
    pub(crate) schemas: Vec<ActionSchema>,
    pub(crate) actions: Vec<GroundedAction>,
    pub(crate) object_index: FxHashMap<String, ObjId>,
    pub(crate) category_index: FxHashMap<String, CatId>,
    pub(crate) predicate_index: FxHashMap<String, PredId>,
    pub(crate) schema_index: FxHashMap<String, SchemaId>,
    pub(crate) literal_index: FxHashMap<(PredId, Vec<ObjId>), Lit>,
    pub(crate) action_index: FxHashMap<String, ActionId>,
    /// Per literal: actions adding it, ascending.
    pub(crate) adders: Vec<Vec<ActionId>>,
    /// Per literal: actions requiring it, ascending.
    pub(crate) requirers: Vec<Vec<ActionId>>,
}

impl Domain {
    /// Parses and grounds a domain document.
    pub fn parse(text: &str) -> Result<Domain, ParseError> {
        parse::parse_domain(text)
    }

    pub fn parse_shared(text: &str) -> Result<Arc<Domain>, ParseError> {
        Self::parse(text).map(Arc::new)
    }

    /// Renders the domain back into its text format. Parsing the output
    /// yields the same grounded action set.
    pub fn serialize(&self) -> String {
        parse::serialize_domain(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn schemas(&self) -> &[ActionSchema] {
        &self.schemas
    }

    pub fn actions(&self) -> &[GroundedAction] {
        &self.actions
    }

    pub fn action_ids(&self) -> impl Iterator<Item = ActionId> {
        (0..self.actions.len() as u32).map(ActionId)
    }

    pub fn action(&self, id: ActionId) -> &GroundedAction {
        &self.actions[id.index()]
    }

    /// Actions whose add list contains `lit`, in id order.
    pub fn adders(&self, lit: Lit) -> &[ActionId] {
        &self.adders[lit.index()]
    }

    /// Actions whose precondition contains `lit`, in id order.
    pub fn requirers(&self, lit: Lit) -> &[ActionId] {
        &self.requirers[lit.index()]
    }

    /// Cost table indexed by action id.
    pub fn costs(&self) -> Vec<f64> {
        self.actions.iter().map(|a| a.cost).collect()
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied()
    }

    pub fn action_name(&self, id: ActionId) -> &str {
        &self.actions[id.index()].name
    }

    pub fn cost(&self, id: ActionId) -> f64 {
        self.actions[id.index()].cost
    }

    pub fn object(&self, id: ObjId) -> &Object {
        &self.objects[id.0 as usize]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn category(&self, id: CatId) -> &Category {
        &self.categories[id.0 as usize]
    }

    pub fn category_id(&self, name: &str) -> Option<CatId> {
        self.category_index.get(name).copied()
    }

    pub fn predicate_id(&self, name: &str) -> Option<PredId> {
        self.predicate_index.get(name).copied()
    }

    pub fn schema(&self, id: SchemaId) -> &ActionSchema {
        &self.schemas[id.0 as usize]
    }

    pub fn schema_id(&self, name: &str) -> Option<SchemaId> {
        self.schema_index.get(name).copied()
    }

    /// Whether `obj` belongs to `cat` (everything belongs to `ALL`).
    pub fn in_category(&self, obj: ObjId, cat: CatId) -> bool {
        cat == ALL || self.objects[obj.0 as usize].categories.contains(&cat)
    }

    pub fn literal_count(&self) -> usize {
        self.literals.len()
    }

    pub fn literal(&self, lit: Lit) -> &LiteralInfo {
        &self.literals[lit.index()]
    }

    pub fn literal_name(&self, lit: Lit) -> &str {
        &self.literals[lit.index()].name
    }

    pub fn lookup_literal(&self, pred: PredId, args: &[ObjId]) -> Option<Lit> {
        self.literal_index.get(&(pred, args.to_vec())).copied()
    }

    /// Resolves `On(apple,table)` or the underscore form `On_apple_table`.
    pub fn parse_literal(&self, text: &str) -> Result<Lit, DomainError> {
        let unknown = || DomainError::UnknownLiteral(text.trim().to_string());
        let text = text.trim();
        let (pred, args): (&str, Vec<&str>) = if let Some(open) = text.find('(') {
            let inner = text[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            (text[..open].trim(), args)
        } else {
            let mut parts = text.split('_');
            let pred = parts.next().unwrap_or_default();
            (pred, parts.collect())
        };
        let pred = self.predicate_id(pred).ok_or_else(unknown)?;
        let args = args
            .iter()
            .map(|a| self.object_id(a))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(unknown)?;
        self.lookup_literal(pred, &args).ok_or_else(unknown)
    }

    /// Parses a comma- or `&`-separated literal list.
    pub fn parse_condition(&self, text: &str) -> Result<Condition, DomainError> {
        split_literal_list(text)
            .into_iter()
            .map(|t| self.parse_literal(t))
            .collect()
    }

    pub fn condition_names<'a>(&'a self, c: &'a Condition) -> impl Iterator<Item = &'a str> + 'a {
        c.iter().map(move |l| self.literal_name(l))
    }

    /// Canonical text form, e.g. `{Holding(apple), Near(table)}`.
    pub fn format_condition(&self, c: &Condition) -> String {
        let names: Vec<&str> = self.condition_names(c).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Predicate (action symbol) of a grounded action, e.g. `Walk`.
    pub fn action_predicate(&self, id: ActionId) -> &str {
        &self.schemas[self.actions[id.index()].schema.0 as usize].name
    }

    pub fn action_objects(&self, id: ActionId) -> &[ObjId] {
        &self.actions[id.index()].args
    }

    /// `s ∪ add(a) \ del(a)`, without checking the precondition.
    pub fn apply(&self, s: &State, a: ActionId) -> State {
        let act = &self.actions[a.index()];
        s.difference(&act.del).union(&act.add)
    }

    pub fn is_applicable(&self, s: &State, a: ActionId) -> bool {
        self.actions[a.index()].pre.is_subset(s)
    }

    /// Applies the action after checking its precondition.
    pub fn apply_checked(&self, s: &State, a: ActionId) -> Result<State, DomainError> {
        let act = &self.actions[a.index()];
        if !act.pre.is_subset(s) {
            return Err(DomainError::PreconditionViolated {
                action: act.name.clone(),
                missing: self.format_condition(&act.pre.difference(s)),
            });
        }
        Ok(self.apply(s, a))
    }
}

/// `c ⊆ s`
pub fn holds(c: &Condition, s: &State) -> bool {
    c.is_subset(s)
}

/// Goal regression through an action: `pre(a) ∪ (c \ add(a))`.
pub fn regress(c: &Condition, a: &GroundedAction) -> Condition {
    c.difference(&a.add).union(&a.pre)
}

/// Which actions may regress a condition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelevanceGuard {
    /// `add(a) ∩ c ≠ ∅` and `del(a) ∩ c = ∅`.
    #[default]
    Standard,
    /// Also admits actions that only touch `c` through their precondition:
    /// `(pre(a) ∪ add(a) \ del(a)) ∩ c ≠ ∅` and `del(a) ∩ c = ∅`. Both
    /// groupings of the first clause coincide once `del(a) ∩ c = ∅`.
    Broad,
}

pub fn is_relevant_consistent(c: &Condition, a: &GroundedAction) -> bool {
    is_relevant_consistent_with(c, a, RelevanceGuard::Standard)
}

pub fn is_relevant_consistent_with(c: &Condition, a: &GroundedAction, guard: RelevanceGuard) -> bool {
    if c.intersects(&a.del) {
        return false;
    }
    match guard {
        RelevanceGuard::Standard => c.intersects(&a.add),
        RelevanceGuard::Broad => c.intersects(&a.add) || c.intersects(&a.pre),
    }
}

/// Splits `A(x), B(y,z) & C` at top-level commas and ampersands.
pub(crate) fn split_literal_list(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | '&' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect()
}

impl fmt::Display for GroundedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
