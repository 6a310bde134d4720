use std::collections::BTreeSet;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{ActionId, Domain, ObjId};
use crate::planner::ActionSpace;

/// Relevant action predicates, relevant objects and a heuristic path, as
/// produced by a reasoning provider.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReasoningResult {
    pub predicates: Vec<String>,
    pub objects: Vec<String>,
    pub path: Vec<String>,
    /// Verbatim provider output.
    pub raw: String,
    /// Queries spent to obtain this result, retries included.
    pub attempts: u32,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReasoningParseError {
    #[error("missing `{0}` section")]
    MissingSection(&'static str),
}

impl ReasoningResult {
    /// Result whose predicates and objects are exactly those used by `path`.
    pub fn from_path(domain: &Domain, path: &[ActionId]) -> Self {
        let mut preds = BTreeSet::new();
        let mut objs = BTreeSet::new();
        for &a in path {
            preds.insert(domain.action_predicate(a).to_string());
            for &o in domain.action_objects(a) {
                objs.insert(domain.object(o).name.clone());
            }
        }
        let path: Vec<String> = path.iter().map(|&a| domain.action_name(a).to_string()).collect();
        let predicates: Vec<String> = preds.into_iter().collect();
        let objects: Vec<String> = objs.into_iter().collect();
        let raw = render_reasoning(&path, &predicates, &objects);
        Self {
            predicates,
            objects,
            path,
            raw,
            attempts: 1,
        }
    }

    /// Resolves every path entry to an action id. Fails on the first entry
    /// that is not a grounded action.
    pub fn resolve_path(&self, domain: &Domain) -> Result<Vec<ActionId>, Violation> {
        self.path
            .iter()
            .map(|n| {
                domain.action_id(n).ok_or_else(|| {
                    check_action(n, domain, None).into_iter().next().unwrap_or(Violation::Malformed(n.clone()))
                })
            })
            .collect()
    }
}

/// Text in the output format providers are asked to follow.
pub fn render_reasoning(path: &[String], predicates: &[String], objects: &[String]) -> String {
    format!(
        "Heuristic Path: {}\nRelevant Action Predicates: {}\nRelevant Objects: {}\n",
        path.join(", "),
        predicates.join(", "),
        objects.join(", ")
    )
}

const PATH_LABELS: [&str; 2] = ["heuristic path:", "optimal actions:"];
const PRED_LABEL: &str = "relevant action predicates:";
const OBJ_LABEL: &str = "relevant objects:";

/// Extracts the three labelled lists from provider output. Surrounding prose
/// is ignored; labels match case-insensitively and the last occurrence wins.
/// Names are normalized to the domain's spelling where they resolve.
pub fn parse_reasoning(text: &str, domain: &Domain) -> Result<ReasoningResult, ReasoningParseError> {
    let mut path = None;
    let mut preds = None;
    let mut objs = None;
    for line in text.lines() {
        let trimmed = line.trim().trim_start_matches(['-', '*', '#', ' ']);
        let lower = trimmed.to_lowercase();
        let value = |label: &str| trimmed[label.len()..].to_string();
        if let Some(l) = PATH_LABELS.iter().find(|l| lower.starts_with(**l)) {
            path = Some(value(l));
        } else if lower.starts_with(PRED_LABEL) {
            preds = Some(value(PRED_LABEL));
        } else if lower.starts_with(OBJ_LABEL) {
            objs = Some(value(OBJ_LABEL));
        }
    }
    let names = Names::new(domain);
    let path = path.ok_or(ReasoningParseError::MissingSection("Heuristic Path"))?;
    let preds = preds.ok_or(ReasoningParseError::MissingSection("Relevant Action Predicates"))?;
    let objs = objs.ok_or(ReasoningParseError::MissingSection("Relevant Objects"))?;
    Ok(ReasoningResult {
        path: items(&path).map(|i| names.action(&i)).collect(),
        predicates: items(&preds).map(|i| names.predicate(&i)).collect(),
        objects: items(&objs).map(|i| names.object(&i)).collect(),
        raw: text.to_string(),
        attempts: 1,
    })
}

/// Splits a comma separated list at top level, dropping quotes, angle
/// brackets and trailing periods.
fn items(list: &str) -> impl Iterator<Item = String> + '_ {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in list.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&list[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&list[start..]);
    parts.into_iter().filter_map(|p| {
        let cleaned: String = p
            .trim()
            .trim_end_matches('.')
            .chars()
            .filter(|c| !matches!(c, '<' | '>' | '\'' | '"' | '`'))
            .collect();
        let cleaned = cleaned.trim().to_string();
        (!cleaned.is_empty()).then_some(cleaned)
    })
}

/// Splits `Walk_apple` or `Walk(apple)` into predicate and argument names.
fn split_action(item: &str) -> (String, Vec<String>) {
    if let Some(open) = item.find('(') {
        let inner = item[open + 1..].trim_end_matches(')');
        let args = inner.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        (item[..open].trim().to_string(), args)
    } else {
        let mut parts = item.split('_').map(|s| s.trim().to_string());
        let head = parts.next().unwrap_or_default();
        (head, parts.filter(|s| !s.is_empty()).collect())
    }
}

/// Case-insensitive lookup of schema and object names.
struct Names<'a> {
    domain: &'a Domain,
    schemas: FxHashMap<String, &'a str>,
    objects: FxHashMap<String, ObjId>,
}

impl<'a> Names<'a> {
    fn new(domain: &'a Domain) -> Self {
        Self {
            domain,
            schemas: domain.schemas().iter().map(|s| (s.name.to_lowercase(), s.name.as_str())).collect(),
            objects: domain
                .objects()
                .iter()
                .enumerate()
                .map(|(i, o)| (o.name.to_lowercase(), ObjId(i as u32)))
                .collect(),
        }
    }

    fn predicate(&self, s: &str) -> String {
        self.schemas.get(&s.to_lowercase()).map_or_else(|| s.to_string(), |n| n.to_string())
    }

    fn object(&self, s: &str) -> String {
        self.objects
            .get(&s.to_lowercase())
            .map_or_else(|| s.to_string(), |&o| self.domain.object(o).name.clone())
    }

    fn action(&self, s: &str) -> String {
        let (head, args) = split_action(s);
        let Some(pred) = self.schemas.get(&head.to_lowercase()) else {
            return s.to_string();
        };
        let mut name = pred.to_string();
        for a in &args {
            match self.objects.get(&a.to_lowercase()) {
                Some(&o) => {
                    name.push('_');
                    name.push_str(&self.domain.object(o).name);
                }
                None => return s.to_string(),
            }
        }
        name
    }
}

/// A grammar-check finding. Rendered into blacklist entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    UnknownPredicate {
        item: String,
        name: String,
        suggestion: Option<String>,
    },
    UnknownObject {
        item: String,
        name: String,
        suggestion: Option<String>,
    },
    Arity {
        item: String,
        expected: usize,
        found: usize,
    },
    /// All symbols exist but the combination is not a grounded action.
    CategoryInvalid {
        item: String,
    },
    OutsideSpace {
        item: String,
    },
    Malformed(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hint = |s: &Option<String>| s.as_ref().map(|s| format!("; did you mean `{s}`?")).unwrap_or_default();
        match self {
            Violation::UnknownPredicate { item, name, suggestion } => {
                write!(f, "{item}: unknown action predicate `{name}`{}", hint(suggestion))
            }
            Violation::UnknownObject { item, name, suggestion } => {
                write!(f, "{item}: unknown object `{name}`{}", hint(suggestion))
            }
            Violation::Arity { item, expected, found } => {
                write!(f, "{item}: expected {expected} object(s), found {found}")
            }
            Violation::CategoryInvalid { item } => write!(f, "{item}: objects do not fit the action's categories"),
            Violation::OutsideSpace { item } => write!(f, "{item}: action is not available"),
            Violation::Malformed(item) => write!(f, "{item}: not an action"),
        }
    }
}

/// Nearest candidate by edit distance; ties go to the alphabetically first.
pub fn suggest<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<String> {
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(name, c), c))
        .min()
        .map(|(_, c)| c.to_string())
}

fn check_action(item: &str, domain: &Domain, space: Option<&ActionSpace>) -> Vec<Violation> {
    if let Some(id) = domain.action_id(item) {
        if space.is_some_and(|s| !s.contains(id)) {
            return vec![Violation::OutsideSpace { item: item.to_string() }];
        }
        return Vec::new();
    }
    let (head, args) = split_action(item);
    if head.is_empty() {
        return vec![Violation::Malformed(item.to_string())];
    }
    let mut out = Vec::new();
    let schema = domain.schema_id(&head);
    if schema.is_none() {
        out.push(Violation::UnknownPredicate {
            item: item.to_string(),
            name: head.clone(),
            suggestion: suggest(&head, domain.schemas().iter().map(|s| s.name.as_str())),
        });
    }
    for a in &args {
        if domain.object_id(a).is_none() {
            out.push(Violation::UnknownObject {
                item: item.to_string(),
                name: a.clone(),
                suggestion: suggest(a, domain.objects().iter().map(|o| o.name.as_str())),
            });
        }
    }
    if let (Some(s), true) = (schema, out.is_empty()) {
        let expected = domain.schema(s).params.len();
        if expected != args.len() {
            out.push(Violation::Arity {
                item: item.to_string(),
                expected,
                found: args.len(),
            });
        } else {
            out.push(Violation::CategoryInvalid { item: item.to_string() });
        }
    }
    out
}

/// Checks every symbol of `result` against the domain. Path actions must be
/// grounded actions inside `space` when one is given. An empty list means
/// the result is usable.
pub fn grammar_check(result: &ReasoningResult, domain: &Domain, space: Option<&ActionSpace>) -> Vec<Violation> {
    let mut out = Vec::new();
    for p in &result.predicates {
        if domain.schema_id(p).is_none() {
            out.push(Violation::UnknownPredicate {
                item: p.clone(),
                name: p.clone(),
                suggestion: suggest(p, domain.schemas().iter().map(|s| s.name.as_str())),
            });
        }
    }
    for o in &result.objects {
        if domain.object_id(o).is_none() {
            out.push(Violation::UnknownObject {
                item: o.clone(),
                name: o.clone(),
                suggestion: suggest(o, domain.objects().iter().map(|o| o.name.as_str())),
            });
        }
    }
    for a in &result.path {
        out.extend(check_action(a, domain, space));
    }
    out
}
