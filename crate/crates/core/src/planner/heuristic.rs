use serde::{Deserialize, Serialize};

use super::PlanError;
use crate::domain::ActionId;

/// Remaining heuristic-path credits per action. Only positive counts are
/// stored, sorted by action id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Indicator(Vec<(ActionId, u32)>);

impl Indicator {
    pub fn get(&self, a: ActionId) -> u32 {
        match self.0.binary_search_by_key(&a, |&(id, _)| id) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    /// Copy with one credit of `a` removed. Counts never go below zero.
    pub fn decremented(&self, a: ActionId) -> Indicator {
        let mut next = self.0.clone();
        if let Ok(i) = next.binary_search_by_key(&a, |&(id, _)| id) {
            if next[i].1 == 1 {
                next.remove(i);
            } else {
                next[i].1 -= 1;
            }
        }
        Indicator(next)
    }

    /// Sum of all counts.
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(action, count)` pairs with positive count, by action id.
    pub fn entries(&self) -> &[(ActionId, u32)] {
        &self.0
    }
}

/// Occurrence counts of each action in `path`.
pub fn indicator_of(path: &[ActionId]) -> Indicator {
    let mut ids = path.to_vec();
    ids.sort_unstable();
    let mut out: Vec<(ActionId, u32)> = Vec::new();
    for id in ids {
        match out.last_mut() {
            Some((last, n)) if *last == id => *n += 1,
            _ => out.push((id, 1)),
        }
    }
    Indicator(out)
}

fn check_alpha(alpha: f64) -> Result<(), PlanError> {
    if alpha.is_nan() || alpha < 1.0 {
        return Err(PlanError::InvalidAlpha(alpha));
    }
    Ok(())
}

/// Matched-occurrence heuristic cost of `p` under the heuristic path `hat`.
///
/// Each occurrence of `a` in `p` costs `D(a)/alpha` while credits from `hat`
/// remain and `D(a)` after that. This is the per-action rule the search
/// applies while decrementing its indicator. `costs` is indexed by action id.
pub fn path_h_alpha(p: &[ActionId], hat: &[ActionId], alpha: f64, costs: &[f64]) -> Result<f64, PlanError> {
    check_alpha(alpha)?;
    let hat = indicator_of(hat);
    Ok(indicator_of(p)
        .entries()
        .iter()
        .map(|&(a, n)| {
            let credit = hat.get(a);
            let d = costs[a.index()];
            f64::from(n.saturating_sub(credit)) * d + f64::from(n.min(credit)) * d / alpha
        })
        .sum())
}

/// The alternative form that instead charges `D(a)/alpha` for every credit
/// of `a` left unused by `p`, summed over the actions of `p`. Kept for
/// comparison; the search does not use it.
pub fn path_h_alpha_unused_credit(
    p: &[ActionId],
    hat: &[ActionId],
    alpha: f64,
    costs: &[f64],
) -> Result<f64, PlanError> {
    check_alpha(alpha)?;
    let hat = indicator_of(hat);
    Ok(indicator_of(p)
        .entries()
        .iter()
        .map(|&(a, n)| {
            let credit = hat.get(a);
            let d = costs[a.index()];
            f64::from(n.saturating_sub(credit)) * d + f64::from(credit.saturating_sub(n)) * d / alpha
        })
        .sum())
}

/// Satisficing heuristic cost: only occurrences beyond the credits of `hat`
/// are charged.
pub fn path_h_inf(p: &[ActionId], hat: &[ActionId], costs: &[f64]) -> f64 {
    let hat = indicator_of(hat);
    indicator_of(p)
        .entries()
        .iter()
        .map(|&(a, n)| f64::from(n.saturating_sub(hat.get(a))) * costs[a.index()])
        .sum()
}

/// `D(hat) / min_a D(a)`. An alpha strictly above this keeps every credited
/// step cheaper than any uncredited one.
pub fn alpha_lower_bound(hat: &[ActionId], costs: &[f64]) -> f64 {
    if hat.is_empty() {
        return 0.0;
    }
    let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let total: f64 = hat.iter().map(|a| costs[a.index()]).sum();
    total / min
}
