use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Interned ground literal. Ids are assigned in canonical (name) order, so
/// sorting by id sorts by `predicate(args..)` text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lit(pub u32);

impl Lit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of literals, stored as a sorted duplicate-free vector.
///
/// Conditions and states share this representation. States are closed-world:
/// a literal that is absent is false.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition(Vec<Lit>);

/// A world state. Same representation as a [`Condition`].
pub type State = Condition;

impl Condition {
    pub fn new() -> Self {
        Condition(Vec::new())
    }

    pub fn from_lits<I: IntoIterator<Item = Lit>>(lits: I) -> Self {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Condition(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    /// Returns `true` if the literal was not already present.
    pub fn insert(&mut self, lit: Lit) -> bool {
        match self.0.binary_search(&lit) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, lit);
                true
            }
        }
    }

    pub fn remove(&mut self, lit: Lit) -> bool {
        match self.0.binary_search(&lit) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// `self ⊆ other`
    pub fn is_subset(&self, other: &Condition) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut j = 0;
        for &l in &self.0 {
            loop {
                match other.0.get(j) {
                    None => return false,
                    Some(&o) => match o.cmp(&l) {
                        Ordering::Less => j += 1,
                        Ordering::Equal => {
                            j += 1;
                            break;
                        }
                        Ordering::Greater => return false,
                    },
                }
            }
        }
        true
    }

    pub fn intersects(&self, other: &Condition) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &Condition) -> Condition {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Condition(out)
    }

    /// `self \ other`
    pub fn difference(&self, other: &Condition) -> Condition {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &l in &self.0 {
            while j < other.0.len() && other.0[j] < l {
                j += 1;
            }
            if j < other.0.len() && other.0[j] == l {
                continue;
            }
            out.push(l);
        }
        Condition(out)
    }

    pub fn intersection(&self, other: &Condition) -> Condition {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Condition(out)
    }
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter().map(|l| l.0)).finish()
    }
}

impl FromIterator<Lit> for Condition {
    fn from_iter<T: IntoIterator<Item = Lit>>(iter: T) -> Self {
        Condition::from_lits(iter)
    }
}

impl<'a> IntoIterator for &'a Condition {
    type Item = Lit;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Lit>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}
