//! Small synthetic domains: random STRIPS problems and chain domains with a
//! unique optimal plan.

use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{parse_task, Domain, TaskSpec};

/// Shape of a random domain.
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub literals: usize,
    pub actions: usize,
    /// Costs are drawn from `1..=max_cost`.
    pub max_cost: u32,
}

impl Default for RandomShape {
    fn default() -> Self {
        Self {
            literals: 7,
            actions: 9,
            max_cost: 4,
        }
    }
}

/// A random propositional domain over one object `o`, returned as domain text.
///
/// Literals are `P0(o)` to `Pn(o)`; each action `Ak_o` has up to two
/// preconditions, one or two add effects and up to two delete effects.
pub fn random_domain_text(seed: u64, shape: RandomShape) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lits: Vec<usize> = (0..shape.literals).collect();
    let mut out = String::from("DOMAIN random\nOBJECTS\n  o: X\nPREDICATES\n");
    for i in 0..shape.literals {
        let _ = writeln!(out, "  P{i}(X)");
    }
    out.push_str("ACTIONS\n");
    for k in 0..shape.actions {
        let (n_pre, n_add, n_del) = (rng.random_range(0..=2), rng.random_range(1..=2), rng.random_range(0..=2));
        let pre: Vec<usize> = lits.choose_multiple(&mut rng, n_pre).copied().collect();
        let add: Vec<usize> = lits.choose_multiple(&mut rng, n_add).copied().collect();
        let del: Vec<usize> = lits
            .iter()
            .copied()
            .filter(|l| !add.contains(l))
            .collect::<Vec<_>>()
            .choose_multiple(&mut rng, n_del)
            .copied()
            .collect();
        let fmt = |v: &[usize]| v.iter().map(|i| format!("P{i}(x)")).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "  A{k}(x: X)");
        if !pre.is_empty() {
            let _ = writeln!(out, "    pre: {}", fmt(&pre));
        }
        let _ = writeln!(out, "    add: {}", fmt(&add));
        if !del.is_empty() {
            let _ = writeln!(out, "    del: {}", fmt(&del));
        }
        let _ = writeln!(out, "    cost: {}", rng.random_range(1..=shape.max_cost));
    }
    out
}

/// A random domain with a random initial state and a one to three literal
/// goal. The goal may be unreachable or already satisfied.
pub fn random_problem(seed: u64, shape: RandomShape) -> (Domain, TaskSpec) {
    let domain = Domain::parse(&random_domain_text(seed, shape)).expect("generated domains parse");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let names: Vec<String> = (0..shape.literals).map(|i| format!("P{i}(o)")).collect();
    let init: Vec<&String> = names.iter().filter(|_| rng.random_bool(0.3)).collect();
    let n_goal = rng.random_range(1..=3);
    let goal: Vec<&String> = names.choose_multiple(&mut rng, n_goal).collect();
    let join = |v: &[&String]| v.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ");
    let text = format!("s0: {}\ngoal: {}\n", join(&init), join(&goal));
    let task = parse_task(&text, &domain).expect("generated tasks parse");
    (domain, task)
}

/// Chain domain of length `n`: `s0 = {L0(o)}`, `goal = {Ln(o)}`.
///
/// `Step{k}` turns `L(k-1)` into `Lk`. Each `Lk` can also be added by a
/// `Jump{k}` action whose precondition `Bk` is never achievable, and
/// `distractors` unrelated `Noise` actions add fresh literals. The only plan
/// is `Step1 .. Stepn`.
pub fn chain_domain_text(n: usize, distractors: usize) -> String {
    let mut out = String::from("DOMAIN chain\nOBJECTS\n  o: X\nPREDICATES\n");
    for k in 0..=n {
        let _ = writeln!(out, "  L{k}(X)");
    }
    for k in 1..=n {
        let _ = writeln!(out, "  B{k}(X)");
    }
    for j in 0..distractors {
        let _ = writeln!(out, "  N{j}(X)");
    }
    out.push_str("ACTIONS\n");
    for k in 1..=n {
        let _ = writeln!(out, "  Step{k}(x: X)\n    pre: L{}(x)\n    add: L{k}(x)\n    del: L{}(x)\n    cost: 1", k - 1, k - 1);
        let _ = writeln!(out, "  Jump{k}(x: X)\n    pre: B{k}(x)\n    add: L{k}(x)\n    cost: 1");
    }
    for j in 0..distractors {
        let _ = writeln!(out, "  Noise{j}(x: X)\n    add: N{j}(x)\n    cost: 1");
    }
    out
}

pub fn chain_problem(n: usize, distractors: usize) -> (Domain, TaskSpec) {
    let domain = Domain::parse(&chain_domain_text(n, distractors)).expect("chain domains parse");
    let task = parse_task(&format!("s0: L0(o)\ngoal: L{n}(o)\n"), &domain).expect("chain tasks parse");
    (domain, task)
}
