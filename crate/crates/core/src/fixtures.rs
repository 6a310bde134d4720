//! Bundled domain and task fixtures.

pub const KITCHEN_MINI: &str = include_str!("../fixtures/kitchen_mini.dom");
pub const KITCHEN_MINI_TASK: &str = include_str!("../fixtures/kitchen_mini.task");

/// A problem where satisficing search returns a costlier plan than the
/// optimal variant, given the exact optimal path as heuristic.
pub const PRUNING_WITNESS: &str = include_str!("../fixtures/pruning_witness.dom");
pub const PRUNING_WITNESS_TASK: &str = include_str!("../fixtures/pruning_witness.task");
