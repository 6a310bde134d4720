//! Guide listings, compiled as doctests.
//!
//! Each chapter gets its own module so a failing listing points at its
//! chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/domains.md")]
pub mod domains {}
#[doc = include_str!("../../../book/src/behavior-trees.md")]
pub mod behavior_trees {}
#[doc = include_str!("../../../book/src/planning.md")]
pub mod planning {}
#[doc = include_str!("../../../book/src/providers.md")]
pub mod providers {}
#[doc = include_str!("../../../book/src/feedback.md")]
pub mod feedback {}
#[doc = include_str!("../../../book/src/benchmarks.md")]
pub mod benchmarks {}
