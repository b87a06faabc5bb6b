//! Bounded-width tandem duplication - random loss on permutations.
//!
//! A duplication-loss step copies a contiguous window of at most `K`
//! elements in tandem and then loses one copy of each element. This crate
//! provides the step semantics, scenario generators that build any target
//! permutation from the identity, exact enumeration of the classes of
//! permutations reachable in `p` steps together with their forbidden
//! patterns, the value-position analysis of those classes, and a seeded
//! benchmark harness for step counts.

pub mod classes;
pub mod error;
pub mod experiments;
pub mod limit;
mod par;
pub mod perm;
pub mod scenario;
pub mod step;
pub mod verify;
pub mod vp;

pub use classes::{ClassCatalog, ClassSpec, PatternBasis, Provenance};
pub use error::{Error, Result};
pub use limit::WidthLimit;
pub use perm::{Occurrence, Permutation};
pub use scenario::{bucket_scenario, radix_scenario, Scenario, SubWindowTarget};
pub use step::{apply_step, successors, DupLossStep};
