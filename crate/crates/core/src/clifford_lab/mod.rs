//! Finite-group Clifford theory checked by exact character computations.

pub mod catalog;
pub mod character;
pub mod clifford;
pub mod group;
pub mod model;

pub use crate::report::Verdict;
pub use catalog::{builtin_catalog, CatalogFile, EntrySpec};
pub use clifford::{clifford_report, restrict_decompose, twist_group, CliffordReport};
pub use group::{FiniteGroup, Subgroup};
pub use model::{evaluate, intertwining_set, EntryReport, FiniteGroupModel};
