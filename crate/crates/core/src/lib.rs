//! Exact computations around centers of Hecke algebras of types:
//! Moy–Prasad filtration thresholds and the ♥/♠ criteria for compact open
//! subgroups, finite-group Clifford theory, and orbit-sum descriptions of
//! Bernstein centers at Iwahori and depth-one principal-series level.

pub mod apartment;
pub mod clifford_lab;
pub mod cyclotomic;
pub mod error;
pub mod iwahori_hecke;
pub mod laurent;
pub mod linalg;
pub mod padic_groups;
pub mod poly;
pub mod report;
pub mod root_datum;
pub mod suites;
pub mod torus_center;

pub use error::{HeckeError, Result};
