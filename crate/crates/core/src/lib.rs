//! Finite-algebra workbench for right, left and double division on Clifford
//! semigroups, and for Ward, Ward-dual and double-Ward quasigroups.
//!
//! Everything works on explicit Cayley tables over `0..n`. Recognizers return
//! the least counterexample in lexicographic order, so every failure comes
//! with a reproducible witness.

pub mod clifford;
pub mod division;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod groupoid;
pub mod identity;
pub mod quasigroup;
pub mod report;
mod scan;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use groupoid::Groupoid;
pub use report::{Check, Report, Status, Witness};
