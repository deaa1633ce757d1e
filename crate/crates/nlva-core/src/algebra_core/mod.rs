//! Finite-dimensional weak axiomatic vertex algebras given by structure
//! constants, and the axiom checks run against them.

mod checks;
mod report;
mod structure;
mod subspace;

pub use checks::*;
pub use report::{CheckReport, Search, Verdict, Witness};
pub use structure::{apply_field, Action, AlgebraStructure, Field, VField};
pub use subspace::*;
