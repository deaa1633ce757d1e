//! Exact calculus for nonlocal vertex algebras on finite-dimensional rational
//! spaces: formal series, structure checkers, constructions, modules, and the
//! closure of compatible vertex operators.
#![no_std]

extern crate alloc;

mod error;

pub mod algebra_core;
pub mod constructions;
pub mod formal_series;
pub mod linalg;
pub mod modules_rep;
pub mod operator_space;

pub use error::{Error, Result};
