//! Semiheaps and para-associative ternary algebras on finite-dimensional
//! Hilbert spaces and their operators.

pub mod derivation;
pub mod dsl;
pub mod env;
pub mod error;
pub mod hilbert;
pub mod kerner;
pub mod operator;
pub mod random;
pub mod report;
pub mod suite;
pub mod symmetry;
pub mod vector;

pub use error::{Error, Result};
