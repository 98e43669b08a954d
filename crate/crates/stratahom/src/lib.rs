//! Integer homology of spaces of real polynomials and binary forms whose
//! root multiplicities follow prescribed patterns.
//!
//! Cells are indexed by (marked) compositions; a closed family of patterns
//! gives a subcomplex whose homology is computed with Smith normal forms.

pub mod chain_complex;
pub mod combinatorics;
pub mod error;
pub mod integer_linalg;
pub mod posets;
pub mod spaces;
pub mod stabilization;
pub mod tables;

pub use error::{Error, Result};
