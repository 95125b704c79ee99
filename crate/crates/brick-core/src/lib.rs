//! Finite Coxeter groups, subword complexes and their brick polytopes.
//!
//! The crate is organised bottom-up: [`exactnum`] provides exact scalars,
//! [`coxeter`] builds root systems and group arithmetic, [`subword`] handles
//! subword complexes and flips, [`brick`] the brick polytope geometry and the
//! map from group elements to facets, and [`cambrian`] the cluster complex
//! specialisation with its Coxeter-Catalan bijections.

#![allow(clippy::needless_range_loop)]

pub mod brick;
pub mod cambrian;
pub mod coxeter;
pub mod error;
pub mod exactnum;
pub mod subword;
pub mod suites;

pub use error::{Error, Result};
