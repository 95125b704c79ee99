//! Finite Coxeter systems: root systems, group elements, words and the
//! combinatorics of weak order, sorting words and reflection length.
//!
//! Vectors are written in root coordinates throughout. Group elements are
//! permutations of the root system, which keeps products and lengths cheap;
//! [`CoxeterSystem::matrix`] recovers the linear action when needed.

pub mod classical;
mod element;
mod ops;
mod system;
mod types;

pub use element::{GroupElement, RootId, Word};
pub use ops::{commutation_matching, Inequality, InequalityRecord, Permutahedron};
pub use system::{CoxeterSystem, DEFAULT_GROUP_CAP, ROOT_CAP};
pub use types::{ClassicalKind, Descriptor};
