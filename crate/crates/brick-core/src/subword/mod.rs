//! Subword complexes of a word in the simple generators.
//!
//! Facets are position sets whose complement is a reduced word for the
//! longest element. Words whose Demazure product falls short of it are
//! completed on the right.

mod complex;
mod facet;
mod greedy;
mod reconstruct;

pub use complex::{brute_force_facets, FlipArc, SubwordComplex};
pub use facet::Facet;
pub use greedy::{
    greedy_facet, greedy_index, greedy_tree, greedy_tree_dot, is_representable, negative_greedy,
    negative_tree_recursive, positive_greedy, positive_tree_recursive, GreedyTree, Sign,
};
pub use reconstruct::{facet_from_roots, parabolic_restriction, ParabolicRestriction, RootPart};
