//! Exact arithmetic over `Q` and the real fields `Q(2cos(pi/L))`.
//!
//! Every scalar carries its field; rational values are always stored in `Q`,
//! so mixing a rational with an extension element promotes silently. Signs
//! are decided exactly by refining an isolating interval of the generator.

mod field;
mod linalg;
mod scalar;

pub use field::{field_for, make_field, needs_extension, rationals, Field};
pub use linalg::{rank_of, Matrix, Vector};
pub use scalar::Scalar;
