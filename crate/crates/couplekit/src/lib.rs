//! Numerical machinery for finite weighted sequence couples: K- and
//! J-functionals with witnessing splits, exact concave K-curve arithmetic,
//! orbit/domination tests with explicit operator construction, duality and
//! Hahn-Banach extension, subcouple/quotient/retract structure, and
//! real-method interpolation norms.
//!
//! Everything is exact or carries an explicit certificate at desk scale:
//! closed forms where the exponent pattern admits one, a deterministic
//! convex solver elsewhere, and independent oracles in the test suite.

// House style: `!(t > 0.0)` rejects NaN along with nonpositive values, and
// float equality guards stand in for the deprecated float literal patterns.
// Index loops stay where they mirror matrix subscripts.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::redundant_guards,
    clippy::needless_range_loop,
    clippy::while_let_loop
)]

pub mod couple;
pub mod curve;
pub mod error;
pub mod interp;
pub mod kfun;
mod numerics;
pub mod orbit;
pub mod smoothness;
pub mod structure;

pub use couple::{Couple, Element, Exponent, Side};
pub use curve::ConcaveCurve;
pub use numerics::rel_err;
