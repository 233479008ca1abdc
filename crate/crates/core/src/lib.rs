//! Exact decision procedures for the ordered `Q`-vector space `Q` expanded by
//! the relation `pi * x < y`.
//!
//! Scalars live in `Q(pi)` and are compared by symbolic zero tests plus
//! rigorous enclosures of `pi`. On top of that sit a formula language with
//! `Q(pi)`-linear atoms, two independent quantifier elimination procedures,
//! decomposition of one-variable definable sets into convex pieces, the
//! calculus of definable cuts, refutation of candidate Skolem functions,
//! canonical codes for classes of definable equivalence relations, and a
//! compiler from linear atoms into the primitive signature.

pub mod compile;
pub mod cuts;
pub mod eval;
pub mod formula;
pub mod gen;
pub mod imaginaries;
pub mod limits;
pub mod qe;
pub mod scalar;
pub mod selftest;

pub use formula::{parse, Atom, Formula, LinearTerm, Rel};
pub use scalar::{PiScalar, Rational};
