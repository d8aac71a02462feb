//! Edge-coloured complete graphs in which every vertex lies in a
//! monochromatic clique of prescribed size in each colour.
//!
//! The crate builds the known extremal graphs ([`constructions`]), decides
//! the clique conditions exactly ([`clique`]), derives exact-rational LP
//! certificates for the lower bounds ([`certificates`] on top of the generic
//! simplex in [`lp`]), evaluates the closed-form bounds ([`bounds`]) and
//! confirms small values by exhaustive enumeration ([`search`]).
//!
//! Numeric code is generic over [`scalar::Scalar`]; the aliases below fix
//! the exact instantiation used for certificates.

pub mod bits;
pub mod bounds;
pub mod certificates;
pub mod clique;
pub mod constructions;
pub mod exact_json;
pub mod graph;
pub mod lp;
pub mod scalar;
pub mod search;

pub use clique::{CliqueFamily, EnablingReport, FamilyPolicy};
pub use graph::{ColourId, EdgeColouredGraph, Vertex, VertexSet};

/// Arbitrary-precision rational; reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Exact linear program over [`Rational`].
pub type ExactLp = lp::LinearProgram<Rational>;
pub type ExactLpSolution = lp::LpSolution<Rational>;

/// Floating-point linear program, for exploratory solves only.
pub type FloatLp = lp::LinearProgram<f64>;
