//! Exact-arithmetic toolkit for tropical multi-sections over complete fans.
//!
//! The crate models weighted branched covers of a complete two-dimensional fan
//! carrying a piecewise-linear function (multi-sections), the rational
//! coefficient matrices that turn them into equivariant transition data
//! (Kaneyama data), and the wall-crossing calculus that decides when such data
//! exists. Everything is computed over the integers and rationals; there is no
//! floating point anywhere.
//!
//! Module map:
//! - [`lattice`]: integer lattice vectors, pairings, dual-cone membership.
//! - [`fan`]: complete fans in rank 2 with anticlockwise ray order.
//! - [`multisection`]: lifted cells, weights, slopes, separability,
//!   monodromy, combinatorial union / fiber product / dual / separation.
//! - [`laurent`]: sparse Laurent polynomials and matrices over the character
//!   lattice, regularity and skeleton restriction.
//! - [`kaneyama`]: validation and assembly of transition coefficient data,
//!   gauge equivalence, direct sums, push-forwards.
//! - [`wallcross`]: semi-flat cocycles, nilpotent wall factors and their
//!   exponentials, the consistency loop around the origin, bundle assembly.
//! - [`rank2`]: arrangement normalization, slope matrices, the slope
//!   condition, the constructive solver and the independent brute-force
//!   solver, moduli dimension bounds.
//! - [`corpus`]: seeded random instance generators used by the test suites
//!   and the `gen-corpus` CLI command.
//! - [`doc`]: the `tlms-v1` text format (parse/emit).
//! - [`commands`]: the report-producing command layer shared by the CLI
//!   binary and the C ABI.

pub mod commands;
pub mod corpus;
pub mod doc;
pub mod fan;
pub mod kaneyama;
pub mod lattice;
pub mod laurent;
pub mod matrix;
pub mod multisection;
pub mod rank2;
pub mod wallcross;

pub use fan::Fan2D;
pub use lattice::{ConeGens, LatticeVec};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use matrix::RatMatrix;
pub use multisection::{CoverMorphism, MultiSection, RayLift, Sheet, VertexLift};

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
