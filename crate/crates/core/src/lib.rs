//! Exact solving workbench for BIPARTITE INFLUENCE.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: ground graphs, positions, removal closures and canonical keys.
//! - [`solver`]: memoized Left/Right score search on positions.
//! - [`cgt`]: abstract short scoring games (sums, negation, equivalence, simplification).
//! - [`thermo`]: exact cooling, temperature and mean of games.
//! - [`segments`]: a dedicated engine for disjunctive sums of paths.
//! - [`symmetry`]: BW-automorphism search and draw certificates.
//! - [`reduction`]: POS-CNF gadgets and a brute-force POS-CNF oracle.
//!
//! The abstract-game and cooling layers are generic over an exact ordered
//! field ([`Scalar`]); the aliases below fix the common choices.

pub mod cgt;
mod error;
pub mod graph;
pub mod reduction;
mod scalar;
pub mod segments;
pub mod solver;
pub mod symmetry;
pub mod thermo;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Integer score of a position, Left-positive.
pub type Score = i32;

/// Exact rational with machine-word components; enough for every tree the
/// workbench builds at desk scale.
pub type Rational = num_rational::Ratio<i64>;

/// Arbitrary-precision rational.
pub type BigRational = num_rational::BigRational;

/// Game store over [`Rational`].
pub type GameStore = cgt::GameStore<Rational>;

/// Thermograph over [`Rational`].
pub type Thermograph = thermo::Thermograph<Rational>;

/// Piecewise-linear trajectory over [`Rational`].
pub type PLFunction = thermo::PLFunction<Rational>;
