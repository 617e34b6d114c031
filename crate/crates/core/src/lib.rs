//! Graph diagrams, Reidemeister calculus, rational tangles and Kauffman-bracket
//! bounds, assembled into a knot-theoretic non-planarity criterion for
//! minimalizable graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`multigraph`]: abstract multigraphs, automorphism groups, unions and a
//!   planarity oracle.
//! - [`diagram`]: plane graph diagrams stored as rotation systems.
//! - [`moves`]: crossing changes, Reidemeister moves, vertex moves and the
//!   bounded search built on them.
//! - [`tangle`]: rational tangle arithmetic, normal forms, closures and vertex
//!   substitution.
//! - [`invariants`]: Kauffman bracket, linking numbers and crossing-number
//!   bounds.
//! - [`criterion`]: the degree-four vertex planarity criterion, the
//!   automorphism-driven crossing-number search and additivity checks.

pub mod criterion;
pub mod diagram;
mod error;
pub mod invariants;
pub mod moves;
pub mod multigraph;
pub mod tangle;

pub use error::{Error, Result};
