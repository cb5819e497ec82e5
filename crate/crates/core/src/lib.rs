//! Numerical laboratory for elliptic-type gradient estimates of the heat
//! equation on rotationally symmetric model manifolds.

pub mod acceptance;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod estimates;
pub mod geometry;
pub mod kernelbounds;
pub mod lattice;
pub mod liouville;
pub mod output;
pub mod proofcheck;
pub mod solutions;
pub mod taylor;

pub use error::{Error, Result};
