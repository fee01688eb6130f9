//! Directional Pareto minimality toolkit.
//!
//! Polyhedral cone calculus, Gerstewitz scalarization, directional tangent
//! cones and minimal-time functions, grid-based certification of
//! directional minima for maps and sets, and LP searches for Fritz John /
//! KKT multipliers.

pub mod certify;
pub mod cli;
pub mod error;
pub mod expr;
pub mod gallery;
pub mod geometry;
pub mod mintime;
pub mod multipliers;
pub mod problem;
pub mod report;
pub mod scalarize;
pub mod sets;
pub mod smooth;
pub mod tangent;

pub use error::{Error, Result};
pub use geometry::{DirectionSet, GeneratorCone, HalfspaceCone, Vector};
