//! Exact lattice-polytope toolkit for quiver polytopes, their cells and
//! compressed polytopes: enumeration, geometry, toric ideal generation
//! degrees and quadratic Gröbner bases.

pub mod catalog;
pub mod classification;
pub mod compressed;
pub mod corpus;
pub mod enumerate;
pub mod error;
pub mod flows;
pub mod ideal;
pub mod linalg;
pub mod polytope;
pub mod quiver;

pub use error::{Error, Result};
