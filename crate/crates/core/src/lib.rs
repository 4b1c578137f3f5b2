//! Perfect cone decompositions for Hermitian forms over imaginary quadratic
//! rings of class number one, their cell complexes and homology.

pub mod complex;
pub mod error;
pub mod herm;
pub mod homology;
pub mod isometry;
pub mod levels;
pub mod linalg;
pub mod minvec;
pub mod polyhedral;
pub mod ring;
pub mod voronoi;

pub use error::{Error, Result};
