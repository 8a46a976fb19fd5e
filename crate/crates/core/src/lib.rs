//! Caustics by reflection of plane algebraic curves.
//!
//! The crate builds the reflected-ray matrix `B(x)` of a curve, counts the class of its
//! caustic by exact elimination, samples envelope points, tests birationality of the caustic
//! map and of matrix projections `B ↦ B·S`, and classifies lines in the determinantal cubic
//! of symmetric 3×3 matrices.

pub mod birational;
pub mod caustic;
pub mod cli;
pub mod detgeom;
pub mod error;
pub mod euclid;
pub mod linalg;
pub mod poly;
pub mod rng;

pub use error::{Error, Result};
