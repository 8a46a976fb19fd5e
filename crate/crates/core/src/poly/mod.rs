//! Exact and numeric polynomial arithmetic in three homogeneous variables.

pub mod binform;
pub mod mpoly;
pub mod resultant;
pub mod roots;
pub mod scalar;
pub mod solve;
pub mod univariate;

pub use binform::BinForm;
pub use mpoly::{Exponent, MPoly, NumPoly};
pub use resultant::resultant_wrt;
pub use roots::{complex_roots, complex_roots_numeric, P1Root, DEFAULT_ROOT_TOL};
pub use scalar::{rat, ratio, Cx, Embed, Field, GRat, Rat, Scalar};
pub use solve::{batch_seed, count_common_zeros, count_with_common, normalize_projective, solve_system, SolveOutcome};
pub use univariate::UniPoly;
