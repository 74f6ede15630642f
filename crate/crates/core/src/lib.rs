//! Exact stability and polystability decisions for twisted matrix tuples and
//! Stokes representations of `GL_n`.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod field;
pub mod git;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod stokes;
pub mod twist;

pub use error::{Error, Result};
pub use field::Scalar;
pub use linalg::{Grading, GradingPiece, Matrix, Subspace};
