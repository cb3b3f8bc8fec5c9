pub mod class;
pub mod error;
pub mod exterior;
pub mod frames;
pub mod catalog;
pub mod g2;
pub mod identities;
pub mod linalg;
pub mod riemann;
pub mod scalar;
pub mod spin7;
pub mod su3;
pub mod tables;
pub mod warp;

pub use class::{ClassLabel, Group};
pub use error::{Error, Result};
pub use exterior::Form;
pub use frames::FrameAlgebra;
pub use scalar::{ExactScalar, Expr, Jet2, Scalar};
