pub mod cli;
pub mod error;
pub mod geometry;
pub mod halfint;
pub mod invariant;
pub mod linalg;
pub mod oracle;
pub mod sep3n;
pub mod surd;
pub mod tensors;
pub mod wigner;

pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use linalg::{CMatrix, CVector, HermitianOperator};
pub use surd::SqrtRational;
