//! Exact arithmetic in affine Schur algebras, the integral hyperalgebra of the
//! loop algebra of `gl_n`, its characteristic-p subalgebras and the
//! stabilization algebra.

pub mod afweyl;
pub mod binom;
pub mod context;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod garland;
pub mod hall;
pub mod hyper;
pub mod json;
pub mod kstab;
pub mod lincomb;
pub mod matrix;
pub mod modp;
pub mod parallel;
pub mod rewrite;
pub mod scalar;
pub mod schur;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{PeriodicMatrix, PeriodicVector};
pub use scalar::{Ring, Scalar};
