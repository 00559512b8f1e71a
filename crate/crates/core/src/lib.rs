//! Quaternionic function calculus in the complex-pair representation.
//!
//! Quaternions are pairs `(z1, z2)` meaning `z1 + z2 j`. Functions
//! `f = f1 + f2 j` on `C^2` are built from component expressions, evaluated
//! with exact first-order Wirtinger jets, and checked for hyperholomorphy
//! (the Cauchy-Fueter system), hypermeromorphy and sha-ness on sample grids.

mod error;

pub mod checks;
pub mod function;
pub mod geometry;
pub mod grid;
pub mod jet;
pub mod operators;
pub mod quat;
pub mod residual;

pub use error::{Error, Result};
pub use function::{ComponentExpr, QEval, QFunction};
pub use grid::GridSpec;
pub use jet::{Point, WirtingerJet};
pub use quat::Quaternion;
pub use residual::ResidualReport;
