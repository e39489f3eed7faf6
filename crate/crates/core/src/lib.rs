#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons also reject NaN

pub mod attacks;
pub mod channels;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod keyrate;
pub mod teleportation;
pub mod verify;

pub use error::{Error, Result};
