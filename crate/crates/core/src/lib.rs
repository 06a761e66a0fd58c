pub mod arith;
pub mod correspondences;
pub mod end_algebra;
pub mod error;
pub mod expr;
pub mod motivic_cohomology;
pub mod report;
pub mod rost_chow;
pub mod split_algebra;
pub mod steenrod;
pub mod sym_powers;
pub mod verify;

pub use error::{Error, Result};
