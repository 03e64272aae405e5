//! Computations over the τ = 0 motivic Steenrod algebra at the prime 2:
//! the Milnor-basis Hopf algebra, graded modules and Margolis homology,
//! minimal resolutions and Ext charts, and the chain complexes modelling
//! the `kw_n` and `wBP` towers.

pub mod error;
pub mod linalg;
pub mod milnor;
pub mod modules;
pub mod resolution;
pub mod towers;
pub mod verify;

pub use error::{Error, Result};
