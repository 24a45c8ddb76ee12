//! Exact computation with Grassmann algebras, their superderivations, and the
//! Lie, Poisson and Jordan superalgebras built from them.

pub mod catalog;
pub mod doubles;
pub mod echelon;
pub mod error;
pub mod generate;
pub mod grassmann;
pub mod identities;
pub mod lincomb;
pub mod operators;
pub mod scalar;
pub mod series;
pub mod suites;
pub mod text;

pub use error::{Error, Result};
