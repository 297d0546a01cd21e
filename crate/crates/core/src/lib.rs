//! Exact computational models for the Fourier–Mellin transform of toric
//! perverse sheaves on complex tori, together with the surrounding
//! commutative-algebra, BGG and weight machinery used to verify its
//! structural properties.

pub mod bgg;
pub mod commalg;
pub mod corpus;
pub mod error;
pub mod exactlin;
pub mod exterior;
pub mod laurent;
pub mod lattice;
pub mod linearity;
pub mod mellin;
pub mod purity;
pub mod sampling;
pub mod toric;

pub use error::{Error, Result};
