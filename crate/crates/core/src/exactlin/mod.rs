//! Exact field arithmetic and finite-dimensional linear algebra.

mod complex;
mod field;
mod matrix;

pub use complex::{is_chain_map, is_quasi_isomorphism, mapping_cone, ChainMap, FinComplex};
pub(crate) use complex::sign;
pub use field::{is_prime, suggest_primes, Field, FieldElem, DEFAULT_PRIME};
pub use matrix::Matrix;
