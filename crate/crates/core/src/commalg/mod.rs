//! Gröbner-backed commutative algebra over polynomial rings `k[x_1..x_n]`.

pub mod duality;
pub mod groebner;
pub mod ideal;
pub mod module;
pub mod poly;
pub mod resolution;

pub use duality::{curated_duality_suite, verify_duality_lemma, DualityLemmaReport, ShiftedModuleComplex};
pub use ideal::{buchberger, krull_dim, PolyIdeal};
pub use module::{GradedModulePresentation, PolyMatrix};
pub use poly::{Monomial, Poly};
pub use resolution::{ext_modules, ext_self_k, free_resolution, verify_resolution, ExtTable, FreeResolution};
