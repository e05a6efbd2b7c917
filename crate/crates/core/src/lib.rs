//! Benedicks-type uncertainty decisions for metaplectic Wigner distributions
//! `W_𝓐(f, g) = μ(𝓐)(f ⊗ ḡ)`, `𝓐 ∈ Sp(4d, ℝ)`, and a finite-grid realization
//! of the operators involved.

pub mod decision;
pub mod decomp;
pub mod error;
pub mod grid;
pub mod matrix;
pub mod selfcheck;
pub mod symplectic;

pub use error::{Error, Result};
