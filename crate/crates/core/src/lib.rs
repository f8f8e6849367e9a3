//! Exact construction and numeric verification of the conformally covariant
//! operator families `E_λ`, `E_{λ,N}` and their restrictions `E_N(λ)` to the
//! hyperplane `ξ_n = 0`.

pub mod algebra;
pub mod conformal;
pub mod diffop;
pub mod error;
pub mod juhl;
pub mod scalar;
pub mod quadrature;
pub mod special;
pub mod symbolcalc;

pub use error::{Error, Result};
pub mod verify;
pub mod cli;
