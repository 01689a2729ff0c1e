//! Exact arithmetic substrate: field contexts, univariate and sparse
//! multivariate polynomials, gcd, resultants and factorization.

pub mod absirr;
pub mod field;
pub mod gcd;
pub mod linalg;
pub mod mfactor;
pub mod mpoly;
pub mod qfactor;
pub mod ufactor;
pub mod upoly;

pub use field::{ConstField, Field, FiniteField, Fp, Gf, Rationals};
pub use mpoly::{MPoly, Mono, MAX_VARS};
