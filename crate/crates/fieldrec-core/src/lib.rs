#![no_std]
//! Function fields `k(t_1, ..., t_r)`, their Milnor K-symbols, and the
//! reconstruction of field isomorphisms from isomorphisms of the
//! multiplicative groups modulo constants.

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arith;
pub mod dependence;
pub mod milnor;
pub mod differentials;
pub mod error;
pub mod lines;
pub mod polyfield;
pub mod reconstruct;

pub use error::{Error, Result, Stage};
pub use polyfield::{ArithOp, ConstantField, Factorization, FieldDescriptor, IrreducibilityMode, Polynomial, RationalFunction};
