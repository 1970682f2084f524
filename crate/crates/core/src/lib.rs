//! Exact construction and verification of generic resolutions of Artinian
//! Gorenstein algebras with linear resolutions.
//!
//! The math modules build on each other in this order:
//! [`exactbase`] → [`multilinear`] → [`hookmods`] → [`rescomplex`] →
//! [`inversesys`] → [`minimalize`] / [`pfafflab`] → [`verify`].

pub mod error;
pub mod exactbase;
pub mod hookmods;
pub mod inversesys;
pub mod minimalize;
pub mod multilinear;
pub mod pfafflab;
pub mod rescomplex;
pub mod verify;

pub use error::{Error, Result};
pub use exactbase::{Monomial, Poly, Rational, SparseMatrix, VarId};
