//! Exact-arithmetic toolkit for central extensions of `Z^n` by closed
//! orientable 2-orbifold groups.
//!
//! An extension class is an `n x (m+1)` integer matrix taken modulo the
//! column relations `r_0* + p_i * r_i*`. The crate decides when two classes
//! lie in the same orbit of `GL_n(Z) x Sigma` (the groups are isomorphic)
//! or of `GL_n(Zhat) x Sigma` (their profinite completions are isomorphic),
//! always returning a machine-checkable witness. On top of the decisions it
//! classifies signatures into rigid / non-rigid / unresolved regimes,
//! constructs explicit non-rigid pairs, and certifies that stabilizing by a
//! `Z` factor merges profinitely equal pairs into one integral orbit.
//!
//! Everything is exact: arbitrary-precision integers, exact rationals, and
//! witnesses that are re-verified before being returned.
//!
//! The crate is `no_std` (with `alloc`); IO, JSON and the CLI live in the
//! companion `extiso` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod orbifold;
pub mod zmatrix;
pub mod coclass;
pub mod orbits;
pub mod rigidity;
pub mod groups;

pub use error::Error;
