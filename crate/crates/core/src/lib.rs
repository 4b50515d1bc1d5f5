//! Variant-based equational unification modulo free and AC operators, with
//! constructor-root early stopping.
//!
//! The crate is layered bottom-up: [`sigterm`] (signatures, terms,
//! substitutions), [`theoryparse`] (module and problem files), [`axunify`]
//! (matching and unification modulo the axioms), [`normalize`] (rewriting to
//! canonical form), [`varnarrow`] (folding variant narrowing), [`varunify`]
//! (the four unification algorithms) and [`frontend`] (command output,
//! benchmark harness and a brute-force ground oracle).

pub mod axunify;
mod context;
mod error;
pub mod frontend;
pub mod normalize;
pub mod sigterm;
pub mod theoryparse;
pub mod varnarrow;
pub mod varunify;

pub use context::{Ctx, Limits};
pub use error::{Error, Result};
