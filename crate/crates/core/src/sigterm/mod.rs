//! Order-sorted signatures, terms, positions and substitutions.

mod fresh;
mod position;
mod signature;
mod subst;
mod term;

pub use fresh::FreshScope;
pub use position::Position;
pub use signature::{
    Component, OpAttrs, OpDecl, OpId, Signature, SignatureBuilder, Sort, SortId, MAX_TUPLE_ARITY,
};
pub use subst::Substitution;
pub use term::{Term, TermDisplay, Var};
