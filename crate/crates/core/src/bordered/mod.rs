//! Bordered structures over the torus algebra and their pairing.

pub mod algebra;
mod lot;
mod pairing;
mod type_a;
mod type_d;

pub use algebra::{AlgElt, Idem};
pub use lot::{lot, lot_pieces};
pub use pairing::{box_tensor, Flavor};
pub use type_a::{
    cable31_diagram, cfa_cable31, cfa_nu, cfa_nu_minus, chord_closure, AGen, AViolation, Action,
    TypeA,
};
pub use type_d::{cfd_unknot, DGen, DViolation, TypeD};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BorderedError {
    #[error("complex is not multirectangular")]
    NotMultirect,
    #[error("type-D structure has idempotent-labelled arrows; reduce it first")]
    NotReduced,
    #[error("an action consumes a cyclic path starting at {generator}")]
    Nontermination { generator: String },
    #[error("action output {generator} is not an idempotent-matched pair")]
    IdempotentMismatch { generator: String },
    #[error("pairing has nonzero d^2")]
    DSquaredNonzero,
    #[error("unknown built-in module `{0}`")]
    UnknownBuiltin(String),
}

/// Built-in type-A modules addressable by name.
pub fn builtin_type_a(name: &str) -> Result<TypeA, BorderedError> {
    match name {
        "cfa-nu" => Ok(cfa_nu()),
        "cfa-cable-3-1" => Ok(cfa_cable31()),
        _ => Err(BorderedError::UnknownBuiltin(name.to_string())),
    }
}

/// Built-in type-D structures addressable by name.
pub fn builtin_type_d(name: &str) -> Result<TypeD, BorderedError> {
    match name {
        "cfd-unknot" => Ok(cfd_unknot()),
        _ => Err(BorderedError::UnknownBuiltin(name.to_string())),
    }
}
