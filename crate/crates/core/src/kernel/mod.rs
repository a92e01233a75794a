//! Intensional type theory with identity types only: base types, `Id`,
//! `refl` and the Frobenius form of `J`.

mod check;
mod morphism;
mod normalize;
mod parse;
mod print;
pub mod syntax;

pub use check::Signature;
pub use morphism::{ContextMorphism, Telescope};
pub use normalize::{def_eq, is_normal, normalize, normalize_type, step, step_type, type_eq};
pub use parse::{parse_telescope, parse_term, parse_type};
pub use print::{print_term, print_type};
pub use syntax::{JElim, Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("variable {0} out of scope in a context of length {1}")]
    UnboundVar(usize, usize),
    #[error("loose bound variable {0}")]
    LooseBound(usize),
    #[error("unknown constant {0}")]
    UnknownConst(String),
    #[error("unknown base type {0}")]
    UnknownBase(String),
    #[error("unknown name {0}")]
    UnknownName(String),
    #[error("expected an identity type, found {0}")]
    NotAnId(String),
    #[error("{what}: {left} is not definitionally equal to {right}")]
    Mismatch {
        what: &'static str,
        left: String,
        right: String,
    },
    #[error("expected type {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("telescope mismatch: {0}")]
    TelescopeMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl KernelError {
    pub(crate) fn mismatch(what: &'static str, left: &Term, right: &Term) -> Self {
        KernelError::Mismatch {
            what,
            left: format!("{left:?}"),
            right: format!("{right:?}"),
        }
    }
}
