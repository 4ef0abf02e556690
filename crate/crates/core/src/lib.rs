//! Exact evaluation of string diagrams in vector product algebras and
//! composition algebras.
//!
//! Terms are written in a small DSL ([`dsl`]), typechecked against a
//! signature ([`term`]) and evaluated to exact rational tensors
//! ([`tensor`], [`eval`]) in a concrete [`model::Model`]. The [`builtin`]
//! module supplies the classical algebras, [`equivalence`] converts between
//! composition algebras and vector product algebras, and [`verify`] runs the
//! identity catalog.

pub mod builtin;
pub mod dsl;
pub mod equivalence;
pub mod eval;
pub mod linalg;
pub mod model;
pub mod tensor;
pub mod term;
pub mod verify;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub use dsl::{parse, pretty, ParseError};
pub use eval::{apply, evaluate, evaluate_scalar, EvalError};
pub use model::{emit_model, load_model, Model, ModelError, Role};
pub use tensor::{RationalTensor, TensorError};
pub use term::{typecheck, GenDecl, ObjType, Signature, Term, TermError};
