//! The identity catalog and the runner that checks it against models.

mod catalog;
mod dimension;
mod report;
mod runner;

use thiserror::Error;

use crate::eval::EvalError;
use crate::model::ModelError;
use crate::Rational;

pub use catalog::{Catalog, CatalogError, Forall, IdentityEntry, Probe, BUILTIN_CATALOG, COVERAGE, TAGS};
pub use dimension::{dimension_report, DimensionCheck, DimensionKind, DimensionReport};
pub use report::{format_report, verdicts_ok, OutputMode, Profile, Section};
pub use runner::{
    bind, check_bound, check_equation, check_terms, run_entries, run_suite, suites_for, vpa_axiom_failures, Binding, Bound, Status,
    Suite, Verdict, Witness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("entry `{0}` does not use this binding")]
    Binding(String),
    #[error("entry `{id}` does not parse: {reason}")]
    Parse { id: String, reason: String },
    #[error("{what}: computed {computed}, expected {expected}")]
    AssertionFailure { what: String, computed: Rational, expected: Rational },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}
