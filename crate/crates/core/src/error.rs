use thiserror::Error;

use crate::text::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported construct {construct} in {axiom}")]
    UnsupportedConstruct { axiom: String, construct: String },

    #[error("unsafe rule {rule}: head variable ?{variable} does not occur in the body")]
    UnsafeRule { rule: String, variable: String },

    #[error("derived fact count exceeded the cap of {cap}")]
    ResourceLimit { cap: usize },

    #[error("unsupported query {0}: only Thing, names, and, or, some and value are allowed")]
    UnsupportedQuery(String),

    #[error("fact is not in the closure: {0}")]
    NotDerived(String),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("record `{record}` references unknown identifier `{target}`")]
    DanglingReference { record: String, target: String },

    #[error("identifier `{0}` is declared by more than one record")]
    DuplicateRecord(String),

    #[error("malformed coordinate `{0}`")]
    MalformedCoordinate(String),

    #[error("no hypothesis for `{0}` scores above Thing")]
    NoHypothesis(String),

    #[error("class `{0}` has no classification GCI to plant")]
    NoGciForClass(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{} error(s) while parsing {origin}", diagnostics.len())]
    Parse { origin: String, diagnostics: Vec<Diagnostic> },

    #[error("annotation line {line}: {message}")]
    Annotation { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
