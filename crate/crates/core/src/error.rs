use thiserror::Error;

/// Errors raised across the workbench.
///
/// Every variant has a stable short code (see [`Error::code`]) that the CLI
/// prints alongside the message.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dim-mismatch: expected dimension {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("dim-mismatch: {detail}")]
    Shape { detail: String },

    #[error("empty: dimension must be at least 1")]
    EmptyDimension,

    #[error("non-finite: entry {index} is NaN or infinite")]
    NonFinite { index: usize },

    #[error("no-isometry: cannot map dimension {from} isometrically into dimension {to}")]
    NoIsometry { from: usize, to: usize },

    #[error("not-unitary: deviation from identity {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("not-self-adjoint: deviation {deviation:e}")]
    NotSelfAdjoint { deviation: f64 },

    #[error("not-derivation: operator is not anti-self-adjoint (deviation {deviation:e})")]
    NotDerivation { deviation: f64 },

    #[error("invalid basis: {detail}")]
    InvalidBasis { detail: String },

    #[error("invalid group: {detail}")]
    InvalidGroup { detail: String },

    #[error("invalid cocycle: {detail}")]
    InvalidCocycle { detail: String },

    #[error("invalid representation: {detail}")]
    InvalidRepresentation { detail: String },

    #[error("unknown law `{name}`; valid names: {valid}")]
    UnknownLaw { name: String, valid: String },

    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },

    #[error("env: object `{name}`: {detail}")]
    EnvObject { name: String, detail: String },

    #[error("io: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),

    #[error("lex-error at {line}:{column}: unexpected character {found:?}")]
    Lex { line: usize, column: usize, found: char },

    #[error("lex-error at {line}:{column}: {detail}")]
    LexNumber { line: usize, column: usize, detail: String },

    #[error("parse-error at {line}:{column}: expected {expected}, found {found}")]
    Parse {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },

    #[error("type-error at {line}:{column}: {op} cannot combine {operands}")]
    Type {
        line: usize,
        column: usize,
        op: String,
        operands: String,
    },

    #[error("unbound-variable at {line}:{column}: `{name}`")]
    Unbound {
        line: usize,
        column: usize,
        name: String,
    },

    #[error("dim-mismatch at {line}:{column}: {detail}")]
    DimMismatchAt {
        line: usize,
        column: usize,
        detail: String,
    },

    #[error("kind-mismatch: lhs evaluates to {lhs}, rhs evaluates to {rhs}")]
    KindMismatch { lhs: String, rhs: String },

    #[error("invalid var spec `{spec}`: {detail}")]
    VarSpec { spec: String, detail: String },

    #[error("{side}: {source}")]
    Side {
        side: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Short machine-readable code of the error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimMismatch { .. } | Error::Shape { .. } | Error::DimMismatchAt { .. } => {
                "dim-mismatch"
            }
            Error::EmptyDimension => "empty",
            Error::NonFinite { .. } => "non-finite",
            Error::NoIsometry { .. } => "no-isometry",
            Error::NotUnitary { .. } => "not-unitary",
            Error::NotSelfAdjoint { .. } => "not-self-adjoint",
            Error::NotDerivation { .. } => "not-derivation",
            Error::InvalidBasis { .. } => "invalid-basis",
            Error::InvalidGroup { .. } => "invalid-group",
            Error::InvalidCocycle { .. } => "invalid-cocycle",
            Error::InvalidRepresentation { .. } => "invalid-representation",
            Error::UnknownLaw { .. } => "unknown-law",
            Error::InvalidArgument { .. } => "invalid-argument",
            Error::EnvObject { .. } => "env",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Lex { .. } | Error::LexNumber { .. } => "lex-error",
            Error::Parse { .. } => "parse-error",
            Error::Type { .. } => "type-error",
            Error::Unbound { .. } => "unbound-variable",
            Error::KindMismatch { .. } => "kind-mismatch",
            Error::VarSpec { .. } => "var-spec",
            Error::Side { source, .. } => source.code(),
        }
    }

    /// Source position `(line, column)` for front-end errors.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            Error::Lex { line, column, .. }
            | Error::LexNumber { line, column, .. }
            | Error::Parse { line, column, .. }
            | Error::Type { line, column, .. }
            | Error::Unbound { line, column, .. }
            | Error::DimMismatchAt { line, column, .. } => Some((*line, *column)),
            Error::Side { source, .. } => source.position(),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
