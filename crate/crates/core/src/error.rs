use thiserror::Error;

/// Errors raised by the planning library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("configuration coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("image parse error at byte {offset}: {kind}")]
    Image { offset: usize, kind: ImageErrorKind },

    #[error("sampler exhausted after {attempts} consecutive rejections")]
    SamplerExhausted { attempts: usize },

    /// Start or goal is unusable (in collision, wrong dimension, ...).
    #[error("invalid planning input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Registry(#[from] RegistryError),

    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    ConfigSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Semantic config error; `path` names the offending key, e.g. `templates[0].eps`.
    #[error("config error at '{path}': {message}")]
    Config { path: String, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageErrorKind {
    #[error("unsupported magic number {0:?}")]
    UnsupportedMagic(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated pixel data: {0}")]
    Truncated(String),
    #[error("malformed pixel data: {0}")]
    MalformedPixel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("{kind} '{name}' is already registered")]
    Conflict { kind: &'static str, name: String },
    #[error("invalid {kind} name '{name}': must match [a-z][a-z0-9_]*")]
    InvalidName { kind: &'static str, name: String },
    #[error("unknown {kind} '{name}'; available: {}", available.join(", "))]
    NotFound {
        kind: &'static str,
        name: String,
        available: Vec<String>,
    },
}

impl Error {
    /// Errors caused by the caller's inputs rather than by the library.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NonFinite { .. }
                | Error::Contract(_)
                | Error::Image { .. }
                | Error::InvalidInput(_)
                | Error::Registry(_)
                | Error::ConfigSyntax { .. }
                | Error::Config { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
