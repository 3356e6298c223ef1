use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("invalid group type: {0}")]
    InvalidType(String),

    /// A caller asked for something the operation's contract excludes.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid field descriptor: {0}")]
    Field(String),

    #[error("invalid place symmetry: {0}")]
    Symmetry(String),

    #[error("invariants are not coherent: global sum is {sum}, expected 0")]
    Incoherent { sum: String },

    #[error("no H2 class known for real form {form} at place {place}; supply omega=...")]
    MissingRealClass { place: String, form: String },

    #[error("real form {form} at place {place}: {msg}")]
    RealForm {
        place: String,
        form: String,
        msg: String,
    },

    #[error("{what}: size {size} exceeds cap {cap}{}", partial.as_ref().map(|p| format!(" (partial certificate: {p})")).unwrap_or_default())]
    Capacity {
        what: String,
        size: usize,
        cap: usize,
        partial: Option<String>,
    },

    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn is_out_of_scope(&self) -> bool {
        matches!(self, Error::OutOfScope(_))
    }
}
