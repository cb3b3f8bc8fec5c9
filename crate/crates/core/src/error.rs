use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid exact literal `{0}`")]
    Literal(String),

    #[error("domain violation in {func}: argument {value}")]
    Domain { func: &'static str, value: f64 },

    #[error("cannot parse expression: {0}")]
    Expr(String),

    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),

    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),

    #[error("matrix is singular")]
    Singular,

    #[error("invalid frame: {0}")]
    Frame(String),

    #[error("torsion equations have no common solution: {0}")]
    Inconsistent(String),

    #[error("torsion component outside its irreducible module: {0}")]
    Membership(String),

    #[error("hypothesis violated [{code}]: {detail}")]
    Hypothesis { code: &'static str, detail: String },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("invalid family spec: {0}")]
    FamilySpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn hypothesis(code: &'static str, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            code,
            detail: detail.into(),
        }
    }
}
