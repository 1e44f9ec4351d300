use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong, from arithmetic plumbing up to session parsing.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("term orders disagree")]
    OrderMismatch,
    #[error("relation {index} has a constant or linear term (not in m^2)")]
    NotInMSquared { index: usize },
    #[error("relations are not a regular sequence (quotient test fails at f_{witness})")]
    NotRegularSequence { witness: usize },
    #[error("quotient ring is not Artinian over its coefficient field")]
    NotArtinian,
    #[error("matrix shape mismatch: {context}")]
    ShapeMismatch { context: String },
    #[error("differential does not square to zero at degree {degree}")]
    SquareNotZero { degree: i64 },
    #[error("map is not a chain map at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("operators t_{i} and t_{j} commute only up to homotopy, and no homotopy witness was found")]
    CommutationFailure { i: usize, j: usize },
    #[error("basis-change comparison failed for operator t'_{index}: no homotopy to the predicted combination")]
    ConventionMismatch { index: usize },
    #[error("rank point is zero; the origin belongs to every variety by convention")]
    ZeroPoint,
    #[error("stabilization not detected within window {window}")]
    StabilizationNotDetected { window: usize },
    #[error("window computation unsupported here: {context}")]
    WindowUnsupported { context: String },
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("name '{name}' is not defined")]
    UndefinedName { name: String },
    #[error("name '{name}' is already defined")]
    DuplicateName { name: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn shape(context: impl Into<String>) -> Self {
        Error::ShapeMismatch { context: context.into() }
    }

    pub fn parse_at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    /// Exit code the CLI maps this error to: 2 for parse/usage, 1 for math.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::UndefinedName { .. } | Error::DuplicateName { .. } => 2,
            _ => 1,
        }
    }
}
