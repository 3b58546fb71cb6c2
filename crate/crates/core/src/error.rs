use std::fmt;

use thiserror::Error;

/// A single broken invariant found while validating a weight matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BadShape { expected: usize, row: Option<usize>, found: usize },
    NonZeroDiagonal { a: usize, value: i64 },
    NotSkewSymmetric { a: usize, b: usize, ab: i64, ba: i64 },
    OddEntry { a: usize, b: usize, value: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadShape { expected, row: None, found } => {
                write!(f, "expected {expected} rows, found {found}")
            }
            Violation::BadShape { expected, row: Some(r), found } => {
                write!(f, "row {r} has {found} entries, expected {expected}")
            }
            Violation::NonZeroDiagonal { a, value } => write!(f, "w[{a}][{a}] = {value}, must be 0"),
            Violation::NotSkewSymmetric { a, b, ab, ba } => {
                write!(f, "w[{a}][{b}] = {ab} but w[{b}][{a}] = {ba}")
            }
            Violation::OddEntry { a, b, value } => write!(f, "w[{a}][{b}] = {value} is odd"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid margin matrix: {}", join(.0))]
    InvalidMatrix(Vec<Violation>),
    #[error("cannot delete the last remaining alternative")]
    LastAlternative,
    #[error("alternative {0} out of range for {1} alternatives")]
    NoSuchAlternative(usize, usize),
    #[error("matrix is not linear (some margins are tied or zero)")]
    NotLinear,
    #[error("majority graph is not a tournament (some margins are zero)")]
    NotTournament,
    #[error("{what}: {n} alternatives exceeds the supported maximum of {max}")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("operation requires exactly three alternatives, got {0}")]
    NotThreeAlternatives(usize),
    #[error("no stable voting winner exists for this matrix")]
    NoStableWinner,
    #[error("linearization count {count} exceeds budget {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("profile margins are odd (odd ballot count {0}); margin matrices need even weights")]
    OddBallotCountProducingOddMargins(usize),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("voter count {0} is odd")]
    OddVoterCount(usize),
    #[error("incompatible encoding modes: {0}")]
    IncompatibleModes(String),
    #[error("decoded assignment is not a linear ordinal margin matrix: {0}")]
    NotLinearDecoded(String),
    #[error("malformed solver output: {0}")]
    MalformedSolverOutput(String),
    #[error("failed to run solver `{command}`: {source}")]
    SolverSpawnFailure {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
