use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// The CLI maps these onto exit codes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined roots: zero polynomial")]
    ZeroPolynomial,
    #[error("degree {0} is too small (need at least 2)")]
    DegreeTooSmall(usize),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate polytope: x = b/a must exceed 1")]
    DegeneratePolytope,
    #[error("degenerate profile: p(r) vanishes identically")]
    DegenerateProfile,
    #[error("singular locus: {0}")]
    Singular(String),
    #[error("convexity failure: p(r) has a root inside (a, b) near {0}")]
    Convexity(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Defect(String),
}

impl Error {
    /// 1 for a failed identity, 2 for bad input, 3 for a domain problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Defect(_) => 1,
            Error::Parameter(_) | Error::Parse(_) | Error::Unsupported(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
