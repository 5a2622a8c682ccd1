use thiserror::Error;

use crate::grids::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed word {word:?}: {reason}")]
    MalformedWord { word: String, reason: &'static str },

    #[error("width {m} needs about {estimate} suitable words, above the cap of {cap}")]
    TooManyWords {
        m: usize,
        estimate: usize,
        cap: usize,
    },

    #[error("invalid dimensions {m}x{n}: {reason}")]
    InvalidDimensions {
        m: usize,
        n: usize,
        reason: &'static str,
    },

    #[error("no period with d <= {max_d} and n0 <= {max_n} found for width {m}")]
    NoPeriod {
        m: usize,
        max_d: usize,
        max_n: usize,
    },

    #[error("n = {n} is below the certificate start n0 = {n0}")]
    BelowPeriodStart { n: usize, n0: usize },

    #[error("{m}x{n} is too large for the {engine} engine")]
    InstanceTooLarge {
        m: usize,
        n: usize,
        engine: &'static str,
    },

    #[error("{m}x{n} grid admits no independent [1,2]-set")]
    Infeasible { m: usize, n: usize },

    #[error("set fails verification with {} violation(s)", .0.violations.len())]
    InvalidSet(Box<VerificationReport>),

    #[error("construction for {m}x{n} reached {best} vertices, target {target}")]
    ConstructionFailed {
        m: usize,
        n: usize,
        best: usize,
        target: usize,
    },

    #[error("cannot parse grid set: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
