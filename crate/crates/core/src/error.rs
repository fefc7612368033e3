use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Factorization of `n` ran out of its work budget.
    #[error("factorization of {n} exceeded the work budget of {budget} iterations")]
    WorkBudgetExceeded { n: u128, budget: u64 },

    #[error("divisor count {count} exceeds the cap of {cap}")]
    DivisorCapExceeded { count: u128, cap: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("family {family} does not apply to n = {n}: {reason}")]
    ConditionViolation {
        family: String,
        n: u128,
        reason: String,
    },

    /// A generator produced a triple that does not satisfy 4/n = 1/x + 1/y + 1/z.
    /// This is always a bug or a transcription error in a formula and must abort.
    #[error("triple ({x}, {y}, {z}) from {method} does not decompose 4/{n}")]
    VerificationFailed {
        n: u128,
        x: u128,
        y: u128,
        z: u128,
        method: String,
    },

    #[error("{p} is not congruent to {residue} mod {modulus}")]
    ResidueMismatch {
        p: u128,
        residue: u128,
        modulus: u128,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors that signal "give up on this input" rather than a bug.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::WorkBudgetExceeded { .. }
                | Error::DivisorCapExceeded { .. }
                | Error::Overflow(_)
        )
    }
}
