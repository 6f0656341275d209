use thiserror::Error;

/// Errors raised by table loading, estimation, projection and valuation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed table: {0}")]
    Table(String),

    #[error("age {age} outside covered range {lo}..={hi}")]
    AgeOutOfRange { age: u32, lo: u32, hi: u32 },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("inconsistent inputs at age {age}: {detail}")]
    Inconsistent { age: u32, detail: String },

    #[error("contract and projection do not match: {0}")]
    Mismatch(String),

    #[error("premium annuity factor is zero")]
    ZeroAnnuityFactor,

    #[error("state {0} is absorbing; no reserve is held")]
    AbsorbingState(u8),

    #[error("viatical value is not positive: {0}")]
    NonPositiveValue(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
