use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("resonance condition violated: residual {residual:e} rad/s exceeds tolerance {tolerance:e}; use numerical integration")]
    ResonanceViolated { residual: f64, tolerance: f64 },

    #[error("perfect-blockade condition |Ω1π| = √3|S| violated (relative error {relative_error:e}); |c2(n=1)| leakage at gate time is {leakage:e}")]
    BlockadeConditionViolated { relative_error: f64, leakage: f64 },

    #[error("integration step {step:e} s too large for rate {rate:e} rad/s; use step <= {suggested:e} s")]
    StepTooLarge { step: f64, rate: f64, suggested: f64 },

    #[error("matrix is not unitary: max |UU† - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("operator couples the code space to leakage states: max offending element {leakage:e}")]
    Leakage { leakage: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
