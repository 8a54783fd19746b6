use thiserror::Error;

/// Errors produced by construction, bound evaluation and integration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian within {tol:e} (max deviation {deviation:e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("state is not normalized: ‖ψ‖² = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("density matrix has eigenvalue {eigenvalue:e} below the positivity tolerance")]
    NotPositive { eigenvalue: f64 },

    #[error("invalid spin quantum number l = {l}: 2l must be a nonnegative integer")]
    InvalidSpin { l: f64 },

    #[error("invalid Dicke labels (l, m) = ({l}, {m}): need |m| ≤ l with l − m integer")]
    InvalidDicke { l: f64, m: f64 },

    #[error("parameter {name} = {value} outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("Fock level n = {n} does not fit in a dim-{dim} truncation")]
    FockOverflow { n: usize, dim: usize },

    #[error("truncation leak: guarded top levels carry population {population:e}")]
    TruncationLeak { population: f64 },

    #[error("control input u[{index}] = {value} exceeds the bound {bound}")]
    ControlBoundViolated {
        index: usize,
        value: f64,
        bound: f64,
    },

    #[error("expected {expected} control inputs, got {actual}")]
    ControlCountMismatch { expected: usize, actual: usize },

    #[error("step instability at t = {t}: {message}")]
    StepInstability { t: f64, message: String },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
