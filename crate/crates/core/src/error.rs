//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: expected {expected} values, got {got}")]
    ResolutionMismatch { expected: usize, got: usize },

    #[error("grid dimension must be 2 or 3, got {0}")]
    BadDimension(usize),

    #[error("grid resolution must be even and >= 4, got {0}")]
    BadResolution(usize),

    #[error("mollifier index must be positive, got {0}")]
    BadMollifierIndex(f64),

    #[error("norm exponent q must satisfy q >= 1, got {0}")]
    BadNormExponent(f64),

    #[error("mu-norm exponent must satisfy q > 6, got {0}")]
    MuExponentOutOfRange(f64),

    #[error("window ({s}, {t}) outside the sampled range [{lo}, {hi}]")]
    WindowOutsideLedger { s: f64, t: f64, lo: f64, hi: f64 },

    #[error("window ({s}, {t}) shorter than one sample interval")]
    WindowTooShort { s: f64, t: f64 },

    #[error("degenerate window: E({s}) = E({t}), mean-value factor undefined")]
    DegenerateWindow { s: f64, t: f64 },

    #[error("log-convexity check requires nonzero initial data")]
    ZeroInitialData,

    #[error("blow-up guard tripped at t = {t}: |v|_inf bound {linf:e} exceeds ceiling {ceiling:e}")]
    BlowUp { t: f64, linf: f64, ceiling: f64 },

    #[error("solution lost finiteness at t = {t}")]
    NonFinite { t: f64 },

    #[error("m-limit not converged: relative change {change:e} between m = {m_prev} and m = {m_last} exceeds {tol:e}")]
    MLimitNotConverged {
        m_prev: f64,
        m_last: f64,
        change: f64,
        tol: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("config schema mismatch: expected {expected}, got {got}")]
    SchemaMismatch { expected: String, got: String },

    #[error("oracle cost guard exceeded: {cost:e} > {guard:e} operations")]
    CostGuard { cost: f64, guard: f64 },

    #[error("centered difference undefined at boundary index {index} of {len}")]
    FdBoundary { index: usize, len: usize },

    #[error("taylor-green oracle is 2D only, grid has dimension {0}")]
    OracleDimension(usize),

    #[error("snapshots missing: {0}")]
    SnapshotsMissing(String),

    #[error("no runs found in {0}")]
    NoRuns(String),

    #[error("malformed ledger CSV: {0}")]
    LedgerParse(String),

    #[error("malformed snapshot file: {0}")]
    SnapshotParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
