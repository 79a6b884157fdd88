use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants carry the offending magnitude so that callers can tell roundoff
/// from a genuinely invalid input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian: max |M - M^dag| = {defect:e}")]
    NonHermitian { defect: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPsd { eigenvalue: f64 },

    #[error("trace is {re} + {im}i, expected 1")]
    TraceNotOne { re: f64, im: f64 },

    #[error("fidelity {value} exceeds 1 beyond roundoff")]
    FidelityOvershoot { value: f64 },

    #[error("channel is not trace preserving: completeness defect {defect:e} > {tol:e}")]
    InvalidChannel { defect: f64, tol: f64 },

    #[error("Kraus channel needs at least one operator")]
    EmptyChannel,

    #[error("state has weight {weight:e} outside the channel's valid subspace")]
    OutsideValidSubspace { weight: f64 },

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("parameter {name} = {value} out of range ({range})")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("Fock cutoff {n_max} too small: Poisson tail {tail:e} exceeds {bound:e}")]
    CutoffTooSmall { n_max: usize, tail: f64, bound: f64 },

    #[error("initial state invalid: {0}")]
    InvalidInitialState(String),

    #[error("grid too coarse: {points} points, need at least {required}")]
    GridTooCoarse { points: usize, required: usize },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("exponent fit degenerate: {0}")]
    FitDegenerate(String),

    #[error("fidelity-difference denominator F[rho(0), rho(tau)] = {value:e} is degenerate")]
    DegenerateDenominator { value: f64 },

    #[error("closed-form and generic fidelity disagree at t = {t}: {closed} vs {generic}")]
    CrossCheckFailed { t: f64, closed: f64, generic: f64 },
}
