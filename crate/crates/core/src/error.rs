use thiserror::Error;

/// Errors surfaced by the simulation core.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("qubit dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("state is not a computational basis state")]
    NotBasisState,

    #[error("time {t} outside coefficient domain [{t_min}, {t_max}]")]
    TimeOutOfRange { t: f64, t_min: f64, t_max: f64 },

    #[error("overlap matrix numerically singular at E={energy_kev} keV, b={b} a.u., t={t} a.u.")]
    SingularOverlap { energy_kev: f64, b: f64, t: f64 },

    #[error("ODE step size underflow at t={t}")]
    IntegrationFailure { t: f64 },

    #[error("ansatz growth stalled at E={energy_kev} keV, b={b} a.u., t={t} a.u.: no pool operator reduces L2")]
    ConvergenceFailure { energy_kev: f64, b: f64, t: f64 },

    #[error("quadrature needs at least {min} points, got {got}")]
    QuadratureResolution { min: usize, got: usize },

    #[error("Boys function argument outside guarded domain: Re(z) = {re}")]
    BoysDomain { re: f64 },

    #[error("no overlapping energies between computed and reference tables")]
    EmptyComparison,

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
