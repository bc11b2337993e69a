//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix failed the Hermiticity check |A - A†| <= 1e-12 per entry.
    #[error("matrix is not Hermitian: max |A - A†| entry = {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    /// Matrix failed the unitarity check |U†U - I| <= 1e-10 per entry.
    #[error("matrix is not unitary: max |U†U - I| entry = {max_deviation:.3e}")]
    NotUnitary { max_deviation: f64 },

    /// Density matrix invariant violation (trace, positivity, Hermiticity).
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// Spectral function undefined at an eigenvalue beyond the clamp rule.
    #[error("matrix function undefined at eigenvalue {eigenvalue:.6e}")]
    FunctionDomain { eigenvalue: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("time {t_s:.6e} s outside the protocol window [0, {tau_s:.6e}] s")]
    TimeOutOfRange { t_s: f64, tau_s: f64 },

    /// Drive protocol or solver parameter violates its invariants.
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error(
        "propagator did not converge after {doublings} slice doublings \
         (last delta {last_delta:.3e})"
    )]
    NoConvergence { doublings: u32, last_delta: f64 },

    /// Free energy difference is undefined at infinite temperature.
    #[error("undefined at infinite temperature (beta = 0): {0}")]
    InfiniteTemperature(&'static str),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    /// Initial state is not the Gibbs state required by the work route.
    #[error("initial state deviates from the Gibbs state by {max_deviation:.3e} (limit 1e-8)")]
    NotGibbs { max_deviation: f64 },

    /// Two-point measurement requires an initial state without coherence in
    /// the initial energy eigenbasis.
    #[error(
        "initial state carries coherence {max_off_diagonal:.3e} in the initial \
         energy eigenbasis (limit 1e-8)"
    )]
    InitialCoherence { max_off_diagonal: f64 },

    /// Relative entropy support condition violated: the reference state is
    /// numerically singular where the argument state has weight.
    #[error(
        "relative entropy support violation: reference eigenvalue \
         {sigma_eigenvalue:.3e} is below the clamp floor while the state \
         carries weight {rho_weight:.3e} there"
    )]
    SupportViolation { sigma_eigenvalue: f64, rho_weight: f64 },

    /// A computed thermodynamic record violated one of its invariants.
    #[error("thermodynamic record invariant violated: {0}")]
    RecordInvariant(String),

    /// Sweep configuration problem surfaced at run time.
    #[error("invalid sweep configuration: {0}")]
    Config(String),

    /// Error at a specific sweep grid point.
    #[error("sweep point (nu_f = {nu_f_hz} Hz, tau = {tau_s:.6e} s): {source}")]
    SweepPoint {
        nu_f_hz: f64,
        tau_s: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
