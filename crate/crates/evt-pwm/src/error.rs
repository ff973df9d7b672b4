use thiserror::Error;

/// Errors produced by the estimation and asymptotics routines.
#[derive(Debug, Error)]
pub enum EvtError {
    /// An argument lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The sample statistics are inconsistent with the model, so no
    /// parameter value can reproduce them (e.g. the PWM spread ratio is
    /// not in the range of the forward map).
    #[error("non-identifiable: {0}")]
    NonIdentifiable(String),

    /// The fitted extreme value index reached the Γ(1−γ̂) pole.
    #[error("model boundary: gamma_hat = {gamma_hat} >= 1")]
    ModelBoundary { gamma_hat: f64 },

    /// The requested quantile lies outside the extrapolation domain of
    /// the estimator (m·p ≥ 1 for block maxima, p ≥ k/n for POT).
    #[error("extrapolation domain: {0}")]
    ExtrapolationDomain(String),

    /// All selected order statistics equal the threshold.
    #[error("degenerate excesses: all top-k values equal the threshold")]
    DegenerateExcesses,

    /// Not enough data for the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Configuration value violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    /// γ₋ + ρ = 0 pole of the quantile bias (γ ≥ 0 together with ρ = 0).
    #[error("quantile bias pole: gamma_minus + rho = 0")]
    QuantilePole,

    /// Too many Monte Carlo replications failed to produce a fit.
    #[error("excessive replication failures: {failures}/{reps}")]
    ExcessiveFailures { failures: usize, reps: usize },

    /// Malformed CSV input.
    #[error("csv: {0}")]
    Csv(String),

    /// Filesystem failure while reading input or writing output.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl EvtError {
    /// Stable machine-parsable tag for the error kind.
    pub fn kind_tag(&self) -> &'static str {
        match self {
            EvtError::Domain(_) => "domain",
            EvtError::NonIdentifiable(_) => "non_identifiable",
            EvtError::ModelBoundary { .. } => "model_boundary",
            EvtError::ExtrapolationDomain(_) => "extrapolation_domain",
            EvtError::DegenerateExcesses => "degenerate_excesses",
            EvtError::InsufficientData(_) => "insufficient_data",
            EvtError::InvalidParameter(_) => "invalid_parameter",
            EvtError::QuadratureNonConvergence { .. } => "quadrature_non_convergence",
            EvtError::QuantilePole => "quantile_pole",
            EvtError::ExcessiveFailures { .. } => "excessive_failures",
            EvtError::Csv(_) => "csv",
            EvtError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, EvtError>;
