use thiserror::Error;

/// Failures reported by the integrators, the scaling algebra and the drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integration blew up at eta = {eta}")]
    IntegrationBlowup { eta: f64 },

    #[error("scaling breakdown: {0}")]
    ScalingBreakdown(String),

    #[error("no two successive boundaries agreed on lambda (sequence: {})", format_lambdas(.lambdas))]
    NoConvergence { lambdas: Vec<(f64, f64)> },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("could not bracket a minimum; scanned {} points", .scanned.len())]
    Bracketing { scanned: Vec<(f64, f64)> },

    #[error("root finding did not converge after {iterations} iterations (last residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
}

fn format_lambdas(lambdas: &[(f64, f64)]) -> String {
    lambdas
        .iter()
        .map(|(eta, lambda)| format!("{eta}:{lambda}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub type Result<T> = std::result::Result<T, Error>;
