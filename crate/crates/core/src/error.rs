use thiserror::Error;

/// Errors raised by the hierarchy, solvers and numerical oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ill-posed model: omega_bar = {0} must be positive")]
    IllPosedModel(f64),

    #[error("alpha and beta must differ (alpha = beta = {0})")]
    EqualCouplings(f64),

    #[error("the cubic for d has no positive real root")]
    NoPositiveRoot,

    #[error("infeasible parameters: 4X = {four_x} does not exceed 43 omega_bar = {bound}")]
    Infeasible4X { four_x: f64, bound: f64 },

    #[error("branch violation: c = {0} must satisfy c < 0 and |c| > 1")]
    BranchViolation(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("incompatible parameter mode: {0}")]
    Mode(String),

    #[error("jet order {requested} exceeds the supported maximum {max}")]
    JetOrderExceeded { requested: usize, max: usize },

    #[error("gamma function pole at {0}")]
    PoleAtNonPositiveInteger(f64),

    #[error("pole configuration in unit-argument 2F1 (a = {a}, b = {b}, c = {c})")]
    PoleConfiguration { a: f64, b: f64, c: f64 },

    #[error("singular integrand: {0}")]
    SingularIntegrand(String),

    #[error("numerical procedure did not converge: {0}")]
    NonConvergent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
