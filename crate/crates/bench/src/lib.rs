//! Shared fixtures for the kernel benchmarks.

use swanson_core::params::solve_forward;
use swanson_core::FactorizationParams;

/// The reference forward parameters `wb = rho = d = 1`.
pub fn reference_params() -> FactorizationParams {
    solve_forward(1.0, 1.0, 1.0).expect("reference parameters are valid")
}
