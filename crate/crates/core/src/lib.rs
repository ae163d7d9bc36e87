//! Generalized Swanson hierarchy: parameter matching, factorized partner
//! Hamiltonians, exact isotonic-oscillator spectra and numerical oracles.

pub mod diffop;
pub mod error;
pub mod jet;
pub mod numeric;
pub mod params;
pub mod potentials;
pub mod specialfn;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use jet::{Jet, Scalar};
pub use params::{DerivedConstants, FactorizationParams, ModelParams};
pub use potentials::{Gauge, PotentialForm, PotentialFormId, Side};
pub use spectrum::{GKPotential, SpectralLine, WavefunctionEval};
pub use verify::{ReportEntry, Status, VerificationReport, VerifySettings};
