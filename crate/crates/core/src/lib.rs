//! Heralded generation of approximate GKP qubit states from a spin-J
//! ensemble coupled to squeezed light.
//!
//! The crate covers the full analysis pipeline: Wigner d-matrix amplitudes
//! at the pi/2 rotation used by the preparation circuit ([`spin`]), the
//! conditional, target, and resource wavefunctions as analytic Gaussian
//! combs ([`state`]), spin-measurement outcome statistics and success
//! probabilities ([`measurement`]), embedded-error variance analysis and
//! squeezing conversions ([`metrics`]), and the Faraday-coupling requirement
//! calculator for a physical implementation ([`faraday`]).

pub mod faraday;
pub mod measurement;
pub mod metrics;
pub mod spin;
pub mod state;
pub mod validation;

pub use spin::{DMethod, TotalSpin};
pub use state::{EncodingParams, GaussianComb, Quadrature, QuadratureGrid};
