//! Energy-conserving finite difference and spectral schemes for the
//! conservative PDE class `u_tx = δG/δu` on a periodic interval.
//!
//! Three fully discrete schemes are provided, all built on the discrete
//! variational derivative of a polynomial density `G(u)` and the implicit
//! midpoint rule in time:
//!
//! * [`SchemeKind::CentralDiff`]: `δ⟨1⟩ₓ δ⁺ₜ u = dG_d`
//! * [`SchemeKind::Spectral`]: `δ_PS δ⁺ₜ u = dG_d`
//! * [`SchemeKind::AverageDiff`]: `δ⁺ₓ δ⁺ₜ u = μ⁺ₓ dG_d`
//!
//! Each conserves `H_d(u) = Σ G(u_k) Δx` exactly (up to the fixed-point
//! tolerance). The [`analysis`] module holds phase speeds, exact solutions of
//! the linear Klein–Gordon equation and error metrics.

pub mod analysis;
mod error;
pub mod grid;
pub mod operators;
pub mod schemes;
pub mod spectral;
pub mod variational;

pub use error::{Error, Result};
pub use grid::{GridFunction, PeriodicGrid};
pub use operators::{central_diff, forward_average, forward_diff, operator_symbol, Operator};
pub use schemes::{
    amplification_factor, run, run_recording, step, MeanModePolicy, SchemeInstance, SchemeKind,
    SolverConfig, StepStats, Trajectory,
};
pub use spectral::{dft, idft, spectral_diff, SpectralVector};
pub use variational::{discrete_energy, discrete_variational_derivative, DiscreteEnergy, HamiltonianDensity};
