//! Bound states of the exponential-cosine-screened Coulomb (ECSC) potential
//!
//! ```text
//! V(r) = -(A/r) exp(-δr) cos(gδr)
//! ```
//!
//! The pure Coulomb part is solved exactly and the screening remainder is
//! treated order by order through corrections to the logarithmic derivative
//! of the wavefunction (the superpotential). Closed forms are provided for the
//! radial quantum numbers n = 0, 1, 2 through second order, together with two
//! independent checks: direct quadrature of the correction integrals and a
//! Numerov shooting solver for the untruncated radial equation.
//!
//! Modules:
//! - [`potential`]: the potential, its δ-series and the truncated perturbation
//! - [`coulomb`]: the unperturbed hydrogenic sector
//! - [`perturbation`]: first and second order energies and superpotentials
//! - [`wavefunction`]: moderating function and full ground-state wavefunction
//! - [`oracle`]: Numerov node-counting eigensolver
//! - [`report`]: reference tables, CSV rows and sweeps used by the CLI

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod coulomb;
mod error;
pub mod oracle;
pub mod perturbation;
pub mod potential;
pub mod quadrature;
pub mod report;
pub mod wavefunction;

pub use coulomb::{CoulombState, QuantumNumbers};
pub use error::{Error, Result};
pub use oracle::{EigenResult, OracleConfig};
pub use perturbation::{CorrectionOrder, EnergyBreakdown};
pub use potential::{PhysicalParams, UnitPreset};
pub use quadrature::QuadratureSpec;
