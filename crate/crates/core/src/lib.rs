//! Steady-state thermodynamics of two quantum harmonic oscillators coupled to two
//! common baths, one static and strongly damping, one weakly coupled through
//! periodically modulated couplings.
//!
//! The crate evaluates period-averaged powers, heat currents, power fluctuations,
//! entropy production and thermodynamic-uncertainty quantifiers at a parameter point,
//! synchronization measures of the two oscillators, adiabatic and diabatic asymptotic
//! coefficients, and deterministic parameter sweeps over all of these.

pub mod asymptotics;
pub mod error;
pub mod observables;
pub mod quadrature;
pub mod response;
pub mod spectral;
pub mod sweep;
pub mod thermal;

pub use asymptotics::{
    adiabatic_coefficients, diabatic_coefficients, tur_certificate, AsymptoticCoeffs, Regime,
};
pub use error::{Error, Result};
pub use observables::{sync_report, thermo_report, SyncReport, ThermoReport};
pub use quadrature::{
    integrate_real_line, integrate_real_line_vec, IntegralResult, QuadratureConfig,
};
pub use response::{MachineParams, ResponseMatrix};
pub use spectral::{SpectralModel, SpectralShape};
pub use sweep::{run_sweep, SweepResult, SweepSpec};
