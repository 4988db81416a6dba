//! Analytic solar interior model.
//!
//! Radial profiles of density, mass, pressure, temperature, nuclear energy
//! generation and luminosity for the density family
//! `ρ(r) = ρ_c [1 − (r/R)^δ]^γ`, all expressed through terminating Gauss
//! hypergeometric series, together with a numerical oracle that integrates
//! the raw structure equations and a radiative-transport consistency check.
//!
//! ```
//! use solarmodel::profiles::{ModelParams, SolarCalibration, Structure};
//!
//! let s = Structure::from_params(&ModelParams::default()).unwrap();
//! assert!((s.pressure(0.0) - 63.0 / (80.0 * std::f64::consts::PI)).abs() < 1e-15);
//! let _ = SolarCalibration::solar();
//! ```

pub mod cli;
pub mod energy;
pub mod error;
pub mod hypergeom;
pub mod model;
pub mod oracle;
pub mod profiles;
pub mod radiative;

pub use error::{ModelError, Result};
pub use model::SolarModel;
