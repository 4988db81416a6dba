//! A fully specified model: shape, calibration, energy law and opacity.

use serde::Serialize;

use crate::energy::{EnergyLaw, EnergyModel};
use crate::error::Result;
use crate::profiles::{uniform_grid, ModelParams, SolarCalibration};
use crate::radiative::{radiative_luminosity, OpacityLaw};

#[derive(Debug, Clone)]
pub struct SolarModel {
    pub params: ModelParams,
    pub calibration: SolarCalibration,
    pub opacity: OpacityLaw,
    energy: EnergyModel,
}

/// One row of a radial profile. `kappa` and `luminosity_radiative` are absent
/// where the temperature vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub x: f64,
    pub rho: f64,
    pub mass: f64,
    pub pressure: f64,
    pub temperature: f64,
    pub epsilon: f64,
    pub luminosity: f64,
    pub kappa: Option<f64>,
    pub luminosity_radiative: Option<f64>,
}

/// Full radial profile on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StellarProfile {
    pub rows: Vec<ProfileRow>,
}

impl SolarModel {
    pub fn new(
        params: ModelParams,
        calibration: SolarCalibration,
        law: EnergyLaw,
        opacity: OpacityLaw,
        truncation_order: Option<u32>,
    ) -> Result<Self> {
        let energy = EnergyModel::new(&params, &law, &calibration, truncation_order)?;
        Ok(Self {
            params,
            calibration,
            opacity,
            energy,
        })
    }

    pub fn energy(&self) -> &EnergyModel {
        &self.energy
    }

    pub fn law(&self) -> &EnergyLaw {
        self.energy.law()
    }

    pub fn truncation_order(&self) -> u32 {
        self.energy.expansion().truncation_order
    }

    pub fn central_density(&self) -> f64 {
        self.calibration.mean_density() * self.energy.structure().density_ratio()
    }

    pub fn central_pressure(&self) -> f64 {
        self.calibration.pressure_scale() * self.energy.structure().pressure(0.0)
    }

    pub fn central_temperature(&self) -> f64 {
        self.calibration.temperature_scale() * self.energy.structure().temperature(0.0)
    }

    pub fn total_luminosity(&self) -> f64 {
        self.energy.total_luminosity()
    }

    pub fn row(&self, x: f64) -> Result<ProfileRow> {
        let s = self.energy.structure();
        let cal = &self.calibration;
        let rho = self.central_density() * s.density_shape(x);
        let temperature = cal.temperature_scale() * s.temperature(x);
        let (kappa, luminosity_radiative) = if temperature > 0.0 {
            let kappa = self.opacity.opacity(rho, temperature)?;
            let l_rad = if x > 0.0 && x < 1.0 {
                radiative_luminosity(&self.params, cal, &self.opacity, x)?
            } else {
                0.0
            };
            (Some(kappa), Some(l_rad))
        } else {
            (None, None)
        };
        Ok(ProfileRow {
            x,
            rho,
            mass: cal.mass_total * s.mass(x),
            pressure: cal.pressure_scale() * s.pressure(x),
            temperature,
            epsilon: self.energy.rate_pointwise(x),
            luminosity: self.energy.luminosity(x),
            kappa,
            luminosity_radiative,
        })
    }

    pub fn profile(&self, grid_size: usize) -> Result<StellarProfile> {
        let rows = uniform_grid(grid_size)?
            .into_iter()
            .map(|x| self.row(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(StellarProfile { rows })
    }
}
