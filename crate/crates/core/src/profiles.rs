//! Density, mass, pressure and temperature profiles of the density family
//! `ρ(x) = ρ_c (1 − x^δ)^γ`.
//!
//! Internally every quantity is dimensionless: mass in units of the total
//! mass, density in units of the mean density `3M/(4πR³)`, pressure in units
//! of `GM²/R⁴` and temperature in units of `μ M_u G M / (k_B N_A R)`. The SI
//! wrappers multiply by those scales on the way out.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ModelError, Result};
use crate::hypergeom::{check_gamma, pochhammer, RadialKernel};

/// Physical constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Gravitational constant, m³ kg⁻¹ s⁻².
    pub gravitational: f64,
    /// Boltzmann constant, J K⁻¹.
    pub boltzmann: f64,
    /// Avogadro constant, mol⁻¹.
    pub avogadro: f64,
    /// Radiation density constant, J m⁻³ K⁻⁴.
    pub radiation: f64,
    /// Speed of light, m s⁻¹.
    pub light_speed: f64,
    /// Molar mass constant, kg mol⁻¹. Converts `k_B N_A` into a gas constant
    /// per kilogram so that `P = (k_B N_A / μ M_u) ρ T` holds in SI.
    pub molar_mass_unit: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            gravitational: 6.67430e-11,
            boltzmann: 1.380649e-23,
            avogadro: 6.02214076e23,
            radiation: 7.565733e-16,
            light_speed: 2.99792458e8,
            molar_mass_unit: 1e-3,
        }
    }
}

impl PhysicalConstants {
    fn validate(&self) -> Result<()> {
        let all = [
            self.gravitational,
            self.boltzmann,
            self.avogadro,
            self.radiation,
            self.light_speed,
            self.molar_mass_unit,
        ];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(ModelError::InvalidParameter(
                "physical constants must be positive and finite".into(),
            ))
        }
    }

    /// Gas constant per unit mass for unit mean molecular weight, J kg⁻¹ K⁻¹.
    pub fn gas_constant(&self) -> f64 {
        self.boltzmann * self.avogadro / self.molar_mass_unit
    }
}

pub const SOLAR_MASS: f64 = 1.98892e30;
pub const SOLAR_RADIUS: f64 = 6.9598e8;
pub const SOLAR_LUMINOSITY: f64 = 3.8418e26;

/// Shape parameters of the density family plus the energy-law exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta: f64,
    pub gamma: u32,
    pub n_exp: u32,
    pub m_exp: u32,
}

impl ModelParams {
    pub fn new(delta: f64, gamma: u32, n_exp: u32, m_exp: u32) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "delta must be > 0, got {delta}"
            )));
        }
        check_gamma(gamma)?;
        if m_exp == 0 {
            return Err(ModelError::InvalidParameter(
                "temperature exponent m must be >= 1".into(),
            ));
        }
        Ok(Self {
            delta,
            gamma,
            n_exp,
            m_exp,
        })
    }

    /// Shape only, with the default energy exponents n = 1, m = 4.
    pub fn shape(delta: f64, gamma: u32) -> Result<Self> {
        Self::new(delta, gamma, 1, 4)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            delta: 3.0,
            gamma: 1,
            n_exp: 1,
            m_exp: 4,
        }
    }
}

/// `μ = 1 / (2X + ¾Y + ½Z)` for a fully ionised mixture.
pub fn mean_molecular_weight(x: f64, y: f64, z: f64) -> Result<f64> {
    for (name, v) in [("X", x), ("Y", y), ("Z", z)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(ModelError::InvalidParameter(format!(
                "mass fraction {name} = {v} outside [0, 1]"
            )));
        }
    }
    if ((x + y + z) - 1.0).abs() > 1e-12 {
        return Err(ModelError::InvalidParameter(format!(
            "mass fractions sum to {}, expected 1",
            x + y + z
        )));
    }
    Ok(1.0 / (2.0 * x + 0.75 * y + 0.5 * z))
}

/// Global mass, radius and composition of the star.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolarCalibration {
    pub mass_total: f64,
    pub radius_total: f64,
    pub luminosity_target: f64,
    #[serde(rename = "X")]
    pub hydrogen: f64,
    #[serde(rename = "Y")]
    pub helium: f64,
    #[serde(rename = "Z")]
    pub metals: f64,
    pub mu: f64,
    pub constants: PhysicalConstants,
}

impl SolarCalibration {
    pub fn new(
        mass_total: f64,
        radius_total: f64,
        luminosity_target: f64,
        composition: (f64, f64, f64),
        constants: PhysicalConstants,
    ) -> Result<Self> {
        for (name, v) in [
            ("mass", mass_total),
            ("radius", radius_total),
            ("luminosity", luminosity_target),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        constants.validate()?;
        let (x, y, z) = composition;
        let mu = mean_molecular_weight(x, y, z)?;
        Ok(Self {
            mass_total,
            radius_total,
            luminosity_target,
            hydrogen: x,
            helium: y,
            metals: z,
            mu,
            constants,
        })
    }

    pub fn solar() -> Self {
        Self::new(
            SOLAR_MASS,
            SOLAR_RADIUS,
            SOLAR_LUMINOSITY,
            (0.7, 0.28, 0.02),
            PhysicalConstants::default(),
        )
        .expect("default calibration is valid")
    }

    pub fn with_mass(&self, mass_total: f64) -> Result<Self> {
        Self::new(
            mass_total,
            self.radius_total,
            self.luminosity_target,
            (self.hydrogen, self.helium, self.metals),
            self.constants,
        )
    }

    pub fn with_radius(&self, radius_total: f64) -> Result<Self> {
        Self::new(
            self.mass_total,
            radius_total,
            self.luminosity_target,
            (self.hydrogen, self.helium, self.metals),
            self.constants,
        )
    }

    /// `3M / (4πR³)`.
    pub fn mean_density(&self) -> f64 {
        3.0 * self.mass_total / (4.0 * PI * self.radius_total.powi(3))
    }

    /// `GM² / R⁴`.
    pub fn pressure_scale(&self) -> f64 {
        self.constants.gravitational * self.mass_total * self.mass_total / self.radius_total.powi(4)
    }

    /// `μ G M / (ℛ R)` with `ℛ` the gas constant per kilogram.
    pub fn temperature_scale(&self) -> f64 {
        self.mu * self.constants.gravitational * self.mass_total
            / (self.constants.gas_constant() * self.radius_total)
    }
}

impl Default for SolarCalibration {
    fn default() -> Self {
        Self::solar()
    }
}

pub(crate) fn check_x(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(ModelError::OutOfDomain(x))
    }
}

/// `ρ_c / ρ̄ = (1/γ!) ∏_{i=1}^{γ} (3/δ + i)`.
pub fn central_density_ratio(delta: f64, gamma: u32) -> f64 {
    let b = 3.0 / delta;
    (1..=gamma).fold(1.0, |acc, i| {
        let fi = f64::from(i);
        acc * (b + fi) / fi
    })
}

/// Dimensionless structure of one member of the density family.
///
/// Holds the precomputed kernels so a profile grid does not rebuild them for
/// every point.
#[derive(Debug, Clone)]
pub struct Structure {
    delta: f64,
    gamma: u32,
    density_ratio: f64,
    mass_kernel: RadialKernel,
    /// `(c_k, ∫ t^(kδ+1) (1 − t^δ)^γ)` for `k = 0..=γ`, where
    /// `m(t) = ρ_c/ρ̄ · t³ Σ c_k t^(kδ)`.
    pressure_terms: Vec<(f64, RadialKernel)>,
}

impl Structure {
    pub fn new(delta: f64, gamma: u32) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "delta must be > 0, got {delta}"
            )));
        }
        check_gamma(gamma)?;
        let b = 3.0 / delta;
        let g = -f64::from(gamma);
        let pressure_terms = (0..=gamma)
            .map(|k| {
                let kf = f64::from(k);
                let c = pochhammer(g, k) / pochhammer(1.0, k) * b / (b + kf);
                RadialKernel::new(kf * delta + 2.0, delta, gamma).map(|kern| (c, kern))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            delta,
            gamma,
            density_ratio: central_density_ratio(delta, gamma),
            mass_kernel: RadialKernel::new(3.0, delta, gamma)?,
            pressure_terms,
        })
    }

    pub fn from_params(params: &ModelParams) -> Result<Self> {
        Self::new(params.delta, params.gamma)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    /// `ρ_c / ρ̄`.
    pub fn density_ratio(&self) -> f64 {
        self.density_ratio
    }

    /// `(1 − x^δ)^γ = ρ/ρ_c`.
    pub fn density_shape(&self, x: f64) -> f64 {
        (1.0 - x.powf(self.delta)).powi(self.gamma as i32)
    }

    /// `M(x) / M`.
    pub fn mass(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return 3.0 * self.density_ratio * self.mass_kernel.total();
        }
        3.0 * self.density_ratio * self.mass_kernel.lower(x)
    }

    /// `P(x) / (GM²/R⁴)`.
    pub fn pressure(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return 0.0;
        }
        let sum: f64 = self
            .pressure_terms
            .iter()
            .map(|(c, kern)| c * kern.upper(x))
            .sum();
        3.0 / (4.0 * PI) * self.density_ratio * self.density_ratio * sum
    }

    /// `T(x)` in units of `μ M_u G M / (k_B N_A R)`.
    pub fn temperature(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return 0.0;
        }
        let sum: f64 = self
            .pressure_terms
            .iter()
            .map(|(c, kern)| c * kern.upper_over_density(x))
            .sum();
        (self.density_ratio * sum).max(0.0)
    }

    /// `dT/dx` in the same temperature units, from `dP/dx` of hydrostatic
    /// equilibrium and the analytic density derivative.
    pub fn temperature_gradient(&self, x: f64) -> f64 {
        let u = x.powf(self.delta);
        let w = 1.0 - u;
        let gravity = self.mass(x) / (x * x);
        let dlnrho = f64::from(self.gamma) * self.delta * x.powf(self.delta - 1.0) / w;
        -gravity + self.temperature(x) * dlnrho
    }
}

fn structure(params: &ModelParams) -> Result<Structure> {
    Structure::from_params(params)
}

pub fn central_density(params: &ModelParams, calib: &SolarCalibration) -> Result<f64> {
    Ok(calib.mean_density() * structure(params)?.density_ratio())
}

pub fn density(params: &ModelParams, calib: &SolarCalibration, x: f64) -> Result<f64> {
    check_x(x)?;
    let s = structure(params)?;
    Ok(calib.mean_density() * s.density_ratio() * s.density_shape(x))
}

pub fn mass(params: &ModelParams, calib: &SolarCalibration, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(calib.mass_total * structure(params)?.mass(x))
}

pub fn pressure(params: &ModelParams, calib: &SolarCalibration, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(calib.pressure_scale() * structure(params)?.pressure(x))
}

pub fn central_pressure(params: &ModelParams, calib: &SolarCalibration) -> Result<f64> {
    pressure(params, calib, 0.0)
}

pub fn temperature(params: &ModelParams, calib: &SolarCalibration, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(calib.temperature_scale() * structure(params)?.temperature(x))
}

pub fn central_temperature(params: &ModelParams, calib: &SolarCalibration) -> Result<f64> {
    temperature(params, calib, 0.0)
}

/// `P_r / P_g = (a T⁴ / 3) / P`; zero at the surface.
pub fn radiation_pressure_ratio(
    params: &ModelParams,
    calib: &SolarCalibration,
    x: f64,
) -> Result<f64> {
    check_x(x)?;
    if x >= 1.0 {
        return Ok(0.0);
    }
    let t = temperature(params, calib, x)?;
    let p = pressure(params, calib, x)?;
    if p <= 0.0 {
        return Ok(0.0);
    }
    Ok(calib.constants.radiation * t.powi(4) / 3.0 / p)
}

/// Uniform grid of `n` points spanning `[0, 1]`, endpoints exact.
pub fn uniform_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(ModelError::InvalidParameter(format!(
            "grid needs at least 2 points, got {n}"
        )));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| i as f64 / last).collect())
}

/// Structure columns of a radial profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureProfile {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub mass: Vec<f64>,
    pub pressure: Vec<f64>,
    pub temperature: Vec<f64>,
}

pub fn build_profile(
    params: &ModelParams,
    calib: &SolarCalibration,
    grid_size: usize,
) -> Result<StructureProfile> {
    let grid = uniform_grid(grid_size)?;
    let s = structure(params)?;
    let rho_c = calib.mean_density() * s.density_ratio();
    Ok(StructureProfile {
        rho: grid.iter().map(|&x| rho_c * s.density_shape(x)).collect(),
        mass: grid.iter().map(|&x| calib.mass_total * s.mass(x)).collect(),
        pressure: grid
            .iter()
            .map(|&x| calib.pressure_scale() * s.pressure(x))
            .collect(),
        temperature: grid
            .iter()
            .map(|&x| calib.temperature_scale() * s.temperature(x))
            .collect(),
        x: grid,
    })
}
