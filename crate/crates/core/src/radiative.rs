//! Radiative transport check: opacity, radiative luminosity, the single
//! matching radius where it equals the nuclear luminosity, and numerical
//! estimates of the luminosity–mass–radius exponents.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::energy::{EnergyLaw, EnergyModel};
use crate::error::{ModelError, Result};
use crate::profiles::{ModelParams, SolarCalibration, Structure};

/// Radius at which the scaling exponents are probed and the default opacity
/// constant is anchored.
pub const ANCHOR_X: f64 = 0.3;

const SCAN_LO: f64 = 0.05;
const SCAN_HI: f64 = 0.95;
const SCAN_SAMPLES: usize = 200;
const ROOT_TOL: f64 = 1e-10;

/// `κ = κ₀ ρ^a T^b`; Kramers has `a = 1`, `b = −7/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpacityLaw {
    pub kappa0: f64,
    pub density_exponent: f64,
    pub temperature_exponent: f64,
}

impl OpacityLaw {
    pub fn kramers(kappa0: f64) -> Result<Self> {
        Self::new(kappa0, 1.0, -3.5)
    }

    /// Opacity independent of density and temperature.
    pub fn constant(kappa0: f64) -> Result<Self> {
        Self::new(kappa0, 0.0, 0.0)
    }

    pub fn new(kappa0: f64, density_exponent: f64, temperature_exponent: f64) -> Result<Self> {
        if !(kappa0 > 0.0 && kappa0.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "kappa0 must be positive, got {kappa0}"
            )));
        }
        Ok(Self {
            kappa0,
            density_exponent,
            temperature_exponent,
        })
    }

    pub fn with_kappa0(&self, kappa0: f64) -> Result<Self> {
        Self::new(kappa0, self.density_exponent, self.temperature_exponent)
    }

    pub fn opacity(&self, rho: f64, temperature: f64) -> Result<f64> {
        if temperature <= 0.0 {
            return Err(ModelError::NonpositiveTemperature(temperature));
        }
        Ok(self.kappa0
            * rho.powf(self.density_exponent)
            * temperature.powf(self.temperature_exponent))
    }
}

pub fn kramers_opacity(law: &OpacityLaw, rho: f64, temperature: f64) -> Result<f64> {
    law.opacity(rho, temperature)
}

fn check_open(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(ModelError::OutOfDomain(x))
    }
}

/// Local state needed by the transport equation at one radius.
struct LocalState {
    r: f64,
    rho: f64,
    temperature: f64,
    gradient: f64,
}

fn local_state(s: &Structure, calib: &SolarCalibration, x: f64) -> LocalState {
    let t_scale = calib.temperature_scale();
    LocalState {
        r: x * calib.radius_total,
        rho: calib.mean_density() * s.density_ratio() * s.density_shape(x),
        temperature: t_scale * s.temperature(x),
        gradient: t_scale / calib.radius_total * s.temperature_gradient(x),
    }
}

/// `dT/dr`, K m⁻¹, analytic.
pub fn temperature_gradient(params: &ModelParams, calib: &SolarCalibration, x: f64) -> Result<f64> {
    check_open(x)?;
    let s = Structure::from_params(params)?;
    Ok(local_state(&s, calib, x).gradient)
}

fn radiative_from(
    s: &Structure,
    calib: &SolarCalibration,
    opacity: &OpacityLaw,
    x: f64,
) -> Result<f64> {
    let st = local_state(s, calib, x);
    let kappa = opacity.opacity(st.rho, st.temperature)?;
    let c = &calib.constants;
    Ok(
        -(16.0 * PI * c.radiation * c.light_speed / (3.0 * kappa * st.rho))
            * st.r
            * st.r
            * st.temperature.powi(3)
            * st.gradient,
    )
}

/// `L_rad = −(16π a c / 3κρ) r² T³ dT/dr`, W.
pub fn radiative_luminosity(
    params: &ModelParams,
    calib: &SolarCalibration,
    opacity: &OpacityLaw,
    x: f64,
) -> Result<f64> {
    check_open(x)?;
    let s = Structure::from_params(params)?;
    radiative_from(&s, calib, opacity, x)
}

/// `(d ln L_rad / d ln M, d ln L_rad / d ln R)` at fixed `x`, from two-point
/// log ratios with a factor of 2.
pub fn scaling_exponents(
    params: &ModelParams,
    calib: &SolarCalibration,
    opacity: &OpacityLaw,
) -> Result<(f64, f64)> {
    const LAMBDA: f64 = 2.0;
    let x = ANCHOR_X;
    let base = radiative_luminosity(params, calib, opacity, x)?;
    let heavy = radiative_luminosity(
        params,
        &calib.with_mass(calib.mass_total * LAMBDA)?,
        opacity,
        x,
    )?;
    let large = radiative_luminosity(
        params,
        &calib.with_radius(calib.radius_total * LAMBDA)?,
        opacity,
        x,
    )?;
    Ok((
        (heavy / base).ln() / LAMBDA.ln(),
        (large / base).ln() / LAMBDA.ln(),
    ))
}

/// `κ₀` that makes the radiative and nuclear luminosities equal at `x`.
pub fn solve_kappa0(
    params: &ModelParams,
    law: &EnergyLaw,
    calib: &SolarCalibration,
    template: &OpacityLaw,
    truncation_order: Option<u32>,
    x: f64,
) -> Result<f64> {
    check_open(x)?;
    let unit = template.with_kappa0(1.0)?;
    let l_rad = radiative_luminosity(params, calib, &unit, x)?;
    let l_nuc = EnergyModel::new(params, law, calib, truncation_order)?.luminosity(x);
    if !(l_nuc > 0.0 && l_rad > 0.0) {
        return Err(ModelError::InvalidParameter(format!(
            "cannot anchor kappa0 at x = {x}: L_rad = {l_rad:e} W, L = {l_nuc:e} W (temperature gradient must be negative there)"
        )));
    }
    Ok(l_rad / l_nuc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchPoint {
    pub x: f64,
    pub luminosity: f64,
    pub luminosity_radiative: f64,
    pub bisection_steps: u32,
}

impl MatchPoint {
    pub fn residual(&self) -> f64 {
        (self.luminosity_radiative - self.luminosity).abs()
    }
}

/// The radius on `[0.05, 0.95]` where `L_rad(x) = L(x)`.
///
/// A 200-sample scan locates the first sign change, which is then refined by
/// bisection to a bracket narrower than `1e-10`.
pub fn matching_radius(
    params: &ModelParams,
    law: &EnergyLaw,
    calib: &SolarCalibration,
    opacity: &OpacityLaw,
    truncation_order: Option<u32>,
) -> Result<MatchPoint> {
    let energy = EnergyModel::new(params, law, calib, truncation_order)?;
    let s = energy.structure().clone();
    let diff = |x: f64| -> Result<f64> {
        Ok(radiative_from(&s, calib, opacity, x)? - energy.luminosity(x))
    };

    let step = (SCAN_HI - SCAN_LO) / (SCAN_SAMPLES - 1) as f64;
    let mut lo = SCAN_LO;
    let mut f_lo = diff(lo)?;
    let mut bracket = None;
    for i in 1..SCAN_SAMPLES {
        let hi = SCAN_LO + step * i as f64;
        let f_hi = diff(hi)?;
        if f_lo == 0.0 {
            bracket = Some((lo, lo, f_lo));
            break;
        }
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi, f_lo));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut a, mut b, mut fa) = bracket.ok_or_else(|| {
        ModelError::NoBracket(format!(
            "L_rad − L keeps the sign of {:e} on [{SCAN_LO}, {SCAN_HI}]; \
             the opacity and energy constants are inconsistent",
            f_lo
        ))
    })?;

    let mut steps = 0;
    while b - a > ROOT_TOL {
        let mid = 0.5 * (a + b);
        let fm = diff(mid)?;
        steps += 1;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let x = 0.5 * (a + b);
    Ok(MatchPoint {
        x,
        luminosity: energy.luminosity(x),
        luminosity_radiative: radiative_from(&s, calib, opacity, x)?,
        bisection_steps: steps,
    })
}
