//! Nuclear energy generation `ε = ε₀ ρⁿ Tᵐ` and the luminosity profile.
//!
//! `ε` is available two ways: pointwise from the exact density and
//! temperature profiles, and as a finite sum of powers of `x` obtained by
//! expanding `(1 − u)^(−γ(m−n))` to a chosen order and the temperature
//! bracket to its m-th power. The luminosity integrates the second form term
//! by term, each term giving one terminating hypergeometric function.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ModelError, Result};
use crate::hypergeom::PolynomialU;
use crate::profiles::{check_x, ModelParams, SolarCalibration, Structure};

/// Power-law energy generation rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLaw {
    /// Rate constant in SI: W kg⁻¹ (kg m⁻³)⁻ⁿ K⁻ᵐ.
    pub eps0: f64,
    pub n_exp: u32,
    pub m_exp: u32,
}

impl EnergyLaw {
    pub fn new(eps0: f64, n_exp: u32, m_exp: u32) -> Result<Self> {
        if !(eps0 > 0.0 && eps0.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "eps0 must be positive, got {eps0}"
            )));
        }
        if m_exp == 0 {
            return Err(ModelError::InvalidParameter(
                "temperature exponent m must be >= 1".into(),
            ));
        }
        Ok(Self { eps0, n_exp, m_exp })
    }

    /// Law with the exponents carried by `params`.
    pub fn from_params(params: &ModelParams, eps0: f64) -> Result<Self> {
        Self::new(eps0, params.n_exp, params.m_exp)
    }

    pub fn default_truncation(&self, gamma: u32) -> Result<u32> {
        if self.m_exp < self.n_exp {
            return Err(ModelError::InvalidParameter(format!(
                "m = {} < n = {}: the (1 − u) power series would have a positive exponent",
                self.m_exp, self.n_exp
            )));
        }
        Ok(gamma * (self.m_exp - self.n_exp))
    }
}

mod multiprecision;

const VIEW_PRECISION: u32 = 128;

/// Normalisation of the temperature bracket; equals its value at the centre.
pub fn eta_gamma(params: &ModelParams) -> f64 {
    multiprecision::eta(params.delta, params.gamma, VIEW_PRECISION).to_f64()
}

/// Coefficients `a_k` of the temperature bracket polynomial
/// `A(u) = Σ_{m₁,m₂} (−γ)_{m₁}(−γ)_{m₂} / (m₁! m₂!) · u^(m₁+m₂) / ((3/δ+m₁)(2/δ+m₁+m₂))`,
/// so that `T/T_c = (η − x² A(u)) / (η (1 − u)^γ)`.
pub fn energy_coefficients(params: &ModelParams) -> PolynomialU {
    to_polynomial(&multiprecision::bracket(
        params.delta,
        params.gamma,
        VIEW_PRECISION,
    ))
}

fn to_polynomial(coeffs: &[rug::Float]) -> PolynomialU {
    PolynomialU::new(coeffs.iter().map(rug::Float::to_f64).collect()).expect("finite coefficients")
}

/// One term `coefficient · x^exponent` of the expanded energy rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionTerm {
    pub coefficient: f64,
    pub exponent: f64,
}

/// Polynomial form of `ε / (ε₀ ρ_c^n T_c^m)`.
///
/// The double-precision coefficients are correctly rounded from an MPFR
/// construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyExpansion {
    pub a_coeffs: PolynomialU,
    pub eta: f64,
    pub truncation_order: u32,
    pub terms: Vec<ExpansionTerm>,
    /// Truncated series of `(1 − u)^(−γ(m−n))`.
    pub series: PolynomialU,
    pub delta: f64,
    pub m_exp: u32,
}

impl EnergyExpansion {
    pub fn build(delta: f64, gamma: u32, law: &EnergyLaw, truncation_order: u32) -> Result<Self> {
        Ok(Self::build_with_luminosity(delta, gamma, law, truncation_order)?.0)
    }

    fn build_with_luminosity(
        delta: f64,
        gamma: u32,
        law: &EnergyLaw,
        truncation_order: u32,
    ) -> Result<(Self, multiprecision::LuminosityPolynomial)> {
        law.default_truncation(gamma)?;
        let (exp, lum) =
            multiprecision::build(delta, gamma, law.n_exp, law.m_exp, truncation_order);
        let terms = exp
            .terms
            .iter()
            .map(|(j, q, c)| ExpansionTerm {
                coefficient: c.to_f64(),
                exponent: delta * f64::from(*j) + 2.0 * f64::from(*q),
            })
            .collect();
        let expansion = Self {
            a_coeffs: to_polynomial(&exp.bracket),
            eta: exp.eta.to_f64(),
            truncation_order,
            terms,
            series: to_polynomial(&exp.series),
            delta,
            m_exp: law.m_exp,
        };
        Ok((expansion, lum))
    }

    /// `Σ c_i x^(e_i)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * x.powf(t.exponent))
            .sum()
    }

    /// The same function as [`evaluate`](Self::evaluate), computed from the
    /// factors `S(u) (1 − x² A(u)/η)^m` without expanding them.
    pub fn evaluate_factored(&self, x: f64) -> f64 {
        let u = x.powf(self.delta);
        let bracket = 1.0 - x * x * self.a_coeffs.eval(u) / self.eta;
        self.series.eval(u) * bracket.powi(self.m_exp as i32)
    }
}

/// The energy-generation side of a model: exact and expanded rates plus the
/// closed-form luminosity built from the expansion.
#[derive(Debug, Clone)]
pub struct EnergyModel {
    structure: Structure,
    law: EnergyLaw,
    expansion: EnergyExpansion,
    luminosity_polynomial: multiprecision::LuminosityPolynomial,
    /// `ε₀ ρ_c^n T_c^m`.
    rate_scale: f64,
    /// `4π R³ ε₀ ρ_c^(n+1) T_c^m`.
    luminosity_scale: f64,
    rho_c: f64,
    temperature_scale: f64,
}

impl EnergyModel {
    pub fn new(
        params: &ModelParams,
        law: &EnergyLaw,
        calib: &SolarCalibration,
        truncation_order: Option<u32>,
    ) -> Result<Self> {
        let structure = Structure::from_params(params)?;
        let order = match truncation_order {
            Some(t) => t,
            None => law.default_truncation(params.gamma)?,
        };
        let (expansion, luminosity_polynomial) =
            EnergyExpansion::build_with_luminosity(params.delta, params.gamma, law, order)?;
        let rho_c = calib.mean_density() * structure.density_ratio();
        let temperature_scale = calib.temperature_scale();
        let t_c = temperature_scale * structure.temperature(0.0);
        let rate_scale = law.eps0 * rho_c.powi(law.n_exp as i32) * t_c.powi(law.m_exp as i32);
        let luminosity_scale = 4.0 * PI * calib.radius_total.powi(3) * rho_c * rate_scale;
        Ok(Self {
            structure,
            law: *law,
            expansion,
            luminosity_polynomial,
            rate_scale,
            luminosity_scale,
            rho_c,
            temperature_scale,
        })
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn law(&self) -> &EnergyLaw {
        &self.law
    }

    pub fn expansion(&self) -> &EnergyExpansion {
        &self.expansion
    }

    /// `ε₀ ρ_c^n T_c^m`, W kg⁻¹.
    pub fn rate_scale(&self) -> f64 {
        self.rate_scale
    }

    /// `4π R³ ε₀ ρ_c^(n+1) T_c^m`, W.
    pub fn luminosity_scale(&self) -> f64 {
        self.luminosity_scale
    }

    /// `ε₀ ρ(x)^n T(x)^m` from the exact profiles, W kg⁻¹.
    pub fn rate_pointwise(&self, x: f64) -> f64 {
        let rho = self.rho_c * self.structure.density_shape(x);
        let t = self.temperature_scale * self.structure.temperature(x);
        self.law.eps0 * rho.powi(self.law.n_exp as i32) * t.powi(self.law.m_exp as i32)
    }

    /// Expanded rate, W kg⁻¹.
    pub fn rate_polynomial(&self, x: f64) -> f64 {
        self.rate_scale * self.expansion.evaluate_factored(x)
    }

    /// `L(x)`, W, from the term-by-term closed-form integrals.
    pub fn luminosity(&self, x: f64) -> f64 {
        self.luminosity_scale * self.luminosity_polynomial.eval(x)
    }

    /// MPFR bits used for the luminosity sums.
    pub fn working_precision(&self) -> u32 {
        self.luminosity_polynomial.precision()
    }

    /// `L(1)` via the unit-argument products.
    pub fn total_luminosity(&self) -> f64 {
        self.luminosity_scale * self.luminosity_polynomial.total()
    }
}

pub fn energy_rate_pointwise(
    params: &ModelParams,
    law: &EnergyLaw,
    calib: &SolarCalibration,
    x: f64,
) -> Result<f64> {
    check_x(x)?;
    Ok(EnergyModel::new(params, law, calib, Some(0))?.rate_pointwise(x))
}

/// Dimensionless expansion; `None` selects the order `γ(m − n)`.
pub fn energy_rate_polynomial(
    params: &ModelParams,
    law: &EnergyLaw,
    truncation_order: Option<u32>,
) -> Result<EnergyExpansion> {
    let order = match truncation_order {
        Some(t) => t,
        None => law.default_truncation(params.gamma)?,
    };
    EnergyExpansion::build(params.delta, params.gamma, law, order)
}

pub fn luminosity(
    params: &ModelParams,
    law: &EnergyLaw,
    calib: &SolarCalibration,
    x: f64,
    truncation_order: Option<u32>,
) -> Result<f64> {
    check_x(x)?;
    Ok(EnergyModel::new(params, law, calib, truncation_order)?.luminosity(x))
}

pub fn total_luminosity(
    params: &ModelParams,
    law: &EnergyLaw,
    calib: &SolarCalibration,
    truncation_order: Option<u32>,
) -> Result<f64> {
    Ok(EnergyModel::new(params, law, calib, truncation_order)?.total_luminosity())
}

/// `ε₀` for which the total luminosity equals the calibration target.
pub fn solve_eps0(
    params: &ModelParams,
    calib: &SolarCalibration,
    truncation_order: Option<u32>,
) -> Result<f64> {
    let unit = EnergyLaw::from_params(params, 1.0)?;
    let l = total_luminosity(params, &unit, calib, truncation_order)?;
    if !(l > 0.0 && l.is_finite()) {
        return Err(ModelError::InvalidParameter(format!(
            "total luminosity per unit eps0 is {l}; cannot normalise"
        )));
    }
    Ok(calib.luminosity_target / l)
}
