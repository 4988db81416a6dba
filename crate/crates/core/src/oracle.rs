//! Numerical oracle: adaptive quadrature, a fixed-step RK4 integrator, and a
//! verifier that integrates the raw structure equations from the density
//! law alone and compares the result with the closed forms.

use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::energy::{EnergyLaw, EnergyModel};
use crate::error::{ModelError, Result};
use crate::profiles::{ModelParams, SolarCalibration};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(ModelError::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if max_depth == 0 || max_depth > 60 {
            return Err(ModelError::InvalidParameter(format!(
                "max_depth must lie in 1..=60, got {max_depth}"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_depth,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-300,
            rel_tol: 1e-13,
            max_depth: 50,
        }
    }
}

const INITIAL_PANELS: usize = 64;

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    max_depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= (15.0 * tol).max(noise) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= max_depth || m <= a || m >= b {
        return Err(ModelError::MaxDepthExceeded(max_depth));
    }
    let l = adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth)?;
    let r = adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature of `f` over `[lo, hi]`.
///
/// The interval is first cut into 64 equal panels; their composite estimate
/// fixes the relative tolerance, which is then shared among the panels in
/// proportion to their width.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !matches!(lo.partial_cmp(&hi), Some(Ordering::Less | Ordering::Equal)) {
        return Err(ModelError::InvalidParameter(format!(
            "integration bounds out of order: [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let width = (hi - lo) / INITIAL_PANELS as f64;
    let edges: Vec<f64> = (0..=INITIAL_PANELS)
        .map(|i| {
            if i == INITIAL_PANELS {
                hi
            } else {
                lo + width * i as f64
            }
        })
        .collect();
    let f_edges: Vec<f64> = edges.iter().map(|&x| f(x)).collect();
    let panels: Vec<(f64, f64)> = edges
        .windows(2)
        .zip(f_edges.windows(2))
        .map(|(x, _)| {
            let m = 0.5 * (x[0] + x[1]);
            (m, f(m))
        })
        .collect();
    let estimate: f64 = (0..INITIAL_PANELS)
        .map(|i| {
            simpson(
                edges[i],
                edges[i + 1],
                f_edges[i],
                panels[i].1,
                f_edges[i + 1],
            )
        })
        .sum();
    let scale: f64 = (0..INITIAL_PANELS)
        .map(|i| {
            simpson(
                edges[i],
                edges[i + 1],
                f_edges[i].abs(),
                panels[i].1.abs(),
                f_edges[i + 1].abs(),
            )
        })
        .sum::<f64>()
        .max(estimate.abs());
    if !scale.is_finite() {
        return Err(ModelError::NonfiniteState(lo));
    }
    let tol = spec.abs_tol.max(spec.rel_tol * scale) / INITIAL_PANELS as f64;
    let mut total = 0.0;
    for i in 0..INITIAL_PANELS {
        let whole = simpson(
            edges[i],
            edges[i + 1],
            f_edges[i],
            panels[i].1,
            f_edges[i + 1],
        );
        total += adaptive(
            &f,
            edges[i],
            edges[i + 1],
            f_edges[i],
            panels[i].1,
            f_edges[i + 1],
            whole,
            tol,
            0,
            spec.max_depth,
        )?;
    }
    Ok(total)
}

/// Result of [`integrate_ode`]: the fine-step state and a Richardson error
/// estimate `max_i |y_fine − y_coarse| / 15`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSolution<const N: usize> {
    pub state: [f64; N],
    pub error: f64,
}

fn rk4<const N: usize, F>(rhs: &F, x0: f64, x1: f64, y0: [f64; N], steps: usize) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = (x1 - x0) / steps as f64;
    let mut y = y0;
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    for i in 0..steps {
        let x = x0 + h * i as f64;
        let k1 = rhs(x, &y);
        let k2 = rhs(x + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(x + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let xn = if i + 1 == steps { x1 } else { x + h };
        let k4 = rhs(xn, &axpy(&y, &k3, h));
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonfiniteState(xn));
        }
    }
    Ok(y)
}

/// Classical RK4 from `x0` to `x1` with `steps` and `2·steps` equal steps.
pub fn integrate_ode<const N: usize, F>(
    rhs: F,
    x0: f64,
    x1: f64,
    y0: [f64; N],
    steps: usize,
) -> Result<OdeSolution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if steps < 16 {
        return Err(ModelError::InvalidParameter(format!(
            "at least 16 steps required, got {steps}"
        )));
    }
    let coarse = rk4(&rhs, x0, x1, y0, steps)?;
    let fine = rk4(&rhs, x0, x1, y0, 2 * steps)?;
    let error = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (f - c).abs() / 15.0)
        .fold(0.0, f64::max);
    Ok(OdeSolution { state: fine, error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub mass: f64,
    pub pressure: f64,
    pub luminosity: f64,
    pub temperature_gradient: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            mass: 1e-8,
            pressure: 1e-8,
            luminosity: 1e-8,
            temperature_gradient: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// RK4 steps per unit of `x`; every segment gets at least 16.
    pub steps_per_unit: f64,
    pub thresholds: Thresholds,
    /// Multiplies the density seen by the oracle; `1.0` for a genuine check.
    pub density_perturbation: f64,
    pub truncation_order: Option<u32>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            steps_per_unit: 50_000.0,
            thresholds: Thresholds::default(),
            density_perturbation: 1.0,
            truncation_order: None,
        }
    }
}

/// Maximum relative deviation per quantity over the sample points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviations {
    pub mass: f64,
    pub pressure: f64,
    pub luminosity: f64,
    pub temperature_gradient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub params: ModelParams,
    pub samples: usize,
    pub errors: Deviations,
    pub thresholds: Thresholds,
    /// Largest Richardson estimate returned by the integrator.
    pub integrator_error: f64,
    pub pass: bool,
}

fn rel_dev(value: f64, reference: f64) -> f64 {
    if value == reference {
        0.0
    } else {
        (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
    }
}

/// Start of the outward integration; below it `M ≈ (4π/3) ρ_c r³`.
const SERIES_START: f64 = 1e-8;
const SPLIT: f64 = 0.5;

/// Integrate mass and luminosity outward from the centre and pressure inward
/// from the surface, using only the density law and the expanded energy rate,
/// and compare with the closed forms at `grid`.
pub fn verify_model(
    params: &ModelParams,
    law: &EnergyLaw,
    calib: &SolarCalibration,
    grid: &[f64],
    config: &VerifyConfig,
) -> Result<VerificationReport> {
    let mut points: Vec<f64> = grid.to_vec();
    if points.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(ModelError::InvalidParameter(
            "sample points must lie in [0, 1]".into(),
        ));
    }
    points.sort_by(f64::total_cmp);
    points.dedup();

    let energy = EnergyModel::new(params, law, calib, config.truncation_order)?;
    let s = energy.structure();
    let c_ratio = s.density_ratio();
    let f = config.density_perturbation;
    let rho = |x: f64| f * c_ratio * s.density_shape(x);
    let eps = |x: f64| energy.expansion().evaluate_factored(x);
    let steps_for = |len: f64| ((len * config.steps_per_unit).ceil() as usize).max(16);
    let mut integrator_error: f64 = 0.0;

    // Outward: y = [M/M, L / (4πR³ρ_c ε₀ρ_c^n T_c^m), Q] with Q = ∫_0^x (3/4π) M ρ / t².
    let outward = |x: f64, y: &[f64; 3]| -> [f64; 3] {
        let r = rho(x);
        [
            3.0 * x * x * r,
            x * x * (r / c_ratio) * eps(x),
            3.0 / (4.0 * PI) * y[0] * r / (x * x),
        ]
    };
    let mut stops: Vec<f64> = points
        .iter()
        .copied()
        .filter(|&x| x > SERIES_START)
        .collect();
    stops.push(SPLIT);
    stops.push(1.0);
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    // Outward pass in s with x = s^k; non-integer δ leaves fractional powers
    // of x that RK4 cannot resolve near the centre.
    let k = substitution_power(params.delta);
    let outward_s = |sv: f64, y: &[f64; 3]| -> [f64; 3] {
        let x = sv.powi(k);
        let jac = f64::from(k) * sv.powi(k - 1);
        outward(x, y).map(|d| d * jac)
    };
    let x0 = SERIES_START;
    let r0 = f * c_ratio;
    let mut y = [
        r0 * x0.powi(3),
        f * eps(0.0) * x0.powi(3) / 3.0,
        3.0 / (4.0 * PI) * r0 * r0 * x0 * x0 / 2.0,
    ];
    let mut at = x0.powf(1.0 / f64::from(k));
    let mut out_values: Vec<(f64, [f64; 3])> = Vec::with_capacity(stops.len());
    for &stop in &stops {
        let s_stop = stop.powf(1.0 / f64::from(k));
        let sol = integrate_ode(outward_s, at, s_stop, y, steps_for(s_stop - at))?;
        integrator_error = integrator_error.max(sol.error);
        y = sol.state;
        at = s_stop;
        out_values.push((stop, y));
    }
    let lookup = |x: f64| -> [f64; 3] {
        if x <= SERIES_START {
            return [0.0; 3];
        }
        out_values
            .iter()
            .find(|(p, _)| *p == x)
            .map(|(_, v)| *v)
            .expect("stop recorded")
    };
    let mass_total = lookup(1.0)[0];
    let q_split = lookup(SPLIT)[2];

    // Inward on [SPLIT, 1]: y = [mass above x, P / (GM²/R⁴)].
    let inward = |x: f64, y: &[f64; 2]| -> [f64; 2] {
        let r = rho(x);
        [
            -3.0 * x * x * r,
            -3.0 / (4.0 * PI) * (mass_total - y[0]) * r / (x * x),
        ]
    };
    let mut in_stops: Vec<f64> = points.iter().copied().filter(|&x| x >= SPLIT).collect();
    in_stops.push(SPLIT);
    in_stops.sort_by(|a, b| b.total_cmp(a));
    in_stops.dedup();
    let mut yi = [0.0, 0.0];
    let mut at = 1.0;
    let mut in_values: Vec<(f64, f64)> = Vec::new();
    for &stop in &in_stops {
        if stop < at {
            let sol = integrate_ode(inward, at, stop, yi, steps_for(at - stop))?;
            integrator_error = integrator_error.max(sol.error);
            yi = sol.state;
            at = stop;
        }
        in_values.push((stop, yi[1]));
    }
    let p_split = in_values
        .iter()
        .find(|(x, _)| *x == SPLIT)
        .map(|(_, p)| *p)
        .expect("split recorded");
    let pressure_at = |x: f64| -> f64 {
        if x >= SPLIT {
            in_values
                .iter()
                .find(|(p, _)| *p == x)
                .map(|(_, v)| *v)
                .expect("stop recorded")
        } else {
            p_split + q_split - lookup(x)[2]
        }
    };

    let mut errs = Deviations {
        mass: 0.0,
        pressure: 0.0,
        luminosity: 0.0,
        temperature_gradient: 0.0,
    };
    let lum_scale = energy.luminosity_scale();
    for &x in &points {
        let out = lookup(x);
        let p_oracle = pressure_at(x);
        errs.mass = errs.mass.max(rel_dev(out[0], s.mass(x)));
        errs.pressure = errs.pressure.max(rel_dev(p_oracle, s.pressure(x)));
        errs.luminosity = errs
            .luminosity
            .max(rel_dev(out[1] * lum_scale, energy.luminosity(x)));
        if x > 0.0 && x < 1.0 {
            let r = rho(x);
            let t_oracle = 4.0 * PI / 3.0 * p_oracle / r;
            let gravity = out[0] / (x * x);
            let dlnrho = log_density_slope(&rho, x);
            let oracle_grad = -gravity - t_oracle * dlnrho;
            let conditioning = gravity.abs() + (t_oracle * dlnrho).abs();
            let dev = (oracle_grad - s.temperature_gradient(x)).abs() / conditioning;
            errs.temperature_gradient = errs.temperature_gradient.max(dev);
        }
    }

    let t = config.thresholds;
    let pass = errs.mass < t.mass
        && errs.pressure < t.pressure
        && errs.luminosity < t.luminosity
        && errs.temperature_gradient < t.temperature_gradient;
    Ok(VerificationReport {
        params: *params,
        samples: points.len(),
        errors: errs,
        thresholds: t,
        integrator_error,
        pass,
    })
}

fn substitution_power(delta: f64) -> i32 {
    if delta.fract() == 0.0 {
        1
    } else {
        (4.0 / delta).ceil().max(2.0) as i32
    }
}

/// `d ln ρ / dx` from a five-point centred difference.
fn log_density_slope<F: Fn(f64) -> f64>(rho: &F, x: f64) -> f64 {
    let h = 1e-3 * x.min(1.0 - x);
    let d =
        (rho(x - 2.0 * h) - 8.0 * rho(x - h) + 8.0 * rho(x + h) - rho(x + 2.0 * h)) / (12.0 * h);
    d / rho(x)
}

/// Convenience wrapper with the solved `ε₀` for the given parameters.
pub fn verify_default(
    params: &ModelParams,
    calib: &SolarCalibration,
    samples: usize,
) -> Result<VerificationReport> {
    let eps0 = crate::energy::solve_eps0(params, calib, None)?;
    let law = EnergyLaw::from_params(params, eps0)?;
    let grid = crate::profiles::uniform_grid(samples)?;
    verify_model(params, &law, calib, &grid, &VerifyConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_examples() {
        let spec = QuadratureSpec::new(1e-15, 1e-13, 50).unwrap();
        let v = integrate_adaptive(|x| x * x, 0.0, 1.0, &spec).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        let v = integrate_adaptive(|x| 3.0 * x * x * (1.0 - x.powi(3)).powi(2), 0.0, 1.0, &spec)
            .unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        let v = integrate_adaptive(
            |t| t * (1.0 - t.powi(3) / 2.0) * (1.0 - t.powi(3)),
            0.0,
            1.0,
            &spec,
        )
        .unwrap();
        assert!((v - 0.2625).abs() < 1e-12);
        assert_eq!(integrate_adaptive(|x| x, 0.3, 0.3, &spec).unwrap(), 0.0);
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, &spec).is_err());
    }

    #[test]
    fn quadrature_spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 61).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
    }

    #[test]
    fn quadrature_depth_limit() {
        let spec = QuadratureSpec::new(1e-300, 1e-15, 3).unwrap();
        let r = integrate_adaptive(
            |x: f64| x.sqrt().sin() / x.sqrt().max(1e-300),
            0.0,
            1.0,
            &spec,
        );
        assert_eq!(r, Err(ModelError::MaxDepthExceeded(3)));
    }

    #[test]
    fn ode_exponential() {
        let sol = integrate_ode(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], 1024).unwrap();
        assert!((sol.state[0] - std::f64::consts::E).abs() < 1e-8);
        assert!(sol.error < 1e-12);
        assert!(integrate_ode(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], 8).is_err());
    }

    #[test]
    fn ode_fourth_order() {
        let e = std::f64::consts::E;
        let err = |n| {
            (integrate_ode(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], n)
                .unwrap()
                .state[0]
                - e)
                .abs()
        };
        let ratio = err(32) / err(64);
        assert!((ratio - 16.0).abs() < 0.5, "{ratio}");
    }

    #[test]
    fn ode_nonfinite_aborts() {
        let r = integrate_ode(|x, _: &[f64; 1]| [1.0 / (x - 0.5)], 0.0, 1.0, [0.0], 16);
        assert!(matches!(r, Err(ModelError::NonfiniteState(_))));
    }

    #[test]
    fn ode_mass_integral() {
        // dM/dx = 3 (ρ_c/ρ̄) x² (1 − x³) with ρ_c/ρ̄ = 2
        let sol = integrate_ode(
            |x, _: &[f64; 1]| [6.0 * x * x * (1.0 - x.powi(3))],
            0.0,
            1.0,
            [0.0],
            256,
        )
        .unwrap();
        assert!((sol.state[0] - 1.0).abs() < 1e-10);
    }
}
