//! Terminating Gauss hypergeometric series and the polynomial algebra built on it.
//!
//! Every closed form in the model reduces to sums of
//! `₂F₁(−γ, b; b+1; u)` with `γ` a positive integer and `u = x^δ`, i.e. to
//! incomplete integrals of the density kernel `t^(p−1) (1 − t^δ)^γ`. Those
//! integrals are packaged in [`RadialKernel`].

use crate::error::{ModelError, Result};
use serde::Serialize;

/// Largest density exponent `γ` accepted anywhere in the crate.
pub const MAX_GAMMA: u32 = 64;

/// Beyond this value of `b = p/δ` the complementary tail series loses more
/// digits to cancellation than the direct terminating sum does.
const COMPLEMENT_MAX_B: f64 = 40.0;

const TAIL_MAX_TERMS: usize = 4000;

pub(crate) fn check_gamma(gamma: u32) -> Result<()> {
    if gamma == 0 {
        return Err(ModelError::InvalidParameter(
            "gamma must be a positive integer".into(),
        ));
    }
    if gamma > MAX_GAMMA {
        return Err(ModelError::GammaTooLarge(gamma));
    }
    Ok(())
}

fn is_nonpositive_integer(c: f64) -> bool {
    c <= 0.0 && c.fract() == 0.0
}

/// Rising factorial `(a)_k = a (a+1) ⋯ (a+k−1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + f64::from(i)))
}

/// `₂F₁(−γ, b; c; z)` summed term by term; the series has `γ + 1` terms.
///
/// Successive terms follow `t_{k+1} = t_k (k−γ)(b+k) z / ((c+k)(k+1))`.
pub fn gauss2f1_terminating(gamma: u32, b: f64, c: f64, z: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if is_nonpositive_integer(c) {
        return Err(ModelError::NonpositiveLowerParameter(c));
    }
    Ok(terminating_sum(gamma, b, c, z))
}

/// The terminating sum carried in double-double precision; the alternating
/// terms can exceed the result by many orders of magnitude near `z = 1`.
fn terminating_sum(gamma: u32, b: f64, c: f64, z: f64) -> f64 {
    let g = f64::from(gamma);
    let z = DoubleDouble::from(z);
    let mut term = DoubleDouble::from(1.0);
    let mut sum = term;
    for k in 0..gamma {
        let kf = f64::from(k);
        let ratio = DoubleDouble::sum(b, kf) / DoubleDouble::sum(c, kf);
        term = term * ratio * z * DoubleDouble::from(kf - g) / DoubleDouble::from(kf + 1.0);
        sum = sum + term;
    }
    sum.value()
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn renormalize(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    /// Exact `a + b`.
    fn sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Self {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for DoubleDouble {
    fn from(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = Self::sum(self.hi, rhs.hi);
        let t = Self::sum(self.lo, rhs.lo);
        let hi_lo = Self::renormalize(s.hi, s.lo + t.hi);
        Self::renormalize(hi_lo.hi, hi_lo.lo + t.lo)
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + Self {
            hi: -rhs.hi,
            lo: -rhs.lo,
        }
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = self.hi * rhs.hi;
        let e = self.hi.mul_add(rhs.hi, -p) + (self.hi * rhs.lo + self.lo * rhs.hi);
        Self::renormalize(p, e)
    }
}

impl std::ops::Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Self::from(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from(q2);
        let q3 = r.hi / rhs.hi;
        let q = Self::renormalize(q1, q2);
        q + Self::from(q3)
    }
}

/// `₂F₁(−γ, b; c; 1)` in closed form.
///
/// Gauss' summation theorem with a negative-integer first parameter reduces
/// to the Chu–Vandermonde ratio `(c−b)_γ / (c)_γ`; for `c = b + 1` this is
/// `γ! / ∏_{i=1}^{γ} (b+i)`. No Γ evaluation is involved.
pub fn gauss2f1_unit(gamma: u32, b: f64, c: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if is_nonpositive_integer(c) {
        return Err(ModelError::NonpositiveLowerParameter(c));
    }
    if c == b + 1.0 {
        let mut value = 1.0;
        for i in 1..=gamma {
            let fi = f64::from(i);
            value *= fi / (b + fi);
        }
        return Ok(value);
    }
    let mut value = 1.0;
    for i in 0..gamma {
        let fi = f64::from(i);
        value *= (c - b + fi) / (c + fi);
    }
    Ok(value)
}

/// `(a)_s / s!`, the coefficient of `u^s` in `(1 − u)^(−a)`.
pub fn binomial_series_coeff(a: f64, s: u32) -> f64 {
    (0..s).fold(1.0, |acc, i| {
        let fi = f64::from(i);
        acc * (a + fi) / (fi + 1.0)
    })
}

/// A polynomial `c_0 + c_1 u + … + c_d u^d` in `u = x^δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PolynomialU {
    coeffs: Vec<f64>,
}

impl PolynomialU {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(ModelError::InvalidParameter(
                "polynomial needs at least one coefficient".into(),
            ));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "non-finite polynomial coefficient {bad}"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `(1 − u)^γ` expanded by the binomial theorem.
    pub fn one_minus_u_pow(gamma: u32) -> Self {
        let coeffs = (0..=gamma)
            .map(|k| pochhammer(-f64::from(gamma), k) / pochhammer(1.0, k))
            .collect();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, q: u32) -> Self {
        (0..q).fold(Self::constant(1.0), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }
}

pub fn poly_mul(p: &PolynomialU, q: &PolynomialU) -> PolynomialU {
    p.mul(q)
}

pub fn poly_eval(p: &PolynomialU, u: f64) -> f64 {
    p.eval(u)
}

/// Incomplete integrals of the density kernel `t^(p−1) (1 − t^δ)^γ` on `[0, 1]`.
///
/// The lower integral `∫_0^x` is `x^p/p · ₂F₁(−γ, p/δ; p/δ+1; x^δ)` and the full
/// integral follows from the unit-argument identity. Close to the surface the
/// upper integral `∫_x^1` is tiny and is summed directly as a power series in
/// `w = 1 − x^δ` rather than obtained by subtraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialKernel {
    p: f64,
    delta: f64,
    gamma: u32,
}

impl RadialKernel {
    pub fn new(p: f64, delta: f64, gamma: u32) -> Result<Self> {
        check_gamma(gamma)?;
        if !(p > 0.0 && p.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "kernel power p must be positive, got {p}"
            )));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "delta must be positive, got {delta}"
            )));
        }
        Ok(Self { p, delta, gamma })
    }

    fn b(&self) -> f64 {
        self.p / self.delta
    }

    /// `∫_0^1 t^(p−1) (1 − t^δ)^γ dt = (1/δ) γ! / ∏_{i=0}^{γ} (p/δ + i)`.
    pub fn total(&self) -> f64 {
        let b = self.b();
        let mut value = 1.0 / (self.delta * b);
        for i in 1..=self.gamma {
            let fi = f64::from(i);
            value *= fi / (b + fi);
        }
        value
    }

    fn use_tail(&self, u: f64) -> bool {
        u > 0.5 && self.b() <= COMPLEMENT_MAX_B
    }

    /// Terminating hypergeometric form of the lower integral.
    pub fn lower_series(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let u = x.powf(self.delta);
        let b = self.b();
        let sum = terminating_sum(self.gamma, b, b + 1.0, u);
        x.powf(self.p) / self.p * sum
    }

    /// `(1/δ) Σ_j (1 − p/δ)_j / j! · w^(γ+1+j) / (γ+1+j)`, convergent for `w < 1`.
    pub fn upper_tail(&self, x: f64) -> f64 {
        let w = 1.0 - x.powf(self.delta);
        if w <= 0.0 {
            return 0.0;
        }
        self.tail_over_w_pow_gamma(w) * w.powi(self.gamma as i32)
    }

    /// `upper_tail / w^γ`, which stays well conditioned as `w → 0`.
    fn tail_over_w_pow_gamma(&self, w: f64) -> f64 {
        let one_minus_b = 1.0 - self.b();
        let g1 = f64::from(self.gamma) + 1.0;
        let mut coeff = 1.0;
        let mut wpow = w;
        let mut sum = wpow / g1;
        for j in 1..TAIL_MAX_TERMS {
            let jf = j as f64;
            coeff *= (one_minus_b + jf - 1.0) / jf;
            wpow *= w;
            let term = coeff * wpow / (g1 + jf);
            sum += term;
            if coeff == 0.0 || (jf > one_minus_b.abs() + 1.0 && term.abs() <= 1e-18 * sum.abs()) {
                break;
            }
        }
        sum / self.delta
    }

    pub fn lower(&self, x: f64) -> f64 {
        let u = x.powf(self.delta);
        if self.use_tail(u) {
            self.total() - self.upper_tail(x)
        } else {
            self.lower_series(x)
        }
    }

    pub fn upper(&self, x: f64) -> f64 {
        let u = x.powf(self.delta);
        if self.use_tail(u) {
            self.upper_tail(x)
        } else {
            self.total() - self.lower_series(x)
        }
    }

    /// `∫_x^1 … dt / (1 − x^δ)^γ`, finite and accurate up to the surface.
    pub fn upper_over_density(&self, x: f64) -> f64 {
        let u = x.powf(self.delta);
        let w = 1.0 - u;
        if self.use_tail(u) {
            if w <= 0.0 {
                return 0.0;
            }
            self.tail_over_w_pow_gamma(w)
        } else {
            (self.total() - self.lower_series(x)) / w.powi(self.gamma as i32)
        }
    }
}
