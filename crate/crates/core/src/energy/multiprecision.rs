//! MPFR construction of the energy expansion and of its luminosity integral.
//!
//! The expansion coefficients alternate in sign and grow quickly with `γ` and
//! with the truncation order, so the term-by-term luminosity sum cancels
//! heavily. Coefficients and kernel sums are therefore built in MPFR at a
//! working precision sized to the cancellation measured at `x = 1`.

use rug::ops::Pow;
use rug::Float;

const BASE_PRECISION: u32 = 192;
const GUARD_BITS: f64 = 96.0;
const MAX_PRECISION: u32 = 1 << 14;

fn pochhammer(a: &Float, k: u32) -> Float {
    let mut v = Float::with_val(a.prec(), 1);
    for i in 0..k {
        v *= Float::with_val(a.prec(), a + i);
    }
    v
}

fn factorial(prec: u32, k: u32) -> Float {
    pochhammer(&Float::with_val(prec, 1), k)
}

/// `(−γ)_k / k! = (−1)^k C(γ, k)`.
fn signed_binomial(prec: u32, gamma: u32, k: u32) -> Float {
    pochhammer(&Float::with_val(prec, -f64::from(gamma)), k) / factorial(prec, k)
}

fn poly_mul(p: &[Float], q: &[Float]) -> Vec<Float> {
    let prec = p[0].prec();
    let mut out = vec![Float::new(prec); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += Float::with_val(prec, a * b);
        }
    }
    out
}

fn horner(coeffs: &[Float], z: &Float) -> Float {
    let mut acc = Float::new(z.prec());
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// Normalisation `η` of the temperature bracket.
pub(super) fn eta(delta: f64, gamma: u32, prec: u32) -> Float {
    let d = Float::with_val(prec, delta);
    let b2 = Float::with_val(prec, 2 / &d);
    let b3 = Float::with_val(prec, 3 / &d);
    let g_fact = factorial(prec, gamma);
    let mut sum = Float::new(prec);
    for nu in 0..=gamma {
        let b2v = Float::with_val(prec, &b2 + nu);
        let b3v = Float::with_val(prec, &b3 + nu);
        let rising = pochhammer(&Float::with_val(prec, &b2v + 1u32), gamma);
        let denom = b2v * b3v * rising;
        sum += signed_binomial(prec, gamma, nu) * &g_fact / denom;
    }
    sum
}

/// Coefficients of the bracket polynomial `A(u)`.
pub(super) fn bracket(delta: f64, gamma: u32, prec: u32) -> Vec<Float> {
    let d = Float::with_val(prec, delta);
    let b2 = Float::with_val(prec, 2 / &d);
    let b3 = Float::with_val(prec, 3 / &d);
    let mut coeffs = vec![Float::new(prec); 2 * gamma as usize + 1];
    for m1 in 0..=gamma {
        let w1 = signed_binomial(prec, gamma, m1) / Float::with_val(prec, &b3 + m1);
        for m2 in 0..=gamma {
            let w2 = signed_binomial(prec, gamma, m2);
            let denom = Float::with_val(prec, &b2 + (m1 + m2));
            coeffs[(m1 + m2) as usize] += Float::with_val(prec, &w1 * &w2) / denom;
        }
    }
    coeffs
}

/// `ε / (ε₀ ρ_c^n T_c^m)` as `Σ c_{jq} u^j x^(2q)`.
pub(super) struct Expansion {
    pub eta: Float,
    pub bracket: Vec<Float>,
    /// Truncated series of `(1 − u)^(−γ(m−n))`.
    pub series: Vec<Float>,
    /// `(j, q, c_{jq})` with nonzero coefficients, ordered by `(j, q)`.
    pub terms: Vec<(u32, u32, Float)>,
}

pub(super) fn expansion(
    delta: f64,
    gamma: u32,
    n_exp: u32,
    m_exp: u32,
    order: u32,
    prec: u32,
) -> Expansion {
    let eta = eta(delta, gamma, prec);
    let a = bracket(delta, gamma, prec);
    let power = Float::with_val(prec, gamma * (m_exp - n_exp));
    let series: Vec<Float> = (0..=order)
        .map(|s| pochhammer(&power, s) / factorial(prec, s))
        .collect();

    let mut merged: std::collections::BTreeMap<(u32, u32), Float> = Default::default();
    let mut a_pow = vec![Float::with_val(prec, 1)];
    for q in 0..=m_exp {
        let weight = signed_binomial(prec, m_exp, q) / Float::with_val(prec, eta.clone().pow(q));
        for (j, c) in poly_mul(&series, &a_pow).into_iter().enumerate() {
            *merged
                .entry((j as u32, q))
                .or_insert_with(|| Float::new(prec)) += c * &weight;
        }
        a_pow = poly_mul(&a_pow, &a);
    }
    let terms = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((j, q), c)| (j, q, c))
        .collect();
    Expansion {
        eta,
        bracket: a,
        series,
        terms,
    }
}

/// `L̂(x) = ∫_0^x t² (1 − t^δ)^γ ε̂(t) dt = x³ Σ_q x^(2q) H_q(x^δ)`.
///
/// Each expansion term `c u^j x^(2q)` integrates to
/// `c x^p/p · ₂F₁(−γ, p/δ; p/δ+1; u)` with `p = δj + 2q + 3`; the terminating
/// series is folded into the polynomials `H_q`.
#[derive(Debug, Clone)]
pub(super) struct LuminosityPolynomial {
    delta: Float,
    rows: Vec<Vec<Float>>,
    total: Float,
    cancellation_bits: f64,
}

impl LuminosityPolynomial {
    fn new(exp: &Expansion, delta: f64, gamma: u32, prec: u32) -> Self {
        let d = Float::with_val(prec, delta);
        let q_max = exp.terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
        let j_max = exp.terms.iter().map(|t| t.0).max().unwrap_or(0) as usize;
        let mut rows = vec![vec![Float::new(prec); j_max + gamma as usize + 1]; q_max + 1];
        let binom: Vec<Float> = (0..=gamma)
            .map(|k| signed_binomial(prec, gamma, k))
            .collect();
        let g_fact = factorial(prec, gamma);
        let mut total = Float::new(prec);
        let mut total_abs = Float::new(prec);
        for (j, q, c) in &exp.terms {
            let p = Float::with_val(prec, &d * *j) + (2 * q + 3);
            let b = Float::with_val(prec, &p / &d);
            for (k, bk) in binom.iter().enumerate() {
                let denom = Float::with_val(prec, &b + k as u32) * &d;
                rows[*q as usize][*j as usize + k] += Float::with_val(prec, c * bk) / denom;
            }
            let unit = Float::with_val(prec, &g_fact / pochhammer(&b, gamma + 1)) / &d;
            let contribution = unit * c;
            total_abs += Float::with_val(prec, contribution.abs_ref());
            total += contribution;
        }
        let mut h_abs = Float::new(prec);
        for row in &rows {
            for h in row {
                h_abs += Float::with_val(prec, h.abs_ref());
            }
        }
        let spread = total_abs.max(&h_abs) / Float::with_val(prec, total.abs_ref());
        let cancellation_bits = spread.log2().to_f64().max(0.0);
        Self {
            delta: d,
            rows,
            total,
            cancellation_bits,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let prec = self.delta.prec();
        let xf = Float::with_val(prec, x.min(1.0));
        let u = Float::with_val(prec, (&xf).pow(&self.delta));
        let x2 = Float::with_val(prec, xf.square_ref());
        let mut acc = Float::new(prec);
        for row in self.rows.iter().rev() {
            acc *= &x2;
            acc += horner(row, &u);
        }
        (acc * xf.square() * x.min(1.0)).to_f64()
    }

    pub fn total(&self) -> f64 {
        self.total.to_f64()
    }

    pub fn precision(&self) -> u32 {
        self.delta.prec()
    }
}

/// Expansion and luminosity polynomial at a precision that leaves at least
/// `GUARD_BITS` beyond double precision after cancellation.
pub(super) fn build(
    delta: f64,
    gamma: u32,
    n_exp: u32,
    m_exp: u32,
    order: u32,
) -> (Expansion, LuminosityPolynomial) {
    let mut prec = BASE_PRECISION;
    loop {
        let exp = expansion(delta, gamma, n_exp, m_exp, order, prec);
        let lum = LuminosityPolynomial::new(&exp, delta, gamma, prec);
        let needed = 53.0 + GUARD_BITS + 2.0 * lum.cancellation_bits;
        if needed <= f64::from(prec) || prec >= MAX_PRECISION {
            return (exp, lum);
        }
        prec = ((needed.ceil() as u32).div_ceil(64) * 64)
            .max(prec + 64)
            .min(MAX_PRECISION);
    }
}
