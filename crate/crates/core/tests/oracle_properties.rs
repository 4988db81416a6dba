use proptest::prelude::*;
use solarmodel::energy::{solve_eps0, EnergyLaw};
use solarmodel::oracle::{
    integrate_adaptive, integrate_ode, verify_model, QuadratureSpec, VerifyConfig,
};
use solarmodel::profiles::{uniform_grid, ModelParams, SolarCalibration};

fn antiderivative(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * x.powi(k as i32 + 1) / (k as f64 + 1.0))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quadrature_is_exact_on_polynomials(
        coeffs in proptest::collection::vec(-5.0f64..5.0, 1..=13),
        lo in -2.0f64..1.0,
        width in 0.01f64..3.0,
    ) {
        let hi = lo + width;
        let f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let spec = QuadratureSpec::new(1e-14, 1e-12, 50).unwrap();
        let q = integrate_adaptive(f, lo, hi, &spec).unwrap();
        let exact = antiderivative(&coeffs, hi) - antiderivative(&coeffs, lo);
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * lo.abs().max(hi.abs()).powi(k as i32) * width)
            .sum();
        prop_assert!((q - exact).abs() <= 1e-12 * scale.max(1e-300), "{q} {exact}");
    }
}

#[test]
fn rk4_converges_at_fourth_order() {
    // y'' = −y, y(0) = 0, y'(0) = 1 on [0, 2].
    let rhs = |_x: f64, y: &[f64; 2]| [y[1], -y[0]];
    let errors: Vec<f64> = [20usize, 40, 80]
        .iter()
        .map(|&n| {
            let sol = integrate_ode(rhs, 0.0, 2.0, [0.0, 1.0], n).unwrap();
            (sol.state[0] - 2.0f64.sin()).abs()
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() < 0.15, "{order}");
    }
}

#[test]
fn verification_is_deterministic_and_detects_corruption() {
    let cal = SolarCalibration::solar();
    let p = ModelParams::new(2.0, 3, 1, 4).unwrap();
    let law = EnergyLaw::from_params(&p, solve_eps0(&p, &cal, None).unwrap()).unwrap();
    let grid = uniform_grid(20).unwrap();
    let config = VerifyConfig::default();
    let a = verify_model(&p, &law, &cal, &grid, &config).unwrap();
    let b = verify_model(&p, &law, &cal, &grid, &config).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert!(a.pass);

    let corrupted = VerifyConfig {
        density_perturbation: 1.01,
        ..VerifyConfig::default()
    };
    let c = verify_model(&p, &law, &cal, &grid, &corrupted).unwrap();
    assert!(!c.pass);
    assert!(c.errors.mass > 1e-3);
}
