use std::f64::consts::PI;

use solarmodel::hypergeom::RadialKernel;
use solarmodel::oracle::{integrate_adaptive, QuadratureSpec};
use solarmodel::profiles::{self, ModelParams, SolarCalibration, Structure};

const DELTAS: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 4.0];
const GAMMAS: [u32; 5] = [1, 2, 3, 5, 10];

fn interior_grid() -> Vec<f64> {
    (1..=100).map(|i| i as f64 / 101.0).collect()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

#[test]
fn density_pressure_and_mass_are_monotone() {
    let grid = interior_grid();
    for &d in &DELTAS {
        for &g in &GAMMAS {
            let s = Structure::new(d, g).unwrap();
            let rho: Vec<f64> = grid.iter().map(|&x| s.density_shape(x)).collect();
            let p: Vec<f64> = grid.iter().map(|&x| s.pressure(x)).collect();
            assert!(strictly_decreasing(&rho), "rho ({d},{g})");
            assert!(strictly_decreasing(&p), "P ({d},{g})");

            // Close to the surface 1 − M drops below one ulp of M, so strict
            // growth is asserted on the exterior mass there.
            let k = RadialKernel::new(3.0, d, g).unwrap();
            let exterior: Vec<f64> = grid.iter().map(|&x| k.upper(x) / k.total()).collect();
            assert!(strictly_decreasing(&exterior), "1 - M ({d},{g})");
            for (w, e) in grid.windows(2).zip(exterior.windows(2)) {
                let (m0, m1) = (s.mass(w[0]), s.mass(w[1]));
                assert!(m1 >= m0, "M ({d},{g}) at {}", w[1]);
                if e[1] > f64::EPSILON {
                    assert!(m1 > m0, "M ({d},{g}) at {}", w[1]);
                }
            }
        }
    }
}

#[test]
fn temperature_is_monotone_for_steep_cores() {
    let grid = interior_grid();
    for &d in &[2.0, 3.0, 4.0] {
        for &g in &GAMMAS {
            let s = Structure::new(d, g).unwrap();
            let t: Vec<f64> = grid.iter().map(|&x| s.temperature(x)).collect();
            assert!(strictly_decreasing(&t), "T ({d},{g})");
        }
    }
}

#[test]
fn temperature_rises_off_centre_for_shallow_cores() {
    // With δ ≤ 1 the density has a cusp at the centre and T peaks off-centre.
    for &d in &[0.5, 1.0] {
        for &g in &GAMMAS {
            let s = Structure::new(d, g).unwrap();
            assert!(s.temperature(0.01) > s.temperature(0.0), "({d},{g})");
        }
    }
}

#[test]
fn pressure_matches_hydrostatic_quadrature() {
    let cal = SolarCalibration::solar();
    let g = cal.constants.gravitational;
    let r = cal.radius_total;
    let spec = QuadratureSpec::default();
    for &(d, gam) in &[
        (3.0, 1u32),
        (3.0, 2),
        (1.0, 1),
        (2.0, 3),
        (4.0, 5),
        (0.5, 10),
    ] {
        let p = ModelParams::shape(d, gam).unwrap();
        let integrand = |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            let m = profiles::mass(&p, &cal, t).unwrap();
            let rho = profiles::density(&p, &cal, t).unwrap();
            g * m * rho / (t * t * r)
        };
        for i in 0..50 {
            let x = i as f64 / 50.0;
            let closed = profiles::pressure(&p, &cal, x).unwrap();
            let quad = integrate_adaptive(integrand, x, 1.0, &spec).unwrap();
            assert!(
                ((closed - quad) / quad).abs() < 1e-9,
                "({d},{gam}) x={x}: {closed} {quad}"
            );
        }
    }
}

#[test]
fn central_values_scale_with_mass() {
    let cal = SolarCalibration::solar();
    let heavy = cal.with_mass(2.0 * cal.mass_total).unwrap();
    for &(d, g) in &[(3.0, 1u32), (0.5, 10), (2.0, 3)] {
        let p = ModelParams::shape(d, g).unwrap();
        let pairs = [
            (
                profiles::central_density(&p, &heavy).unwrap() / 2.0,
                profiles::central_density(&p, &cal).unwrap(),
            ),
            (
                profiles::central_pressure(&p, &heavy).unwrap() / 4.0,
                profiles::central_pressure(&p, &cal).unwrap(),
            ),
            (
                profiles::central_temperature(&p, &heavy).unwrap() / 2.0,
                profiles::central_temperature(&p, &cal).unwrap(),
            ),
        ];
        for (a, b) in pairs {
            assert!(((a - b) / b).abs() < 1e-12, "({d},{g}): {a} {b}");
        }
    }
}

#[test]
fn ideal_gas_law_holds_in_si() {
    let cal = SolarCalibration::solar();
    let p = ModelParams::shape(2.0, 3).unwrap();
    let gas = cal.constants.gas_constant() / cal.mu;
    for i in 0..100 {
        let x = i as f64 / 100.0;
        let lhs = profiles::pressure(&p, &cal, x).unwrap();
        let rhs = gas
            * profiles::density(&p, &cal, x).unwrap()
            * profiles::temperature(&p, &cal, x).unwrap();
        assert!(((lhs - rhs) / lhs).abs() < 1e-13, "{x}");
    }
}

#[test]
fn mean_density_matches_total_mass() {
    let cal = SolarCalibration::solar();
    let volume = 4.0 / 3.0 * PI * cal.radius_total.powi(3);
    assert!((cal.mean_density() * volume / cal.mass_total - 1.0).abs() < 1e-15);
}
