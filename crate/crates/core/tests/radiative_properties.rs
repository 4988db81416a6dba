use solarmodel::energy::{solve_eps0, EnergyLaw};
use solarmodel::error::ModelError;
use solarmodel::profiles::{self, ModelParams, SolarCalibration};
use solarmodel::radiative::{
    matching_radius, radiative_luminosity, solve_kappa0, temperature_gradient, OpacityLaw, ANCHOR_X,
};

fn anchored(p: &ModelParams, cal: &SolarCalibration) -> (EnergyLaw, OpacityLaw) {
    let law = EnergyLaw::from_params(p, solve_eps0(p, cal, None).unwrap()).unwrap();
    let template = OpacityLaw::kramers(1.0).unwrap();
    let kappa0 = solve_kappa0(p, &law, cal, &template, None, ANCHOR_X).unwrap();
    (law, template.with_kappa0(kappa0).unwrap())
}

#[test]
fn radiative_flux_follows_the_temperature_gradient() {
    let cal = SolarCalibration::solar();
    let opacity = OpacityLaw::kramers(1e20).unwrap();
    for &delta in &[0.5, 1.0, 2.0, 3.0, 4.0] {
        for &gamma in &[1u32, 2, 3, 5, 10] {
            let p = ModelParams::shape(delta, gamma).unwrap();
            for i in 1..100 {
                let x = i as f64 / 100.0;
                let grad = temperature_gradient(&p, &cal, x).unwrap();
                let l = radiative_luminosity(&p, &cal, &opacity, x).unwrap();
                if grad < 0.0 {
                    assert!(l > 0.0, "({delta},{gamma}) x={x}");
                } else {
                    assert!(l <= 0.0, "({delta},{gamma}) x={x}");
                }
            }
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let cal = SolarCalibration::solar();
    let r = cal.radius_total;
    for &(delta, gamma) in &[(3.0, 1u32), (0.5, 10), (1.0, 2), (4.0, 5)] {
        let p = ModelParams::shape(delta, gamma).unwrap();
        let t = |x: f64| profiles::temperature(&p, &cal, x).unwrap();
        let scale = t(0.0) / r;
        for i in 0..=90 {
            let x = 0.05 + 0.01 * i as f64;
            // Small enough for the √x cusp, large enough to damp rounding in T.
            let h = (x / 100.0).min(1e-3);
            let fd = (t(x - 2.0 * h) - 8.0 * t(x - h) + 8.0 * t(x + h) - t(x + 2.0 * h))
                / (12.0 * h * r);
            let g = temperature_gradient(&p, &cal, x).unwrap();
            assert!(
                (fd - g).abs() < 1e-6 * scale,
                "({delta},{gamma}) x={x}: {fd} {g}"
            );
            if delta >= 2.0 {
                assert!(((fd - g) / g).abs() < 1e-6, "({delta},{gamma}) x={x}");
            }
        }
    }
}

#[test]
fn matching_point_survives_joint_rescaling() {
    let cal = SolarCalibration::solar();
    for &(delta, gamma) in &[(3.0, 1u32), (2.0, 3)] {
        let p = ModelParams::shape(delta, gamma).unwrap();
        let (law, opacity) = anchored(&p, &cal);
        let base = matching_radius(&p, &law, &cal, &opacity, None).unwrap();
        let c = 7.5;
        let law2 = EnergyLaw::new(law.eps0 * c, law.n_exp, law.m_exp).unwrap();
        let opacity2 = opacity.with_kappa0(opacity.kappa0 / c).unwrap();
        let scaled = matching_radius(&p, &law2, &cal, &opacity2, None).unwrap();
        assert!((base.x - ANCHOR_X).abs() < 1e-6);
        assert!((scaled.x - base.x).abs() < 1e-9, "{} {}", scaled.x, base.x);
        assert!(scaled.residual() < 1e-8 * cal.luminosity_target);
    }
}

#[test]
fn mismatched_opacity_has_no_bracket() {
    let cal = SolarCalibration::solar();
    let p = ModelParams::default();
    let (law, opacity) = anchored(&p, &cal);
    for factor in [1e10, 1e-10] {
        let off = opacity.with_kappa0(opacity.kappa0 * factor).unwrap();
        let err = matching_radius(&p, &law, &cal, &off, None).unwrap_err();
        assert!(matches!(err, ModelError::NoBracket(_)), "{err}");
    }
}
