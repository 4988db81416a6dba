use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;
use solarmodel::model::SolarModel;
use solarmodel::profiles::{ModelParams, SolarCalibration};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solarmodel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["profile", "--gamma", "1.5"][..],
        &["verify", "--delta", "0"],
        &["profile", "--points", "1"],
        &["profile", "--no-such-flag"],
        &["frobnicate"],
        &["calibrate", "--gamma", "1"],
        &["profile", "--X", "0.7", "--Y", "0.7", "--Z", "0.02"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("profile.csv");
    let out = run(&["profile", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn profile_rows_honour_boundaries_and_monotonicity() {
    let out = run(&["profile", "--points", "201"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,rho,mass,pressure,temperature,epsilon,luminosity,kappa,luminosity_radiative"
    );
    let rows: Vec<Vec<Option<f64>>> = lines
        .map(|l| l.split(',').map(|f| f.parse().ok()).collect())
        .collect();
    assert_eq!(rows.len(), 201);
    let col = |i: usize| -> Vec<f64> { rows.iter().map(|r| r[i].unwrap()).collect() };
    let (x, rho, mass, p, t, _, lum) = (col(0), col(1), col(2), col(3), col(4), col(5), col(6));

    let cal = SolarCalibration::solar();
    assert_eq!((mass[0], lum[0]), (0.0, 0.0));
    assert_eq!((rho[200], p[200], t[200]), (0.0, 0.0, 0.0));
    assert_eq!(mass[200], cal.mass_total);
    assert_eq!(x[100], 0.5);
    assert!(rel(mass[100], 0.234375 * cal.mass_total) < 1e-12);
    assert!(rows[200][7].is_none() && rows[200][8].is_none());

    for w in 0..200 {
        assert!(
            rho[w + 1] < rho[w] && p[w + 1] < p[w] && t[w + 1] < t[w],
            "row {w}"
        );
        assert!(mass[w + 1] > mass[w] && lum[w + 1] >= lum[w], "row {w}");
    }
}

#[test]
fn center_reports_hand_values_and_library_values() {
    let out = run(&["center"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let c = &v["central"];
    assert!(rel(c["p_c_over_gm2_r4"].as_f64().unwrap(), 63.0 / (80.0 * PI)) < 1e-12);
    assert_eq!(c["rho_c_over_mean_density"].as_f64().unwrap(), 2.0);

    let params = ModelParams::default();
    let cal = SolarCalibration::solar();
    let eps0 = v["params"]["eps0"].as_f64().unwrap();
    let kappa0 = v["params"]["kappa0"].as_f64().unwrap();
    let law = solarmodel::energy::EnergyLaw::from_params(&params, eps0).unwrap();
    let opacity = solarmodel::radiative::OpacityLaw::kramers(kappa0).unwrap();
    let model = SolarModel::new(params, cal, law, opacity, None).unwrap();
    assert_eq!(c["rho_c"].as_f64().unwrap(), model.central_density());
    assert_eq!(c["p_c"].as_f64().unwrap(), model.central_pressure());
    assert_eq!(c["t_c"].as_f64().unwrap(), model.central_temperature());
    assert_eq!(c["l_total"].as_f64().unwrap(), model.total_luminosity());

    let linear = json(&run(&["center", "--delta", "1", "--gamma", "1"]));
    assert!(
        rel(
            linear["central"]["rho_c_over_mean_density"]
                .as_f64()
                .unwrap(),
            4.0
        ) < 1e-15
    );
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--points", "20"]);
    assert_eq!(code(&ok), 0);
    let report = json(&ok);
    for key in ["params", "central", "errors", "pass"] {
        assert!(report.get(key).is_some(), "{key}");
    }
    assert_eq!(report["pass"], Value::Bool(true));

    let stress = run(&[
        "verify", "--points", "50", "--delta", "0.5", "--gamma", "10",
    ]);
    assert_eq!(code(&stress), 0);

    let corrupt = run(&["verify", "--points", "20", "--corrupt-density", "1.01"]);
    assert_eq!(code(&corrupt), 2);
    assert_eq!(json(&corrupt)["pass"], Value::Bool(false));
}

#[test]
fn match_round_trip_and_negative_control() {
    let out = run(&["match"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["x_star"].as_f64().unwrap() - 0.3).abs() < 1e-6);
    assert!(v["residual_over_lsun"].as_f64().unwrap() < 1e-8);

    let kappa0 = v["params"]["kappa0"].as_f64().unwrap();
    let off = format!("{:e}", kappa0 * 1e10);
    let out = run(&["match", "--kappa0", &off]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no matching radius"));
}

#[test]
fn calibrate_inverts_central_density() {
    for (ratio, delta) in [("2", 3.0), ("4", 1.0)] {
        let out = run(&["calibrate", "--gamma", "1", "--target-density-ratio", ratio]);
        assert_eq!(code(&out), 0);
        let found = json(&out)["delta"].as_f64().unwrap();
        assert!((found - delta).abs() < 1e-8, "{ratio}: {found}");
    }
    let out = run(&["calibrate", "--gamma", "1", "--target-density-ratio", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("achievable range"));
}

#[test]
fn json_profile_matches_csv() {
    let csv = String::from_utf8(run(&["profile", "--points", "11"]).stdout).unwrap();
    let v = json(&run(&["profile", "--points", "11", "--format", "json"]));
    let rows = v["profile"].as_array().unwrap();
    for (row, line) in rows.iter().zip(csv.lines().skip(1)) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(
            row["x"].as_f64().unwrap(),
            fields[0].parse::<f64>().unwrap()
        );
        assert_eq!(
            row["pressure"].as_f64().unwrap(),
            fields[3].parse::<f64>().unwrap()
        );
    }
}
