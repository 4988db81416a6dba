//! Command-line front end: argument parsing, subcommand dispatch and output
//! formatting. `main.rs` only maps the outcome to a process exit code.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::energy::{solve_eps0, EnergyLaw};
use crate::error::ModelError;
use crate::model::{SolarModel, StellarProfile};
use crate::oracle::{verify_model, VerifyConfig};
use crate::profiles::{
    radiation_pressure_ratio, uniform_grid, ModelParams, PhysicalConstants, SolarCalibration,
    Structure, SOLAR_LUMINOSITY, SOLAR_MASS, SOLAR_RADIUS,
};
use crate::radiative::{matching_radius, solve_kappa0, OpacityLaw, ANCHOR_X};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PHYSICS: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const CSV_HEADER: &str =
    "x,rho,mass,pressure,temperature,epsilon,luminosity,kappa,luminosity_radiative";

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` / `--version`; the text goes to stdout and the exit code is 0.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Physics(String),
    #[error("I/O failure: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Physics(_) => EXIT_PHYSICS,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Physics(e.to_string())
    }
}

/// A constant that is either given or solved for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solvable {
    Solve,
    Value(f64),
}

impl FromStr for Solvable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "solve" {
            return Ok(Solvable::Solve);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| format!("expected a positive number or `solve`, got `{s}`"))?;
        if v > 0.0 && v.is_finite() {
            Ok(Solvable::Value(v))
        } else {
            Err(format!("value must be positive, got {v}"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn positive_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be > 0, got {v}"))
    }
}

fn fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("mass fraction must lie in [0, 1], got {v}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "solarmodel",
    version,
    about = "Closed-form solar interior profiles for the density family ρ = ρ_c (1 − x^δ)^γ"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the radial profile.
    Profile(ModelArgs),
    /// Central values and total luminosity.
    Center(ModelArgs),
    /// Compare the closed forms against numerical integration.
    Verify(VerifyArgs),
    /// Find the radius where radiative and nuclear luminosities agree.
    Match(ModelArgs),
    /// Search δ for a target central density or temperature.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Density exponent δ > 0.
    #[arg(long, default_value = "3", value_parser = positive_real)]
    delta: f64,
    /// Density exponent γ, a positive integer.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=64))]
    gamma: u32,
    /// Density exponent n of the energy generation rate.
    #[arg(long = "n-exp", default_value_t = 1)]
    n_exp: u32,
    /// Temperature exponent m of the energy generation rate.
    #[arg(long = "m-exp", default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    m_exp: u32,
    /// Energy rate constant in SI units, or `solve` to match the total luminosity.
    #[arg(long, default_value = "solve")]
    eps0: Solvable,
    /// Opacity constant in SI units, or `solve` to anchor the matching point at x = 0.3.
    #[arg(long, default_value = "solve")]
    kappa0: Solvable,
    #[arg(long = "X", default_value = "0.7", value_parser = fraction)]
    hydrogen: f64,
    #[arg(long = "Y", default_value = "0.28", value_parser = fraction)]
    helium: f64,
    #[arg(long = "Z", default_value = "0.02", value_parser = fraction)]
    metals: f64,
    /// Number of grid points on [0, 1].
    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u64).range(2..))]
    points: u64,
    /// Order of the (1 − u) power series in the energy expansion; default γ(m − n).
    #[arg(long)]
    truncation: Option<u32>,
    /// Total mass, kg.
    #[arg(long, default_value_t = SOLAR_MASS, value_parser = positive_real)]
    mass: f64,
    /// Total radius, m.
    #[arg(long, default_value_t = SOLAR_RADIUS, value_parser = positive_real)]
    radius: f64,
    /// Target luminosity, W.
    #[arg(long, default_value_t = SOLAR_LUMINOSITY, value_parser = positive_real)]
    lsun: f64,
    /// Write output here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Scale the density seen by the oracle (negative control).
    #[arg(long = "corrupt-density", hide = true, value_parser = positive_real)]
    corrupt_density: Option<f64>,
}

#[derive(Debug, Args)]
#[group(id = "target", required = true, multiple = false)]
struct CalibrateTargets {
    /// Central density, kg m⁻³.
    #[arg(long = "target-density", value_parser = positive_real)]
    density: Option<f64>,
    /// Central density in units of the mean density.
    #[arg(long = "target-density-ratio", value_parser = positive_real)]
    density_ratio: Option<f64>,
    /// Central temperature, K.
    #[arg(long = "target-temperature", value_parser = positive_real)]
    temperature: Option<f64>,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    target: CalibrateTargets,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CalibrationTarget {
    /// `ρ_c / ρ̄`.
    DensityRatio(f64),
    /// `T_c` in units of `μ G M M_u / (k_B N_A R)`.
    TemperatureRatio(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcommandKind {
    Profile,
    Center,
    Verify,
    Match,
    Calibrate,
}

/// Validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub subcommand: SubcommandKind,
    pub params: ModelParams,
    pub calibration: SolarCalibration,
    pub eps0: Solvable,
    pub kappa0: Solvable,
    pub points: usize,
    pub truncation: Option<u32>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub corrupt_density: Option<f64>,
    pub target: Option<CalibrationTarget>,
}

fn config_from(kind: SubcommandKind, m: ModelArgs) -> Result<CliConfig, CliError> {
    let usage = |e: ModelError| CliError::Usage(e.to_string());
    let params = ModelParams::new(m.delta, m.gamma, m.n_exp, m.m_exp).map_err(usage)?;
    if m.m_exp < m.n_exp {
        return Err(CliError::Usage(format!(
            "--m-exp ({}) must not be smaller than --n-exp ({})",
            m.m_exp, m.n_exp
        )));
    }
    let calibration = SolarCalibration::new(
        m.mass,
        m.radius,
        m.lsun,
        (m.hydrogen, m.helium, m.metals),
        PhysicalConstants::default(),
    )
    .map_err(usage)?;
    Ok(CliConfig {
        subcommand: kind,
        params,
        calibration,
        eps0: m.eps0,
        kappa0: m.kappa0,
        points: m.points as usize,
        truncation: m.truncation,
        output: m.output,
        format: m.format,
        corrupt_density: None,
        target: None,
    })
}

/// Parse and validate `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                CliError::Info(e.render().to_string())
            }
            _ => CliError::Usage(e.render().to_string()),
        }
    })?;
    match cli.command {
        Command::Profile(m) => config_from(SubcommandKind::Profile, m),
        Command::Center(m) => config_from(SubcommandKind::Center, m),
        Command::Match(m) => config_from(SubcommandKind::Match, m),
        Command::Verify(v) => {
            let mut c = config_from(SubcommandKind::Verify, v.model)?;
            c.corrupt_density = v.corrupt_density;
            Ok(c)
        }
        Command::Calibrate(a) => {
            let mut c = config_from(SubcommandKind::Calibrate, a.model)?;
            let t = a.target;
            c.target = Some(match (t.density, t.density_ratio, t.temperature) {
                (Some(rho), _, _) => {
                    CalibrationTarget::DensityRatio(rho / c.calibration.mean_density())
                }
                (_, Some(r), _) => CalibrationTarget::DensityRatio(r),
                (_, _, Some(temp)) => {
                    CalibrationTarget::TemperatureRatio(temp / c.calibration.temperature_scale())
                }
                _ => return Err(CliError::Usage("a calibration target is required".into())),
            });
            Ok(c)
        }
    }
}

/// Shortest round-trip decimal; scientific notation outside `[1e-4, 1e15)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn profile_csv(profile: &StellarProfile) -> String {
    let mut out = String::with_capacity(profile.rows.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    for r in &profile.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_number(r.x),
            format_number(r.rho),
            format_number(r.mass),
            format_number(r.pressure),
            format_number(r.temperature),
            format_number(r.epsilon),
            format_number(r.luminosity),
            opt(r.kappa),
            opt(r.luminosity_radiative),
        );
    }
    out
}

fn emit(config: &CliConfig, text: &str) -> Result<(), CliError> {
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn to_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s
}

/// Energy law with `ε₀` resolved.
pub fn resolve_law(config: &CliConfig) -> Result<EnergyLaw, CliError> {
    let eps0 = match config.eps0 {
        Solvable::Value(v) => v,
        Solvable::Solve => solve_eps0(&config.params, &config.calibration, config.truncation)?,
    };
    Ok(EnergyLaw::from_params(&config.params, eps0)?)
}

/// Kramers opacity with `κ₀` resolved.
pub fn resolve_opacity(config: &CliConfig, law: &EnergyLaw) -> Result<OpacityLaw, CliError> {
    let kappa0 = match config.kappa0 {
        Solvable::Value(v) => v,
        Solvable::Solve => solve_kappa0(
            &config.params,
            law,
            &config.calibration,
            &OpacityLaw::kramers(1.0)?,
            config.truncation,
            ANCHOR_X,
        )?,
    };
    Ok(OpacityLaw::kramers(kappa0)?)
}

pub fn build_model(config: &CliConfig) -> Result<SolarModel, CliError> {
    let law = resolve_law(config)?;
    let opacity = resolve_opacity(config, &law)?;
    Ok(SolarModel::new(
        config.params,
        config.calibration,
        law,
        opacity,
        config.truncation,
    )?)
}

fn central_json(model: &SolarModel) -> Result<serde_json::Value, CliError> {
    let cal = &model.calibration;
    let rho_c = model.central_density();
    let p_c = model.central_pressure();
    let t_c = model.central_temperature();
    Ok(json!({
        "rho_c": rho_c,
        "p_c": p_c,
        "t_c": t_c,
        "l_total": model.total_luminosity(),
        "rho_c_over_mean_density": rho_c / cal.mean_density(),
        "p_c_over_gm2_r4": p_c / cal.pressure_scale(),
        "t_c_over_mu_gm_over_r": t_c / cal.temperature_scale(),
        "l_total_over_lsun": model.total_luminosity() / cal.luminosity_target,
        "radiation_to_gas_pressure_center": radiation_pressure_ratio(&model.params, cal, 0.0)?,
    }))
}

fn params_json(model: &SolarModel) -> serde_json::Value {
    json!({
        "delta": model.params.delta,
        "gamma": model.params.gamma,
        "n_exp": model.params.n_exp,
        "m_exp": model.params.m_exp,
        "eps0": model.law().eps0,
        "kappa0": model.opacity.kappa0,
        "truncation": model.truncation_order(),
        "mass": model.calibration.mass_total,
        "radius": model.calibration.radius_total,
        "lsun": model.calibration.luminosity_target,
        "X": model.calibration.hydrogen,
        "Y": model.calibration.helium,
        "Z": model.calibration.metals,
        "mu": model.calibration.mu,
    })
}

pub fn run_profile(config: &CliConfig) -> Result<i32, CliError> {
    let model = build_model(config)?;
    let profile = model.profile(config.points)?;
    let text = match config.format {
        Format::Csv => profile_csv(&profile),
        Format::Json => to_json(&json!({
            "params": params_json(&model),
            "central": central_json(&model)?,
            "profile": profile.rows,
        })),
    };
    emit(config, &text)?;
    Ok(EXIT_OK)
}

pub fn run_center(config: &CliConfig) -> Result<i32, CliError> {
    let model = build_model(config)?;
    let text = to_json(&json!({
        "params": params_json(&model),
        "central": central_json(&model)?,
    }));
    emit(config, &text)?;
    Ok(EXIT_OK)
}

pub fn run_verify(config: &CliConfig) -> Result<i32, CliError> {
    let model = build_model(config)?;
    let grid = uniform_grid(config.points)?;
    let verify = VerifyConfig {
        density_perturbation: config.corrupt_density.unwrap_or(1.0),
        truncation_order: config.truncation,
        ..VerifyConfig::default()
    };
    let report = match verify_model(
        &config.params,
        model.law(),
        &config.calibration,
        &grid,
        &verify,
    ) {
        Ok(r) => r,
        Err(e) => {
            let text = to_json(&json!({
                "params": params_json(&model),
                "central": central_json(&model)?,
                "errors": null,
                "pass": false,
                "diagnostic": e.to_string(),
            }));
            emit(config, &text)?;
            eprintln!("verification failed: {e}");
            return Ok(EXIT_PHYSICS);
        }
    };
    let text = to_json(&json!({
        "params": params_json(&model),
        "central": central_json(&model)?,
        "errors": report.errors,
        "thresholds": report.thresholds,
        "samples": report.samples,
        "integrator_error": report.integrator_error,
        "pass": report.pass,
    }));
    emit(config, &text)?;
    if report.pass {
        Ok(EXIT_OK)
    } else {
        eprintln!("verification failed: deviations exceed thresholds");
        Ok(EXIT_PHYSICS)
    }
}

pub fn run_match(config: &CliConfig) -> Result<i32, CliError> {
    let model = build_model(config)?;
    let found = matching_radius(
        &config.params,
        model.law(),
        &config.calibration,
        &model.opacity,
        config.truncation,
    );
    let m = match found {
        Ok(m) => m,
        Err(ModelError::NoBracket(msg)) => {
            return Err(CliError::Physics(format!(
                "no matching radius: {msg}. Radiative and nuclear luminosities do not cross \
                 on [0.05, 0.95]"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let lsun = config.calibration.luminosity_target;
    let text = to_json(&json!({
        "params": params_json(&model),
        "x_star": m.x,
        "luminosity": m.luminosity,
        "luminosity_radiative": m.luminosity_radiative,
        "l_over_lsun": m.luminosity / lsun,
        "residual": m.residual(),
        "residual_over_lsun": m.residual() / lsun,
        "bisection_steps": m.bisection_steps,
    }));
    emit(config, &text)?;
    Ok(EXIT_OK)
}

/// Outcome of a δ search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCalibration {
    pub delta: f64,
    pub achieved: f64,
    pub iterations: u32,
}

pub const DELTA_RANGE: (f64, f64) = (0.05, 50.0);

fn target_value(target: CalibrationTarget, delta: f64, gamma: u32) -> Result<f64, ModelError> {
    let s = Structure::new(delta, gamma)?;
    Ok(match target {
        CalibrationTarget::DensityRatio(_) => s.density_ratio(),
        CalibrationTarget::TemperatureRatio(_) => s.temperature(0.0),
    })
}

/// Bisection for the δ on `[0.05, 50]` reproducing the target at fixed γ.
pub fn calibrate_delta(
    target: CalibrationTarget,
    gamma: u32,
) -> Result<DeltaCalibration, ModelError> {
    const SCAN: usize = 200;
    let goal = match target {
        CalibrationTarget::DensityRatio(v) | CalibrationTarget::TemperatureRatio(v) => v,
    };
    let (lo, hi) = DELTA_RANGE;
    let ratio = (hi / lo).ln();
    let deltas: Vec<f64> = (0..SCAN)
        .map(|i| {
            if i == SCAN - 1 {
                hi
            } else {
                lo * (ratio * i as f64 / (SCAN - 1) as f64).exp()
            }
        })
        .collect();
    let values = deltas
        .iter()
        .map(|&d| target_value(target, d, gamma).map(|v| v - goal))
        .collect::<Result<Vec<_>, _>>()?;
    let bracket =
        (0..SCAN - 1).find(|&i| values[i] == 0.0 || values[i].signum() != values[i + 1].signum());
    let Some(i) = bracket else {
        let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &values {
            vmin = vmin.min(v + goal);
            vmax = vmax.max(v + goal);
        }
        return Err(ModelError::TargetOutOfRange {
            target: goal,
            lo: vmin,
            hi: vmax,
        });
    };
    let (mut a, mut b, mut fa) = (deltas[i], deltas[i + 1], values[i]);
    let mut iterations = 0;
    if fa != 0.0 {
        while b - a > 1e-13 * b {
            let mid = 0.5 * (a + b);
            let fm = target_value(target, mid, gamma)? - goal;
            iterations += 1;
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
    } else {
        b = a;
    }
    let delta = 0.5 * (a + b);
    Ok(DeltaCalibration {
        delta,
        achieved: target_value(target, delta, gamma)?,
        iterations,
    })
}

pub fn run_calibrate(config: &CliConfig) -> Result<i32, CliError> {
    let target = config
        .target
        .ok_or_else(|| CliError::Usage("calibrate needs a target".into()))?;
    let cal = &config.calibration;
    let (kind, unit) = match target {
        CalibrationTarget::DensityRatio(_) => ("central_density", cal.mean_density()),
        CalibrationTarget::TemperatureRatio(_) => ("central_temperature", cal.temperature_scale()),
    };
    let result = match calibrate_delta(target, config.params.gamma) {
        Ok(r) => r,
        Err(ModelError::TargetOutOfRange { target, lo, hi }) => {
            return Err(CliError::Physics(format!(
                "{kind} target {} outside the achievable range [{}, {}] for gamma = {} and delta in [{}, {}]",
                format_number(target * unit),
                format_number(lo * unit),
                format_number(hi * unit),
                config.params.gamma,
                DELTA_RANGE.0,
                DELTA_RANGE.1,
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let goal = match target {
        CalibrationTarget::DensityRatio(v) | CalibrationTarget::TemperatureRatio(v) => v,
    };
    let text = to_json(&json!({
        "gamma": config.params.gamma,
        "target": kind,
        "target_value": goal * unit,
        "target_ratio": goal,
        "delta": result.delta,
        "achieved": result.achieved * unit,
        "achieved_ratio": result.achieved,
        "iterations": result.iterations,
    }));
    emit(config, &text)?;
    Ok(EXIT_OK)
}

pub fn run(config: &CliConfig) -> Result<i32, CliError> {
    match config.subcommand {
        SubcommandKind::Profile => run_profile(config),
        SubcommandKind::Center => run_center(config),
        SubcommandKind::Verify => run_verify(config),
        SubcommandKind::Match => run_match(config),
        SubcommandKind::Calibrate => run_calibrate(config),
    }
}

/// Parse, run, report errors on stderr, and return the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let outcome = parse_args(argv).and_then(|c| run(&c));
    match outcome {
        Ok(code) => code,
        Err(CliError::Info(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<CliConfig, CliError> {
        parse_args(std::iter::once("solarmodel").chain(args.iter().copied()))
    }

    #[test]
    fn defaults_are_filled() {
        let c = parse(&["profile", "--delta", "3", "--gamma", "1", "--points", "201"]).unwrap();
        assert_eq!(c.subcommand, SubcommandKind::Profile);
        assert_eq!(c.params, ModelParams::default());
        assert_eq!(c.points, 201);
        assert_eq!(c.eps0, Solvable::Solve);
        assert_eq!(c.kappa0, Solvable::Solve);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.truncation, None);
        assert_eq!(c.calibration, SolarCalibration::solar());
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["profile", "--gamma", "1.5"][..],
            &["verify", "--delta", "0"],
            &["profile", "--gamma", "0"],
            &["profile", "--bogus"],
            &["profile", "--points", "1"],
            &["profile", "--X", "0.5"],
            &["profile", "--n-exp", "5"],
            &["profile", "--eps0", "-3"],
            &["calibrate"],
            &["frobnicate"],
        ] {
            let err = parse(args).unwrap_err();
            assert_eq!(err.exit_code(), EXIT_USAGE, "{args:?}: {err}");
        }
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(parse(&["--help"]).unwrap_err().exit_code(), EXIT_OK);
    }

    #[test]
    fn solvable_parsing() {
        assert_eq!("solve".parse::<Solvable>().unwrap(), Solvable::Solve);
        assert_eq!(
            "2.5e-3".parse::<Solvable>().unwrap(),
            Solvable::Value(2.5e-3)
        );
        assert!("0".parse::<Solvable>().is_err());
        assert!("abc".parse::<Solvable>().is_err());
    }

    #[test]
    fn number_formatting_round_trips() {
        for v in [
            0.0, 1.0, 0.5, 1.98892e30, 6.9598e8, 1e-7, 0.234375, 123456.789, -2.5e-12,
        ] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_number(1.98892e30), "1.98892e30");
        assert_eq!(format_number(0.25), "0.25");
    }

    #[test]
    fn calibrate_inverts_density_ratio() {
        let r = calibrate_delta(CalibrationTarget::DensityRatio(2.0), 1).unwrap();
        assert!((r.delta - 3.0).abs() < 1e-8);
        let r = calibrate_delta(CalibrationTarget::DensityRatio(4.0), 1).unwrap();
        assert!((r.delta - 1.0).abs() < 1e-8);
        assert!(matches!(
            calibrate_delta(CalibrationTarget::DensityRatio(0.5), 1),
            Err(ModelError::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn calibrate_inverts_temperature() {
        let r = calibrate_delta(CalibrationTarget::TemperatureRatio(0.525), 1).unwrap();
        assert!((r.delta - 3.0).abs() < 1e-8, "{r:?}");
    }
}
