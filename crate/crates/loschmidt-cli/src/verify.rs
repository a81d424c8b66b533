//! Closed-form vs numeric comparison reports.
//!
//! Each check sweeps a documented parameter grid, prints the worst absolute
//! deviation against its tolerance, and the command exits nonzero naming the
//! first failing quantity.

use loschmidt::dynamics::loschmidt_amplitude;
use loschmidt::matrix::pauli_dot;
use loschmidt::models::{
    critical_temperature_analytic, three_level_quasistatic_g, three_level_quench_g,
    three_level_uhlmann_closed_form, three_level_uhlmann_path, two_band_uhlmann_closed_form,
    two_level_quasistatic_g, two_level_quench_thermal_density, two_level_quench_thermal_g,
    CreutzSpec, CriticalKind, ThreeLevelSpec, TwoLevelSpec,
};
use loschmidt::uhlmann::uhlmann_loschmidt;
use loschmidt::C64;

use crate::config::{CliError, ModelKind, RunConfig};

const TRACE_TOL: f64 = 1e-12;
const HOLONOMY_TOL: f64 = 1e-6;

struct Report {
    failed: Option<String>,
}

impl Report {
    fn new() -> Self {
        Self { failed: None }
    }

    fn record(&mut self, quantity: &str, deviation: f64, tolerance: f64) {
        let status = if deviation <= tolerance { "ok" } else { "FAIL" };
        println!("{quantity:<44} max dev {deviation:10.3e}   tol {tolerance:7.1e}   {status}");
        if deviation > tolerance && self.failed.is_none() {
            self.failed = Some(quantity.to_string());
        }
    }

    fn finish(self) -> Result<(), CliError> {
        match self.failed {
            None => Ok(()),
            Some(quantity) => Err(CliError::Verify(quantity)),
        }
    }
}

fn time_grid() -> Vec<f64> {
    (0..17).map(|k| 0.5 * k as f64).collect()
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    println!(
        "verify: model {} (n_steps = {})",
        config.model.name(),
        config.n_steps
    );
    match config.model {
        ModelKind::TwoLevel => verify_two_level(config),
        ModelKind::ThreeLevel => verify_three_level(config),
        ModelKind::Creutz => verify_creutz(config),
    }
}

fn verify_two_level(config: &RunConfig) -> Result<(), CliError> {
    let r_vec = [config.param("Rx")?, config.param("Ry")?, config.param("Rz")?];
    let beta0 = config.param("beta")?;
    let e = config.param_or("E", 1.0);
    TwoLevelSpec::new(r_vec, beta0).map_err(CliError::from)?;
    let mut report = Report::new();

    let mut worst_qs: f64 = 0.0;
    let mut worst_quench: f64 = 0.0;
    for &beta in &[0.0, 0.5, 1.0, 2.0, beta0] {
        let spec = TwoLevelSpec { r_vec, beta };
        let rho_quench = two_level_quench_thermal_density(e, beta).map_err(CliError::from)?;
        for &t in &time_grid() {
            let closed = two_level_quasistatic_g(&spec, t);
            let numeric =
                loschmidt_amplitude(&spec.density(), &spec.hamiltonian(), t).map_err(CliError::from)?;
            worst_qs = worst_qs.max((closed - numeric).norm());

            let closed = two_level_quench_thermal_g(e, beta, r_vec, t).map_err(CliError::from)?;
            let numeric =
                loschmidt_amplitude(&rho_quench, &pauli_dot(r_vec), t).map_err(CliError::from)?;
            worst_quench = worst_quench.max((closed - numeric).norm());
        }
    }
    report.record("two-level quasistatic closed form vs trace", worst_qs, TRACE_TOL);
    report.record("two-level thermal quench closed form vs trace", worst_quench, TRACE_TOL);
    report.finish()
}

fn verify_three_level(config: &RunConfig) -> Result<(), CliError> {
    let spec0 = ThreeLevelSpec::new(
        config.param("R")?,
        config.param("theta")?,
        config.param("phi")?,
        config.param("beta")?,
    )
    .map_err(CliError::from)?;
    let mut report = Report::new();

    let mut worst_qs: f64 = 0.0;
    let mut worst_quench: f64 = 0.0;
    for &beta in &[0.0, 0.5, 1.0, 2.0, spec0.beta] {
        let spec = ThreeLevelSpec { beta, ..spec0 };
        for &t in &time_grid() {
            let closed = three_level_quasistatic_g(&spec, t);
            let numeric = loschmidt_amplitude(&spec.initial_density(), &spec.initial_hamiltonian(), t)
                .map_err(CliError::from)?;
            worst_qs = worst_qs.max((closed - numeric).norm());

            let closed = three_level_quench_g(&spec, t);
            let numeric = loschmidt_amplitude(&spec.initial_density(), &spec.quench_hamiltonian(), t)
                .map_err(CliError::from)?;
            worst_quench = worst_quench.max((closed - numeric).norm());
        }
    }
    report.record("three-level quasistatic closed form vs trace", worst_qs, TRACE_TOL);
    report.record("three-level quench closed form vs trace", worst_quench, TRACE_TOL);

    // analytic critical temperatures; theta outside [0, pi/2) is a domain error
    let t_q = critical_temperature_analytic(CriticalKind::ThreeLevelQuasistatic, spec0.r, 0.0)
        .map_err(CliError::from)?;
    let t_h = critical_temperature_analytic(CriticalKind::ThreeLevelQuench, spec0.r, spec0.theta)
        .map_err(CliError::from)?;
    println!("three-level critical temperatures: T_q = {t_q:.6}, T_h = {t_h:.6}");

    let mut worst_uhlmann: f64 = 0.0;
    for &beta_r in &[0.5, 1.0, 2.0] {
        let beta = beta_r / spec0.r;
        let closed = three_level_uhlmann_closed_form(spec0.r, beta);
        let numeric = uhlmann_loschmidt(&three_level_uhlmann_path(spec0.r, beta, config.n_steps))
            .map_err(CliError::from)?;
        worst_uhlmann = worst_uhlmann.max((numeric - C64::new(closed, 0.0)).norm());
    }
    report.record(
        "three-level Uhlmann closed form vs holonomy",
        worst_uhlmann,
        HOLONOMY_TOL,
    );
    report.finish()
}

fn verify_creutz(config: &RunConfig) -> Result<(), CliError> {
    let spec = crate::evaluate::creutz_spec(config)?;
    let mut report = Report::new();

    let mut worst: f64 = 0.0;
    for &temperature in &[0.3, 0.5, 1.0] {
        let closed = two_band_uhlmann_closed_form(&spec, temperature).map_err(CliError::from)?;
        let numeric = uhlmann_loschmidt(&spec.uhlmann_path(temperature, config.n_steps))
            .map_err(CliError::from)?;
        worst = worst.max((numeric - C64::new(closed, 0.0)).norm());
    }
    report.record("two-band Uhlmann closed form vs holonomy", worst, HOLONOMY_TOL);

    let coarse = CreutzSpec::new(spec.m, spec.theta_flux, 256).map_err(CliError::from)?;
    let winding_fine = spec.winding().map_err(CliError::from)?;
    let winding_coarse = coarse.winding().map_err(CliError::from)?;
    let dev = (winding_fine - winding_coarse).abs() as f64;
    report.record("winding number grid invariance", dev, 0.5);
    println!("winding number = {winding_fine}");
    report.finish()
}
