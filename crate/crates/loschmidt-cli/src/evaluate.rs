//! Closed-form and numeric amplitude evaluators per command and model.

use loschmidt::dynamics::loschmidt_amplitude;
use loschmidt::matrix::pauli_dot;
use loschmidt::models::{
    three_level_quasistatic_g, three_level_quench_g, three_level_uhlmann_closed_form,
    three_level_uhlmann_path, two_band_uhlmann_closed_form, two_level_quasistatic_g,
    two_level_quench_thermal_density, two_level_quench_thermal_g, CreutzSpec, ThreeLevelSpec,
    TwoLevelSpec,
};
use loschmidt::uhlmann::uhlmann_loschmidt;
use loschmidt::C64;

use crate::config::{CliError, CommandKind, ModelKind, RunConfig};

pub type Evaluator = Box<dyn Fn(f64, f64) -> C64 + Sync>;

/// What kind of scan the evaluator feeds, which decides rate semantics,
/// phase snapping, and critical-set refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanKind {
    Dynamics,
    Uhlmann,
}

pub struct Evaluators {
    pub kind: ScanKind,
    pub closed: Evaluator,
    pub numeric: Evaluator,
    /// Tolerance for closed-form vs numeric cross-checks in `both` mode.
    pub check_tol: f64,
}

/// Whether the run sweeps temperature on the first axis (otherwise `beta`
/// comes from the parameters).
fn sweeps_temperature(config: &RunConfig) -> bool {
    config.axes.first().map(|a| a.name == "T").unwrap_or(false)
}

pub fn build(config: &RunConfig) -> Result<Evaluators, CliError> {
    let command = match (config.command, config.model) {
        // a scan over (T, t) of a level model is its quench process
        (CommandKind::Scan, ModelKind::TwoLevel | ModelKind::ThreeLevel) => CommandKind::Quench,
        (command, _) => command,
    };
    match (command, config.model) {
        (CommandKind::Quasistatic, ModelKind::TwoLevel) => {
            let r_vec = [config.param("Rx")?, config.param("Ry")?, config.param("Rz")?];
            let beta = config.param("beta")?;
            let swept = sweeps_temperature(config);
            TwoLevelSpec::new(r_vec, beta).map_err(CliError::from)?;
            let closed = move |x1: f64, x2: f64| {
                let (beta, t) = if swept { (1.0 / x1, x2) } else { (beta, x1) };
                two_level_quasistatic_g(&TwoLevelSpec { r_vec, beta }, t)
            };
            let numeric = move |x1: f64, x2: f64| {
                let (beta, t) = if swept { (1.0 / x1, x2) } else { (beta, x1) };
                let spec = TwoLevelSpec { r_vec, beta };
                loschmidt_amplitude(&spec.density(), &spec.hamiltonian(), t)
                    .expect("two-level Hamiltonian is Hermitian")
            };
            Ok(Evaluators {
                kind: ScanKind::Dynamics,
                closed: Box::new(closed),
                numeric: Box::new(numeric),
                check_tol: 1e-8,
            })
        }
        (CommandKind::Quasistatic, ModelKind::ThreeLevel) => {
            let spec0 = three_level_spec(config)?;
            let swept = sweeps_temperature(config);
            let closed = move |x1: f64, x2: f64| {
                let (spec, t) = resolve_three_level(spec0, swept, x1, x2);
                three_level_quasistatic_g(&spec, t)
            };
            let numeric = move |x1: f64, x2: f64| {
                let (spec, t) = resolve_three_level(spec0, swept, x1, x2);
                loschmidt_amplitude(&spec.initial_density(), &spec.initial_hamiltonian(), t)
                    .expect("diagonal Hamiltonian is Hermitian")
            };
            Ok(Evaluators {
                kind: ScanKind::Dynamics,
                closed: Box::new(closed),
                numeric: Box::new(numeric),
                check_tol: 1e-8,
            })
        }
        (CommandKind::Quench, ModelKind::TwoLevel) => {
            let r_vec = [config.param("Rx")?, config.param("Ry")?, config.param("Rz")?];
            let beta = config.param("beta")?;
            let e = config.param_or("E", 1.0);
            let swept = sweeps_temperature(config);
            TwoLevelSpec::new(r_vec, beta).map_err(CliError::from)?;
            let closed = move |x1: f64, x2: f64| {
                let (beta, t) = if swept { (1.0 / x1, x2) } else { (beta, x1) };
                two_level_quench_thermal_g(e, beta, r_vec, t)
                    .expect("field vector validated nonzero")
            };
            let numeric = move |x1: f64, x2: f64| {
                let (beta, t) = if swept { (1.0 / x1, x2) } else { (beta, x1) };
                let rho0 =
                    two_level_quench_thermal_density(e, beta).expect("beta is nonnegative");
                loschmidt_amplitude(&rho0, &pauli_dot(r_vec), t)
                    .expect("two-level Hamiltonian is Hermitian")
            };
            Ok(Evaluators {
                kind: ScanKind::Dynamics,
                closed: Box::new(closed),
                numeric: Box::new(numeric),
                check_tol: 1e-8,
            })
        }
        (CommandKind::Quench, ModelKind::ThreeLevel) => {
            let spec0 = three_level_spec(config)?;
            let swept = sweeps_temperature(config);
            let closed = move |x1: f64, x2: f64| {
                let (spec, t) = resolve_three_level(spec0, swept, x1, x2);
                three_level_quench_g(&spec, t)
            };
            let numeric = move |x1: f64, x2: f64| {
                let (spec, t) = resolve_three_level(spec0, swept, x1, x2);
                loschmidt_amplitude(&spec.initial_density(), &spec.quench_hamiltonian(), t)
                    .expect("quench Hamiltonian is Hermitian")
            };
            Ok(Evaluators {
                kind: ScanKind::Dynamics,
                closed: Box::new(closed),
                numeric: Box::new(numeric),
                check_tol: 1e-8,
            })
        }
        (CommandKind::Uhlmann | CommandKind::Scan, ModelKind::Creutz) => {
            let spec0 = creutz_spec(config)?;
            let swept_param = config.axes.get(1).map(|a| a.name.clone());
            let n_steps = config.n_steps;
            let resolve = move |x2: f64| -> Result<CreutzSpec<f64>, loschmidt::Error> {
                match swept_param.as_deref() {
                    Some("m") => CreutzSpec::new(x2, spec0.theta_flux, spec0.k_points),
                    Some("Theta") => CreutzSpec::new(spec0.m, x2, spec0.k_points),
                    _ => Ok(spec0),
                }
            };
            let resolve_numeric = resolve.clone();
            let closed = move |x1: f64, x2: f64| {
                let g = resolve(x2)
                    .and_then(|spec| two_band_uhlmann_closed_form(&spec, x1))
                    .unwrap_or(f64::NAN);
                C64::new(g, 0.0)
            };
            let numeric = move |x1: f64, x2: f64| {
                resolve_numeric(x2)
                    .and_then(|spec| uhlmann_loschmidt(&spec.uhlmann_path(x1, n_steps)))
                    .unwrap_or(C64::new(f64::NAN, f64::NAN))
            };
            Ok(Evaluators {
                kind: ScanKind::Uhlmann,
                closed: Box::new(closed),
                numeric: Box::new(numeric),
                check_tol: 1e-6,
            })
        }
        (CommandKind::Uhlmann, ModelKind::ThreeLevel) => {
            let spec0 = three_level_spec(config)?;
            let n_steps = config.n_steps;
            let r = spec0.r;
            let closed = move |x1: f64, _x2: f64| {
                C64::new(three_level_uhlmann_closed_form(r, 1.0 / x1), 0.0)
            };
            let numeric = move |x1: f64, _x2: f64| {
                uhlmann_loschmidt(&three_level_uhlmann_path(r, 1.0 / x1, n_steps))
                    .unwrap_or(C64::new(f64::NAN, f64::NAN))
            };
            Ok(Evaluators {
                kind: ScanKind::Uhlmann,
                closed: Box::new(closed),
                numeric: Box::new(numeric),
                check_tol: 1e-6,
            })
        }
        (CommandKind::Uhlmann, ModelKind::TwoLevel) => Err(CliError::Domain(
            "the plain two-level model has no cyclic parameter; use the creutz model".into(),
        )),
        (CommandKind::Quasistatic | CommandKind::Quench, ModelKind::Creutz) => {
            Err(CliError::Domain(
                "the creutz model supports the uhlmann and scan commands only".into(),
            ))
        }
        (CommandKind::Verify | CommandKind::Scan, _) => Err(CliError::Usage(
            "no evaluator for this command".into(),
        )),
    }
}

fn three_level_spec(config: &RunConfig) -> Result<ThreeLevelSpec<f64>, CliError> {
    ThreeLevelSpec::new(
        config.param("R")?,
        config.param("theta")?,
        config.param("phi")?,
        config.param("beta")?,
    )
    .map_err(CliError::from)
}

fn resolve_three_level(
    spec0: ThreeLevelSpec<f64>,
    swept: bool,
    x1: f64,
    x2: f64,
) -> (ThreeLevelSpec<f64>, f64) {
    if swept {
        (ThreeLevelSpec { beta: 1.0 / x1, ..spec0 }, x2)
    } else {
        (spec0, x1)
    }
}

pub fn creutz_spec(config: &RunConfig) -> Result<CreutzSpec<f64>, CliError> {
    let k_points = config.param_or("k_points", 1024.0) as usize;
    CreutzSpec::new(config.param("m")?, config.param("Theta")?, k_points).map_err(CliError::from)
}
