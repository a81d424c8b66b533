//! Run configuration: models, parameters, axes, and the exit-code contract.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use loschmidt::scan::{AxisScale, GridAxis};

/// Exit codes: 0 success, 1 verification failure, 2 usage, 3 domain, 4 I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verify(String),
    Domain(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Verify(msg) => write!(f, "verification failed: {msg}"),
            CliError::Domain(msg) => write!(f, "domain error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<loschmidt::Error> for CliError {
    fn from(e: loschmidt::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Quasistatic,
    Quench,
    Uhlmann,
    Scan,
    Verify,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Quasistatic => "quasistatic",
            CommandKind::Quench => "quench",
            CommandKind::Uhlmann => "uhlmann",
            CommandKind::Scan => "scan",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    TwoLevel,
    ThreeLevel,
    Creutz,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "two-level" => Ok(ModelKind::TwoLevel),
            "three-level" => Ok(ModelKind::ThreeLevel),
            "creutz" => Ok(ModelKind::Creutz),
            other => Err(CliError::Usage(format!(
                "unknown model '{other}' (expected two-level, three-level, or creutz)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::TwoLevel => "two-level",
            ModelKind::ThreeLevel => "three-level",
            ModelKind::Creutz => "creutz",
        }
    }

    pub fn required_params(&self) -> &'static [&'static str] {
        match self {
            ModelKind::TwoLevel => &["Rx", "Ry", "Rz", "beta"],
            ModelKind::ThreeLevel => &["R", "theta", "phi", "beta"],
            ModelKind::Creutz => &["m", "Theta"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Usage(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    ClosedForm,
    Numeric,
    Both,
}

impl EvalMode {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "closed-form" => Ok(EvalMode::ClosedForm),
            "numeric" => Ok(EvalMode::Numeric),
            "both" => Ok(EvalMode::Both),
            other => Err(CliError::Usage(format!(
                "unknown mode '{other}' (expected closed-form, numeric, or both)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::ClosedForm => "closed-form",
            EvalMode::Numeric => "numeric",
            EvalMode::Both => "both",
        }
    }
}

/// Fully validated run description.
#[derive(Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub model: ModelKind,
    pub params: BTreeMap<String, f64>,
    pub axes: Vec<GridAxis<f64>>,
    pub n_steps: usize,
    pub out_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub mode: EvalMode,
}

impl RunConfig {
    pub fn param(&self, name: &str) -> Result<f64, CliError> {
        self.params.get(name).copied().ok_or_else(|| {
            CliError::Usage(format!(
                "model {} requires --param {name}=<value>",
                self.model.name()
            ))
        })
    }

    pub fn param_or(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    pub fn resolved_out_path(&self) -> PathBuf {
        self.out_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("diagram.{}", self.format.extension())))
    }
}

/// Parses one `key=value` parameter.
pub fn parse_param(raw: &str) -> Result<(String, f64), CliError> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--param '{raw}' is not of the form key=value")))?;
    if key.is_empty() {
        return Err(CliError::Usage(format!("--param '{raw}' has an empty key")));
    }
    let value: f64 = value
        .parse()
        .map_err(|_| CliError::Usage(format!("--param '{raw}' has a non-numeric value")))?;
    if !value.is_finite() {
        return Err(CliError::Usage(format!("--param '{raw}' must be finite")));
    }
    Ok((key.to_string(), value))
}

/// Parses one `name:min:max:n[:log]` axis description.
pub fn parse_axis(raw: &str) -> Result<GridAxis<f64>, CliError> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 4 && parts.len() != 5 {
        return Err(CliError::Usage(format!(
            "--axis '{raw}' is not of the form name:min:max:n[:log]"
        )));
    }
    let name = parts[0];
    if name.is_empty() {
        return Err(CliError::Usage(format!("--axis '{raw}' has an empty name")));
    }
    let min: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("--axis '{raw}': bad min '{}'", parts[1])))?;
    let max: f64 = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("--axis '{raw}': bad max '{}'", parts[2])))?;
    let n: usize = parts[3]
        .parse()
        .map_err(|_| CliError::Usage(format!("--axis '{raw}': bad point count '{}'", parts[3])))?;
    let scale = if parts.len() == 5 {
        if parts[4] != "log" {
            return Err(CliError::Usage(format!(
                "--axis '{raw}': unknown scale '{}' (only 'log')",
                parts[4]
            )));
        }
        AxisScale::Log
    } else {
        AxisScale::Linear
    };
    GridAxis::new(name, min, max, n, scale)
        .map_err(|e| CliError::Usage(format!("--axis '{raw}': {e}")))
}

/// Validates command/model/axis compatibility and required parameters.
pub fn validate(config: &RunConfig) -> Result<(), CliError> {
    for name in config.model.required_params() {
        if !config.params.contains_key(*name) {
            return Err(CliError::Usage(format!(
                "model {} requires --param {name}=<value>",
                config.model.name()
            )));
        }
    }
    let axis_names: Vec<&str> = config.axes.iter().map(|a| a.name.as_str()).collect();
    let expect = |ok: bool, what: &str| -> Result<(), CliError> {
        if ok {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "command {} with model {} needs axes {what}, got [{}]",
                config.command.name(),
                config.model.name(),
                axis_names.join(", ")
            )))
        }
    };
    match config.command {
        CommandKind::Verify => expect(config.axes.is_empty(), "none"),
        CommandKind::Quasistatic | CommandKind::Quench => {
            if config.model == ModelKind::Creutz {
                return Err(CliError::Domain(
                    "the creutz model supports the uhlmann and scan commands only".into(),
                ));
            }
            match axis_names.as_slice() {
                ["t"] => Ok(()),
                ["T", "t"] => check_temperature_axis(&config.axes[0]),
                _ => expect(false, "[t] or [T, t]"),
            }
        }
        CommandKind::Uhlmann => match (config.model, axis_names.as_slice()) {
            (ModelKind::Creutz, ["T"]) => check_temperature_axis(&config.axes[0]),
            (ModelKind::Creutz, ["T", "m" | "Theta"]) => check_temperature_axis(&config.axes[0]),
            (ModelKind::ThreeLevel, ["T"]) => check_temperature_axis(&config.axes[0]),
            (ModelKind::TwoLevel, _) => Err(CliError::Domain(
                "the plain two-level model has no cyclic parameter; use the creutz model".into(),
            )),
            _ => expect(false, "[T] (or [T, m|Theta] for creutz)"),
        },
        CommandKind::Scan => match (config.model, axis_names.as_slice()) {
            (ModelKind::Creutz, ["T", "m" | "Theta"]) => check_temperature_axis(&config.axes[0]),
            (ModelKind::TwoLevel | ModelKind::ThreeLevel, ["T", "t"]) => {
                check_temperature_axis(&config.axes[0])
            }
            _ => expect(false, "[T, m|Theta] for creutz or [T, t] for level models"),
        },
    }
}

fn check_temperature_axis(axis: &GridAxis<f64>) -> Result<(), CliError> {
    if axis.min <= 0.0 {
        return Err(CliError::Usage(
            "temperature axis must start above zero (states must stay full rank)".into(),
        ));
    }
    Ok(())
}
