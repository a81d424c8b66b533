//! Command-line front end: model selection, scans, closed-form vs numeric
//! comparisons, and CSV/JSON emission.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use loschmidt::scan::{scan_dynamics, scan_uhlmann, GridAxis, Metadata};
use loschmidt::PhaseDiagram64;

use loschmidt_cli::config::{
    parse_axis, parse_param, validate, CliError, CommandKind, EvalMode, ModelKind, OutputFormat,
    RunConfig,
};
use loschmidt_cli::evaluate::{self, ScanKind};
use loschmidt_cli::{emit, verify};

/// Loschmidt amplitudes of purified mixed states: quasistatic and quench
/// dynamics, Uhlmann holonomies, and phase-diagram scans.
///
/// Angles are radians (e.g. Theta=1.0471975511965976 for pi/3). Temperatures
/// use k_B = 1 and times hbar = 1.
#[derive(Parser)]
#[command(name = "loschmidt", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Loschmidt amplitude of a quasistatic process over t (or T x t)
    Quasistatic(RunArgs),
    /// Loschmidt amplitude after a sudden quench over t (or T x t)
    Quench(RunArgs),
    /// Uhlmann amplitude and phase over T (or T x m|Theta for creutz)
    Uhlmann(RunArgs),
    /// Two-axis phase-diagram scan (creutz: T x m|Theta; levels: T x t)
    Scan(RunArgs),
    /// Closed-form vs numeric comparison report for one model
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Model: two-level | three-level | creutz
    #[arg(long)]
    model: Option<String>,
    /// Model parameter key=value; repeatable (two-level: Rx,Ry,Rz,beta;
    /// three-level: R,theta,phi,beta; creutz: m,Theta,k_points)
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Grid axis `name:min:max:n[:log]`; repeatable, at most two
    #[arg(long = "axis", value_name = "NAME:MIN:MAX:N[:log]")]
    axes: Vec<String>,
    /// Discretization steps for numeric holonomies
    #[arg(long, default_value_t = 1024)]
    steps: usize,
    /// Output path (default diagram.csv / diagram.json)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Cell evaluation: closed-form | numeric | both (closed-form cells plus
    /// a numeric cross-check on a sparse subsample)
    #[arg(long, default_value = "both")]
    mode: String,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                std::process::exit(0);
            }
            eprint!("{err}");
            std::process::exit(2);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, args) = match cli.command {
        Command::Quasistatic(args) => (CommandKind::Quasistatic, args),
        Command::Quench(args) => (CommandKind::Quench, args),
        Command::Uhlmann(args) => (CommandKind::Uhlmann, args),
        Command::Scan(args) => (CommandKind::Scan, args),
        Command::Verify(args) => (CommandKind::Verify, args),
    };
    let config = build_config(command, args)?;
    validate(&config)?;
    match config.command {
        CommandKind::Verify => verify::run(&config),
        _ => {
            let diagram = execute_scan(&config)?;
            let path = emit::write(&diagram, &config)?;
            println!(
                "wrote {} ({} cells, {} criticals)",
                path.display(),
                diagram.cells.len(),
                diagram.criticals.len()
            );
            Ok(())
        }
    }
}

fn build_config(command: CommandKind, args: RunArgs) -> Result<RunConfig, CliError> {
    let model = match args.model {
        Some(name) => ModelKind::parse(&name)?,
        None => return Err(CliError::Usage("--model is required".into())),
    };
    let mut params = BTreeMap::new();
    for raw in &args.params {
        let (key, value) = parse_param(raw)?;
        params.insert(key, value);
    }
    let axes: Vec<GridAxis<f64>> =
        args.axes.iter().map(|raw| parse_axis(raw)).collect::<Result<_, _>>()?;
    if axes.len() > 2 {
        return Err(CliError::Usage("at most two --axis options are supported".into()));
    }
    if args.steps < 64 {
        return Err(CliError::Usage("--steps must be at least 64".into()));
    }
    Ok(RunConfig {
        command,
        model,
        params,
        axes,
        n_steps: args.steps,
        out_path: args.out,
        format: OutputFormat::parse(&args.format)?,
        mode: EvalMode::parse(&args.mode)?,
    })
}

fn execute_scan(config: &RunConfig) -> Result<PhaseDiagram64, CliError> {
    if config.axes.is_empty() {
        return Err(CliError::Usage(format!(
            "command {} needs at least one --axis",
            config.command.name()
        )));
    }
    let evaluators = evaluate::build(config)?;
    let axis1 = config.axes[0].clone();
    let axis2 = config.axes.get(1).cloned();

    let mut metadata = Metadata::new(
        config.model.name(),
        config.params.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        config.n_steps,
    );
    metadata.mode = config.mode.name().into();

    let cell_eval: &evaluate::Evaluator = match config.mode {
        EvalMode::Numeric => &evaluators.numeric,
        EvalMode::ClosedForm | EvalMode::Both => &evaluators.closed,
    };
    let diagram = match evaluators.kind {
        ScanKind::Dynamics => scan_dynamics(cell_eval, axis1, axis2, metadata),
        ScanKind::Uhlmann => scan_uhlmann(cell_eval, axis1, axis2, metadata),
    };

    if config.mode == EvalMode::Both {
        cross_check(&evaluators, &diagram)?;
    }
    Ok(diagram)
}

/// `both` mode: evaluate the numeric pipeline on a sparse, deterministic
/// subsample of cells and demand agreement with the emitted closed forms.
fn cross_check(
    evaluators: &evaluate::Evaluators,
    diagram: &PhaseDiagram64,
) -> Result<(), CliError> {
    let stride = |n: usize| (n / 7).max(1);
    let (n1, n2) = (diagram.n1(), diagram.n2());
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    let mut i1 = 0;
    while i1 < n1 {
        let mut i2 = 0;
        while i2 < n2 {
            let cell = diagram.cell(i1, i2);
            let numeric = (evaluators.numeric)(cell.x1, cell.x2);
            worst = worst.max((numeric - cell.g).norm());
            checked += 1;
            i2 += stride(n2);
        }
        i1 += stride(n1);
    }
    println!(
        "cross-check: max closed-form vs numeric deviation {worst:.3e} over {checked} cells (tol {:.1e})",
        evaluators.check_tol
    );
    if worst > evaluators.check_tol {
        return Err(CliError::Verify(format!(
            "closed-form vs numeric deviation {worst:.3e} exceeds {:.1e}",
            evaluators.check_tol
        )));
    }
    Ok(())
}
