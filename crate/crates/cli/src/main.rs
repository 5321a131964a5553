use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod params;

use params::Params;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl From<ybe_entangle::Error> for CliError {
    fn from(e: ybe_entangle::Error) -> Self {
        match e {
            ybe_entangle::Error::InvalidInput(msg) => CliError::Input(msg),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ybe", version, about = "Three-body Yang-Baxter entanglement toolkit")]
struct Cli {
    /// Write the command's artifact (CSV, or JSON when there is no table) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the tolerance of residual checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomly sampled suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file with default parameters; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct BetaArgs {
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_cos: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_sin: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct ChartArgs {
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    #[command(flatten)]
    beta: BetaArgs,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run invariant suites and report per-check residuals.
    Verify {
        /// ybe, chart, spectrum, berry, jw, zeromode or all.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        beta_grid: Option<usize>,
        /// Berry suite angle; repeat for several.
        #[arg(long, allow_hyphen_values = true)]
        eta: Vec<f64>,
    },
    /// The eight generated three-qubit states.
    States {
        #[command(flatten)]
        chart: ChartArgs,
    },
    /// Concurrence triple, class and polytope coordinates.
    Concurrence {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, allow_hyphen_values = true)]
        theta1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta3: Option<f64>,
    },
    /// Spectrum and eigenprojectors of the three-body Hamiltonian.
    Spectrum {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, allow_hyphen_values = true)]
        rate: Option<f64>,
    },
    /// Loop phases of the nonzero bands.
    Berry {
        #[command(flatten)]
        chart: ChartArgs,
        /// plus, minus or both.
        #[arg(long)]
        band: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Root moduli of the zero-mode cubic over beta.
    Fig1 {
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Zero-mode verdict at one beta or over a grid.
    Zeromode {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        beta_grid: Option<usize>,
    },
    /// Entanglement transfer surface and its maximum.
    Transfer {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        beta: BetaArgs,
        /// Single phase; otherwise a grid from --theta-min to --theta-max.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta_max: Option<f64>,
        #[arg(long)]
        theta_steps: Option<usize>,
        #[arg(long)]
        m1: Option<usize>,
        #[arg(long)]
        m2: Option<usize>,
        #[arg(long)]
        l1: Option<usize>,
        #[arg(long)]
        l2: Option<usize>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
    },
}

impl BetaArgs {
    fn into_params(self, p: Params) -> Params {
        Params { beta: self.beta, beta_cos: self.beta_cos, beta_sin: self.beta_sin, ..p }
    }
}

impl ChartArgs {
    fn into_params(self, p: Params) -> Params {
        let p = self.beta.into_params(p);
        Params { eta: self.eta, phi: self.phi, ..p }
    }
}

fn flag_params(cli: &Cli, command: Command) -> (commands::Kind, Params) {
    use commands::Kind;
    let base = Params {
        out: cli.out.clone(),
        tol: cli.tol,
        seed: cli.seed,
        json: cli.json.then_some(true),
        ..Default::default()
    };
    match command {
        Command::Verify { suite, samples, beta_grid, eta } => (
            Kind::Verify,
            Params { suite, samples, beta_grid, etas: (!eta.is_empty()).then_some(eta), ..base },
        ),
        Command::States { chart } => (Kind::States, chart.into_params(base)),
        Command::Concurrence { chart, theta1, theta3 } => {
            (Kind::Concurrence, Params { theta1, theta3, ..chart.into_params(base) })
        }
        Command::Spectrum { chart, rate } => (Kind::Spectrum, Params { rate, ..chart.into_params(base) }),
        Command::Berry { chart, band, steps } => (Kind::Berry, Params { band, steps, ..chart.into_params(base) }),
        Command::Fig1 { grid } => (Kind::Fig1, Params { grid, ..base }),
        Command::Zeromode { beta, beta_grid } => (Kind::Zeromode, Params { beta_grid, ..beta.into_params(base) }),
        Command::Transfer { n, beta, theta, theta_min, theta_max, theta_steps, m1, m2, l1, l2, t_max, dt } => (
            Kind::Transfer,
            Params {
                n,
                theta,
                theta_min,
                theta_max,
                theta_steps,
                m1,
                m2,
                l1,
                l2,
                t_max,
                dt,
                ..beta.into_params(base)
            },
        ),
    }
}

fn run(mut cli: Cli) -> Result<bool, CliError> {
    let command = std::mem::replace(&mut cli.command, Command::Fig1 { grid: None });
    let (kind, flags) = flag_params(&cli, command);
    let params = match &cli.config {
        Some(path) => flags.over(Params::from_file(path)?),
        None => flags,
    };
    params.validate()?;
    let output = commands::execute(kind, &params)?;

    if params.json.unwrap_or(false) {
        let text = serde_json::to_string_pretty(&output.report)
            .map_err(|e| CliError::Failed(format!("cannot encode report: {e}")))?;
        println!("{text}");
    } else {
        print!("{}", output.summary);
    }
    if let Some(path) = &params.out {
        let body = match &output.csv {
            Some(csv) => csv.clone(),
            None => serde_json::to_string_pretty(&output.report)
                .map(|s| s + "\n")
                .map_err(|e| CliError::Failed(format!("cannot encode report: {e}")))?,
        };
        std::fs::write(path, body)
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(output.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ybe: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
