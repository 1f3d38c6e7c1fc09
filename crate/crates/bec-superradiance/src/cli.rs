//! Command-line interface: thin argument handling over [`crate::sweep`].
//!
//! Flags override values from an optional JSON config file (a single object
//! mirroring [`SweepConfig`] field names in lower_snake_case). Exit codes:
//! 0 success, 2 configuration error, 3 numerical failure.

use crate::error::Error;
use crate::params::ModelVariant;
use crate::sweep::{self, OutputFormat, RunOutput, SweepConfig, SweepSpec, Task};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "bec-superradiance",
    version,
    about = "Equilibrium thermodynamics of a Bose gas coupled to a one-mode photon field"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the finite-volume density constraint for mu_V
    SolveMu(CommonArgs),
    /// Coupled-block and free-mode occupations at --mu or at the solved mu_V
    Occupations(CommonArgs),
    /// Thermodynamic-limit condensate densities at --rho
    Condensates(CommonArgs),
    /// Critical line (mu_c, rho_c) and condensate columns over a swept axis
    PhaseDiagram(CommonArgs),
    /// Finite-size scaling of mu_V and the soft gap over box sides
    Scaling(CommonArgs),
    /// Compare closed forms against the independent numerical oracles
    OracleCheck(CommonArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModelArg {
    #[value(name = "pbg")]
    Pbg,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

impl From<ModelArg> for ModelVariant {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Pbg => ModelVariant::Pbg,
            ModelArg::One => ModelVariant::Model1,
            ModelArg::Two => ModelVariant::Model2,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Model variant: pbg, 1 (rotation coupling) or 2 (squeezing coupling)
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Spatial dimension (1, 2 or 3)
    #[arg(long)]
    pub dim: Option<u32>,
    /// Inverse temperature
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Photon energy
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Matter-photon coupling
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Kinetic energy of the coupled matter mode
    #[arg(long = "eps-q", allow_negative_numbers = true)]
    pub eps_q: Option<f64>,
    /// Kinetic coefficient (hbar^2/2m; defaults to 1)
    #[arg(long = "c-kin", allow_negative_numbers = true)]
    pub c_kin: Option<f64>,
    /// Total particle density
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// Chemical potential (occupations run at this mu instead of solving)
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Box side L
    #[arg(long = "box-l", allow_negative_numbers = true)]
    pub box_l: Option<f64>,
    /// Swept axis, as axis:start:stop:steps (axes: rho, beta, g, omega, eps_q, box_l)
    #[arg(long)]
    pub sweep: Option<String>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also report the g/Omega-interchanged limit variant for comparison
    #[arg(long = "interchange-variant")]
    pub interchange_variant: bool,
    /// Seed for oracle-check draws
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of oracle-check draws
    #[arg(long)]
    pub draws: Option<usize>,
}

impl CommonArgs {
    /// Layer the flags over the config file (file first, flags win).
    pub fn resolve(&self) -> Result<SweepConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Config(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str::<SweepConfig>(&text)
                    .map_err(|e| Error::Config(format!("bad config {}: {e}", path.display())))?
            }
            None => SweepConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m.into();
        }
        if let Some(d) = self.dim {
            cfg.dim = d;
        }
        if let Some(v) = self.beta {
            cfg.beta = v;
        }
        if let Some(v) = self.omega {
            cfg.omega = v;
        }
        if let Some(v) = self.g {
            cfg.g = v;
        }
        if let Some(v) = self.eps_q {
            cfg.eps_q = v;
        }
        if let Some(v) = self.c_kin {
            cfg.c_kin = v;
        }
        if let Some(v) = self.rho {
            cfg.rho = Some(v);
        }
        if let Some(v) = self.mu {
            cfg.mu = Some(v);
        }
        if let Some(v) = self.box_l {
            cfg.box_l = Some(v);
        }
        if let Some(s) = &self.sweep {
            cfg.sweep = Some(SweepSpec::parse(s)?);
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
        }
        if let Some(p) = &self.out {
            cfg.out = Some(p.display().to_string());
        }
        if self.interchange_variant {
            cfg.interchange_variant = true;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.draws {
            cfg.draws = n;
        }
        Ok(cfg)
    }
}

fn emit(output: &RunOutput, cfg: &SweepConfig) -> Result<(), Error> {
    let rendered = output.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::Config(format!("cannot write {path}: {e}")))?,
        None => print!("{rendered}"),
    }
    // notes go to stdout in CSV mode (they are part of the JSON object)
    if cfg.format == OutputFormat::Csv {
        for note in &output.notes {
            println!("# {note}");
        }
    }
    Ok(())
}

/// Entry point used by the binary.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let (task, args) = match &cli.command {
        Command::SolveMu(a) => (Task::SolveMu, a),
        Command::Occupations(a) => (Task::Occupations, a),
        Command::Condensates(a) => (Task::Condensates, a),
        Command::PhaseDiagram(a) => (Task::PhaseDiagram, a),
        Command::Scaling(a) => (Task::Scaling, a),
        Command::OracleCheck(a) => (Task::OracleCheck, a),
    };
    let cfg = match args.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match sweep::run_sweep(task, &cfg) {
        Ok(output) => {
            if let Err(e) = emit(&output, &cfg) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            if output.failed {
                eprintln!("error: numerical failure (no usable point or oracle tolerance exceeded)");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
