use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wallgrad::experiment::{self, configure_threads_from_env, format_blasius_table, format_summary};
use wallgrad::gridgen::generate;
use wallgrad::mesh::{read_mesh, write_mesh};
use wallgrad::{ConfigError, DiagonalMode, Error, ExperimentConfig, Method};

/// Largest normalized error `verify-linear` accepts for the exact methods.
const LINEAR_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "wallgrad", version, about = "Wall-normal derivatives and skin friction on triangular grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment and write its artifacts.
    Run {
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated method names, e.g. FD1,FD3_ETA,CANG.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
    },
    /// Generate a boundary-layer mesh.
    Genmesh {
        #[command(flatten)]
        common: Common,
        /// Mesh file to write.
        #[arg(long, default_value = "mesh.txt")]
        out: PathBuf,
    },
    /// Dump the Blasius profile as `eta,f,fp,fpp` CSV.
    BlasiusTable {
        /// CSV file to write; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        eta_max: f64,
        #[arg(long, default_value_t = 2000)]
        n_steps: usize,
    },
    /// Check every method against random affine fields on a mesh.
    VerifyLinear {
        #[arg(long)]
        mesh: PathBuf,
        /// Number of random affine fields.
        #[arg(long, default_value_t = 10)]
        fields: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML config with dotted keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    first_layer_height: Option<f64>,
    #[arg(long)]
    stretch: Option<f64>,
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long)]
    diagonal_mode: Option<String>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        let g = &mut cfg.grid;
        g.nx = self.nx.unwrap_or(g.nx);
        g.ny = self.ny.unwrap_or(g.ny);
        g.first_layer_height = self.first_layer_height.unwrap_or(g.first_layer_height);
        g.stretch = self.stretch.unwrap_or(g.stretch);
        g.perturb = self.perturb.unwrap_or(g.perturb);
        if let Some(mode) = &self.diagonal_mode {
            g.diagonal_mode = mode.parse::<DiagonalMode>().map_err(ConfigError::Invalid)?;
        }
        Ok(cfg)
    }
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>, Error> {
    names.iter().map(|n| n.parse::<Method>().map_err(Error::from)).collect()
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source }.into())
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    configure_threads_from_env()?;
    match cli.command {
        Command::Run { common, out, methods } => {
            let mut cfg = common.config()?;
            if let Some(out) = out {
                cfg.output = out;
            }
            if let Some(names) = methods {
                cfg.methods = parse_methods(&names)?;
            }
            let result = experiment::run(&cfg)?;
            print!("{}", format_summary(&result));
            println!("wrote {}", cfg.output.display());
        }
        Command::Genmesh { common, out } => {
            let cfg = common.config()?;
            let mesh = generate(&cfg.grid_spec())?;
            write_mesh(&mesh, &out)?;
            println!("wrote {} ({} nodes, {} cells)", out.display(), mesh.n_nodes(), mesh.n_cells());
        }
        Command::BlasiusTable { out, eta_max, n_steps } => {
            let text = format_blasius_table(eta_max, n_steps)?;
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::VerifyLinear { mesh, fields, seed, methods } => {
            let methods = match methods {
                Some(names) => parse_methods(&names)?,
                None => Method::ALL.to_vec(),
            };
            let mesh = read_mesh(&mesh)?;
            let checks = experiment::verify_linear(&mesh, fields, seed, &methods)?;
            let mut failed = false;
            println!("{:<10} {:>12}  status", "method", "max_error");
            for c in checks {
                let status = if c.method == Method::Fd1 {
                    "inexact"
                } else if c.max_error < LINEAR_TOL {
                    "ok"
                } else {
                    failed = true;
                    "FAIL"
                };
                println!("{:<10} {:>12.3e}  {status}", c.method.name(), c.max_error);
            }
            if failed {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.machine());
            ExitCode::FAILURE
        }
    }
}
