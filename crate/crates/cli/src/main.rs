use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sea_walk::limits::{limit_table, write_limit_csv};
use sea_walk::output::FloatFormat;
use sea_walk::runner::{output_directory, run_scenario, RunError, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "sea-walk", version, about = "Steepest-entropy-ascent quantum walk simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve every cell of a scenario and write its datasets.
    Run {
        config: PathBuf,
        /// Output directory, overriding `output.directory`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of cells evolved concurrently (default: one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Also write the unitary baseline walk.
        #[arg(long)]
        baseline: bool,
    },
    /// Print the limit-table corner values for a scenario as CSV.
    Limits { config: PathBuf },
    /// Check a scenario without running it.
    Validate { config: PathBuf },
}

const OK: u8 = 0;
const INVALID: u8 = 1;
const CELLS_FAILED: u8 = 2;

fn load(path: &PathBuf) -> Result<Scenario, u8> {
    Scenario::load(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        INVALID
    })
}

fn float_format() -> Result<FloatFormat, u8> {
    FloatFormat::from_env().map_err(|e| {
        eprintln!("error: {e}");
        INVALID
    })
}

fn run(cli: Cli) -> Result<u8, u8> {
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
            baseline,
        } => {
            let scenario = load(&config)?;
            let opts = RunOptions {
                out,
                workers,
                baseline,
                float: float_format()?,
            };
            let dir = output_directory(&scenario.config, &opts);
            let manifest = run_scenario(&scenario, &opts).map_err(|e| {
                match &e {
                    RunError::Config(_) => eprintln!("error: {}: {e}", config.display()),
                    _ => eprintln!("error: {e}"),
                }
                INVALID
            })?;
            for (i, c) in manifest.cells.iter().enumerate() {
                if let Some(err) = &c.error {
                    eprintln!("cell {i} (epsilon {:?}, tau {:?}) failed: {err}", c.epsilon, c.tau);
                }
            }
            if let Some(err) = manifest.baseline.as_ref().and_then(|b| b.error.as_ref()) {
                eprintln!("baseline failed: {err}");
            }
            let failed = manifest.failed_cells();
            let total = manifest.cells.len() + usize::from(manifest.baseline.is_some());
            eprintln!(
                "{}: {} of {total} trajectories ok, {:.2} s, output in {}",
                manifest.scenario,
                total - failed,
                manifest.total_seconds,
                dir.display()
            );
            Ok(if failed > 0 { CELLS_FAILED } else { OK })
        }
        Command::Limits { config } => {
            let scenario = load(&config)?;
            let float = float_format()?;
            let rows = limit_table(&scenario.config).map_err(|e| {
                eprintln!("error: {e}");
                INVALID
            })?;
            write_limit_csv(&rows, float, std::io::stdout().lock()).map_err(|e| {
                eprintln!("error: {e}");
                INVALID
            })?;
            Ok(OK)
        }
        Command::Validate { config } => {
            let scenario = load(&config)?;
            let cfg = &scenario.config;
            let system = cfg.system().map_err(|e| {
                eprintln!("error: {}: {e}", config.display());
                INVALID
            })?;
            let ensemble = cfg.ensemble(&system).map_err(|e| {
                eprintln!("error: {}: {e}", config.display());
                INVALID
            })?;
            let cells = cfg.cells().len();
            println!(
                "{}: ok ({cells} cell{}, {} steps, state dimension {}, {:?})",
                cfg.name,
                if cells == 1 { "" } else { "s" },
                cfg.steps,
                system.hamiltonian().dim(),
                ensemble
            );
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INVALID } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli).unwrap_or_else(|code| code))
}
