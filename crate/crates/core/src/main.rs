use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fuzzy_lsde::Result;
use fuzzy_lsde::cli::commands::{
    self, cut_csv, polygons_csv, to_json, trajectory_csv, vertices_csv, write_outputs,
};
use fuzzy_lsde::cli::{Scenario, load_scenario};

#[derive(Parser)]
#[command(
    name = "fuzzy-lsde",
    version,
    about = "Linear ODE systems with fuzzy initial values"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file, or builtin:example1 / builtin:example2 / builtin:example3
    #[arg(long)]
    scenario: PathBuf,
    /// Directory to write JSON and CSV outputs into instead of printing
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the crisp trajectory and answer the scenario's queries
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Alpha-cut region at one time
    Cut {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Membership grade of a point at one time
    Membership {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        time: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
    },
    /// Vertices of an alpha-cut region
    Vertices {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Trajectory polyline and cut polygons for plotting
    Plotdata {
        #[command(flatten)]
        common: Common,
        /// Comma-separated times
        #[arg(long, value_delimiter = ',')]
        time: Vec<f64>,
        /// Comma-separated levels
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
    },
    /// Cross-check the solution against brute-force propagation
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated check times
        #[arg(long, value_delimiter = ',')]
        time: Vec<f64>,
    },
}

enum Outcome {
    Done,
    OracleFailed,
}

fn emit(out: &Option<PathBuf>, stdout: String, files: Vec<(&str, String)>) -> Result<()> {
    match out {
        Some(dir) => {
            for path in write_outputs(dir, &files)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let mut lock = std::io::stdout().lock();
            match writeln!(lock, "{}", stdout.trim_end_matches('\n')) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn load(common: &Common) -> Result<Scenario> {
    load_scenario(&common.scenario)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Solve { common } => {
            let record = commands::cmd_solve(&load(&common)?)?;
            let json = to_json(&record)?;
            let csv = trajectory_csv(&record.trajectory);
            emit(
                &common.out,
                json.clone(),
                vec![("solve.json", json), ("trajectory.csv", csv)],
            )?;
        }
        Command::Cut {
            common,
            time,
            alpha,
            format,
        } => {
            let record = commands::cmd_cut(&load(&common)?, time, alpha)?;
            let json = to_json(&record)?;
            let csv = cut_csv(&record);
            let shown = match format {
                Format::Json => json.clone(),
                Format::Csv => csv.clone(),
            };
            emit(&common.out, shown, vec![("cut.json", json), ("cut.csv", csv)])?;
        }
        Command::Membership { common, time, point } => {
            let record = commands::cmd_membership(&load(&common)?, time, &point)?;
            let json = to_json(&record)?;
            emit(&common.out, json.clone(), vec![("membership.json", json)])?;
        }
        Command::Vertices {
            common,
            time,
            alpha,
            format,
        } => {
            let record = commands::cmd_vertices(&load(&common)?, time, alpha)?;
            let json = to_json(&record)?;
            let csv = vertices_csv(&record);
            let shown = match format {
                Format::Json => json.clone(),
                Format::Csv => csv.clone(),
            };
            emit(
                &common.out,
                shown,
                vec![("vertices.json", json), ("vertices.csv", csv)],
            )?;
        }
        Command::Plotdata { common, time, alpha } => {
            let alphas = if alpha.is_empty() && !time.is_empty() {
                vec![0.0]
            } else {
                alpha
            };
            let data = commands::cmd_plotdata(&load(&common)?, &time, &alphas)?;
            let json = to_json(&data)?;
            emit(
                &common.out,
                json.clone(),
                vec![
                    ("plotdata.json", json),
                    ("trajectory.csv", trajectory_csv(&data.trajectory)),
                    ("polygons.csv", polygons_csv(&data.polygons)),
                ],
            )?;
        }
        Command::Verify { common, seed, time } => {
            let record = commands::cmd_verify(&load(&common)?, seed, Some(&time))?;
            let json = to_json(&record)?;
            emit(&common.out, json.clone(), vec![("verify.json", json)])?;
            if !record.passed {
                return Ok(Outcome::OracleFailed);
            }
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::OracleFailed) => {
            eprintln!("error: oracle check failed");
            ExitCode::from(4)
        }
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(commands::exit_code(&err) as u8)
        }
    }
}
