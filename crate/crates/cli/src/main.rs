use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimer_coamoeba::bundles::Direction;
use dimer_coamoeba_cli::commands::{self, DimerAction, Site};
use dimer_coamoeba_cli::config::{parse_binding, OUT_DIR_ENV};
use dimer_coamoeba_cli::{exit, read_file, suite, to_json, write_file, CliError, Result, RunConfig};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "dimer-coamoeba", version, about = "Dimer models, coamoebas and vanishing cycles")]
struct Cli {
    /// Flat `key = value` file; keys are the long flag names.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for generated files (also settable through DIMER_COAMOEBA_OUT_DIR).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible arrangement and dimer model of a lattice parallelogram.
    Hv {
        /// `square` or points such as "(0,0) (1,0) (1,1) (0,1)".
        polygon: String,
        #[arg(long)]
        hv_grid: Option<usize>,
        /// Fixture output (default: <out-dir>/<name>.dimer).
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Samples a coamoeba and checks it against the predicted cells.
    Coamoeba {
        polynomial: String,
        /// Radial and angular counts, `R,A`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        modulus_range: Option<String>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        residual: Option<f64>,
        #[arg(long)]
        fiber_epsilon: Option<f64>,
        /// Binds a parameter of the expression, e.g. `-p t=0.5`.
        #[arg(short = 'p', long = "param")]
        params: Vec<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Matchings, characteristic polynomial or isoradiality of a fixture.
    Dimer {
        #[arg(value_enum)]
        action: DimerCmd,
        /// `square`, `fig11`, `fig24` or a fixture path.
        fixture: String,
        /// Index of the reference matching.
        #[arg(long, default_value_t = 0)]
        reference: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Vanishing-cycle pipeline for a cycle system.
    Fibration {
        #[command(subcommand)]
        command: FibrationCmd,
    },
    /// Exceptional collections of line bundles on P1×P1.
    Bundles {
        #[command(subcommand)]
        command: BundlesCmd,
    },
    /// Runs every acceptance criterion and writes the report and figures.
    PaperSuite {
        #[arg(long)]
        steps: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DimerCmd {
    Matchings,
    Charpoly,
    Isoradial,
}

#[derive(Subcommand)]
enum FibrationCmd {
    Report {
        /// `ec` or `ec2`.
        #[arg(long)]
        collection: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Left,
    Right,
}

#[derive(Args)]
struct CollectionArg {
    /// Pairs such as "(0,0) (1,0) (1,1) (2,1)"; defaults to that collection.
    collection: Option<String>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BundlesCmd {
    Check {
        #[command(flatten)]
        c: CollectionArg,
    },
    Mutate {
        #[command(flatten)]
        c: CollectionArg,
        /// `last` or a 0-based index of the first object of the pair.
        #[arg(long, default_value = "last")]
        at: String,
        #[arg(long, value_enum, default_value_t = Dir::Left)]
        direction: Dir,
        /// `paper`: the mutation taking the first collection to the second.
        #[arg(long)]
        preset: Option<String>,
    },
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::parse(&read_file(p)?)?,
        None => RunConfig::default(),
    };
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        cfg.out_dir = PathBuf::from(dir);
    }
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    Ok(cfg)
}

fn set<T: ToString>(cfg: &mut RunConfig, key: &str, v: &Option<T>) -> Result<()> {
    match v {
        Some(v) => cfg.set(key, &v.to_string()),
        None => Ok(()),
    }
}

fn emit(v: &Value, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_file(p, &to_json(v)),
        None => {
            print!("{}", to_json(v));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg = config(&cli)?;
    match cli.command {
        Command::Hv { polygon, hv_grid, fixture, svg, json } => {
            set(&mut cfg, "hv-grid", &hv_grid)?;
            emit(&commands::hv(&polygon, &cfg, fixture, svg)?, json.as_deref())?;
        }
        Command::Coamoeba { polynomial, grid, modulus_range, tolerance, residual, fiber_epsilon, params, svg, report } => {
            set(&mut cfg, "grid", &grid)?;
            set(&mut cfg, "modulus-range", &modulus_range)?;
            set(&mut cfg, "tolerance", &tolerance)?;
            set(&mut cfg, "residual", &residual)?;
            set(&mut cfg, "fiber-epsilon", &fiber_epsilon)?;
            for p in &params {
                let (k, z) = parse_binding(p)?;
                cfg.params.insert(k, z);
            }
            emit(&commands::coamoeba(&polynomial, &cfg, svg.as_deref())?, report.as_deref())?;
        }
        Command::Dimer { action, fixture, reference, svg, json } => {
            let action = match action {
                DimerCmd::Matchings => DimerAction::Matchings,
                DimerCmd::Charpoly => DimerAction::Charpoly,
                DimerCmd::Isoradial => DimerAction::Isoradial,
            };
            emit(&commands::dimer(action, &fixture, reference, svg.as_deref())?, json.as_deref())?;
        }
        Command::Fibration { command: FibrationCmd::Report { collection, steps, json, svg_dir } } => {
            set(&mut cfg, "collection", &collection)?;
            set(&mut cfg, "steps", &steps)?;
            emit(&commands::fibration(&cfg, svg_dir.as_deref())?, json.as_deref())?;
        }
        Command::Bundles { command } => match command {
            BundlesCmd::Check { c } => emit(&commands::bundles_check(c.collection.as_deref())?, c.json.as_deref())?,
            BundlesCmd::Mutate { c, at, direction, preset } => {
                let preset = match preset.as_deref() {
                    None => false,
                    Some("paper") => true,
                    Some(p) => return Err(CliError::Usage(format!("unknown preset {p:?}"))),
                };
                let site = match at.as_str() {
                    "last" => Site::Last,
                    n => Site::At(n.parse().map_err(|_| CliError::Usage(format!("bad --at {n:?}")))?),
                };
                let direction = match direction {
                    Dir::Left => Direction::Left,
                    Dir::Right => Direction::Right,
                };
                emit(&commands::bundles_mutate(c.collection.as_deref(), site, direction, preset)?, c.json.as_deref())?;
            }
        },
        Command::PaperSuite { steps } => {
            set(&mut cfg, "steps", &steps)?;
            let outcome = suite::paper_suite(&cfg)?;
            for c in &outcome.criteria {
                println!("{}", c.line());
            }
            println!("report: {}", cfg.out_dir.join("paper_suite.json").display());
            return Ok(if outcome.passed { exit::SUCCESS } else { exit::ACCEPTANCE_FAILURE });
        }
    }
    Ok(exit::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::SUCCESS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::USAGE)
        }
    }
}
