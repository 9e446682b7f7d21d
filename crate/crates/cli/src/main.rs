//! `enclosure`: solve, tabulate and map the land-enclosure model.

mod config;
mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use enclosure_core::regions::{
    figure_presets, threshold_table, ColorBy, SweepGrid, FIGURE_RESOLUTION,
};
use enclosure_core::regions::{format_sig9, write_csv, write_json, write_svg};
use enclosure_core::verify::{run_battery, VerifyConfig};
use enclosure_core::{run_sweep, ModelError, SweepSpec};
use serde::Serialize;

use config::{EnvFlags, FileConfig, RunConfig};

/// Error with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Io(m) => Failure::io(m),
            other => Failure::validation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "enclosure",
    version,
    about = "Land enclosure equilibria under customary tenure"
)]
struct Cli {
    /// Flat `key = value` configuration file; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(flatten)]
    env: EnvFlags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve every regime for one economy
    Solve {
        #[arg(long)]
        json: bool,
    },
    /// Tabulate all density loci
    Thresholds {
        #[arg(long)]
        json: bool,
    },
    /// Sweep a (theta, lbar) grid described by a JSON spec
    Sweep {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Output prefix; writes PREFIX.csv, PREFIX.json and PREFIX.svg
        #[arg(long, value_name = "PREFIX")]
        out: PathBuf,
    },
    /// Region map for one of the preset figures (1-7)
    Figure {
        number: u32,
        /// Panel a-d (figure 7 only)
        #[arg(long)]
        panel: Option<char>,
        #[arg(long, default_value_t = FIGURE_RESOLUTION)]
        resolution: usize,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Compare analytic solvers with brute-force oracles
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        agents: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Scales the rental rate seen by the analytic side
        #[arg(long, hide = true, default_value_t = 1.0)]
        perturb_rent: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(file, &cli.env);
    match cli.command {
        Command::Solve { json } => {
            cfg.validate()?;
            let r = report::build(&cfg.env, cfg.manufacturing.as_ref());
            if json {
                print_json(&r)?;
            } else {
                print!("{}", report::render_text(&r));
            }
            Ok(0)
        }
        Command::Thresholds { json } => {
            cfg.env.validate()?;
            let rows = threshold_table(&cfg.env);
            if json {
                print_json(&rows)?;
            } else {
                for row in rows {
                    let value = match (row.value, &row.note) {
                        (Some(v), _) => format_sig9(v),
                        (None, note) => format!("n/a ({})", note.as_deref().unwrap_or("undefined")),
                    };
                    println!("{:<22} {:<40} {}", row.key, row.description, value);
                }
            }
            Ok(0)
        }
        Command::Sweep { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Failure::io(format!("reading {}: {e}", spec.display())))?;
            let mut parsed: SweepSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::validation(format!("sweep spec {}: {e}", spec.display())))?;
            parsed.fixed = cfg.overlay(parsed.fixed, &cli.env);
            let grid = run_sweep(&parsed)?;
            let color = parsed
                .solver_set()
                .last()
                .map_or(ColorBy::Inefficiency, |&s| ColorBy::Solver(s));
            write_outputs(&grid, color, "Enclosure regimes", &out)?;
            eprintln!(
                "wrote {} cells to {}.{{csv,json,svg}}",
                grid.cells.len(),
                out.display()
            );
            Ok(0)
        }
        Command::Figure {
            number,
            panel,
            resolution,
            out,
        } => {
            let presets = figure_presets(number, panel, resolution)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| Failure::io(format!("creating {}: {e}", out.display())))?;
            for mut preset in presets {
                preset.spec.fixed = cfg.overlay(preset.spec.fixed, &cli.env);
                let grid = run_sweep(&preset.spec)?;
                let prefix = out.join(&preset.name);
                write_outputs(&grid, preset.color_by, &preset.title, &prefix)?;
                eprintln!("wrote {}.{{csv,json,svg}}", prefix.display());
            }
            Ok(0)
        }
        Command::Verify {
            seed,
            agents,
            json,
            perturb_rent,
        } => {
            let defaults = VerifyConfig::default();
            let vc = VerifyConfig {
                seed: seed
                    .or_else(|| cfg.file_value("seed").map(|v| v as u64))
                    .unwrap_or(defaults.seed),
                agents: agents
                    .or_else(|| cfg.file_value("agents").map(|v| v as usize))
                    .unwrap_or(defaults.agents),
                rent_scale: perturb_rent,
                ..defaults
            };
            if vc.agents < 2 {
                return Err(Failure::validation("agents must be at least 2"));
            }
            let report = run_battery(&vc)?;
            if json {
                print_json(&report)?;
            } else {
                for c in &report.checks {
                    println!(
                        "{} {:<60} discrepancy {:.3e} (tolerance {:.1e})",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.discrepancy,
                        c.tolerance
                    );
                }
                let failed = report.checks.iter().filter(|c| !c.passed).count();
                println!("{} checks, {failed} failed", report.checks.len());
            }
            Ok(if report.all_passed { 0 } else { 1 })
        }
    }
}

/// Serializes through a `Value` so re-parsing and re-printing is stable.
fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let v = serde_json::to_value(value).map_err(|e| Failure::io(e.to_string()))?;
    let text = serde_json::to_string_pretty(&v).map_err(|e| Failure::io(e.to_string()))?;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    writeln!(lock, "{text}").map_err(|e| Failure::io(e.to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::io(format!("creating {}: {e}", path.display())))
}

fn write_outputs(
    grid: &SweepGrid,
    color: ColorBy,
    title: &str,
    prefix: &Path,
) -> Result<(), Failure> {
    let with_ext = |ext: &str| {
        let mut p = prefix.as_os_str().to_owned();
        p.push(".");
        p.push(ext);
        PathBuf::from(p)
    };
    write_csv(grid, create(&with_ext("csv"))?)?;
    write_json(grid, create(&with_ext("json"))?)?;
    let mut svg = create(&with_ext("svg"))?;
    write_svg(grid, color, title, &mut svg)?;
    svg.flush().map_err(|e| Failure::io(e.to_string()))?;
    Ok(())
}
