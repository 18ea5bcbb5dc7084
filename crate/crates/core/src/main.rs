use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use drv_isac::harness::validation::{c12_divergence, CRITERIA};
use drv_isac::harness::{cmd_coverage, cmd_drr_sweep, run_validation, ExperimentConfig};
use drv_isac::montecarlo::Fidelity;
use drv_isac::Error;

#[derive(Parser)]
#[command(name = "drv-isac", version, about = "Sensing coverage and dynamic ranging rate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and approximate sensing regions per configured case.
    Coverage(Common),
    /// Analytic and simulated DRR along the configured sweeps.
    DrrSweep(Common),
    /// Runs the acceptance suite; exit 3 if any criterion fails.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated criterion ids to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML configuration; the built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// assumption_matched or full; overrides the configured fidelity.
    #[arg(long)]
    fidelity: Option<Fidelity>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default_config(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(f) = self.fidelity {
            cfg.fidelity = f;
        }
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_numeric_degeneracy() => 4,
        Error::EmptyPattern | Error::Singularity | Error::CoincidentPoints(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Coverage(common) => {
            let cfg = common.load()?;
            let summary = cmd_coverage(&cfg, &common.out)?;
            for m in &summary.methods {
                println!("{:<8} {:<16} area {:>12.4e} m2  IoU {:.5}", m.case, m.method, m.area, m.iou);
            }
            Ok(0)
        }
        Command::DrrSweep(common) => {
            let cfg = common.load()?;
            for sweep in cmd_drr_sweep(&cfg, &common.out)? {
                println!("{}: {} points written", sweep.name, sweep.rows.len());
            }
            Ok(0)
        }
        Command::Validate { common, only } => {
            let cfg = common.load()?;
            if let Some(bad) = only.iter().find(|id| !CRITERIA.contains(id)) {
                return Err(Error::Config(format!("no acceptance criterion {bad} (valid ids are 1-12)")));
            }
            std::fs::create_dir_all(&common.out)?;
            let report = run_validation(cfg.seed, cfg.fidelity, &only);
            let text = report.render();
            print!("{text}");
            std::fs::write(common.out.join("validation_report.txt"), &text)?;
            if only.is_empty() || only.contains(&12) {
                let (_, _, divergence) = c12_divergence()?;
                let mut csv = String::from("coefficient,paper,expansion,difference,predicted\n");
                for r in &divergence.rows {
                    csv.push_str(&format!("{},{:e},{:e},{:e},{:e}\n", r.name, r.paper, r.expansion, r.difference, r.predicted));
                }
                std::fs::write(common.out.join("conic_divergence.csv"), csv)?;
            }
            Ok(if report.all_passed() { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
