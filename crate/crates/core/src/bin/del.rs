use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use del_core::expcli::{parse_config_as, run, Experiment};

#[derive(Parser)]
#[command(name = "del", version, about = "Damped Euler experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Opts {
    /// `key = value` config file
    #[arg(long)]
    config: PathBuf,
    /// Output root; files go to `<out>/<experiment>`. Overrides DEL_OUT.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Barenblatt profiles against their Gaussian limit
    Figure1(Opts),
    /// Exact Gaussian parameters along a trajectory
    GaussianEvolve(Opts),
    /// Finite-volume run with snapshot output
    Simulate(Opts),
    /// Rescaled diagnostics of saved snapshots
    Diagnose(Opts),
    /// Moment evolution against closed forms
    MomentsStudy(Opts),
    /// Long-time behaviour of the dispersion ODE
    TauStudy(Opts),
    /// Checks on the Kummer fundamental solutions
    SpecfunCheck(Opts),
}

impl Command {
    fn split(self) -> (Experiment, Opts) {
        match self {
            Command::Figure1(o) => (Experiment::Figure1, o),
            Command::GaussianEvolve(o) => (Experiment::GaussianEvolve, o),
            Command::Simulate(o) => (Experiment::Simulate, o),
            Command::Diagnose(o) => (Experiment::Diagnose, o),
            Command::MomentsStudy(o) => (Experiment::MomentsStudy, o),
            Command::TauStudy(o) => (Experiment::TauStudy, o),
            Command::SpecfunCheck(o) => (Experiment::SpecfunCheck, o),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (experiment, opts) = cli.command.split();
    let text = match std::fs::read_to_string(&opts.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("del: {}: {e}", opts.config.display());
            return ExitCode::from(2);
        }
    };
    let mut spec = match parse_config_as(&text, experiment) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("del: {}: {e}", opts.config.display());
            return ExitCode::from(2);
        }
    };
    let root = opts.out.or_else(|| {
        std::env::var_os("DEL_OUT")
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    if let Some(root) = root {
        spec.out_dir = root.join(experiment.name());
    }
    match run(&spec) {
        Ok(report) => {
            print!("{}", report.text());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("del {experiment}: {e}");
            ExitCode::from(2)
        }
    }
}
