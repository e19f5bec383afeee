use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rollsim_cli::acceptance;
use rollsim_cli::output::{render_text, write_run, write_trajectory_csv};
use rollsim_cli::run::execute;
use rollsim_cli::scenario::Scenario;
use rollsim_cli::sweep::{run_sweep, SweepParam};
use rollsim_core::locomotion::LocomotionData;

#[derive(Parser)]
#[command(name = "rollsim", version, about = "Planar rolling-robot simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write CSV, reports and a plot script.
    Run { file: PathBuf },
    /// Run a scenario once per value of a parameter.
    Sweep {
        file: PathBuf,
        /// tau, zeta, dt, t_end, g, ms, mc, R, r, is or ic.
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        values: Vec<f64>,
    },
    /// Validate a locomotion data file (the bundled one if omitted).
    Check { file: Option<PathBuf> },
    /// Run every acceptance check and print one line per criterion.
    Acceptance,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { file } => run(file),
        Command::Sweep { file, param, values } => sweep(file, param, &values),
        Command::Check { file } => check(file),
        Command::Acceptance => {
            let results = acceptance::run_all();
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            println!("{} of {} criteria pass", results.len() - failed, results.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn run(file: PathBuf) -> Result<ExitCode> {
    let scenario = Scenario::load(&file)?;
    let dir = scenario.output_path();
    match execute(&scenario) {
        Ok(output) => {
            let files = write_run(&dir, &output).with_context(|| format!("writing to {}", dir.display()))?;
            print!("{}", render_text(&output.report));
            println!("wrote {}", files.csv.display());
            Ok(ExitCode::SUCCESS)
        }
        Err(failure) => {
            let partial = write_trajectory_csv(&dir, &format!("{}_partial.csv", scenario.name), &failure.partial)?;
            bail!("{failure}; samples so far in {}", partial.display())
        }
    }
}

fn sweep(file: PathBuf, param: SweepParam, values: &[f64]) -> Result<ExitCode> {
    let base = Scenario::load(&file)?;
    let dir = base.output_path();
    let outcome = run_sweep(&base, param, values)?;
    for r in &outcome.runs {
        if let Ok(out) = &r.outcome {
            write_run(&dir.join(&r.scenario.name), out)?;
        }
    }
    let stem = format!("{}-sweep-{}", base.name, param);
    let text = outcome.render_text();
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(format!("{stem}.txt")), &text)?;
    fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&outcome.summary())? + "\n")?;
    print!("{text}");
    let failed = outcome.runs.iter().any(|r| r.outcome.is_err());
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn check(file: Option<PathBuf>) -> Result<ExitCode> {
    let data = match &file {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            LocomotionData::parse(&text).with_context(|| path.display().to_string())?
        }
        None => LocomotionData::bundled(),
    };
    let violations = data.check();
    for v in &violations {
        println!("{v}");
    }
    println!("{} violation(s)", violations.len());
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
