//! Command-line interface: run scenario files, certify measure pairs, and
//! reproduce the built-in demos.
//!
//! Exit codes: 0 success, 2 unparseable or schema-invalid input, 3 valid
//! input whose mathematical hypotheses fail, 4 solver failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use maxvar::error::Error;
use maxvar::scenario::{
    self, certify_scenario, export_csv, load_scenario, run_scenario, summarize,
};

#[derive(Parser)]
#[command(name = "maxvar", version, about = "Maximal variance, barycenters and Jung bounds via zero-sum games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the scenario's game and print the result JSON.
    Solve {
        scenario: PathBuf,
        /// Write the result JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the solver tolerance (fictitious-play target gap).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the Jung certification pipeline for the scenario's X.
    Jung {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a (mu, nu) pair stored as JSON weight arrays.
    Certify {
        scenario: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in demo (popoviciu, simplex(n), circle(N), sphere_gap,
    /// jung_euclidean, jung_spherical).
    Demo {
        name: String,
        /// Export measures.csv, certificate.csv and history.csv here.
        #[arg(long, value_name = "DIR")]
        export_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(value: &serde_json::Value, out: Option<&PathBuf>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve { scenario, out, tol } => {
            let mut sc = load_scenario(&scenario)?;
            if let Some(t) = tol {
                sc.solver.tol = t;
            }
            let artifacts = run_scenario(sc)?;
            emit(&artifacts.result, out.as_ref())
        }
        Command::Jung { scenario, out } => {
            let mut sc = load_scenario(&scenario)?;
            if !sc.outputs.contains(&scenario::OutputKind::Jung) {
                sc.outputs.push(scenario::OutputKind::Jung);
            }
            let artifacts = run_scenario(sc)?;
            emit(&artifacts.result, out.as_ref())
        }
        Command::Certify { scenario, mu, nu, tol, out } => {
            let sc = load_scenario(&scenario)?;
            let mu_w: Vec<f64> = serde_json::from_str(&std::fs::read_to_string(&mu)?)?;
            let nu_w: Vec<f64> = serde_json::from_str(&std::fs::read_to_string(&nu)?)?;
            let result = certify_scenario(sc, mu_w, nu_w, tol)?;
            emit(&result, out.as_ref())
        }
        Command::Demo { name, export_csv: csv_dir, out } => {
            let artifacts = scenario::run_demo(&name)?;
            eprintln!("demo {name}");
            eprintln!("{}", summarize(&artifacts));
            if let Some(dir) = csv_dir {
                export_csv(&artifacts, &dir)?;
                eprintln!("csv tables written to {}", dir.display());
            }
            emit(&artifacts.result, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
