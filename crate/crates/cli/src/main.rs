use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frpoisson::{emit, load_scenario, run, CheckName, Format};

#[derive(Parser)]
#[command(name = "frpoisson", version, about = "Verify Fock-Rosly Poisson structure identities on a scenario")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on a scenario file.
    Check {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        scale: Option<f64>,
        /// Check to run, repeatable; `all` selects the whole registry.
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List the check registry.
    ListChecks,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListChecks => {
            for c in CheckName::ALL {
                println!("{c}");
            }
            ExitCode::SUCCESS
        }
        Command::Check { scenario, tol, samples, seed, scale, checks, format } => {
            let mut sc = match load_scenario(&scenario) {
                Ok(sc) => sc,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(t) = tol {
                sc.sampling.tol = t;
            }
            if let Some(n) = samples {
                sc.sampling.samples = n;
            }
            if let Some(s) = seed {
                sc.sampling.seed = s;
            }
            if let Some(s) = scale {
                sc.sampling.scale = s;
            }
            if let Err(e) = frpoisson::scenario::check_sampling(&sc.sampling) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if !checks.is_empty() {
                let mut names = Vec::new();
                for c in &checks {
                    if c == "all" {
                        names.extend_from_slice(CheckName::ALL);
                        continue;
                    }
                    match c.parse::<CheckName>() {
                        Ok(n) => names.push(n),
                        Err(e) => {
                            eprintln!("error: {e}");
                            return ExitCode::from(2);
                        }
                    }
                }
                sc.checks = names;
            }
            match run(&sc) {
                Ok((report, times, total)) => {
                    println!("{}", emit(&report, &times, total, format));
                    ExitCode::from(report.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
