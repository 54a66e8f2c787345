//! Scenario runner for the Fock–Rosly checks.

pub mod checks;
pub mod report;
pub mod scenario;

use std::time::{Duration, Instant};

pub use checks::{run_check, run_checks, CheckName, CheckResult, Verdict};
pub use report::{emit, Format, Report};
pub use scenario::{load_scenario, parse_scenario, LoadError, Scenario};

/// Runs `sc`, returning the report and per-check timings.
pub fn run(sc: &Scenario) -> frpoisson_core::Result<(Report, Vec<(CheckName, Duration)>, Duration)> {
    let start = Instant::now();
    let results = run_checks(sc)?;
    let times = results.iter().map(|(r, d)| (r.name, *d)).collect();
    let report = Report::new(sc, results.into_iter().map(|(r, _)| r).collect());
    Ok((report, times, start.elapsed()))
}
