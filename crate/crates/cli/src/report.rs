//! Reports: deterministic body plus a timing envelope.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::checks::{CheckName, CheckResult};
use crate::scenario::{Scenario, SCHEMA_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
    pub scale: f64,
    pub checks: Vec<CheckName>,
}

/// Deterministic in `(scenario, seed)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub scenario: String,
    pub config: ConfigEcho,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub wall_time_ms: f64,
    pub check_times_ms: Vec<(CheckName, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportFile {
    pub report: Report,
    pub envelope: Envelope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl Report {
    pub fn new(sc: &Scenario, results: Vec<CheckResult>) -> Self {
        let passed = results.iter().all(|r| !r.verdict.failed());
        let mut checks = sc.checks.clone();
        checks.sort();
        checks.dedup();
        Self {
            schema_version: SCHEMA_VERSION,
            scenario: sc.name.clone(),
            config: ConfigEcho {
                seed: sc.sampling.seed,
                tol: sc.sampling.tol,
                samples: sc.sampling.samples,
                scale: sc.sampling.scale,
                checks,
            },
            checks: results,
            passed,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "scenario {} (seed {}, tol {:e}, samples {}, scale {})\n",
            self.scenario, c.seed, c.tol, c.samples, c.scale
        );
        for r in &self.checks {
            let _ = writeln!(out, "  {:<27} {:<15} witness {:.3e}", r.name.as_str(), r.verdict.as_str(), r.witness);
            for d in &r.details {
                let _ = writeln!(out, "      {d}");
            }
        }
        let failed = self.checks.iter().filter(|r| r.verdict.failed()).count();
        let _ = writeln!(
            out,
            "{}: {} checks, {} failed",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len(),
            failed
        );
        out
    }
}

pub fn emit(report: &Report, times: &[(CheckName, Duration)], total: Duration, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = report.to_text();
            let _ = writeln!(out, "wall time {:.1} ms", ms(total));
            out
        }
        Format::Json => {
            let file = ReportFile {
                report: report.clone(),
                envelope: Envelope {
                    wall_time_ms: ms(total),
                    check_times_ms: times.iter().map(|(n, d)| (*n, ms(*d))).collect(),
                },
            };
            serde_json::to_string_pretty(&file).expect("serializable")
        }
    }
}
