//! Scenario files: algebra, skeleton, r-matrix assignment, checks and
//! sampling configuration.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use frpoisson_core::ciliated_graph::Skeleton;
use frpoisson_core::group_numerics::Sampling;
use frpoisson_core::invariant_calculus::RAssignment;
use frpoisson_core::io::{from_json_str, AlgebraRecord, RMatrixRef, SkeletonRecord};
use frpoisson_core::lie_core::AltTensor;
use frpoisson_core::{Error, ExactAlgebra, Rational};
use serde::{Deserialize, Serialize};

use crate::checks::CheckName;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// Source of the vertex cobracket in the `gauge_poisson` check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CobracketSource {
    /// `δ_{r_v}` at every vertex.
    #[default]
    FromR,
    /// The zero map.
    Zero,
}

/// On-disk form of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub algebra: AlgebraRecord,
    pub graph: SkeletonRecord,
    /// r-matrix for vertices not listed in `r_matrices`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_r: Option<RMatrixRef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub r_matrices: BTreeMap<String, RMatrixRef>,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cobracket: Option<CobracketSource>,
    /// Per-vertex r-matrices whose Λ is subtracted in the `quasi` check;
    /// defaults to each vertex's own r-matrix.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub quasi_lambdas: BTreeMap<String, RMatrixRef>,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub algebra: Arc<ExactAlgebra>,
    pub skeleton: Skeleton,
    pub rs: RAssignment<Rational>,
    pub checks: Vec<CheckName>,
    pub sampling: Sampling,
    pub cobracket: CobracketSource,
    pub quasi_lambdas: BTreeMap<String, AltTensor<Rational>>,
}

fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Json { pointer: pointer.into(), message: message.into() }
}

impl ScenarioFile {
    pub fn validate(&self, fallback_name: &str) -> Result<Scenario, Error> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid("/schema_version", format!("unsupported schema version `{}`", self.schema_version)));
        }
        let algebra = Arc::new(self.algebra.build().map_err(|e| nest("/algebra", e))?);
        let skeleton = self.graph.build_at("/graph")?;
        let checks = self
            .checks
            .iter()
            .enumerate()
            .map(|(i, c)| CheckName::from_str(c).map_err(|e| invalid(format!("/checks/{i}"), e)))
            .collect::<Result<Vec<_>, _>>()?;

        let build = |r: &RMatrixRef, pointer: &str| -> Result<_, Error> {
            let r = r.build_at(pointer)?;
            if *r.algebra() != *algebra {
                return Err(invalid(pointer, "r-matrix algebra differs from the scenario algebra"));
            }
            Ok(r)
        };
        let vertices = skeleton.graph.vertices();
        for v in self.r_matrices.keys().chain(self.quasi_lambdas.keys()) {
            if !vertices.contains(v) {
                return Err(invalid(format!("/r_matrices/{v}"), format!("unknown vertex `{v}`")));
            }
        }
        let default = self.default_r.as_ref().map(|r| build(r, "/default_r")).transpose()?;
        let mut rs = RAssignment::new();
        for v in vertices {
            let r = match self.r_matrices.get(v) {
                Some(r) => build(r, &format!("/r_matrices/{v}"))?,
                None => match &default {
                    Some(r) => r.clone(),
                    None if checks.iter().all(|c| !c.needs_r()) => continue,
                    None => return Err(invalid("/r_matrices", format!("vertex `{v}` has no r-matrix"))),
                },
            };
            rs.insert(v.clone(), r);
        }
        if let Some(first) = rs.values().next() {
            if let Some((v, _)) = rs.iter().find(|(_, r)| r.sym() != first.sym()) {
                return Err(invalid(format!("/r_matrices/{v}"), "invariant violated: all vertices need a common symmetric part"));
            }
        }
        let mut quasi_lambdas = BTreeMap::new();
        for (v, r) in &self.quasi_lambdas {
            let pointer = format!("/quasi_lambdas/{v}");
            let r = build(r, &pointer)?;
            if rs.get(v).is_some_and(|own| own.sym() != r.sym()) {
                return Err(invalid(pointer, "Λ must come from an r-matrix with the common symmetric part"));
            }
            quasi_lambdas.insert(v.clone(), r.antisym().clone());
        }

        let defaults = Sampling::default();
        let sampling = Sampling {
            samples: self.samples.unwrap_or(defaults.samples),
            tol: self.tol.unwrap_or(defaults.tol),
            seed: self.seed.unwrap_or(defaults.seed),
            scale: self.scale.unwrap_or(defaults.scale),
        };
        check_sampling(&sampling)?;
        Ok(Scenario {
            name: self.name.clone().unwrap_or_else(|| fallback_name.to_string()),
            algebra,
            skeleton,
            rs,
            checks,
            sampling,
            cobracket: self.cobracket.unwrap_or_default(),
            quasi_lambdas,
        })
    }
}

fn nest(prefix: &str, e: Error) -> Error {
    match e {
        Error::Json { pointer, message } => Error::Json { pointer: format!("{prefix}{pointer}"), message },
        other => invalid(prefix, other.to_string()),
    }
}

pub fn check_sampling(s: &Sampling) -> Result<(), Error> {
    if s.samples < 1 {
        return Err(invalid("/samples", "at least one sample is required"));
    }
    if !(s.tol > 0.0 && s.tol.is_finite()) {
        return Err(invalid("/tol", "tolerance must be positive"));
    }
    if !(s.scale >= 0.0 && s.scale.is_finite()) {
        return Err(invalid("/scale", "scale must be non-negative"));
    }
    Ok(())
}

pub fn parse_scenario(text: &str, fallback_name: &str) -> Result<Scenario, Error> {
    from_json_str::<ScenarioFile>(text)?.validate(fallback_name)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    Ok(parse_scenario(&text, stem)?)
}
