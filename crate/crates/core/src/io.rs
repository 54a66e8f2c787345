//! JSON records for algebras, r-matrices and skeletons.
//!
//! Rationals are strings `"p/q"`, `"p"` or decimals. Parse errors carry the
//! JSON pointer of the offending value.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ciliated_graph::{annulus_marked, disk2, polygon_path, sigma_n, CiliatedGraph, Orientation, Skeleton};
use crate::error::{Error, Result};
use crate::lie_core::{builtin_algebra, from_matrix_basis, AltTensor, LieAlgebra, Tensor};
use crate::r_matrix::{builtin_rmatrix, RMatrix};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

/// Deserializes `T`, reporting failures with a JSON pointer.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Json { pointer: pointer(e.path()), message: e.inner().to_string() })
}

/// Like [`from_json_str`] for an already parsed value.
pub fn from_json_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| Error::Json { pointer: pointer(e.path()), message: e.inner().to_string() })
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn at(pointer: String) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::Json { .. } => e,
        other => Error::Json { pointer, message: other.to_string() },
    }
}

fn rational(text: &str, pointer: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| Error::Json { pointer: pointer.into(), message: format!("`{text}` is not a rational") })
}

/// A built-in name or an inline algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRecord {
    Named(String),
    Inline(InlineAlgebra),
}

/// Either `matrices` (a rational matrix basis, brackets read off from
/// commutators) or `brackets` `[i, j, [[k, c], …]]` with optional float `rep`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineAlgebra {
    pub name: String,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<(usize, usize, Vec<(usize, String)>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<Vec<Vec<Vec<f64>>>>,
}

impl AlgebraRecord {
    pub fn build(&self) -> Result<LieAlgebra<Rational>> {
        self.build_at("")
    }

    fn build_at(&self, base: &str) -> Result<LieAlgebra<Rational>> {
        match self {
            AlgebraRecord::Named(name) => builtin_algebra(name).map_err(at(base.to_string())),
            AlgebraRecord::Inline(a) => a.build_at(base),
        }
    }

    /// Named if `alg` equals the built-in of its name, inline otherwise.
    pub fn from_algebra(alg: &LieAlgebra<Rational>) -> Self {
        if builtin_algebra(alg.name()).map(|b| b == *alg).unwrap_or(false) {
            return AlgebraRecord::Named(alg.name().to_string());
        }
        let dim = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = alg.bracket_basis(i, j);
                if !v.is_empty() {
                    brackets.push((i, j, v.iter().map(|(k, c)| (*k, format_rational(c))).collect()));
                }
            }
        }
        let rep = alg.rep().map(|ms| {
            ms.iter().map(|m| (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()).collect()
        });
        AlgebraRecord::Inline(InlineAlgebra {
            name: alg.name().to_string(),
            labels: alg.labels().to_vec(),
            brackets,
            matrices: None,
            rep,
        })
    }
}

impl InlineAlgebra {
    fn build_at(&self, base: &str) -> Result<LieAlgebra<Rational>> {
        if let Some(ms) = &self.matrices {
            if !self.brackets.is_empty() || self.rep.is_some() {
                return Err(Error::Json {
                    pointer: base.into(),
                    message: "`matrices` excludes `brackets` and `rep`".into(),
                });
            }
            let mut basis = Vec::with_capacity(ms.len());
            for (b, m) in ms.iter().enumerate() {
                let mut rows = Vec::with_capacity(m.len());
                for (r, row) in m.iter().enumerate() {
                    let row = row
                        .iter()
                        .enumerate()
                        .map(|(c, x)| rational(x, &format!("{base}/matrices/{b}/{r}/{c}")))
                        .collect::<Result<Vec<_>>>()?;
                    rows.push(row);
                }
                basis.push(rows);
            }
            return from_matrix_basis(&self.name, self.labels.clone(), basis).map_err(at(format!("{base}/matrices")));
        }
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for (n, (i, j, v)) in self.brackets.iter().enumerate() {
            let v = v
                .iter()
                .enumerate()
                .map(|(t, (k, c))| Ok((*k, rational(c, &format!("{base}/brackets/{n}/2/{t}/1"))?)))
                .collect::<Result<Vec<_>>>()?;
            brackets.push((*i, *j, v));
        }
        let rep = self.rep.as_ref().map(|ms| {
            ms.iter()
                .map(|m| DMatrix::from_fn(m.len(), m.first().map_or(0, |r| r.len()), |r, c| m[r][c]))
                .collect()
        });
        LieAlgebra::from_brackets(self.name.clone(), self.labels.clone(), brackets, rep).map_err(at(base.to_string()))
    }
}

/// `{"algebra": …, "s": [[i, j, c], …], "lambda": [[i, j, c], …]}`. Entries
/// of `s` have `i ≤ j` and stand for both `(i, j)` and `(j, i)`; entries of
/// `lambda` have `i < j` and are wedge coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RMatrixRecord {
    pub algebra: AlgebraRecord,
    #[serde(default)]
    pub s: Vec<(usize, usize, String)>,
    #[serde(default)]
    pub lambda: Vec<(usize, usize, String)>,
}

/// A built-in name or an inline r-matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RMatrixRef {
    Named(String),
    Inline(RMatrixRecord),
}

impl RMatrixRecord {
    pub fn build(&self) -> Result<RMatrix<Rational>> {
        self.build_at("")
    }

    fn build_at(&self, base: &str) -> Result<RMatrix<Rational>> {
        let alg = Arc::new(self.algebra.build_at(&format!("{base}/algebra"))?);
        let dim = alg.dim();
        let mut sym = Vec::new();
        for (n, (i, j, c)) in self.s.iter().enumerate() {
            let here = format!("{base}/s/{n}");
            if i > j {
                return Err(Error::Json { pointer: here, message: "entries of `s` need i ≤ j".into() });
            }
            let c = rational(c, &format!("{here}/2"))?;
            sym.push((vec![*i, *j], c.clone()));
            if i != j {
                sym.push((vec![*j, *i], c));
            }
        }
        let sym = Tensor::from_terms(dim, 2, sym).map_err(at(format!("{base}/s")))?;
        let mut lambda = Vec::new();
        for (n, (i, j, c)) in self.lambda.iter().enumerate() {
            let here = format!("{base}/lambda/{n}");
            if i >= j {
                return Err(Error::Json { pointer: here, message: "entries of `lambda` need i < j".into() });
            }
            lambda.push((vec![*i, *j], rational(c, &format!("{here}/2"))?));
        }
        let lambda = AltTensor::from_terms(dim, 2, lambda).map_err(at(format!("{base}/lambda")))?;
        RMatrix::from_parts(alg, sym, lambda).map_err(at(base.to_string()))
    }

    pub fn from_rmatrix(r: &RMatrix<Rational>) -> Self {
        let s = r
            .sym()
            .terms()
            .filter(|(idx, _)| idx[0] <= idx[1])
            .map(|(idx, c)| (idx[0], idx[1], format_rational(c)))
            .collect();
        let lambda = r.antisym().terms().map(|(idx, c)| (idx[0], idx[1], format_rational(c))).collect();
        Self { algebra: AlgebraRecord::from_algebra(r.algebra()), s, lambda }
    }
}

impl RMatrixRef {
    pub fn build(&self) -> Result<RMatrix<Rational>> {
        self.build_at("")
    }

    pub fn build_at(&self, base: &str) -> Result<RMatrix<Rational>> {
        match self {
            RMatrixRef::Named(name) => builtin_rmatrix(name).map_err(at(base.to_string())),
            RMatrixRef::Inline(r) => r.build_at(base),
        }
    }
}

/// Explicit ciliated graph with orientation. `sources` lists the source
/// half-edge of every edge; when absent, the first half-edge of each edge in
/// `half_edges` order is the source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub vertices: Vec<String>,
    pub half_edges: Vec<String>,
    pub involution: BTreeMap<String, String>,
    pub incidence: BTreeMap<String, String>,
    pub orders: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<Vec<String>>,
}

/// A standard builder or an explicit graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SkeletonRecord {
    Builder { builder: String, #[serde(default)] size: Option<usize> },
    Explicit(GraphRecord),
}

impl GraphRecord {
    pub fn build(&self) -> Result<Skeleton> {
        self.build_at("")
    }

    fn build_at(&self, base: &str) -> Result<Skeleton> {
        let graph = CiliatedGraph::new(
            self.vertices.clone(),
            self.half_edges.clone(),
            self.involution.clone(),
            self.incidence.clone(),
            self.orders.clone(),
        )
        .map_err(at(base.to_string()))?;
        let orientation = match &self.sources {
            None => Orientation::default_for(&graph),
            Some(list) => {
                let mut sources = BTreeMap::new();
                for (n, h) in list.iter().enumerate() {
                    let edge = graph.edge_of(h).map_err(at(format!("{base}/sources/{n}")))?;
                    if sources.insert(edge.clone(), h.clone()).is_some() {
                        return Err(Error::Json {
                            pointer: format!("{base}/sources/{n}"),
                            message: format!("edge `{edge}` has two sources"),
                        });
                    }
                }
                Orientation::new(&graph, sources).map_err(at(format!("{base}/sources")))?
            }
        };
        Ok(Skeleton { graph, orientation })
    }

    pub fn from_skeleton(s: &Skeleton) -> Self {
        let g = &s.graph;
        let sources = g.edges().iter().map(|e| s.orientation.source(&e.id).expect("oriented").to_string()).collect();
        Self {
            vertices: g.vertices().to_vec(),
            half_edges: g.half_edges().to_vec(),
            involution: g.involution().clone(),
            incidence: g.incidence().clone(),
            orders: g.orders().clone(),
            sources: Some(sources),
        }
    }
}

impl SkeletonRecord {
    pub fn build(&self) -> Result<Skeleton> {
        self.build_at("")
    }

    pub fn build_at(&self, base: &str) -> Result<Skeleton> {
        match self {
            SkeletonRecord::Explicit(g) => g.build_at(base),
            SkeletonRecord::Builder { builder, size } => {
                let need = || {
                    size.ok_or_else(|| Error::Json { pointer: format!("{base}/size"), message: format!("`{builder}` needs a size") })
                };
                let built = match builder.as_str() {
                    "disk2" => Ok(disk2()),
                    "annulus_marked" => annulus_marked(need()?),
                    "sigma_n" => sigma_n(need()?),
                    "polygon_path" => polygon_path(need()?),
                    other => Err(Error::UnknownBuiltin(other.to_string())),
                };
                built.map_err(at(format!("{base}/builder")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r_matrix::sl2_standard;

    #[test]
    fn named_rmatrix_round_trips() {
        let r: RMatrixRef = from_json_str(r#""sl2_standard""#).unwrap();
        let built = r.build().unwrap();
        assert_eq!(built, sl2_standard());
        let text = serde_json::to_string(&RMatrixRecord::from_rmatrix(&built)).unwrap();
        let back: RMatrixRecord = from_json_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), built);
        assert_eq!(back.algebra, AlgebraRecord::Named("sl2".into()));
    }

    #[test]
    fn inline_matches_builtin() {
        let text = r#"{"algebra": "sl2", "s": [[0, 0, "1/4"], [1, 2, "1/2"]], "lambda": [[1, 2, "1/2"]]}"#;
        let r: RMatrixRecord = from_json_str(text).unwrap();
        assert_eq!(r.build().unwrap(), sl2_standard());
    }

    #[test]
    fn errors_carry_pointers() {
        let bad = r#"{"algebra": "sl2", "s": [[0, 0, "x"]], "lambda": []}"#;
        let r: RMatrixRecord = from_json_str(bad).unwrap();
        match r.build() {
            Err(Error::Json { pointer, .. }) => assert_eq!(pointer, "/s/0/2"),
            other => panic!("{other:?}"),
        }
        let bad = r#"{"algebra": "sl2", "s": [], "lambda": [[2, 1, "1"]]}"#;
        let r: RMatrixRecord = from_json_str(bad).unwrap();
        assert!(matches!(r.build(), Err(Error::Json { pointer, .. }) if pointer == "/lambda/0"));
        let e = from_json_str::<GraphRecord>(r#"{"vertices": ["v"], "half_edges": 3}"#).unwrap_err();
        assert!(matches!(e, Error::Json { pointer, .. } if pointer == "/half_edges"));
    }

    #[test]
    fn inline_algebra_from_matrices() {
        let text = r#"{"name": "sl2m", "labels": ["h", "e", "f"],
            "matrices": [[["1","0"],["0","-1"]], [["0","1"],["0","0"]], [["0","0"],["1","0"]]]}"#;
        let a: AlgebraRecord = from_json_str(text).unwrap();
        assert_eq!(a.build().unwrap(), crate::lie_core::sl2());
    }

    #[test]
    fn graph_round_trips_and_names_fixed_points() {
        let s = sigma_n(3).unwrap();
        let rec = GraphRecord::from_skeleton(&s);
        let text = serde_json::to_string(&rec).unwrap();
        assert_eq!(from_json_str::<GraphRecord>(&text).unwrap().build().unwrap(), s);
        let mut bad = GraphRecord::from_skeleton(&disk2());
        bad.involution.insert("a1".into(), "a1".into());
        let msg = bad.build().unwrap_err().to_string();
        assert!(msg.contains("a1"), "{msg}");
    }
}
