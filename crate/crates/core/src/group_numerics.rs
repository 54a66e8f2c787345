//! Pointwise evaluation of invariant fields on `G^{Γ_1}` for a matrix group.
//!
//! Tangent vectors are left-trivialized: a vector at `g` is `g·v` with
//! `v ∈ 𝔤`, so `x_L ↦ x` and `x_R ↦ Ad_{g^{-1}} x` on its edge. Evaluated
//! multivectors live in `∧^k(𝔤^{Γ_1})` with index `edge·dim 𝔤 + a`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ciliated_graph::{local_move, MoveDirection, Pivot, Skeleton};
use crate::error::{Error, Result};
use crate::invariant_calculus::{DoubleAlgebra, InvariantMultivector, Side};
use crate::lie_core::{AltTensor, LieAlgebra, LinearMap, Tensor};
use crate::scalar::Scalar;

/// Largest accepted condition number of a sampled group element.
pub const CONDITION_CAP: f64 = 1e6;

/// Re-expansion residual above which [`AdjointExpander`] reports an error.
const RESIDUAL_TOL: f64 = 1e-8;

/// A point of `G^{Γ_1}`: one matrix per edge, in skeleton edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint {
    pub edges: Vec<String>,
    pub matrices: Vec<DMatrix<f64>>,
}

impl GroupPoint {
    pub fn identity(edges: Vec<String>, n: usize) -> Self {
        let matrices = vec![DMatrix::identity(n, n); edges.len()];
        Self { edges, matrices }
    }

    pub fn matrix(&self, edge: &str) -> Result<&DMatrix<f64>> {
        let i = self.edges.iter().position(|e| e == edge).ok_or_else(|| Error::UnknownEdge(edge.into()))?;
        Ok(&self.matrices[i])
    }

    /// Edge-wise product.
    pub fn mul(&self, other: &Self) -> Self {
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a * b).collect();
        Self { edges: self.edges.clone(), matrices }
    }
}

pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let (lo, hi) = (sv.min(), sv.max());
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

pub fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone().try_inverse().ok_or(Error::Singular)
}

fn rep_of<S: Scalar>(alg: &LieAlgebra<S>) -> Result<&[DMatrix<f64>]> {
    alg.rep().ok_or_else(|| Error::NoRepresentation(alg.name().into()))
}

/// `Σ_a c_a rep(e_a)`.
pub fn rep_element(rep: &[DMatrix<f64>], coeffs: &[f64]) -> DMatrix<f64> {
    let n = rep[0].nrows();
    let mut out = DMatrix::zeros(n, n);
    for (m, c) in rep.iter().zip(coeffs) {
        out += m * *c;
    }
    out
}

/// Independent stream `index` of the generator seeded by `seed`.
pub fn split_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `exp(X_1)·exp(X_2)` with coefficients uniform in `[−scale, scale]`.
pub fn random_group_element<S: Scalar, R: Rng>(alg: &LieAlgebra<S>, rng: &mut R, scale: f64) -> Result<DMatrix<f64>> {
    let rep = rep_of(alg)?;
    loop {
        let mut draw = || -> Vec<f64> {
            (0..alg.dim()).map(|_| if scale == 0.0 { 0.0 } else { rng.random_range(-scale..=scale) }).collect()
        };
        let (x1, x2) = (draw(), draw());
        let g = rep_element(rep, &x1).exp() * rep_element(rep, &x2).exp();
        if condition_number(&g) <= CONDITION_CAP {
            return Ok(g);
        }
    }
}

/// A random point of `G^{Γ_1}`; deterministic in `seed`.
pub fn random_point<S: Scalar>(s: &Skeleton, alg: &LieAlgebra<S>, seed: u64, scale: f64) -> Result<GroupPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<String> = s.graph.edges().into_iter().map(|e| e.id).collect();
    let matrices = edges.iter().map(|_| random_group_element(alg, &mut rng, scale)).collect::<Result<_>>()?;
    Ok(GroupPoint { edges, matrices })
}

/// Expands matrices in the representation basis by least squares.
#[derive(Clone, Debug)]
pub struct AdjointExpander {
    rep: Vec<DMatrix<f64>>,
    flat: DMatrix<f64>,
    pinv: DMatrix<f64>,
}

impl AdjointExpander {
    pub fn new<S: Scalar>(alg: &LieAlgebra<S>) -> Result<Self> {
        let rep = rep_of(alg)?.to_vec();
        let n2 = rep[0].len();
        let flat = DMatrix::from_fn(n2, rep.len(), |i, a| rep[a].as_slice()[i]);
        let pinv = flat.clone().pseudo_inverse(1e-12).map_err(|_| Error::Singular)?;
        Ok(Self { rep, flat, pinv })
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    pub fn rep(&self) -> &[DMatrix<f64>] {
        &self.rep
    }

    /// Coordinates of `m` in the representation basis, with the residual.
    pub fn expand(&self, m: &DMatrix<f64>) -> (Vec<f64>, f64) {
        let v = nalgebra::DVector::from_column_slice(m.as_slice());
        let c = &self.pinv * &v;
        let residual = (&self.flat * &c - v).amax();
        (c.iter().copied().collect(), residual)
    }

    /// Matrix of `Ad_g` on `𝔤`; column `b` holds the coordinates of `g e_b g^{-1}`.
    pub fn ad(&self, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let gi = inverse(g)?;
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        let scale = g.amax().max(gi.amax()).max(1.0);
        for b in 0..d {
            let m = g * &self.rep[b] * &gi;
            let (c, res) = self.expand(&m);
            if res > RESIDUAL_TOL * scale * scale {
                return Err(Error::ReexpansionResidual(res));
            }
            for a in 0..d {
                out[(a, b)] = c[a];
            }
        }
        Ok(out)
    }
}

fn dense_to_map(blocks: &[(usize, usize, DMatrix<f64>)], domain: usize, codomain: usize) -> Result<LinearMap<f64>> {
    let mut images: Vec<Vec<(usize, f64)>> = vec![Vec::new(); domain];
    for (row_off, col_off, m) in blocks {
        for b in 0..m.ncols() {
            for a in 0..m.nrows() {
                let c = m[(a, b)];
                if c != 0.0 {
                    images[col_off + b].push((row_off + a, c));
                }
            }
        }
    }
    LinearMap::new(codomain, images)
}

fn exact_to_float<S: Scalar>(t: &AltTensor<S>) -> AltTensor<f64> {
    t.map_coeffs(|c| c.to_f64())
}

/// Evaluation of invariant fields at one point.
#[derive(Clone, Debug)]
pub struct Evaluator {
    map: LinearMap<f64>,
}

impl Evaluator {
    /// Left-trivialized evaluation `D^E → 𝔤^E` at `p`.
    pub fn new<S: Scalar>(double: &DoubleAlgebra<S>, expander: &AdjointExpander, p: &GroupPoint) -> Result<Self> {
        if double.edges() != p.edges.as_slice() {
            return Err(Error::CarrierMismatch("point and carrier have different edges".into()));
        }
        let d = double.base().dim();
        let mut blocks = Vec::with_capacity(2 * p.edges.len());
        for (e, g) in p.matrices.iter().enumerate() {
            blocks.push((e * d, double.index(e, Side::L, 0), DMatrix::identity(d, d)));
            blocks.push((e * d, double.index(e, Side::R, 0), expander.ad(&inverse(g)?)?));
        }
        Ok(Self { map: dense_to_map(&blocks, double.dim(), p.edges.len() * d)? })
    }

    pub fn alt<S: Scalar>(&self, mv: &InvariantMultivector<S>) -> Result<AltTensor<f64>> {
        self.map.apply_alt(&exact_to_float(mv.body()))
    }

    pub fn alt_body<S: Scalar>(&self, body: &AltTensor<S>) -> Result<AltTensor<f64>> {
        self.map.apply_alt(&exact_to_float(body))
    }

    pub fn tensor<S: Scalar>(&self, t: &Tensor<S>) -> Result<Tensor<f64>> {
        self.map.apply_tensor(&t.map_coeffs(|c| c.to_f64()))
    }
}

pub fn evaluate<S: Scalar>(mv: &InvariantMultivector<S>, p: &GroupPoint) -> Result<AltTensor<f64>> {
    let expander = AdjointExpander::new(mv.carrier().base())?;
    Evaluator::new(mv.carrier(), &expander, p)?.alt(mv)
}

/// Sampling parameters for field-zero decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sampling {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub scale: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { samples: 8, tol: 1e-8, seed: 0, scale: 0.5 }
    }
}

impl Sampling {
    /// The `i`-th sample point.
    pub fn point<S: Scalar>(&self, s: &Skeleton, alg: &LieAlgebra<S>, i: usize) -> Result<GroupPoint> {
        let seed = split_rng(self.seed, i as u64).random::<u64>();
        random_point(s, alg, seed, self.scale)
    }
}

/// How a field-zero verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    /// The exact multivector is literally zero.
    Exact,
    /// Decided from sampled points.
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldVerdict {
    pub zero: bool,
    /// Largest evaluated coefficient over the sampled points.
    pub witness: f64,
    /// `tol · max(1, largest exact coefficient)`.
    pub threshold: f64,
    pub decision: Decision,
}

/// Samples `field` at the points of `sampling`; zero iff every evaluated
/// coefficient stays below `tol · max(1, magnitude)`.
pub fn sampled_zero<F>(s: &Skeleton, alg: &LieAlgebra<impl Scalar>, sampling: &Sampling, magnitude: f64, mut field: F) -> Result<FieldVerdict>
where
    F: FnMut(&GroupPoint) -> Result<f64>,
{
    if sampling.samples < 1 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let threshold = sampling.tol * magnitude.max(1.0);
    let mut witness = 0.0f64;
    for i in 0..sampling.samples {
        let p = sampling.point(s, alg, i)?;
        witness = witness.max(field(&p)?);
    }
    Ok(FieldVerdict { zero: witness < threshold, witness, threshold, decision: Decision::Sampled })
}

/// Field-zero decision for an invariant multivector on skeleton `s`.
pub fn field_is_zero<S: Scalar>(mv: &InvariantMultivector<S>, s: &Skeleton, sampling: &Sampling) -> Result<FieldVerdict> {
    if mv.is_zero() {
        let threshold = sampling.tol;
        return Ok(FieldVerdict { zero: true, witness: 0.0, threshold, decision: Decision::Exact });
    }
    let base = mv.carrier().base();
    let expander = AdjointExpander::new(base)?;
    sampled_zero(s, base, sampling, mv.body().max_abs(), |p| {
        Ok(Evaluator::new(mv.carrier(), &expander, p)?.alt(mv)?.max_abs())
    })
}

/// Field-zero decision for a (not necessarily alternating) invariant tensor.
pub fn tensor_field_is_zero<S: Scalar>(
    double: &DoubleAlgebra<S>,
    t: &Tensor<S>,
    s: &Skeleton,
    sampling: &Sampling,
) -> Result<FieldVerdict> {
    if t.is_zero() {
        return Ok(FieldVerdict { zero: true, witness: 0.0, threshold: sampling.tol, decision: Decision::Exact });
    }
    let expander = AdjointExpander::new(double.base())?;
    sampled_zero(s, double.base(), sampling, t.max_abs(), |p| Ok(Evaluator::new(double, &expander, p)?.tensor(t)?.max_abs()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A word in the free groupoid on the edges, starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWord {
    pub start: String,
    pub steps: Vec<(String, Direction)>,
}

impl PathWord {
    pub fn empty(start: &str) -> Self {
        Self { start: start.into(), steps: Vec::new() }
    }

    /// Vertices visited, `θ(w)` first and `τ(w)` last.
    pub fn vertices(&self, s: &Skeleton) -> Result<Vec<String>> {
        let mut at = self.start.clone();
        s.graph.vertex_index(&at)?;
        let mut out = vec![at.clone()];
        for (i, (edge, dir)) in self.steps.iter().enumerate() {
            let (from, to) = match dir {
                Direction::Forward => (s.source_vertex(edge)?, s.target_vertex(edge)?),
                Direction::Backward => (s.target_vertex(edge)?, s.source_vertex(edge)?),
            };
            if from != at {
                return Err(Error::NotComposable(i));
            }
            at = to.to_string();
            out.push(at.clone());
        }
        Ok(out)
    }

    pub fn end(&self, s: &Skeleton) -> Result<String> {
        Ok(self.vertices(s)?.pop().expect("nonempty"))
    }

    /// `w` followed by `other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Self { start: self.start.clone(), steps }
    }
}

/// A random composable word of length `0..=max_len`.
pub fn random_word<R: Rng>(s: &Skeleton, rng: &mut R, max_len: usize) -> PathWord {
    let g = &s.graph;
    let start = g.vertices()[rng.random_range(0..g.vertices().len())].clone();
    let len = rng.random_range(0..=max_len);
    let mut at = start.clone();
    let mut steps = Vec::with_capacity(len);
    for _ in 0..len {
        let here = g.order(&at).expect("vertex");
        if here.is_empty() {
            break;
        }
        let h = &here[rng.random_range(0..here.len())];
        let edge = g.edge_of(h).expect("valid");
        let forward = s.orientation.is_source(g, h).expect("valid");
        at = g.vertex_of(g.partner(h).expect("valid")).expect("valid").to_string();
        steps.push((edge, if forward { Direction::Forward } else { Direction::Backward }));
    }
    PathWord { start, steps }
}

fn factors(s: &Skeleton, p: &GroupPoint, w: &PathWord) -> Result<Vec<(usize, Direction, DMatrix<f64>)>> {
    w.vertices(s)?;
    w.steps
        .iter()
        .map(|(edge, dir)| {
            let e = p.edges.iter().position(|x| x == edge).ok_or_else(|| Error::UnknownEdge(edge.clone()))?;
            let g = &p.matrices[e];
            Ok((e, *dir, if *dir == Direction::Forward { g.clone() } else { inverse(g)? }))
        })
        .collect()
}

fn matrix_size(p: &GroupPoint) -> usize {
    p.matrices.first().map(|m| m.nrows()).unwrap_or(0)
}

/// `ev_w(p)`: product of edge matrices along `w`, inverses on backward steps.
pub fn ev_word(s: &Skeleton, p: &GroupPoint, w: &PathWord) -> Result<DMatrix<f64>> {
    let n = matrix_size(p);
    Ok(factors(s, p, w)?.into_iter().fold(DMatrix::identity(n, n), |acc, (_, _, m)| acc * m))
}

/// `g_γ ↦ h_{θ(γ)}^{-1} g_γ h_{τ(γ)}`.
pub fn gauge_transform(s: &Skeleton, p: &GroupPoint, h: &BTreeMap<String, DMatrix<f64>>) -> Result<GroupPoint> {
    let get = |v: &str| h.get(v).ok_or_else(|| Error::UnknownVertex(v.into()));
    let matrices = p
        .edges
        .iter()
        .zip(&p.matrices)
        .map(|(edge, g)| Ok(inverse(get(s.source_vertex(edge)?)?)? * g * get(s.target_vertex(edge)?)?))
        .collect::<Result<_>>()?;
    Ok(GroupPoint { edges: p.edges.clone(), matrices })
}

/// `max |ev_w(h·p) − h_{θ(w)}^{-1} ev_w(p) h_{τ(w)}|`.
pub fn equivariance_residual(s: &Skeleton, p: &GroupPoint, h: &BTreeMap<String, DMatrix<f64>>, w: &PathWord) -> Result<f64> {
    let moved = gauge_transform(s, p, h)?;
    let lhs = ev_word(s, &moved, w)?;
    let start = h.get(&w.start).ok_or_else(|| Error::UnknownVertex(w.start.clone()))?;
    let end = w.end(s)?;
    let end = h.get(&end).ok_or(Error::UnknownVertex(end))?;
    let rhs = inverse(start)? * ev_word(s, p, w)? * end;
    Ok((lhs - rhs).amax())
}

/// Scalar functions of a holonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    Entry(usize, usize),
    Trace,
}

fn observe(m: &DMatrix<f64>, o: Observable) -> Result<f64> {
    match o {
        Observable::Entry(i, j) => {
            if i >= m.nrows() || j >= m.ncols() {
                return Err(Error::IndexOutOfRange { index: i.max(j), dim: m.nrows() });
            }
            Ok(m[(i, j)])
        }
        Observable::Trace => Ok(m.trace()),
    }
}

/// Left-trivialized differential of `o ∘ ev_w` at `p`, as a covector on `𝔤^E`.
pub fn word_differential<S: Scalar>(
    s: &Skeleton,
    alg: &LieAlgebra<S>,
    p: &GroupPoint,
    w: &PathWord,
    o: Observable,
) -> Result<Vec<f64>> {
    let rep = rep_of(alg)?;
    let d = alg.dim();
    let n = matrix_size(p);
    let fs = factors(s, p, w)?;
    observe(&DMatrix::identity(n, n), o)?;
    let mut prefix = vec![DMatrix::identity(n, n)];
    for (_, _, m) in &fs {
        let next = prefix.last().expect("nonempty") * m;
        prefix.push(next);
    }
    let mut suffix = vec![DMatrix::identity(n, n); fs.len() + 1];
    for t in (0..fs.len()).rev() {
        suffix[t] = &fs[t].2 * &suffix[t + 1];
    }
    let mut out = vec![0.0; p.edges.len() * d];
    for (t, (e, dir, m)) in fs.iter().enumerate() {
        for a in 0..d {
            let variation = match dir {
                Direction::Forward => &prefix[t] * m * &rep[a] * &suffix[t + 1],
                Direction::Backward => -(&prefix[t] * &rep[a] * m * &suffix[t + 1]),
            };
            out[e * d + a] += observe(&variation, o)?;
        }
    }
    Ok(out)
}

/// `π(α, β)` for an evaluated bivector.
pub fn pair_bivector(pi: &AltTensor<f64>, a: &[f64], b: &[f64]) -> f64 {
    pi.terms().map(|(idx, c)| c * (a[idx[0]] * b[idx[1]] - a[idx[1]] * b[idx[0]])).sum()
}

/// `{f_1, f_2}` for `f_k = o_k ∘ ev_{w_k}` under an evaluated bivector.
pub fn poisson_bracket<S: Scalar>(
    s: &Skeleton,
    alg: &LieAlgebra<S>,
    pi: &AltTensor<f64>,
    p: &GroupPoint,
    (w1, o1): (&PathWord, Observable),
    (w2, o2): (&PathWord, Observable),
) -> Result<f64> {
    let a = word_differential(s, alg, p, w1, o1)?;
    let b = word_differential(s, alg, p, w2, o2)?;
    Ok(pair_bivector(pi, &a, &b))
}

/// `{(ev_{w1})_{ij}, (ev_{w2})_{kl}}`.
pub fn poisson_bracket_entries<S: Scalar>(
    s: &Skeleton,
    alg: &LieAlgebra<S>,
    pi: &AltTensor<f64>,
    p: &GroupPoint,
    w1: &PathWord,
    (i, j): (usize, usize),
    w2: &PathWord,
    (k, l): (usize, usize),
) -> Result<f64> {
    poisson_bracket(s, alg, pi, p, (w1, Observable::Entry(i, j)), (w2, Observable::Entry(k, l)))
}

/// A change of skeleton whose coordinate map is pushed forward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkeletonMove {
    Reverse(String),
    Local(Pivot),
}

/// The image skeleton, the image point, and the differential of the
/// coordinate change in left trivialization.
pub fn pushforward_map<S: Scalar>(
    s: &Skeleton,
    alg: &LieAlgebra<S>,
    p: &GroupPoint,
    mv: &SkeletonMove,
) -> Result<(Skeleton, GroupPoint, LinearMap<f64>)> {
    let expander = AdjointExpander::new(alg)?;
    let d = alg.dim();
    let dim = p.edges.len() * d;
    let index = |edge: &str| p.edges.iter().position(|e| e == edge).ok_or_else(|| Error::UnknownEdge(edge.into()));
    let mut blocks: Vec<(usize, usize, DMatrix<f64>)> = Vec::new();
    let mut matrices = p.matrices.clone();
    let id = DMatrix::identity(d, d);
    let target = match mv {
        SkeletonMove::Reverse(edge) => {
            let e = index(edge)?;
            let g = &p.matrices[e];
            for k in (0..p.edges.len()).filter(|k| *k != e) {
                blocks.push((k * d, k * d, id.clone()));
            }
            blocks.push((e * d, e * d, -expander.ad(g)?));
            matrices[e] = inverse(g)?;
            s.reverse_edge(edge)?
        }
        SkeletonMove::Local(pivot) => {
            let (t, _) = local_move(s, pivot)?;
            let (e1, e2) = (index(&pivot.moved)?, index(&pivot.along)?);
            let (g1, g2) = (&p.matrices[e1], &p.matrices[e2]);
            for k in (0..p.edges.len()).filter(|k| *k != e1) {
                blocks.push((k * d, k * d, id.clone()));
            }
            match pivot.direction {
                MoveDirection::Forward => {
                    blocks.push((e1 * d, e1 * d, expander.ad(&inverse(g2)?)?));
                    blocks.push((e1 * d, e2 * d, id.clone()));
                    matrices[e1] = g1 * g2;
                }
                MoveDirection::Backward => {
                    let ad = expander.ad(g2)?;
                    blocks.push((e1 * d, e1 * d, ad.clone()));
                    blocks.push((e1 * d, e2 * d, -ad));
                    matrices[e1] = g1 * inverse(g2)?;
                }
            }
            t
        }
    };
    let map = dense_to_map(&blocks, dim, dim)?;
    Ok((target, GroupPoint { edges: p.edges.clone(), matrices }, map))
}

/// Pushes an evaluated multivector at `p` forward along a skeleton change.
pub fn pushforward<S: Scalar>(
    s: &Skeleton,
    alg: &LieAlgebra<S>,
    p: &GroupPoint,
    value: &AltTensor<f64>,
    mv: &SkeletonMove,
) -> Result<(Skeleton, GroupPoint, AltTensor<f64>)> {
    let (t, q, map) = pushforward_map(s, alg, p, mv)?;
    Ok((t, q, map.apply_alt(value)?))
}

/// `E(gh) − E(h) − Ad_{h^{-1}}^{⊗2} E(g)` for an evaluated bivector field
/// `E`, with `Ad` acting edge-wise: the multiplicativity defect.
pub fn multiplicativity_residual<S: Scalar>(
    mv: &InvariantMultivector<S>,
    g: &GroupPoint,
    h: &GroupPoint,
) -> Result<f64> {
    let base = mv.carrier().base();
    let expander = AdjointExpander::new(base)?;
    let at = |p: &GroupPoint| Evaluator::new(mv.carrier(), &expander, p)?.alt(mv);
    let d = base.dim();
    let mut blocks = Vec::with_capacity(h.edges.len());
    for (e, m) in h.matrices.iter().enumerate() {
        blocks.push((e * d, e * d, expander.ad(&inverse(m)?)?));
    }
    let ad_h_inv = dense_to_map(&blocks, h.edges.len() * d, h.edges.len() * d)?;
    let lhs = at(&g.mul(h))?;
    let rhs = at(h)? + ad_h_inv.apply_alt(&at(g)?)?;
    Ok((lhs - rhs).max_abs())
}
