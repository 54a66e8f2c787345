//! Exact calculus of left/right-invariant multivector fields on `G^{Γ_1}`.
//!
//! An invariant field is an element of `∧^k D^E`, where `D^E` has one copy of
//! `𝔤_L ⊕ 𝔤_R` per edge with `[x_L, y_L] = [x,y]_L`, `[x_R, y_R] = −[x,y]_R`
//! and `[x_L, y_R] = 0`. Schouten brackets of invariant fields are then
//! Schouten brackets in `D^E`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ciliated_graph::Skeleton;
use crate::error::{Error, Result};
use crate::lie_core::{schouten, AdInvariant, AltTensor, Cobracket, DirectSum, LieAlgebra, LinearMap, Tensor};
use crate::r_matrix::{delta_r, mix_tensor, r_power, RMatrix, SignFunction};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L = 0,
    R = 1,
}

/// `D^E = ⊕_{γ ∈ E} (𝔤_L ⊕ 𝔤_R)`; basis index `(2·edge + side)·dim 𝔤 + a`.
#[derive(Clone, Debug)]
pub struct DoubleAlgebra<S> {
    base: Arc<LieAlgebra<S>>,
    edges: Vec<String>,
    algebra: LieAlgebra<S>,
}

impl<S: Scalar> DoubleAlgebra<S> {
    pub fn new(base: Arc<LieAlgebra<S>>, edges: Vec<String>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidArgument("double algebra over an empty edge set".into()));
        }
        let opposite = base.opposite(format!("{}_R", base.name()));
        let mut parts = Vec::with_capacity(2 * edges.len());
        for _ in &edges {
            parts.push(base.as_ref());
            parts.push(&opposite);
        }
        let algebra = DirectSum::new(format!("D({})^{}", base.name(), edges.len()), &parts)?.into_algebra();
        algebra.check_jacobi()?;
        Ok(Self { base, edges, algebra })
    }

    pub fn base(&self) -> &LieAlgebra<S> {
        &self.base
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn index(&self, edge: usize, side: Side, a: usize) -> usize {
        (2 * edge + side as usize) * self.base.dim() + a
    }

    /// Inverse of [`Self::index`].
    pub fn decode(&self, idx: usize) -> (usize, Side, usize) {
        let d = self.base.dim();
        let block = idx / d;
        (block / 2, if block % 2 == 0 { Side::L } else { Side::R }, idx % d)
    }

    /// Places a tensor over `𝔤` in one side of one edge.
    pub fn place(&self, edge: usize, side: Side) -> LinearMap<S> {
        let d = self.base.dim();
        let images = (0..d).map(|a| vec![(self.index(edge, side, a), S::one())]).collect();
        LinearMap::new(self.dim(), images).expect("in range")
    }

    fn same_carrier(&self, other: &Self) -> bool {
        self.edges == other.edges && *self.base == *other.base
    }
}

/// `𝔤^{Γ_{1/2}}`, one component per half-edge in graph order.
#[derive(Clone, Debug)]
pub struct GaugeAlgebra<S> {
    half_edges: Vec<String>,
    sum: DirectSum<S>,
}

impl<S: Scalar> GaugeAlgebra<S> {
    pub fn new(base: &LieAlgebra<S>, half_edges: Vec<String>) -> Result<Self> {
        let sum = DirectSum::power(base, half_edges.len())?;
        Ok(Self { half_edges, sum })
    }

    pub fn half_edges(&self) -> &[String] {
        &self.half_edges
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        self.sum.algebra()
    }

    pub fn components(&self) -> usize {
        self.half_edges.len()
    }

    pub fn component(&self, half_edge: &str) -> Result<usize> {
        self.half_edges.iter().position(|h| h == half_edge).ok_or_else(|| Error::UnknownHalfEdge(half_edge.into()))
    }

    /// `𝔤^n → 𝔤^{Γ_{1/2}}` sending component `j` to the component of `slots[j]`.
    pub fn slot_map(&self, dim: usize, slots: &[&str]) -> Result<LinearMap<S>> {
        let mut images = Vec::with_capacity(slots.len() * dim);
        for h in slots {
            let off = self.component(h)? * dim;
            for a in 0..dim {
                images.push(vec![(off + a, S::one())]);
            }
        }
        LinearMap::new(self.algebra().dim(), images)
    }
}

/// An element of `∧^k D^E`.
#[derive(Clone, Debug)]
pub struct InvariantMultivector<S> {
    carrier: Arc<DoubleAlgebra<S>>,
    body: AltTensor<S>,
}

impl<S: Scalar> PartialEq for InvariantMultivector<S> {
    fn eq(&self, other: &Self) -> bool {
        self.carrier.same_carrier(&other.carrier) && self.body == other.body
    }
}

impl<S: Scalar> InvariantMultivector<S> {
    pub fn new(carrier: Arc<DoubleAlgebra<S>>, body: AltTensor<S>) -> Result<Self> {
        if body.dim() != carrier.dim() {
            return Err(Error::DimensionMismatch { expected: carrier.dim(), found: body.dim() });
        }
        Ok(Self { carrier, body })
    }

    pub fn zero(carrier: Arc<DoubleAlgebra<S>>, degree: usize) -> Self {
        let body = AltTensor::zero(carrier.dim(), degree);
        Self { carrier, body }
    }

    pub fn carrier(&self) -> &Arc<DoubleAlgebra<S>> {
        &self.carrier
    }

    pub fn body(&self) -> &AltTensor<S> {
        &self.body
    }

    pub fn degree(&self) -> usize {
        self.body.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !self.carrier.same_carrier(&other.carrier) {
            return Err(Error::CarrierMismatch(format!(
                "edges {:?} vs {:?}",
                self.carrier.edges(),
                other.carrier.edges()
            )));
        }
        Ok(())
    }

    pub fn schouten(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let body = schouten(self.carrier.algebra(), &self.body, &other.body)?;
        Ok(Self { carrier: self.carrier.clone(), body })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(Self { carrier: self.carrier.clone(), body: self.body.clone() + other.body.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { carrier: self.carrier.clone(), body: -self.body.clone() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { carrier: self.carrier.clone(), body: self.body.scale(c) }
    }
}

/// A Lie algebra acting on `G^E` through invariant vector fields.
#[derive(Clone, Debug)]
pub struct InvariantAction<S> {
    domain: Arc<LieAlgebra<S>>,
    map: LinearMap<S>,
    carrier: Arc<DoubleAlgebra<S>>,
}

impl<S: Scalar> InvariantAction<S> {
    pub fn new(domain: Arc<LieAlgebra<S>>, map: LinearMap<S>, carrier: Arc<DoubleAlgebra<S>>) -> Result<Self> {
        if map.domain_dim() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), found: map.domain_dim() });
        }
        if map.codomain_dim() != carrier.dim() {
            return Err(Error::DimensionMismatch { expected: carrier.dim(), found: map.codomain_dim() });
        }
        Ok(Self { domain, map, carrier })
    }

    pub fn domain(&self) -> &LieAlgebra<S> {
        &self.domain
    }

    pub fn map(&self) -> &LinearMap<S> {
        &self.map
    }

    pub fn carrier(&self) -> &Arc<DoubleAlgebra<S>> {
        &self.carrier
    }

    /// `ρ(e_x)` as an invariant vector field.
    pub fn field(&self, x: usize) -> InvariantMultivector<S> {
        let body = AltTensor::from_sparse(self.carrier.dim(), self.map.image(x)).expect("in range");
        InvariantMultivector { carrier: self.carrier.clone(), body }
    }

    /// `ρ` extended to `∧^k` of the domain.
    pub fn apply(&self, t: &AltTensor<S>) -> Result<InvariantMultivector<S>> {
        let body = self.map.apply_alt(t)?;
        Ok(InvariantMultivector { carrier: self.carrier.clone(), body })
    }
}

/// Per-skeleton data shared by the constructions below.
#[derive(Clone, Debug)]
pub struct FrContext<S> {
    skeleton: Skeleton,
    base: Arc<LieAlgebra<S>>,
    gauge: GaugeAlgebra<S>,
    double: Arc<DoubleAlgebra<S>>,
    sigma: LinearMap<S>,
    vertex_algebra: Arc<LieAlgebra<S>>,
}

impl<S: Scalar> FrContext<S> {
    pub fn new(skeleton: Skeleton, base: Arc<LieAlgebra<S>>) -> Result<Self> {
        let g = &skeleton.graph;
        let edges: Vec<String> = g.edges().into_iter().map(|e| e.id).collect();
        let double = Arc::new(DoubleAlgebra::new(base.clone(), edges)?);
        let gauge = GaugeAlgebra::new(&base, g.half_edges().to_vec())?;
        let sigma = sigma_gamma(&skeleton, &gauge, &double)?;
        let vertex_algebra = Arc::new(DirectSum::power(&base, g.vertices().len())?.into_algebra());
        Ok(Self { skeleton, base, gauge, double, sigma, vertex_algebra })
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn base(&self) -> &Arc<LieAlgebra<S>> {
        &self.base
    }

    pub fn gauge(&self) -> &GaugeAlgebra<S> {
        &self.gauge
    }

    pub fn double(&self) -> &Arc<DoubleAlgebra<S>> {
        &self.double
    }

    /// `σ_Γ: 𝔤^{Γ_{1/2}} → D^{Γ_1}`.
    pub fn sigma(&self) -> &LinearMap<S> {
        &self.sigma
    }

    /// `𝔤^V`, one component per vertex in graph order.
    pub fn vertex_algebra(&self) -> &Arc<LieAlgebra<S>> {
        &self.vertex_algebra
    }

    pub fn sigma_alt(&self, t: &AltTensor<S>) -> Result<InvariantMultivector<S>> {
        InvariantMultivector::new(self.double.clone(), self.sigma.apply_alt(t)?)
    }

    pub fn sigma_tensor(&self, t: &Tensor<S>) -> Result<Tensor<S>> {
        self.sigma.apply_tensor(t)
    }

    /// `𝔤^{Γ_v} ≅ 𝔤^{|Γ_v|}` by cilium order, embedded in `𝔤^{Γ_{1/2}}`.
    pub fn vertex_slots(&self, v: &str) -> Result<LinearMap<S>> {
        let order = self.skeleton.graph.order(v)?;
        let slots: Vec<&str> = order.iter().map(String::as_str).collect();
        self.gauge.slot_map(self.base.dim(), &slots)
    }

    /// `ε_v` in cilium order.
    pub fn signs_at(&self, v: &str) -> Result<Option<SignFunction>> {
        let g = &self.skeleton.graph;
        let order = g.order(v)?;
        if order.is_empty() {
            return Ok(None);
        }
        let signs = order.iter().map(|h| self.skeleton.orientation.epsilon(g, h)).collect::<Result<Vec<_>>>()?;
        Ok(Some(SignFunction::new(signs)?))
    }

    /// `diag_Γ: 𝔤^V → 𝔤^{Γ_{1/2}}`, `(x)_v ↦ Σ_{α ∈ Γ_v} (x)_α`.
    pub fn diag_gamma(&self) -> Result<LinearMap<S>> {
        let g = &self.skeleton.graph;
        let d = self.base.dim();
        let mut images = Vec::with_capacity(g.vertices().len() * d);
        for v in g.vertices() {
            let comps = g.order(v)?.iter().map(|h| self.gauge.component(h)).collect::<Result<Vec<_>>>()?;
            for a in 0..d {
                images.push(comps.iter().map(|c| (c * d + a, S::one())).collect());
            }
        }
        LinearMap::new(self.gauge.algebra().dim(), images)
    }

    /// `ρ_V = σ_Γ ∘ diag_Γ` as an action of `𝔤^V`.
    pub fn rho_v(&self) -> Result<InvariantAction<S>> {
        let map = self.diag_gamma()?.then(&self.sigma)?;
        InvariantAction::new(self.vertex_algebra.clone(), map, self.double.clone())
    }

    /// Places a tensor over `𝔤` at one vertex of `𝔤^V`.
    pub fn at_vertex(&self, v: &str) -> Result<LinearMap<S>> {
        let idx = self.skeleton.graph.vertex_index(v)?;
        let d = self.base.dim();
        let images = (0..d).map(|a| vec![(idx * d + a, S::one())]).collect();
        LinearMap::new(self.vertex_algebra.dim(), images)
    }
}

/// `σ_Γ`: `x` at a source half-edge of `γ` maps to `−x_R`, at a target
/// half-edge to `+x_L`.
pub fn sigma_gamma<S: Scalar>(s: &Skeleton, gauge: &GaugeAlgebra<S>, double: &DoubleAlgebra<S>) -> Result<LinearMap<S>> {
    let g = &s.graph;
    let d = double.base().dim();
    let mut images = Vec::with_capacity(gauge.components() * d);
    for h in gauge.half_edges() {
        let edge = g.edge_of(h)?;
        let e = double.edges().iter().position(|x| *x == edge).ok_or_else(|| Error::UnknownEdge(edge.clone()))?;
        let source = s.orientation.is_source(g, h)?;
        for a in 0..d {
            images.push(if source {
                vec![(double.index(e, Side::R, a), -S::one())]
            } else {
                vec![(double.index(e, Side::L, a), S::one())]
            });
        }
    }
    LinearMap::new(double.dim(), images)
}

/// One r-matrix per vertex.
pub type RAssignment<S> = BTreeMap<String, RMatrix<S>>;

fn common_sym<'a, S: Scalar>(ctx: &'a FrContext<S>, rs: &'a RAssignment<S>) -> Result<Vec<(&'a str, &'a RMatrix<S>)>> {
    let mut out = Vec::new();
    let mut sym: Option<&Tensor<S>> = None;
    for v in ctx.skeleton.graph.vertices() {
        let r = rs.get(v).ok_or_else(|| Error::InvalidRMatrix(format!("vertex `{v}` has no r-matrix")))?;
        if *r.algebra() != **ctx.base() {
            return Err(Error::InvalidRMatrix(format!("r-matrix at `{v}` lives on a different algebra")));
        }
        match sym {
            None => sym = Some(r.sym()),
            Some(s) if s != r.sym() => {
                return Err(Error::InvalidRMatrix(format!("r-matrix at `{v}` has a different symmetric part")))
            }
            _ => {}
        }
        out.push((v.as_str(), r));
    }
    Ok(out)
}

/// `r_Γ = Σ_v (r_v^{(ε_v, Γ_v)})_v` on `𝔤^{Γ_{1/2}}`.
pub fn r_gamma<S: Scalar>(ctx: &FrContext<S>, rs: &RAssignment<S>) -> Result<RMatrix<S>> {
    let dim = ctx.gauge.algebra().dim();
    let mut sym = Tensor::zero(dim, 2);
    let mut antisym = AltTensor::zero(dim, 2);
    for (v, r) in common_sym(ctx, rs)? {
        let Some(eps) = ctx.signs_at(v)? else { continue };
        let rp = r_power(r, &eps, eps.len())?;
        let slots = ctx.vertex_slots(v)?;
        sym = sym + slots.apply_tensor(rp.sym())?;
        antisym = antisym + slots.apply_alt(rp.antisym())?;
    }
    RMatrix::from_parts(Arc::new(ctx.gauge.algebra().clone()), sym, antisym)
}

/// `π_Γ = σ_Γ(Λ_Γ)`.
pub fn pi_gamma<S: Scalar>(ctx: &FrContext<S>, rs: &RAssignment<S>) -> Result<InvariantMultivector<S>> {
    let r = r_gamma(ctx, rs)?;
    ctx.sigma_alt(r.antisym())
}

/// `s_Γ = Σ_γ (s)_{α_γ} − (s)_{α̌_γ}` on `𝔤^{Γ_{1/2}}`.
pub fn s_gamma<S: Scalar>(ctx: &FrContext<S>, s: &Tensor<S>) -> Result<Tensor<S>> {
    let g = &ctx.skeleton.graph;
    let dim = ctx.gauge.algebra().dim();
    let mut out = Tensor::zero(dim, 2);
    for h in g.half_edges() {
        let slot = ctx.gauge.slot_map(ctx.base.dim(), &[h.as_str()])?;
        let placed = slot.apply_tensor(s)?;
        out = if ctx.skeleton.orientation.is_source(g, h)? { out + placed } else { out - placed };
    }
    Ok(out)
}

/// `δ` of `(𝔤^V, r)`: `δ_{r_v}` on the `v`-th component.
pub fn vertex_cobracket<S: Scalar>(ctx: &FrContext<S>, rs: &RAssignment<S>) -> Result<Cobracket<S>> {
    let d = ctx.base.dim();
    let mut images = Vec::with_capacity(ctx.vertex_algebra.dim());
    for (v, r) in common_sym(ctx, rs)? {
        let delta = delta_r(r)?;
        let place = ctx.at_vertex(v)?;
        for a in 0..d {
            images.push(place.apply_alt(delta.image(a))?);
        }
    }
    Cobracket::new(ctx.vertex_algebra.dim(), images)
}

/// `[ρ(x), π] − ρ(δ(x))` for every basis `x` of the acting algebra.
pub fn poisson_action_defect<S: Scalar>(
    pi: &InvariantMultivector<S>,
    action: &InvariantAction<S>,
    delta: &Cobracket<S>,
) -> Result<Vec<InvariantMultivector<S>>> {
    if !pi.carrier.same_carrier(&action.carrier) {
        return Err(Error::CarrierMismatch("bivector and action live on different edge sets".into()));
    }
    if delta.dim() != action.domain.dim() {
        return Err(Error::DimensionMismatch { expected: action.domain.dim(), found: delta.dim() });
    }
    (0..delta.dim())
        .map(|x| action.field(x).schouten(pi)?.sub(&action.apply(delta.image(x))?))
        .collect()
}

/// Fusion at `(𝔤, r)^n` of the action components `block` (in that order):
/// `π′ = π − ρ(Mix^n(r))`, and the block is replaced by one component,
/// acting diagonally, at the position of `block[0]`.
pub fn fuse_poisson<S: Scalar>(
    pi: &InvariantMultivector<S>,
    action: &InvariantAction<S>,
    block: &[usize],
    r: &RMatrix<S>,
) -> Result<(InvariantMultivector<S>, InvariantAction<S>)> {
    let d = r.algebra().dim();
    let comps = action.domain.dim() / d;
    if action.domain.dim() != comps * d || block.is_empty() {
        return Err(Error::InvalidArgument("action domain is not a power of the r-matrix algebra".into()));
    }
    let mut seen = vec![false; comps];
    for &c in block {
        if c >= comps || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidArgument(format!("bad fusion component {c}")));
        }
    }
    let column = |c: usize, a: usize| action.map.image(c * d + a).clone();
    let block_images = block.iter().flat_map(|&c| (0..d).map(move |a| column(c, a))).collect();
    let rho_block = LinearMap::new(action.carrier.dim(), block_images)?;
    let mix = mix_tensor(r.full(), block.len())?;
    let new_pi = pi.sub(&InvariantMultivector::new(action.carrier.clone(), rho_block.apply_alt(&mix)?)?)?;

    let mut images = Vec::new();
    let mut parts = Vec::new();
    for c in 0..comps {
        if c == block[0] {
            for a in 0..d {
                images.push(block.iter().flat_map(|&b| column(b, a)).collect());
            }
        } else if block.contains(&c) {
            continue;
        } else {
            images.extend((0..d).map(|a| column(c, a)));
        }
        parts.push(r.algebra());
    }
    let domain = Arc::new(DirectSum::new(action.domain.name(), &parts)?.into_algebra());
    let map = LinearMap::new(action.carrier.dim(), images)?;
    Ok((new_pi, InvariantAction::new(domain, map, action.carrier.clone())?))
}

/// `Σ_v (Λ_v)_v` on `𝔤^V`.
pub fn lambda_sum<S: Scalar>(ctx: &FrContext<S>, lambdas: &BTreeMap<String, AltTensor<S>>) -> Result<AltTensor<S>> {
    let mut out = AltTensor::zero(ctx.vertex_algebra.dim(), 2);
    for v in ctx.skeleton.graph.vertices() {
        let l = lambdas.get(v).ok_or_else(|| Error::InvalidRMatrix(format!("vertex `{v}` has no Λ")))?;
        out = out + ctx.at_vertex(v)?.apply_alt(l)?;
    }
    Ok(out)
}

/// `Q = π − ρ(Σ_v (Λ_v)_v)`.
pub fn quasi_from_poisson<S: Scalar>(
    pi: &InvariantMultivector<S>,
    action: &InvariantAction<S>,
    lambda: &AltTensor<S>,
) -> Result<InvariantMultivector<S>> {
    pi.sub(&action.apply(lambda)?)
}

/// `π = Q + ρ(Σ_v (Λ_v)_v)`.
pub fn poisson_from_quasi<S: Scalar>(
    q: &InvariantMultivector<S>,
    action: &InvariantAction<S>,
    lambda: &AltTensor<S>,
) -> Result<InvariantMultivector<S>> {
    q.add(&action.apply(lambda)?)
}

/// `Q_s = −σ_Γ(Σ_v (Mix^{Γ_v}(s))_v)`.
pub fn q_s<S: Scalar>(ctx: &FrContext<S>, s: &Tensor<S>) -> Result<InvariantMultivector<S>> {
    if s.degree() != 2 || s.dim() != ctx.base.dim() {
        return Err(Error::InvalidArgument("s must be a 2-tensor over the base algebra".into()));
    }
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !s.is_ad_invariant(&ctx.base) {
        return Err(Error::NotInvariant);
    }
    let mut total = AltTensor::zero(ctx.gauge.algebra().dim(), 2);
    for v in ctx.skeleton.graph.vertices() {
        let n = ctx.skeleton.graph.order(v)?.len();
        if n < 2 {
            continue;
        }
        total = total + ctx.vertex_slots(v)?.apply_alt(&mix_tensor(s, n)?)?;
    }
    Ok(ctx.sigma_alt(&total)?.neg())
}

/// `ρ(φ_s)` with `φ_s` placed at every vertex: the right-hand side of the
/// quasi-Poisson axiom `[Q, Q] = ρ(φ_s)`.
pub fn rho_phi<S: Scalar>(ctx: &FrContext<S>, phi: &AltTensor<S>) -> Result<InvariantMultivector<S>> {
    let mut total = AltTensor::zero(ctx.vertex_algebra.dim(), 3);
    for v in ctx.skeleton.graph.vertices() {
        total = total + ctx.at_vertex(v)?.apply_alt(phi)?;
    }
    ctx.rho_v()?.apply(&total)
}

/// `Σ_{ab} t^{ab} (e_a)^{side_x}_{edge} ∧ (e_b)^{side_y}_{edge}` for a 2-tensor `t` over `𝔤`.
pub fn pair_on_edge<S: Scalar>(
    double: &Arc<DoubleAlgebra<S>>,
    edge: usize,
    t: &Tensor<S>,
    side_x: Side,
    side_y: Side,
) -> Result<InvariantMultivector<S>> {
    let terms = t
        .terms()
        .map(|(idx, c)| (vec![double.index(edge, side_x, idx[0]), double.index(edge, side_y, idx[1])], c.clone()));
    InvariantMultivector::new(double.clone(), AltTensor::from_terms(double.dim(), 2, terms)?)
}

/// The expansion `½ Σ_i x_i^R ∧ y_i^L + y_i^R ∧ y_i^L` of `Q_s` on a loop,
/// read as printed, with `s = Σ_i x_i ⊗ y_i` expanded in the coordinate basis.
pub fn annulus_qs_as_printed<S: Scalar>(double: &Arc<DoubleAlgebra<S>>, s: &Tensor<S>) -> Result<InvariantMultivector<S>> {
    let half = S::from_ratio(1, 2);
    let first = pair_on_edge(double, 0, s, Side::R, Side::L)?;
    let d = s.dim();
    let terms = s
        .terms()
        .map(|(idx, c)| (vec![double.index(0, Side::R, idx[1]), double.index(0, Side::L, idx[1])], c.clone()));
    let second = InvariantMultivector::new(double.clone(), AltTensor::from_terms(double.dim(), 2, terms)?)?;
    debug_assert_eq!(d, double.base().dim());
    Ok(first.add(&second)?.scale(&half))
}

/// `½ Σ_i x_i^R ∧ y_i^L + y_i^R ∧ x_i^L` on a loop.
pub fn annulus_qs_symmetrized<S: Scalar>(double: &Arc<DoubleAlgebra<S>>, s: &Tensor<S>) -> Result<InvariantMultivector<S>> {
    let half = S::from_ratio(1, 2);
    let first = pair_on_edge(double, 0, s, Side::R, Side::L)?;
    let second = pair_on_edge(double, 0, &s.transpose(), Side::R, Side::L)?;
    Ok(first.add(&second)?.scale(&half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ciliated_graph::{annulus_marked, disk2, sigma_n};
    use crate::r_matrix::sl2_standard;
    use crate::Rational;

    fn ctx(s: Skeleton) -> FrContext<Rational> {
        FrContext::new(s, Arc::new(crate::lie_core::sl2())).unwrap()
    }

    #[test]
    fn sigma_signs_on_disk() {
        let c = ctx(disk2());
        let d = c.double();
        assert_eq!(c.sigma().image(1), &vec![(d.index(0, Side::R, 1), -Rational::from_i64(1))]);
        assert_eq!(c.sigma().image(3 + 1), &vec![(d.index(0, Side::L, 1), Rational::from_i64(1))]);
    }

    #[test]
    fn sigma_is_a_homomorphism() {
        for s in [disk2(), annulus_marked(1).unwrap(), sigma_n(2).unwrap()] {
            let c = ctx(s);
            let dom = c.gauge().algebra();
            let cod = c.double().algebra();
            for i in 0..dom.dim() {
                for j in 0..dom.dim() {
                    let lhs = c.sigma().apply_sparse(dom.bracket_basis(i, j));
                    let rhs = cod.bracket_sparse(c.sigma().image(i), c.sigma().image(j));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn disk_pi_is_lambda_left_plus_right() {
        let c = ctx(disk2());
        let r = sl2_standard();
        let rs: RAssignment<_> = [("v1".into(), r.clone()), ("v2".into(), r.clone())].into_iter().collect();
        let pi = pi_gamma(&c, &rs).unwrap();
        let d = c.double();
        let expect = d.place(0, Side::L).apply_alt(r.antisym()).unwrap() + d.place(0, Side::R).apply_alt(r.antisym()).unwrap();
        assert_eq!(pi.body(), &expect);
    }

    #[test]
    fn conjugation_action_on_annulus() {
        let c = ctx(annulus_marked(1).unwrap());
        let rho = c.rho_v().unwrap();
        let d = c.double();
        for a in 0..3 {
            let f = rho.field(a);
            let mut expect = vec![(d.index(0, Side::L, a), Rational::from_i64(1)), (d.index(0, Side::R, a), -Rational::from_i64(1))];
            expect.sort_by_key(|x| x.0);
            assert_eq!(f.body(), &AltTensor::from_sparse(d.dim(), &expect).unwrap());
        }
    }

    #[test]
    fn missing_or_mismatched_r_is_rejected() {
        let c = ctx(disk2());
        let r = sl2_standard();
        let only_one: RAssignment<_> = [("v1".into(), r.clone())].into_iter().collect();
        assert!(r_gamma(&c, &only_one).is_err());
        let scaled = crate::r_matrix::RMatrix::from_parts(
            r.algebra_arc().clone(),
            r.sym().scale(&Rational::from_i64(2)),
            r.antisym().clone(),
        )
        .unwrap();
        let mixed: RAssignment<_> = [("v1".into(), r), ("v2".into(), scaled)].into_iter().collect();
        assert!(r_gamma(&c, &mixed).is_err());
    }
}
