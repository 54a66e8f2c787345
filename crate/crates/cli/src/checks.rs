//! The check registry.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use frpoisson_core::ciliated_graph::{local_move, MoveDirection, Pivot, Skeleton};
use frpoisson_core::group_numerics::{
    equivariance_residual, evaluate, field_is_zero, multiplicativity_residual, pushforward, random_group_element,
    random_word, split_rng, tensor_field_is_zero, Decision, FieldVerdict, SkeletonMove,
};
use frpoisson_core::invariant_calculus::{
    fuse_poisson, lambda_sum, pi_gamma, poisson_action_defect, poisson_from_quasi, q_s, quasi_from_poisson, r_gamma,
    rho_phi, s_gamma, vertex_cobracket, FrContext, InvariantMultivector, RAssignment,
};
use frpoisson_core::lie_core::{phi_s, Cobracket};
use frpoisson_core::r_matrix::{cyb_check, verify_section2, RMatrix};
use frpoisson_core::{Error, Rational, Result};
use serde::{Deserialize, Serialize};

use crate::scenario::{CobracketSource, Scenario};

/// Residual bound for holonomy equivariance.
pub const EQUIVARIANCE_TOL: f64 = 1e-10;

/// Largest `n` in the `section2` check.
pub const SECTION2_N_MAX: usize = 3;

/// Random words per sample in `gauge_equivariance`.
const WORDS_PER_SAMPLE: usize = 4;

const MAX_WORD_LEN: usize = 4;

macro_rules! registry {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CheckName { $($variant),* }

        impl CheckName {
            /// Registry order.
            pub const ALL: &'static [CheckName] = &[$(CheckName::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(CheckName::$variant => $name),* }
            }
        }

        impl FromStr for CheckName {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($name => Ok(CheckName::$variant),)*
                    other => Err(format!("unknown check `{other}`")),
                }
            }
        }
    };
}

registry! {
    Cyb => "cyb",
    Section2 => "section2",
    RgammaCyb => "rgamma_cyb",
    SgammaSymmetricPart => "sgamma_symmetric_part",
    Jacobi => "jacobi",
    GaugePoisson => "gauge_poisson",
    Quasi => "quasi",
    QsLambdaIndependence => "qs_lambda_independence",
    OrientationIndependence => "orientation_independence",
    LocalMoveIndependence => "local_move_independence",
    FusionTheorem => "fusion_theorem",
    PolyubleMultiplicativity => "polyuble_multiplicativity",
    GaugeEquivariance => "gauge_equivariance",
}

impl CheckName {
    pub fn needs_r(self) -> bool {
        self != CheckName::GaugeEquivariance
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CheckName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Decided by exact arithmetic.
    Pass,
    /// Decided at sampled points.
    SampledPass,
    Fail,
    /// The scenario has no instance of the checked configuration.
    NotApplicable,
}

impl Verdict {
    pub fn failed(self) -> bool {
        self == Verdict::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::SampledPass => "sampled-pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: CheckName,
    pub verdict: Verdict,
    /// Largest residual or defect coefficient met.
    pub witness: f64,
    pub details: Vec<String>,
}

/// Accumulates sub-results of one check.
struct Tally {
    name: CheckName,
    sampled: bool,
    failed: bool,
    witness: f64,
    details: Vec<String>,
}

impl Tally {
    fn new(name: CheckName) -> Self {
        Self { name, sampled: false, failed: false, witness: 0.0, details: Vec::new() }
    }

    fn exact(&mut self, ok: bool, defect: f64, what: impl FnOnce() -> String) {
        self.witness = self.witness.max(defect);
        if !ok {
            self.failed = true;
            self.details.push(format!("{} (defect {defect:e})", what()));
        }
    }

    fn field(&mut self, v: FieldVerdict, what: impl FnOnce() -> String) {
        self.witness = self.witness.max(v.witness);
        self.sampled |= v.decision == Decision::Sampled;
        if !v.zero {
            self.failed = true;
            self.details.push(format!("{} (witness {:e}, threshold {:e})", what(), v.witness, v.threshold));
        }
    }

    fn residual(&mut self, r: f64, bound: f64, what: impl FnOnce() -> String) {
        self.witness = self.witness.max(r);
        self.sampled = true;
        if !(r < bound) {
            self.failed = true;
            self.details.push(format!("{} (residual {r:e}, bound {bound:e})", what()));
        }
    }

    fn finish(self) -> CheckResult {
        let verdict = if self.failed {
            Verdict::Fail
        } else if self.sampled {
            Verdict::SampledPass
        } else {
            Verdict::Pass
        };
        CheckResult { name: self.name, verdict, witness: self.witness, details: self.details }
    }
}

fn not_applicable(name: CheckName, why: &str) -> CheckResult {
    CheckResult { name, verdict: Verdict::NotApplicable, witness: 0.0, details: vec![why.to_string()] }
}

fn context(sc: &Scenario, skeleton: &Skeleton) -> Result<FrContext<Rational>> {
    FrContext::new(skeleton.clone(), sc.algebra.clone())
}

fn distinct_rs(sc: &Scenario) -> Vec<(Vec<&str>, &RMatrix<Rational>)> {
    let mut out: Vec<(Vec<&str>, &RMatrix<Rational>)> = Vec::new();
    for (v, r) in &sc.rs {
        match out.iter_mut().find(|(_, x)| *x == r) {
            Some((vs, _)) => vs.push(v),
            None => out.push((vec![v], r)),
        }
    }
    out
}

fn lambdas_of(rs: &RAssignment<Rational>) -> BTreeMap<String, frpoisson_core::lie_core::AltTensor<Rational>> {
    rs.iter().map(|(v, r)| (v.clone(), r.antisym().clone())).collect()
}

fn bar_all(rs: &RAssignment<Rational>) -> RAssignment<Rational> {
    rs.iter().map(|(v, r)| (v.clone(), r.bar())).collect()
}

/// The relative tolerance in effect for a value of magnitude `m`.
fn bound(sc: &Scenario, m: f64) -> f64 {
    sc.sampling.tol * m.max(1.0)
}

pub fn run_check(sc: &Scenario, name: CheckName) -> Result<CheckResult> {
    let mut t = Tally::new(name);
    let s = &sc.sampling;
    match name {
        CheckName::Cyb => {
            for (vs, r) in distinct_rs(sc) {
                let c = cyb_check(r);
                t.exact(c.holds, c.defect.max_abs(), || format!("[Λ,Λ] + φ_s ≠ 0 at {}", vs.join(", ")));
            }
        }
        CheckName::Section2 => {
            for (vs, r) in distinct_rs(sc) {
                let rep = verify_section2(r, SECTION2_N_MAX)?;
                t.exact(rep.passed(), rep.max_defect(), || format!("clauses fail for the r-matrix at {}", vs.join(", ")));
                for e in rep.failures() {
                    t.details.push(format!(
                        "clause ({}) n={} eps={:?} m={:?} defect {:e}",
                        e.clause.letter(),
                        e.n,
                        e.eps,
                        e.m,
                        e.defect
                    ));
                }
            }
        }
        CheckName::RgammaCyb => {
            let ctx = context(sc, &sc.skeleton)?;
            let c = cyb_check(&r_gamma(&ctx, &sc.rs)?);
            t.exact(c.holds, c.defect.max_abs(), || "r_Γ violates the Yang–Baxter equation".into());
        }
        CheckName::SgammaSymmetricPart => {
            let ctx = context(sc, &sc.skeleton)?;
            let rg = r_gamma(&ctx, &sc.rs)?;
            let Some(r) = sc.rs.values().next() else { return Ok(not_applicable(name, "no r-matrix")) };
            let sg = s_gamma(&ctx, r.sym())?;
            let diff = (rg.sym().clone() - sg.clone()).max_abs();
            t.exact(diff == 0.0, diff, || "symmetric part of r_Γ differs from s_Γ".into());
            let image = ctx.sigma_tensor(&sg)?;
            t.field(tensor_field_is_zero(ctx.double(), &image, &sc.skeleton, s)?, || "σ_Γ(s_Γ) is not field-zero".into());
        }
        CheckName::Jacobi => {
            let ctx = context(sc, &sc.skeleton)?;
            let pi = pi_gamma(&ctx, &sc.rs)?;
            t.field(field_is_zero(&pi.schouten(&pi)?, &sc.skeleton, s)?, || "[π, π] is not field-zero".into());
        }
        CheckName::GaugePoisson => {
            let ctx = context(sc, &sc.skeleton)?;
            let pi = pi_gamma(&ctx, &sc.rs)?;
            let delta = match sc.cobracket {
                CobracketSource::FromR => vertex_cobracket(&ctx, &sc.rs)?,
                CobracketSource::Zero => Cobracket::zero(ctx.vertex_algebra().dim()),
            };
            let defects = poisson_action_defect(&pi, &ctx.rho_v()?, &delta)?;
            let vertices = ctx.skeleton().graph.vertices();
            let d = sc.algebra.dim();
            for (x, defect) in defects.iter().enumerate() {
                t.field(field_is_zero(defect, &sc.skeleton, s)?, || {
                    format!("[ρ(x), π] − ρ(δ x) for basis {} at vertex {}", x % d, vertices[x / d])
                });
            }
        }
        CheckName::Quasi => {
            let ctx = context(sc, &sc.skeleton)?;
            let pi = pi_gamma(&ctx, &sc.rs)?;
            let rho = ctx.rho_v()?;
            let mut lambdas = lambdas_of(&sc.rs);
            lambdas.extend(sc.quasi_lambdas.clone());
            let lam = lambda_sum(&ctx, &lambdas)?;
            let q = quasi_from_poisson(&pi, &rho, &lam)?;
            let Some(r) = sc.rs.values().next() else { return Ok(not_applicable(name, "no r-matrix")) };
            let qs = q_s(&ctx, r.sym())?;
            let diff = q.sub(&qs)?.body().max_abs();
            t.exact(diff == 0.0, diff, || "Q differs from Q_s".into());
            let back = poisson_from_quasi(&q, &rho, &lam)?;
            t.exact(back == pi, back.sub(&pi)?.body().max_abs(), || "round trip is not the identity".into());
            let phi = phi_s(&sc.algebra, r.sym())?;
            let axiom = q.schouten(&q)?.sub(&rho_phi(&ctx, &phi)?)?;
            t.field(field_is_zero(&axiom, &sc.skeleton, s)?, || "[Q, Q] − ρ(φ_s) is not field-zero".into());
            for x in 0..rho.domain().dim() {
                t.field(field_is_zero(&rho.field(x).schouten(&q)?, &sc.skeleton, s)?, || format!("[ρ(e_{x}), Q] is not field-zero"));
            }
        }
        CheckName::QsLambdaIndependence => {
            let ctx = context(sc, &sc.skeleton)?;
            let Some(r) = sc.rs.values().next() else { return Ok(not_applicable(name, "no r-matrix")) };
            let qs = q_s(&ctx, r.sym())?;
            let rho = ctx.rho_v()?;
            for (label, rs) in [("Λ", sc.rs.clone()), ("−Λ", bar_all(&sc.rs))] {
                let q = quasi_from_poisson(&pi_gamma(&ctx, &rs)?, &rho, &lambda_sum(&ctx, &lambdas_of(&rs))?)?;
                let diff = q.sub(&qs)?.body().max_abs();
                t.exact(q == qs, diff, || format!("Q from the {label} assignment differs from Q_s"));
            }
        }
        CheckName::OrientationIndependence => orientation(sc, &mut t)?,
        CheckName::LocalMoveIndependence => {
            if !local_moves(sc, &mut t)? {
                return Ok(not_applicable(name, "no local move applies to this skeleton"));
            }
        }
        CheckName::FusionTheorem => {
            if !fusion(sc, &mut t)? {
                return Ok(not_applicable(name, "no vertex carries two or more half-edges"));
            }
        }
        CheckName::PolyubleMultiplicativity => {
            if !polyuble(sc, &mut t)? {
                return Ok(not_applicable(name, "skeleton is not a polyuble configuration"));
            }
        }
        CheckName::GaugeEquivariance => {
            let g = &sc.skeleton.graph;
            for i in 0..s.samples {
                let p = s.point(&sc.skeleton, &sc.algebra, i)?;
                let mut rng = split_rng(s.seed, 1 << 32 | i as u64);
                for _ in 0..WORDS_PER_SAMPLE {
                    let h = g
                        .vertices()
                        .iter()
                        .map(|v| Ok((v.clone(), random_group_element(&sc.algebra, &mut rng, s.scale)?)))
                        .collect::<Result<BTreeMap<_, _>>>()?;
                    let w = random_word(&sc.skeleton, &mut rng, MAX_WORD_LEN);
                    let res = equivariance_residual(&sc.skeleton, &p, &h, &w)?;
                    t.residual(res, EQUIVARIANCE_TOL, || format!("word {:?} at sample {i}", w.steps));
                }
            }
        }
    }
    Ok(t.finish())
}

fn evaluated_residual(
    sc: &Scenario,
    from: &Skeleton,
    mv: &SkeletonMove,
    field: impl Fn(&FrContext<Rational>) -> Result<InvariantMultivector<Rational>>,
    point: usize,
) -> Result<(f64, f64)> {
    let p = sc.sampling.point(from, &sc.algebra, point)?;
    let value = evaluate(&field(&context(sc, from)?)?, &p)?;
    let (to, q, pushed) = pushforward(from, &sc.algebra, &p, &value, mv)?;
    let expected = evaluate(&field(&context(sc, &to)?)?, &q)?;
    Ok(((pushed - expected.clone()).max_abs(), expected.max_abs()))
}

fn orientation(sc: &Scenario, t: &mut Tally) -> Result<()> {
    let r = sc.rs.values().next().ok_or_else(|| Error::InvalidRMatrix("no r-matrix".into()))?;
    let s = r.sym().clone();
    for e in sc.skeleton.graph.edges() {
        let mv = SkeletonMove::Reverse(e.id.clone());
        for i in 0..sc.sampling.samples {
            let (res, m) = evaluated_residual(sc, &sc.skeleton, &mv, |c| pi_gamma(c, &sc.rs), i)?;
            t.residual(res, bound(sc, m), || format!("π after reversing {} at sample {i}", e.id));
            let (res, m) = evaluated_residual(sc, &sc.skeleton, &mv, |c| q_s(c, &s), i)?;
            t.residual(res, bound(sc, m), || format!("Q_s after reversing {} at sample {i}", e.id));
        }
    }
    Ok(())
}

fn local_moves(sc: &Scenario, t: &mut Tally) -> Result<bool> {
    let edges = sc.skeleton.graph.edges();
    let mut found = false;
    for moved in &edges {
        for along in &edges {
            let pivot = Pivot { moved: moved.id.clone(), along: along.id.clone(), direction: MoveDirection::Forward };
            let Ok((after, _)) = local_move(&sc.skeleton, &pivot) else { continue };
            found = true;
            let back = Pivot { direction: MoveDirection::Backward, ..pivot.clone() };
            for i in 0..sc.sampling.samples {
                let label = |dir: &str| format!("{dir} move of {} along {} at sample {i}", moved.id, along.id);
                let fwd = SkeletonMove::Local(pivot.clone());
                let (res, m) = evaluated_residual(sc, &sc.skeleton, &fwd, |c| pi_gamma(c, &sc.rs), i)?;
                t.residual(res, bound(sc, m), || label("forward"));
                let bwd = SkeletonMove::Local(back.clone());
                let (res, m) = evaluated_residual(sc, &after, &bwd, |c| pi_gamma(c, &sc.rs), i)?;
                t.residual(res, bound(sc, m), || label("backward"));
            }
        }
    }
    Ok(found)
}

fn fusion(sc: &Scenario, t: &mut Tally) -> Result<bool> {
    let g = &sc.skeleton.graph;
    let ctx = context(sc, &sc.skeleton)?;
    let pi = pi_gamma(&ctx, &sc.rs)?;
    let rho = ctx.rho_v()?;
    let mut found = false;
    for (vi, v) in g.vertices().iter().enumerate() {
        let Some(r) = sc.rs.get(v) else { continue };
        for k in 1..g.order(v)?.len() {
            found = true;
            let split = sc.skeleton.split(v, k)?;
            let mut rs = sc.rs.clone();
            rs.remove(v);
            rs.insert(format!("{v}.1"), r.clone());
            rs.insert(format!("{v}.2"), r.clone());
            let sctx = context(sc, &split)?;
            let (fused, action) = fuse_poisson(&pi_gamma(&sctx, &rs)?, &sctx.rho_v()?, &[vi, vi + 1], r)?;
            let diff = fused.sub(&pi)?.body().max_abs();
            t.exact(fused == pi, diff, || format!("fusing {v} split after position {k} does not give π"));
            t.exact(action.map() == rho.map(), 0.0, || format!("fused action at {v} (split {k}) differs from ρ_V"));
        }
    }
    Ok(found)
}

/// Two vertices `u, w`, every edge from `u` to `w`, the order at `w` the
/// reverse of the order at `u` edge by edge, and `r_w = r̄_u`.
fn is_polyuble(sc: &Scenario) -> Result<bool> {
    let sk = &sc.skeleton;
    let g = &sk.graph;
    let [u, w] = g.vertices() else { return Ok(false) };
    for e in g.edges() {
        if sk.source_vertex(&e.id)? != u || sk.target_vertex(&e.id)? != w {
            return Ok(false);
        }
    }
    let at_u = g.order(u)?.iter().map(|h| g.edge_of(h)).collect::<Result<Vec<_>>>()?;
    let mut at_w = g.order(w)?.iter().map(|h| g.edge_of(h)).collect::<Result<Vec<_>>>()?;
    at_w.reverse();
    let (Some(ru), Some(rw)) = (sc.rs.get(u), sc.rs.get(w)) else { return Ok(false) };
    Ok(at_u == at_w && *rw == ru.bar())
}

fn polyuble(sc: &Scenario, t: &mut Tally) -> Result<bool> {
    if !is_polyuble(sc)? {
        return Ok(false);
    }
    let ctx = context(sc, &sc.skeleton)?;
    let pi = pi_gamma(&ctx, &sc.rs)?;
    let m = pi.body().max_abs();
    for i in 0..sc.sampling.samples {
        let g = sc.sampling.point(&sc.skeleton, &sc.algebra, 2 * i)?;
        let h = sc.sampling.point(&sc.skeleton, &sc.algebra, 2 * i + 1)?;
        let res = multiplicativity_residual(&pi, &g, &h)?;
        t.residual(res, bound(sc, m), || format!("point pair {i}"));
    }
    Ok(true)
}

/// Runs every check of `sc` in registry order.
pub fn run_checks(sc: &Scenario) -> Result<Vec<(CheckResult, std::time::Duration)>> {
    let mut names = sc.checks.clone();
    names.sort();
    names.dedup();
    names
        .into_iter()
        .map(|n| {
            let start = std::time::Instant::now();
            let r = run_check(sc, n)?;
            Ok((r, start.elapsed()))
        })
        .collect()
}
