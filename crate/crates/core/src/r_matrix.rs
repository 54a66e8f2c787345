//! Quasitriangular r-matrices `r = s + Λ` and the calculus of their powers on
//! `𝔤^n`: Yang–Baxter defects, cobrackets, `Mix^n`, `r^{(ε,n)}`, `Λ_r^{(n)}`
//! and the diagonal embeddings.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie_core::{
    ad_tensor, phi_s, schouten, AdInvariant, AltTensor, Cobracket, DirectSum, LieAlgebra, LinearMap, Tensor,
};
use crate::scalar::Scalar;
use crate::Rational;

/// `r = s + Λ` over a Lie algebra, stored with both parts.
///
/// `Λ` uses the wedge convention of [`AltTensor`], so `full = sym + antisym.to_tensor()`.
#[derive(Clone, Debug)]
pub struct RMatrix<S> {
    algebra: Arc<LieAlgebra<S>>,
    full: Tensor<S>,
    sym: Tensor<S>,
    antisym: AltTensor<S>,
}

impl<S: Scalar> PartialEq for RMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.sym == other.sym && self.antisym == other.antisym
    }
}

impl<S: Scalar> RMatrix<S> {
    /// Checks shapes, symmetry of `sym` and its ad-invariance.
    pub fn from_parts(algebra: Arc<LieAlgebra<S>>, sym: Tensor<S>, antisym: AltTensor<S>) -> Result<Self> {
        let dim = algebra.dim();
        for (d, k) in [(sym.dim(), sym.degree()), (antisym.dim(), antisym.degree())] {
            if d != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: d });
            }
            if k != 2 {
                return Err(Error::DegreeMismatch { expected: 2, found: k });
            }
        }
        if !sym.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !sym.is_ad_invariant(&algebra) {
            return Err(Error::NotInvariant);
        }
        let full = sym.clone() + antisym.to_tensor();
        Ok(Self { algebra, full, sym, antisym })
    }

    /// Splits a 2-tensor into its symmetric and antisymmetric parts.
    pub fn from_full(algebra: Arc<LieAlgebra<S>>, full: Tensor<S>) -> Result<Self> {
        if full.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: full.degree() });
        }
        let sym = full.symmetric_part();
        let antisym = full.antisymmetric_part();
        Self::from_parts(algebra, sym, antisym)
    }

    pub fn zero(algebra: Arc<LieAlgebra<S>>) -> Self {
        let dim = algebra.dim();
        Self { algebra, full: Tensor::zero(dim, 2), sym: Tensor::zero(dim, 2), antisym: AltTensor::zero(dim, 2) }
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<LieAlgebra<S>> {
        &self.algebra
    }

    pub fn full(&self) -> &Tensor<S> {
        &self.full
    }

    pub fn sym(&self) -> &Tensor<S> {
        &self.sym
    }

    pub fn antisym(&self) -> &AltTensor<S> {
        &self.antisym
    }

    /// Same `s`, antisymmetric part replaced.
    pub fn with_antisym(&self, antisym: AltTensor<S>) -> Result<Self> {
        Self::from_parts(self.algebra.clone(), self.sym.clone(), antisym)
    }

    /// `r̄ = s − Λ`.
    pub fn bar(&self) -> Self {
        let antisym = -self.antisym.clone();
        let full = self.sym.clone() + antisym.to_tensor();
        Self { algebra: self.algebra.clone(), full, sym: self.sym.clone(), antisym }
    }

    pub fn is_quasitriangular(&self) -> bool {
        cyb_check(self).holds
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> RMatrix<T> {
        RMatrix {
            algebra: Arc::new(self.algebra.map_scalars(f)),
            full: self.full.map_coeffs(f),
            sym: self.sym.map_coeffs(f),
            antisym: self.antisym.map_coeffs(f),
        }
    }
}

/// Values `±1` indexed by `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignFunction {
    signs: Vec<i8>,
}

impl SignFunction {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidArgument("sign function needs at least one value".into()));
        }
        if let Some(bad) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::InvalidArgument(format!("sign value {bad} is not ±1")));
        }
        Ok(Self { signs })
    }

    pub fn constant(n: usize, sign: i8) -> Result<Self> {
        Self::new(vec![sign; n])
    }

    /// All `2^n` sign functions on `n` points.
    pub fn all(n: usize) -> impl Iterator<Item = SignFunction> {
        (0u64..(1u64 << n)).map(move |mask| SignFunction {
            signs: (0..n).map(|i| if mask >> i & 1 == 0 { 1 } else { -1 }).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}

/// Outcome of the classical Yang–Baxter test.
#[derive(Clone, Debug)]
pub struct CybResult<S> {
    pub holds: bool,
    /// `[Λ, Λ] + φ_s`.
    pub defect: AltTensor<S>,
}

pub fn cyb_check<S: Scalar>(r: &RMatrix<S>) -> CybResult<S> {
    let alg = r.algebra();
    let ll = schouten(alg, &r.antisym, &r.antisym).expect("same algebra");
    let phi = phi_s(alg, &r.sym).expect("validated on construction");
    let defect = ll + phi;
    let holds = defect.is_zero() || (!S::EXACT && defect.max_abs() <= 1e-10);
    CybResult { holds, defect }
}

/// `δ_r(x) = ad_x(r)` on each basis vector.
pub fn delta_r<S: Scalar>(r: &RMatrix<S>) -> Result<Cobracket<S>> {
    let alg = r.algebra();
    let mut images = Vec::with_capacity(alg.dim());
    for x in 0..alg.dim() {
        let t = ad_tensor(alg, x, &r.full);
        let antisymmetric = if S::EXACT {
            t == -t.transpose()
        } else {
            t.approx_eq(&-t.transpose(), 1e-10)
        };
        if !antisymmetric {
            return Err(Error::CobracketNotAntisymmetric(x));
        }
        images.push(t.antisymmetric_part());
    }
    Cobracket::new(alg.dim(), images)
}

/// `Σ_{j<k} Σ_{ab} t^{ab} (e_b)_j ∧ (e_a)_k` in `∧²(𝔤^n)` for a 2-tensor `t` on `𝔤`.
pub fn mix_tensor<S: Scalar>(t: &Tensor<S>, n: usize) -> Result<AltTensor<S>> {
    if n < 1 {
        return Err(Error::InvalidArgument("Mix^n needs n ≥ 1".into()));
    }
    if t.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: t.degree() });
    }
    let d = t.dim();
    let mut terms = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            for (idx, c) in t.terms() {
                terms.push((vec![j * d + idx[1], k * d + idx[0]], c.clone()));
            }
        }
    }
    AltTensor::from_terms(n * d, 2, terms)
}

/// `Mix^n(r)`.
pub fn mix_n<S: Scalar>(r: &RMatrix<S>, n: usize) -> Result<AltTensor<S>> {
    mix_tensor(&r.full, n)
}

/// `diag_n: 𝔤 → 𝔤^n`, `x ↦ (x, …, x)`.
pub fn diag_n_map<S: Scalar>(dim: usize, n: usize) -> Result<LinearMap<S>> {
    if n < 1 {
        return Err(Error::InvalidArgument("diag_n needs n ≥ 1".into()));
    }
    let images = (0..dim).map(|a| (0..n).map(|j| (j * dim + a, S::one())).collect()).collect();
    LinearMap::new(n * dim, images)
}

pub fn diag_n_alt<S: Scalar>(t: &AltTensor<S>, n: usize) -> Result<AltTensor<S>> {
    diag_n_map(t.dim(), n)?.apply_alt(t)
}

pub fn diag_n_tensor<S: Scalar>(t: &Tensor<S>, n: usize) -> Result<Tensor<S>> {
    diag_n_map(t.dim(), n)?.apply_tensor(t)
}

/// `(t, …, t)`: one copy of `t` in each component of `𝔤^n`.
pub fn blockwise_alt<S: Scalar>(t: &AltTensor<S>, n: usize) -> AltTensor<S> {
    let d = t.dim();
    let terms = (0..n).flat_map(|j| t.terms().map(move |(idx, c)| (idx.iter().map(|i| j * d + i).collect(), c.clone())));
    AltTensor::from_terms(n * d, t.degree(), terms).expect("in range")
}

fn blockwise_signed_tensor<S: Scalar>(t: &Tensor<S>, eps: &SignFunction) -> Tensor<S> {
    let d = t.dim();
    let n = eps.len();
    let mut terms = Vec::new();
    for j in 0..n {
        for (idx, c) in t.terms() {
            let c = if eps.get(j) < 0 { -c.clone() } else { c.clone() };
            terms.push((idx.iter().map(|i| j * d + i).collect(), c));
        }
    }
    Tensor::from_terms(n * d, t.degree(), terms).expect("in range")
}

/// `Λ_r^{(n)} = (Λ, …, Λ) − Mix^n(r)`.
pub fn lambda_r_n<S: Scalar>(r: &RMatrix<S>, n: usize) -> Result<AltTensor<S>> {
    Ok(blockwise_alt(&r.antisym, n) - mix_n(r, n)?)
}

/// `r^{(ε,n)} = (ε_1 s, …, ε_n s) + Λ_r^{(n)}` on `𝔤^n`.
pub fn r_power<S: Scalar>(r: &RMatrix<S>, eps: &SignFunction, n: usize) -> Result<RMatrix<S>> {
    if eps.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: eps.len() });
    }
    let algebra = Arc::new(DirectSum::power(r.algebra(), n)?.into_algebra());
    let sym = blockwise_signed_tensor(&r.sym, eps);
    let antisym = lambda_r_n(r, n)?;
    RMatrix::from_parts(algebra, sym, antisym)
}

/// Which statement a [`Section2Entry`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    /// `r^{(ε,n)}` satisfies the classical Yang–Baxter equation.
    A,
    /// `δ_{r^{(ε,n)}}` does not depend on `ε`.
    B,
    /// `Λ_r^{(n)} − diag_n(Λ) = −Mix^n(s)`.
    C,
    /// `(Λ_r^{(m)}, Λ_r^{(n)}) − (diag_m, diag_n)(Mix²(r)) = Λ_r^{(m+n)}`.
    D,
    /// `diag_n` intertwines `δ_r` and `δ_{r^{(ε,n)}}`.
    E,
}

impl Clause {
    pub fn letter(self) -> char {
        match self {
            Clause::A => 'a',
            Clause::B => 'b',
            Clause::C => 'c',
            Clause::D => 'd',
            Clause::E => 'e',
        }
    }
}

#[derive(Clone, Debug)]
pub struct Section2Entry {
    pub n: usize,
    /// Empty for clauses that do not depend on a sign function; for clause D, `n` is `m + n`.
    pub eps: Vec<i8>,
    pub m: Option<usize>,
    pub clause: Clause,
    pub defect: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Section2Report {
    pub entries: Vec<Section2Entry>,
}

impl Section2Report {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Section2Entry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn max_defect(&self) -> f64 {
        self.entries.iter().map(|e| e.defect).fold(0.0, f64::max)
    }
}

fn verdict<S: Scalar>(diff: &AltTensor<S>) -> (f64, bool) {
    let defect = diff.max_abs();
    (defect, diff.is_zero() || (!S::EXACT && defect <= 1e-10))
}

/// Runs the clauses of [`Clause`] for `1 ≤ n ≤ n_max` over every sign function.
pub fn verify_section2<S: Scalar>(r: &RMatrix<S>, n_max: usize) -> Result<Section2Report> {
    let alg = r.algebra();
    let d = alg.dim();
    let base_delta = delta_r(r)?;
    let s_mix = |n| mix_tensor(&r.sym, n);
    let mut report = Section2Report::default();
    let mut lambdas = vec![AltTensor::zero(0, 2)];
    for n in 1..=n_max {
        lambdas.push(lambda_r_n(r, n)?);
    }

    for n in 1..=n_max {
        let diag = diag_n_map::<S>(d, n)?;
        let mut reference: Option<Cobracket<S>> = None;
        for eps in SignFunction::all(n) {
            let rp = r_power(r, &eps, n)?;
            let cyb = cyb_check(&rp);
            report.entries.push(Section2Entry {
                n,
                eps: eps.signs().to_vec(),
                m: None,
                clause: Clause::A,
                defect: cyb.defect.max_abs(),
                passed: cyb.holds,
            });

            let delta = match delta_r(&rp) {
                Ok(delta) => delta,
                Err(_) => {
                    for clause in [Clause::B, Clause::E] {
                        report.entries.push(Section2Entry {
                            n,
                            eps: eps.signs().to_vec(),
                            m: None,
                            clause,
                            defect: f64::INFINITY,
                            passed: false,
                        });
                    }
                    continue;
                }
            };
            let (b_defect, b_ok) = match &reference {
                None => (0.0, true),
                Some(first) => first
                    .images()
                    .iter()
                    .zip(delta.images())
                    .map(|(a, b)| verdict(&(a.clone() - b.clone())))
                    .fold((0.0, true), |(d0, ok0), (d1, ok1)| (f64::max(d0, d1), ok0 && ok1)),
            };
            report.entries.push(Section2Entry {
                n,
                eps: eps.signs().to_vec(),
                m: None,
                clause: Clause::B,
                defect: b_defect,
                passed: b_ok,
            });
            if reference.is_none() {
                reference = Some(delta.clone());
            }

            let (mut e_defect, mut e_ok) = (0.0f64, true);
            for x in 0..d {
                let dx = diag.apply_sparse(&vec![(x, S::one())]);
                let lhs = delta.apply(&dense(&dx, n * d));
                let rhs = diag.apply_alt(base_delta.image(x))?;
                let (def, ok) = verdict(&(lhs - rhs));
                e_defect = e_defect.max(def);
                e_ok &= ok;
            }
            report.entries.push(Section2Entry {
                n,
                eps: eps.signs().to_vec(),
                m: None,
                clause: Clause::E,
                defect: e_defect,
                passed: e_ok,
            });
        }

        let lhs = lambdas[n].clone() - diag.apply_alt(&r.antisym)?;
        let (defect, passed) = verdict(&(lhs + s_mix(n)?));
        report.entries.push(Section2Entry { n, eps: Vec::new(), m: None, clause: Clause::C, defect, passed });
    }

    let mix2 = mix_n(r, 2)?;
    for total in 2..=n_max {
        for m in 1..total {
            let n = total - m;
            let mut images = Vec::with_capacity(2 * d);
            for (count, offset) in [(m, 0), (n, m * d)] {
                for a in 0..d {
                    images.push((0..count).map(|j| (offset + j * d + a, S::one())).collect());
                }
            }
            let pair_diag = LinearMap::new(total * d, images)?;
            let joined = direct_pair(&lambdas[m], &lambdas[n]);
            let lhs = joined - pair_diag.apply_alt(&mix2)?;
            let (defect, passed) = verdict(&(lhs - lambdas[total].clone()));
            report.entries.push(Section2Entry { n: total, eps: Vec::new(), m: Some(m), clause: Clause::D, defect, passed });
        }
    }
    Ok(report)
}

fn dense<S: Scalar>(v: &[(usize, S)], dim: usize) -> Vec<S> {
    let mut out = vec![S::zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

/// `(a, b)` in `∧(V ⊕ W)` for `a ∈ ∧V`, `b ∈ ∧W` of the same degree.
pub fn direct_pair<S: Scalar>(a: &AltTensor<S>, b: &AltTensor<S>) -> AltTensor<S> {
    let off = a.dim();
    let terms = a
        .terms()
        .map(|(idx, c)| (idx.to_vec(), c.clone()))
        .chain(b.terms().map(|(idx, c)| (idx.iter().map(|i| off + i).collect(), c.clone())));
    AltTensor::from_terms(a.dim() + b.dim(), a.degree(), terms).expect("in range")
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// `e ⊗ f + ¼ h ⊗ h` on `sl2` with basis `(h, e, f)`.
pub fn sl2_standard() -> RMatrix<Rational> {
    let alg = Arc::new(crate::lie_core::sl2());
    let full = Tensor::from_terms(3, 2, [(vec![1, 2], q(1, 1)), (vec![0, 0], q(1, 4))]).expect("in range");
    RMatrix::from_full(alg, full).expect("standard r-matrix")
}

/// `½ (E11⊗E11 + E22⊗E22) + E12 ⊗ E21` on `gl2` with basis `(E11, E12, E21, E22)`.
pub fn gl2_standard() -> RMatrix<Rational> {
    let alg = Arc::new(crate::lie_core::gl2());
    let terms = [(vec![0, 0], q(1, 2)), (vec![3, 3], q(1, 2)), (vec![1, 2], q(1, 1))];
    let full = Tensor::from_terms(4, 2, terms).expect("in range");
    RMatrix::from_full(alg, full).expect("standard r-matrix")
}

/// `½ Σ a_i ⊗ a_i + ½ a_1 ∧ a_2` on the abelian algebra of dimension `n`.
pub fn abelian_standard(n: usize) -> Result<RMatrix<Rational>> {
    let alg = Arc::new(crate::lie_core::abelian(n)?);
    let sym = Tensor::from_terms(n, 2, (0..n).map(|i| (vec![i, i], q(1, 2))))?;
    let antisym = if n >= 2 {
        AltTensor::from_terms(n, 2, [(vec![0, 1], q(1, 2))])?
    } else {
        AltTensor::zero(n, 2)
    };
    RMatrix::from_parts(alg, sym, antisym)
}

/// Named built-ins: `sl2_standard`, `gl2_standard`, `abelianN_standard`.
pub fn builtin_rmatrix(name: &str) -> Result<RMatrix<Rational>> {
    match name {
        "sl2_standard" => Ok(sl2_standard()),
        "gl2_standard" => Ok(gl2_standard()),
        _ => {
            let n = name
                .strip_prefix("abelian")
                .and_then(|rest| rest.strip_suffix("_standard"))
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| *n >= 1)
                .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
            abelian_standard(n)
        }
    }
}
