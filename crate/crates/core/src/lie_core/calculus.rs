use super::algebra::LieAlgebra;
use super::tensor::{Accumulator, AltTensor, Tensor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Algebraic Schouten–Nijenhuis bracket `∧^k 𝔤 × ∧^l 𝔤 → ∧^{k+l-1} 𝔤`.
///
/// On monomials,
/// `[x_1∧…∧x_k, y_1∧…∧y_l] = Σ_{p,q} (−1)^{p+q} [x_p, y_q] ∧ x_1…x̂_p…x_k ∧ y_1…ŷ_q…y_l`
/// (0-based `p, q`), which is the biderivation extension of the Lie bracket.
pub fn schouten<S: Scalar>(alg: &LieAlgebra<S>, a: &AltTensor<S>, b: &AltTensor<S>) -> Result<AltTensor<S>> {
    let dim = alg.dim();
    for t in [a, b] {
        if t.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: t.dim() });
        }
    }
    let (k, l) = (a.degree(), b.degree());
    let out_degree = (k + l).saturating_sub(1);
    if k == 0 || l == 0 {
        return Ok(AltTensor::zero(dim, out_degree));
    }
    let mut acc = Accumulator::new();
    let mut idx = Vec::with_capacity(out_degree);
    for (xi, ca) in a.terms() {
        for (yj, cb) in b.terms() {
            let weight = ca.clone() * cb.clone();
            for p in 0..k {
                for q in 0..l {
                    let bracket = alg.bracket_basis(xi[p], yj[q]);
                    if bracket.is_empty() {
                        continue;
                    }
                    let odd = (p + q) % 2 == 1;
                    for (m, c) in bracket {
                        idx.clear();
                        idx.push(*m);
                        idx.extend(xi.iter().enumerate().filter(|(i, _)| *i != p).map(|(_, v)| *v));
                        idx.extend(yj.iter().enumerate().filter(|(j, _)| *j != q).map(|(_, v)| *v));
                        let term = weight.clone() * c.clone();
                        acc.add_alternating(idx.clone(), if odd { -term } else { term });
                    }
                }
            }
        }
    }
    Ok(AltTensor::from_sorted_map(dim, out_degree, acc.finish()))
}

/// Diagonal adjoint action of `e_x` on an alternating tensor.
pub fn ad_alt<S: Scalar>(alg: &LieAlgebra<S>, x: usize, t: &AltTensor<S>) -> AltTensor<S> {
    let mut acc = Accumulator::new();
    for (idx, c) in t.terms() {
        for p in 0..idx.len() {
            for (m, d) in alg.bracket_basis(x, idx[p]) {
                let mut out = idx.to_vec();
                out[p] = *m;
                acc.add_alternating(out, c.clone() * d.clone());
            }
        }
    }
    AltTensor::from_sorted_map(t.dim(), t.degree(), acc.finish())
}

/// Diagonal adjoint action of `e_x` on a general tensor.
pub fn ad_tensor<S: Scalar>(alg: &LieAlgebra<S>, x: usize, t: &Tensor<S>) -> Tensor<S> {
    let mut acc = Accumulator::new();
    for (idx, c) in t.terms() {
        for p in 0..idx.len() {
            for (m, d) in alg.bracket_basis(x, idx[p]) {
                let mut out = idx.to_vec();
                out[p] = *m;
                acc.add(out, c.clone() * d.clone());
            }
        }
    }
    let terms = acc.finish();
    Tensor::from_terms(t.dim(), t.degree(), terms).expect("same shape")
}

/// Things the adjoint action can be tested on.
pub trait AdInvariant<S: Scalar> {
    /// Largest coefficient of `ad_{e_x} t` over all basis `x`.
    fn ad_defect(&self, alg: &LieAlgebra<S>) -> f64;
    /// True iff every `ad_{e_x}` annihilates `self` (literally, in exact mode).
    fn is_ad_invariant(&self, alg: &LieAlgebra<S>) -> bool;
}

impl<S: Scalar> AdInvariant<S> for Tensor<S> {
    fn ad_defect(&self, alg: &LieAlgebra<S>) -> f64 {
        (0..alg.dim()).map(|x| ad_tensor(alg, x, self).max_abs()).fold(0.0, f64::max)
    }

    fn is_ad_invariant(&self, alg: &LieAlgebra<S>) -> bool {
        (0..alg.dim()).all(|x| {
            let t = ad_tensor(alg, x, self);
            t.is_zero() || (!S::EXACT && is_negligible(t.max_abs()))
        })
    }
}

impl<S: Scalar> AdInvariant<S> for AltTensor<S> {
    fn ad_defect(&self, alg: &LieAlgebra<S>) -> f64 {
        (0..alg.dim()).map(|x| ad_alt(alg, x, self).max_abs()).fold(0.0, f64::max)
    }

    fn is_ad_invariant(&self, alg: &LieAlgebra<S>) -> bool {
        (0..alg.dim()).all(|x| {
            let t = ad_alt(alg, x, self);
            t.is_zero() || (!S::EXACT && is_negligible(t.max_abs()))
        })
    }
}

fn is_negligible(v: f64) -> bool {
    v <= 1e-10
}

pub fn ad_invariant<S: Scalar, T: AdInvariant<S>>(alg: &LieAlgebra<S>, t: &T) -> bool {
    t.is_ad_invariant(alg)
}

/// Cartan 3-tensor `φ_s(ξ, η, ζ) = 2⟨ξ, [s♯η, s♯ζ]⟩`, with `s♯` the matrix of
/// `s` in the coordinate basis.
pub fn phi_s<S: Scalar>(alg: &LieAlgebra<S>, s: &Tensor<S>) -> Result<AltTensor<S>> {
    let dim = alg.dim();
    if s.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
    }
    if s.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: s.degree() });
    }
    if !s.approx_eq(&s.transpose(), 1e-12) {
        return Err(Error::NotSymmetric);
    }
    if !s.is_ad_invariant(alg) {
        return Err(Error::NotInvariant);
    }
    let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); dim];
    for (idx, c) in s.terms() {
        rows[idx[0]].push((idx[1], c.clone()));
    }
    let two = S::from_i64(2);
    let mut acc = Accumulator::new();
    for b in 0..dim {
        if rows[b].is_empty() {
            continue;
        }
        for c in (b + 1)..dim {
            if rows[c].is_empty() {
                continue;
            }
            for (a, w) in alg.bracket_sparse(&rows[b], &rows[c]) {
                if a < b {
                    acc.add(vec![a, b, c], two.clone() * w);
                }
            }
        }
    }
    Ok(AltTensor::from_sorted_map(dim, 3, acc.finish()))
}

/// A linear map `δ: 𝔤 → ∧²𝔤` given on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Cobracket<S> {
    images: Vec<AltTensor<S>>,
}

impl<S: Scalar> Cobracket<S> {
    pub fn new(dim: usize, images: Vec<AltTensor<S>>) -> Result<Self> {
        if images.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: images.len() });
        }
        for t in &images {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.dim() });
            }
            if t.degree() != 2 {
                return Err(Error::DegreeMismatch { expected: 2, found: t.degree() });
            }
        }
        Ok(Self { images })
    }

    pub fn zero(dim: usize) -> Self {
        Self { images: vec![AltTensor::zero(dim, 2); dim] }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> &AltTensor<S> {
        &self.images[i]
    }

    pub fn images(&self) -> &[AltTensor<S>] {
        &self.images
    }

    pub fn apply(&self, x: &[S]) -> AltTensor<S> {
        let mut out = AltTensor::zero(self.dim(), 2);
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out = out + self.images[i].scale(c);
        }
        out
    }

    /// Largest coefficient of `δ([e_i,e_j]) − ad_{e_i} δ(e_j) + ad_{e_j} δ(e_i)`.
    pub fn cocycle_defect(&self, alg: &LieAlgebra<S>) -> f64 {
        let dim = alg.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let mut lhs = AltTensor::zero(dim, 2);
                for (k, c) in alg.bracket_basis(i, j) {
                    lhs = lhs + self.images[*k].scale(c);
                }
                let rhs = ad_alt(alg, i, &self.images[j]) - ad_alt(alg, j, &self.images[i]);
                worst = worst.max((lhs - rhs).max_abs());
            }
        }
        worst
    }

    pub fn is_cocycle(&self, alg: &LieAlgebra<S>) -> bool {
        let d = self.cocycle_defect(alg);
        if S::EXACT {
            d == 0.0
        } else {
            d <= 1e-10
        }
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Cobracket<T> {
        Cobracket { images: self.images.iter().map(|t| t.map_coeffs(f)).collect() }
    }
}
