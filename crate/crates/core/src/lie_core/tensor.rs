use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sparse vector: `(basis index, coefficient)` pairs.
pub type SparseVec<S> = Vec<(usize, S)>;

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(negative)
}

/// Hash accumulator used while expanding products; converted to a pruned
/// sorted map at the end.
pub(crate) struct Accumulator<S> {
    terms: HashMap<Vec<usize>, S>,
}

impl<S: Scalar> Accumulator<S> {
    pub fn new() -> Self {
        Self { terms: HashMap::new() }
    }

    pub fn add(&mut self, idx: Vec<usize>, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(slot) => *slot = slot.clone() + c,
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    /// Adds `c` at the antisymmetrized position of `idx`.
    pub fn add_alternating(&mut self, mut idx: Vec<usize>, c: S) {
        if let Some(negative) = sort_with_sign(&mut idx) {
            self.add(idx, if negative { -c } else { c });
        }
    }

    pub fn finish(self) -> BTreeMap<Vec<usize>, S> {
        self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

/// Element of `V^{⊗k}` for `V` of dimension `dim`, in the coordinate basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, S>,
}

/// Element of `∧^k V` stored on strictly increasing multi-indices.
///
/// The coefficient at a sorted index `I` is the value of the tensor on the
/// dual basis covectors `I`, so `x ∧ y = x ⊗ y − y ⊗ x` as 2-tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct AltTensor<S> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        let mut acc = Accumulator::new();
        for (idx, c) in terms {
            check_index(&idx, dim, degree)?;
            acc.add(idx, c);
        }
        Ok(Self { dim, degree, coeffs: acc.finish() })
    }

    /// `Σ_ab m[a][b] e_a ⊗ e_b`.
    pub fn from_matrix(rows: &[Vec<S>]) -> Self {
        let dim = rows.len();
        let terms = rows.iter().enumerate().flat_map(|(a, row)| {
            row.iter().enumerate().map(move |(b, c)| (vec![a, b], c.clone()))
        });
        Self::from_terms(dim, 2, terms).expect("square matrix")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &S)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> S {
        self.coeffs.get(idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        let terms = self.coeffs.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone()));
        Self::from_terms(self.dim, self.degree, terms).expect("same shape")
    }

    /// Swaps the two slots of a 2-tensor.
    pub fn transpose(&self) -> Self {
        assert_eq!(self.degree, 2, "transpose needs a 2-tensor");
        let terms = self.coeffs.iter().map(|(k, v)| (vec![k[1], k[0]], v.clone()));
        Self::from_terms(self.dim, 2, terms).expect("same shape")
    }

    pub fn is_symmetric(&self) -> bool {
        self.degree != 2 || *self == self.transpose()
    }

    /// `(t + tᵀ)/2` for a 2-tensor.
    pub fn symmetric_part(&self) -> Self {
        let half = S::from_ratio(1, 2);
        (self.clone() + self.transpose()).scale(&half)
    }

    /// Total antisymmetrization `(1/k!) Σ_σ sgn(σ) t∘σ` as an [`AltTensor`].
    pub fn antisymmetric_part(&self) -> AltTensor<S> {
        let k = self.degree;
        let factorial: i64 = (1..=k as i64).product();
        let weight = S::from_ratio(1, factorial.max(1));
        let mut acc = Accumulator::new();
        for (idx, c) in &self.coeffs {
            acc.add_alternating(idx.clone(), c.clone() * weight.clone());
        }
        AltTensor { dim: self.dim, degree: k, coeffs: acc.finish() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(S::abs_f64).fold(0.0, f64::max)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor<T> {
        let terms = self.coeffs.iter().map(|(k, v)| (k.clone(), f(v)));
        Tensor::from_terms(self.dim, self.degree, terms).expect("same shape")
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self.degree == other.degree
            && (self.clone() - other.clone()).coeffs.values().all(|c| c.approx_eq(&S::zero(), tol))
    }
}

impl<S: Scalar> AltTensor<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, coeffs: BTreeMap::new() }
    }

    /// Builds from possibly unsorted index lists; each term is antisymmetrized
    /// onto its sorted position with the permutation sign.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        let mut acc = Accumulator::new();
        for (idx, c) in terms {
            check_index(&idx, dim, degree)?;
            acc.add_alternating(idx, c);
        }
        Ok(Self { dim, degree, coeffs: acc.finish() })
    }

    pub(crate) fn from_sorted_map(dim: usize, degree: usize, coeffs: BTreeMap<Vec<usize>, S>) -> Self {
        debug_assert!(coeffs.keys().all(|k| k.len() == degree && k.windows(2).all(|w| w[0] < w[1])));
        Self { dim, degree, coeffs }
    }

    /// `e_{i1} ∧ … ∧ e_{ik}`.
    pub fn basis(dim: usize, idx: &[usize]) -> Result<Self> {
        Self::from_terms(dim, idx.len(), [(idx.to_vec(), S::one())])
    }

    pub fn from_vector(v: &[S]) -> Self {
        let terms = v.iter().enumerate().map(|(i, c)| (vec![i], c.clone()));
        Self::from_terms(v.len(), 1, terms).expect("in range")
    }

    pub fn from_sparse(dim: usize, v: &SparseVec<S>) -> Result<Self> {
        Self::from_terms(dim, 1, v.iter().map(|(i, c)| (vec![*i], c.clone())))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &S)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at an arbitrary index list, with the permutation sign.
    pub fn get(&self, idx: &[usize]) -> S {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => S::zero(),
            Some(negative) => {
                let c = self.coeffs.get(&sorted).cloned().unwrap_or_else(S::zero);
                if negative {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Dense coordinates of a degree-1 element.
    pub fn to_vector(&self) -> Vec<S> {
        assert_eq!(self.degree, 1, "to_vector needs degree 1");
        let mut out = vec![S::zero(); self.dim];
        for (k, v) in &self.coeffs {
            out[k[0]] = v.clone();
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim, self.degree);
        }
        let coeffs = self.coeffs.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect();
        Self { dim: self.dim, degree: self.degree, coeffs }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut acc = Accumulator::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                acc.add_alternating(idx, ca.clone() * cb.clone());
            }
        }
        Ok(Self { dim: self.dim, degree: self.degree + other.degree, coeffs: acc.finish() })
    }

    /// The full tensor `Σ_σ sgn(σ) c e_{σ(I)}` for each stored term.
    pub fn to_tensor(&self) -> Tensor<S> {
        let mut acc = Accumulator::new();
        for (idx, c) in &self.coeffs {
            for (perm, negative) in permutations(idx) {
                acc.add(perm, if negative { -c.clone() } else { c.clone() });
            }
        }
        Tensor { dim: self.dim, degree: self.degree, coeffs: acc.finish() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(S::abs_f64).fold(0.0, f64::max)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AltTensor<T> {
        let mut acc = Accumulator::new();
        for (k, v) in &self.coeffs {
            acc.add(k.clone(), f(v));
        }
        AltTensor { dim: self.dim, degree: self.degree, coeffs: acc.finish() }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self.degree == other.degree
            && (self.clone() - other.clone()).coeffs.values().all(|c| c.approx_eq(&S::zero(), tol))
    }
}

fn check_index(idx: &[usize], dim: usize, degree: usize) -> Result<()> {
    if idx.len() != degree {
        return Err(Error::DegreeMismatch { expected: degree, found: idx.len() });
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
        return Err(Error::IndexOutOfRange { index: bad, dim });
    }
    Ok(())
}

/// All permutations of `idx` with their signs (true = odd).
fn permutations(idx: &[usize]) -> Vec<(Vec<usize>, bool)> {
    if idx.len() <= 1 {
        return vec![(idx.to_vec(), false)];
    }
    let mut out = Vec::new();
    for i in 0..idx.len() {
        let mut rest = idx.to_vec();
        let head = rest.remove(i);
        for (mut tail, negative) in permutations(&rest) {
            tail.insert(0, head);
            out.push((tail, negative ^ (i % 2 == 1)));
        }
    }
    out
}

macro_rules! linear_ops {
    ($ty:ident) => {
        impl<S: Scalar> Add for $ty<S> {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree), "shape mismatch in add");
                let mut coeffs = self.coeffs;
                for (k, v) in rhs.coeffs {
                    let sum = match coeffs.remove(&k) {
                        Some(old) => old + v,
                        None => v,
                    };
                    if !sum.is_zero() {
                        coeffs.insert(k, sum);
                    }
                }
                Self { dim: self.dim, degree: self.degree, coeffs }
            }
        }

        impl<S: Scalar> Neg for $ty<S> {
            type Output = Self;
            fn neg(self) -> Self {
                let coeffs = self.coeffs.into_iter().map(|(k, v)| (k, -v)).collect();
                Self { dim: self.dim, degree: self.degree, coeffs }
            }
        }

        impl<S: Scalar> Sub for $ty<S> {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                self + (-rhs)
            }
        }
    };
}

linear_ops!(Tensor);
linear_ops!(AltTensor);

/// Sparse linear map between coordinate spaces, stored column by column:
/// `images[i]` is the image of the `i`-th domain basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<S> {
    codomain_dim: usize,
    images: Vec<SparseVec<S>>,
}

impl<S: Scalar> LinearMap<S> {
    pub fn new(codomain_dim: usize, images: Vec<SparseVec<S>>) -> Result<Self> {
        for img in &images {
            if let Some(&(bad, _)) = img.iter().find(|(i, _)| *i >= codomain_dim) {
                return Err(Error::IndexOutOfRange { index: bad, dim: codomain_dim });
            }
        }
        let images = images.into_iter().map(|v| prune(v)).collect();
        Ok(Self { codomain_dim, images })
    }

    pub fn identity(dim: usize) -> Self {
        Self { codomain_dim: dim, images: (0..dim).map(|i| vec![(i, S::one())]).collect() }
    }

    pub fn domain_dim(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn image(&self, i: usize) -> &SparseVec<S> {
        &self.images[i]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LinearMap<S>) -> Result<LinearMap<S>> {
        if other.domain_dim() != self.codomain_dim {
            return Err(Error::DimensionMismatch { expected: self.codomain_dim, found: other.domain_dim() });
        }
        let images = self.images.iter().map(|img| other.apply_sparse(img)).collect();
        LinearMap::new(other.codomain_dim, images)
    }

    pub fn add(&self, other: &LinearMap<S>) -> Result<LinearMap<S>> {
        if self.domain_dim() != other.domain_dim() || self.codomain_dim != other.codomain_dim {
            return Err(Error::DimensionMismatch { expected: self.domain_dim(), found: other.domain_dim() });
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        LinearMap::new(self.codomain_dim, images)
    }

    pub fn apply_sparse(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut acc = BTreeMap::<usize, S>::new();
        for (i, c) in v {
            for (j, d) in &self.images[*i] {
                let entry = acc.entry(*j).or_insert_with(S::zero);
                *entry = entry.clone() + c.clone() * d.clone();
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn apply_vector(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.domain_dim() {
            return Err(Error::DimensionMismatch { expected: self.domain_dim(), found: v.len() });
        }
        let sparse: SparseVec<S> = v.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = vec![S::zero(); self.codomain_dim];
        for (j, c) in self.apply_sparse(&sparse) {
            out[j] = c;
        }
        Ok(out)
    }

    /// Applies the map in every slot of an alternating tensor.
    pub fn apply_alt(&self, t: &AltTensor<S>) -> Result<AltTensor<S>> {
        if t.dim != self.domain_dim() {
            return Err(Error::DimensionMismatch { expected: self.domain_dim(), found: t.dim });
        }
        let mut acc = Accumulator::new();
        for (idx, c) in &t.coeffs {
            expand_product(&self.images, idx, c.clone(), &mut |out, coeff| acc.add_alternating(out, coeff));
        }
        Ok(AltTensor { dim: self.codomain_dim, degree: t.degree, coeffs: acc.finish() })
    }

    /// Applies the map in every slot of a general tensor.
    pub fn apply_tensor(&self, t: &Tensor<S>) -> Result<Tensor<S>> {
        if t.dim != self.domain_dim() {
            return Err(Error::DimensionMismatch { expected: self.domain_dim(), found: t.dim });
        }
        let mut acc = Accumulator::new();
        for (idx, c) in &t.coeffs {
            expand_product(&self.images, idx, c.clone(), &mut |out, coeff| acc.add(out, coeff));
        }
        Ok(Tensor { dim: self.codomain_dim, degree: t.degree, coeffs: acc.finish() })
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinearMap<T> {
        let images = self.images.iter().map(|img| img.iter().map(|(i, c)| (*i, f(c))).collect()).collect();
        LinearMap::new(self.codomain_dim, images).expect("same shape")
    }
}

fn prune<S: Scalar>(v: SparseVec<S>) -> SparseVec<S> {
    let mut acc = BTreeMap::<usize, S>::new();
    for (i, c) in v {
        let entry = acc.entry(i).or_insert_with(S::zero);
        *entry = entry.clone() + c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Expands `c · f(e_{i1}) ⊗ … ⊗ f(e_{ik})` into monomials.
fn expand_product<S: Scalar>(
    images: &[SparseVec<S>],
    idx: &[usize],
    c: S,
    emit: &mut dyn FnMut(Vec<usize>, S),
) {
    fn rec<S: Scalar>(
        images: &[SparseVec<S>],
        idx: &[usize],
        prefix: &mut Vec<usize>,
        c: S,
        emit: &mut dyn FnMut(Vec<usize>, S),
    ) {
        match idx.split_first() {
            None => emit(prefix.clone(), c),
            Some((&head, rest)) => {
                for (j, d) in &images[head] {
                    prefix.push(*j);
                    rec(images, rest, prefix, c.clone() * d.clone(), emit);
                    prefix.pop();
                }
            }
        }
    }
    rec(images, idx, &mut Vec::with_capacity(idx.len()), c, emit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn sign_sorting() {
        let mut a = [2, 0, 1];
        assert_eq!(sort_with_sign(&mut a), Some(false));
        assert_eq!(a, [0, 1, 2]);
        let mut b = [1, 0, 2];
        assert_eq!(sort_with_sign(&mut b), Some(true));
        let mut c = [1, 0, 1];
        assert_eq!(sort_with_sign(&mut c), None);
    }

    #[test]
    fn wedge_is_antisymmetric_on_vectors() {
        let x = AltTensor::<Rational>::basis(3, &[0]).unwrap();
        let y = AltTensor::<Rational>::basis(3, &[2]).unwrap();
        let xy = x.wedge(&y).unwrap();
        let yx = y.wedge(&x).unwrap();
        assert_eq!(xy, -yx);
        assert!(x.wedge(&x).unwrap().is_zero());
        assert_eq!(xy.get(&[2, 0]), q(-1, 1));
    }

    #[test]
    fn wedge_to_tensor_matches_convention() {
        // x∧y = x⊗y − y⊗x
        let xy = AltTensor::<Rational>::basis(2, &[0, 1]).unwrap();
        let t = xy.to_tensor();
        assert_eq!(t.get(&[0, 1]), q(1, 1));
        assert_eq!(t.get(&[1, 0]), q(-1, 1));
        assert_eq!(t.antisymmetric_part(), xy);
    }

    #[test]
    fn rejects_out_of_range_indices() {
        assert!(AltTensor::<Rational>::basis(2, &[0, 2]).is_err());
        assert!(Tensor::<Rational>::from_terms(2, 2, [(vec![0], q(1, 1))]).is_err());
    }

    #[test]
    fn linear_map_slotwise() {
        // swap basis vectors of a 2-space
        let swap = LinearMap::new(2, vec![vec![(1, q(1, 1))], vec![(0, q(1, 1))]]).unwrap();
        let w = AltTensor::<Rational>::basis(2, &[0, 1]).unwrap();
        assert_eq!(swap.apply_alt(&w).unwrap(), -w.clone());
        let t = Tensor::from_terms(2, 2, [(vec![0, 0], q(3, 1))]).unwrap();
        assert_eq!(swap.apply_tensor(&t).unwrap().get(&[1, 1]), q(3, 1));
    }

    #[test]
    fn three_wedge_has_six_tensor_terms() {
        let w = AltTensor::<Rational>::basis(3, &[0, 1, 2]).unwrap();
        let t = w.to_tensor();
        assert_eq!(t.len(), 6);
        assert_eq!(t.get(&[1, 0, 2]), q(-1, 1));
        assert_eq!(t.get(&[1, 2, 0]), q(1, 1));
        assert_eq!(t.antisymmetric_part(), w);
    }
}
