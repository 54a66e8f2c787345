use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use super::tensor::{AltTensor, LinearMap, SparseVec, Tensor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rational;

/// Finite-dimensional Lie algebra given by structure constants
/// `[e_i, e_j] = Σ_k c_ij^k e_k`, with an optional faithful matrix
/// representation of the basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra<S> {
    name: String,
    labels: Vec<String>,
    /// `table[i * dim + j]` holds `[e_i, e_j]`.
    table: Vec<SparseVec<S>>,
    rep: Option<Vec<DMatrix<f64>>>,
}

impl<S: Scalar> PartialEq for LieAlgebra<S> {
    fn eq(&self, other: &Self) -> bool {
        self.labels.len() == other.labels.len() && self.table == other.table
    }
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds from brackets of basis pairs. Each `(i, j, [e_i, e_j])` also
    /// fixes `[e_j, e_i]`; contradicting entries are rejected. The result is
    /// validated (antisymmetry, Jacobi, representation).
    pub fn from_brackets<I>(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: I,
        rep: Option<Vec<DMatrix<f64>>>,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, SparseVec<S>)>,
    {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        let mut given: BTreeMap<(usize, usize), SparseVec<S>> = BTreeMap::new();
        for (i, j, v) in brackets {
            for &idx in [i, j].iter().chain(v.iter().map(|(k, _)| k)) {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            let v = normalize(v);
            let neg: SparseVec<S> = v.iter().map(|(k, c)| (*k, -c.clone())).collect();
            for (key, val) in [((i, j), v), ((j, i), neg)] {
                match given.get(&key) {
                    Some(old) if *old != val => {
                        return Err(Error::InvalidAlgebra(format!(
                            "conflicting or non-antisymmetric bracket [{}, {}]",
                            key.0, key.1
                        )))
                    }
                    _ => {
                        given.insert(key, val);
                    }
                }
            }
        }
        let mut table = vec![Vec::new(); dim * dim];
        for ((i, j), v) in given {
            table[i * dim + j] = v;
        }
        let alg = Self { name: name.into(), labels, table, rep };
        alg.validate()?;
        Ok(alg)
    }

    pub(crate) fn from_table_unchecked(
        name: String,
        labels: Vec<String>,
        table: Vec<SparseVec<S>>,
        rep: Option<Vec<DMatrix<f64>>>,
    ) -> Self {
        Self { name, labels, table, rep }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rep(&self) -> Option<&[DMatrix<f64>]> {
        self.rep.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|v| v.is_empty())
    }

    /// `[e_i, e_j]` as a sparse vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec<S> {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        let dim = self.dim();
        for v in [x, y] {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
        }
        let mut out = vec![S::zero(); dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] = out[*k].clone() + xi.clone() * yj.clone() * c.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn bracket_sparse(&self, x: &SparseVec<S>, y: &SparseVec<S>) -> SparseVec<S> {
        let mut acc: BTreeMap<usize, S> = BTreeMap::new();
        for (i, xi) in x {
            for (j, yj) in y {
                for (k, c) in self.bracket_basis(*i, *j) {
                    let e = acc.entry(*k).or_insert_with(S::zero);
                    *e = e.clone() + xi.clone() * yj.clone() * c.clone();
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// The matrix of `ad_{e_i}` as a linear map.
    pub fn ad(&self, i: usize) -> LinearMap<S> {
        let images = (0..self.dim()).map(|j| self.bracket_basis(i, j).clone()).collect();
        LinearMap::new(self.dim(), images).expect("in range")
    }

    pub fn basis_vector(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim()];
        v[i] = S::one();
        v
    }

    pub fn validate(&self) -> Result<()> {
        self.check_antisymmetry()?;
        self.check_jacobi()?;
        if self.rep.is_some() {
            self.check_rep(1e-9)?;
        }
        Ok(())
    }

    pub fn check_antisymmetry(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            if !self.bracket_basis(i, i).is_empty() {
                return Err(Error::InvalidAlgebra(format!("[e_{i}, e_{i}] != 0")));
            }
            for j in 0..i {
                let back: SparseVec<S> = self.bracket_basis(j, i).iter().map(|(k, c)| (*k, -c.clone())).collect();
                if !sparse_eq(self.bracket_basis(i, j), &back, 0.0) {
                    return Err(Error::InvalidAlgebra(format!("[e_{i}, e_{j}] != -[e_{j}, e_{i}]")));
                }
            }
        }
        Ok(())
    }

    /// Cyclic Jacobi sum on every basis triple; exact in exact mode.
    pub fn check_jacobi(&self) -> Result<()> {
        let dim = self.dim();
        let e = |i: usize| vec![(i, S::one())];
        for i in 0..dim {
            for j in (i + 1)..dim {
                let ij = self.bracket_basis(i, j).clone();
                for k in (j + 1)..dim {
                    let a = self.bracket_sparse(&ij, &e(k));
                    let b = self.bracket_sparse(&self.bracket_basis(j, k).clone(), &e(i));
                    let c = self.bracket_sparse(&self.bracket_basis(k, i).clone(), &e(j));
                    let sum: SparseVec<S> = a.into_iter().chain(b).chain(c).collect();
                    if !sparse_eq(&sum, &Vec::new(), 1e-10) {
                        return Err(Error::InvalidAlgebra(format!("Jacobi identity fails on ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that `rep` is a faithful representation within `tol`.
    pub fn check_rep(&self, tol: f64) -> Result<()> {
        let rep = self.rep.as_ref().ok_or_else(|| Error::NoRepresentation(self.name.clone()))?;
        let dim = self.dim();
        if rep.len() != dim {
            return Err(Error::InvalidAlgebra(format!("representation has {} matrices, expected {dim}", rep.len())));
        }
        let size = rep[0].nrows();
        if rep.iter().any(|m| m.nrows() != size || m.ncols() != size) {
            return Err(Error::InvalidAlgebra("representation matrices must share one square size".into()));
        }
        for i in 0..dim {
            for j in 0..dim {
                let comm = &rep[i] * &rep[j] - &rep[j] * &rep[i];
                let mut expected = DMatrix::zeros(size, size);
                for (k, c) in self.bracket_basis(i, j) {
                    expected += &rep[*k] * c.to_f64();
                }
                let err = (comm - expected).abs().max();
                if err > tol * (1.0 + rep[i].abs().max() * rep[j].abs().max()) {
                    return Err(Error::InvalidAlgebra(format!(
                        "representation does not respect [e_{i}, e_{j}] (error {err:e})"
                    )));
                }
            }
        }
        if flattened_rank(rep) < dim {
            return Err(Error::InvalidAlgebra("representation is not injective on the basis".into()));
        }
        Ok(())
    }

    /// Same vector space with bracket `-[x, y]`; representation `x ↦ -rep(x)`.
    pub fn opposite(&self, name: impl Into<String>) -> Self {
        let table = self
            .table
            .iter()
            .map(|v| v.iter().map(|(k, c)| (*k, -c.clone())).collect())
            .collect();
        let rep = self.rep.as_ref().map(|r| r.iter().map(|m| -m).collect());
        Self { name: name.into(), labels: self.labels.clone(), table, rep }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        let table = self.table.iter().map(|v| v.iter().map(|(k, c)| (*k, f(c))).collect()).collect();
        LieAlgebra { name: self.name.clone(), labels: self.labels.clone(), table, rep: self.rep.clone() }
    }

    pub fn to_float(&self) -> LieAlgebra<f64> {
        self.map_scalars(|c| c.to_f64())
    }
}

fn normalize<S: Scalar>(v: SparseVec<S>) -> SparseVec<S> {
    let mut acc: BTreeMap<usize, S> = BTreeMap::new();
    for (k, c) in v {
        let e = acc.entry(k).or_insert_with(S::zero);
        *e = e.clone() + c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn sparse_eq<S: Scalar>(a: &SparseVec<S>, b: &SparseVec<S>, tol: f64) -> bool {
    let mut diff: BTreeMap<usize, S> = BTreeMap::new();
    for (k, c) in a {
        let e = diff.entry(*k).or_insert_with(S::zero);
        *e = e.clone() + c.clone();
    }
    for (k, c) in b {
        let e = diff.entry(*k).or_insert_with(S::zero);
        *e = e.clone() - c.clone();
    }
    diff.values().all(|c| c.approx_eq(&S::zero(), tol))
}

fn flattened_rank(rep: &[DMatrix<f64>]) -> usize {
    let size = rep[0].nrows();
    let flat = DMatrix::from_fn(size * size, rep.len(), |r, c| rep[c][(r / size, r % size)]);
    let svd = flat.svd(false, false);
    let top = svd.singular_values.max();
    svd.singular_values.iter().filter(|&&s| s > 1e-10 * top.max(1.0)).count()
}

/// Direct sum of Lie algebras with the component embeddings `v ↦ (v)_γ`.
#[derive(Clone, Debug)]
pub struct DirectSum<S> {
    algebra: LieAlgebra<S>,
    offsets: Vec<usize>,
    dims: Vec<usize>,
}

impl<S: Scalar> DirectSum<S> {
    pub fn new(name: impl Into<String>, parts: &[&LieAlgebra<S>]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("direct sum of an empty list".into()));
        }
        let dims: Vec<usize> = parts.iter().map(|a| a.dim()).collect();
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0;
        for d in &dims {
            offsets.push(total);
            total += d;
        }
        let mut table = vec![Vec::new(); total * total];
        let mut labels = Vec::with_capacity(total);
        for (p, alg) in parts.iter().enumerate() {
            let off = offsets[p];
            for l in alg.labels() {
                labels.push(if parts.len() == 1 { l.clone() } else { format!("{l}_{p}") });
            }
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    table[(off + i) * total + off + j] =
                        alg.bracket_basis(i, j).iter().map(|(k, c)| (off + k, c.clone())).collect();
                }
            }
        }
        let rep = block_diagonal(parts);
        let algebra = LieAlgebra::from_table_unchecked(name.into(), labels, table, rep);
        Ok(Self { algebra, offsets, dims })
    }

    /// `n` copies of one algebra.
    pub fn power(alg: &LieAlgebra<S>, n: usize) -> Result<Self> {
        let parts = vec![alg; n];
        Self::new(format!("{}^{n}", alg.name()), &parts)
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn into_algebra(self) -> LieAlgebra<S> {
        self.algebra
    }

    pub fn components(&self) -> usize {
        self.offsets.len()
    }

    pub fn offset(&self, component: usize) -> usize {
        self.offsets[component]
    }

    /// The embedding of one component as a linear map.
    pub fn embedding(&self, component: usize) -> LinearMap<S> {
        let off = self.offsets[component];
        let images = (0..self.dims[component]).map(|i| vec![(off + i, S::one())]).collect();
        LinearMap::new(self.algebra.dim(), images).expect("in range")
    }

    pub fn embed(&self, component: usize, x: &[S]) -> Result<Vec<S>> {
        self.embedding(component).apply_vector(x)
    }

    pub fn embed_alt(&self, component: usize, t: &AltTensor<S>) -> Result<AltTensor<S>> {
        self.embedding(component).apply_alt(t)
    }

    pub fn embed_tensor(&self, component: usize, t: &Tensor<S>) -> Result<Tensor<S>> {
        self.embedding(component).apply_tensor(t)
    }
}

fn block_diagonal<S: Scalar>(parts: &[&LieAlgebra<S>]) -> Option<Vec<DMatrix<f64>>> {
    let reps: Vec<&[DMatrix<f64>]> = parts.iter().map(|a| a.rep()).collect::<Option<_>>()?;
    let sizes: Vec<usize> = reps.iter().map(|r| r[0].nrows()).collect();
    let total: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut off = 0;
    for (r, size) in reps.iter().zip(&sizes) {
        for m in r.iter() {
            let mut big = DMatrix::zeros(total, total);
            big.view_mut((off, off), (*size, *size)).copy_from(m);
            out.push(big);
        }
        off += size;
    }
    Some(out)
}

// ---- built-in algebras -----------------------------------------------------

type QMatrix = Vec<Vec<Rational>>;

fn elementary(n: usize, i: usize, j: usize) -> QMatrix {
    let mut m = vec![vec![Rational::zero(); n]; n];
    m[i][j] = Rational::one();
    m
}

fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..n {
                *cell = cell.clone() + a[i][k].clone() * b[k][j].clone() - b[i][k].clone() * a[k][j].clone();
            }
        }
    }
    out
}

/// Solves `Σ_k c_k basis[k] = target` exactly; `None` if inconsistent.
fn solve_in_basis(basis: &[QMatrix], target: &QMatrix) -> Option<Vec<Rational>> {
    let n = target.len();
    let rows = n * n;
    let cols = basis.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[r / n][r % n].clone()).collect();
            row.push(target[r / n][r % n].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Rational::one() / m[row][col].clone();
        for c in col..=cols {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    m[r][c] = m[r][c].clone() - f.clone() * m[row][c].clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut out = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][cols].clone();
    }
    Some(out)
}

/// Structure constants read off from matrix commutators of a basis.
pub fn from_matrix_basis(name: &str, labels: Vec<String>, basis: Vec<QMatrix>) -> Result<LieAlgebra<Rational>> {
    let dim = basis.len();
    let mut brackets = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let c = commutator(&basis[i], &basis[j]);
            let coeffs = solve_in_basis(&basis, &c)
                .ok_or_else(|| Error::InvalidAlgebra(format!("basis not closed under [{i}, {j}]")))?;
            brackets.push((i, j, coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()));
        }
    }
    let rep = basis
        .iter()
        .map(|b| DMatrix::from_fn(b.len(), b.len(), |r, c| b[r][c].to_f64()))
        .collect();
    LieAlgebra::from_brackets(name, labels, brackets, Some(rep))
}

/// `n`-dimensional abelian algebra, represented by diagonal matrices.
pub fn abelian(n: usize) -> Result<LieAlgebra<Rational>> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("dimension must be positive".into()));
    }
    let labels = (1..=n).map(|i| format!("a{i}")).collect();
    let basis = (0..n).map(|i| elementary(n, i, i)).collect();
    from_matrix_basis(&format!("abelian{n}"), labels, basis)
}

/// `gl(n)` on the elementary matrices `E_ij`, row-major.
pub fn gl(n: usize) -> Result<LieAlgebra<Rational>> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("gl(0) is empty".into()));
    }
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("E{}{}", i + 1, j + 1));
            basis.push(elementary(n, i, j));
        }
    }
    from_matrix_basis(&format!("gl{n}"), labels, basis)
}

/// `sl(n)` on `H_i = E_ii − E_{i+1,i+1}` followed by the off-diagonal `E_ij`
/// row-major. For `n = 2` this is `(h, e, f)`.
pub fn sl(n: usize) -> Result<LieAlgebra<Rational>> {
    if n < 2 {
        return Err(Error::InvalidAlgebra("sl(n) needs n >= 2".into()));
    }
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for i in 0..n - 1 {
        let mut h = elementary(n, i, i);
        h[i + 1][i + 1] = -Rational::one();
        labels.push(format!("H{}", i + 1));
        basis.push(h);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                labels.push(format!("E{}{}", i + 1, j + 1));
                basis.push(elementary(n, i, j));
            }
        }
    }
    if n == 2 {
        labels = vec!["h".into(), "e".into(), "f".into()];
    }
    from_matrix_basis(&format!("sl{n}"), labels, basis)
}

pub fn sl2() -> LieAlgebra<Rational> {
    sl(2).expect("sl2 is valid")
}

pub fn gl2() -> LieAlgebra<Rational> {
    gl(2).expect("gl2 is valid")
}

/// Resolves names such as `sl2`, `gl3`, `abelian2`.
pub fn builtin_algebra(name: &str) -> Result<LieAlgebra<Rational>> {
    let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    if let Some(n) = parse("abelian") {
        abelian(n)
    } else if let Some(n) = parse("sl") {
        sl(n)
    } else if let Some(n) = parse("gl") {
        gl(n)
    } else {
        Err(Error::UnknownBuiltin(name.to_string()))
    }
}
