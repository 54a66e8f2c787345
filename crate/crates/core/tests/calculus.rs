use nalgebra::DMatrix;
use proptest::prelude::*;

use frpoisson_core::lie_core::{
    abelian, ad_invariant, gl2, phi_s, schouten, sl2, AltTensor, DirectSum, LieAlgebra, Tensor,
};
use frpoisson_core::r_matrix::{cyb_check, delta_r, gl2_standard, mix_tensor, sl2_standard, RMatrix};
use frpoisson_core::{Rational, Scalar};

type Alg = LieAlgebra<Rational>;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn alt(dim: usize, degree: usize, coeffs: &[i64]) -> AltTensor<Rational> {
    let mut idx = Vec::new();
    subsets(dim, degree, 0, &mut Vec::new(), &mut idx);
    AltTensor::from_terms(dim, degree, idx.into_iter().zip(coeffs.iter().map(|&c| q(c)))).unwrap()
}

fn subsets(dim: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..dim {
        cur.push(i);
        subsets(dim, k, i + 1, cur, out);
        cur.pop();
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn arb_alt(dim: usize, degree: usize) -> impl Strategy<Value = AltTensor<Rational>> {
    prop::collection::vec(-3i64..=3, binom(dim, degree)).prop_map(move |c| alt(dim, degree, &c))
}

/// Sign in `[a, b] = −(−1)^{(p−1)(q−1)} [b, a]`.
fn koszul(p: usize, q: usize) -> i64 {
    if (p - 1) * (q - 1) % 2 == 1 {
        1
    } else {
        -1
    }
}

fn kron3(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b).kronecker(c)
}

/// Image of a 3-tensor under `ρ^{⊗3}`.
fn rep3(rep: &[DMatrix<f64>], t: &Tensor<Rational>) -> DMatrix<f64> {
    let n = rep[0].nrows();
    let mut out = DMatrix::zeros(n * n * n, n * n * n);
    for (idx, c) in t.terms() {
        out += kron3(&rep[idx[0]], &rep[idx[1]], &rep[idx[2]]) * c.to_f64();
    }
    out
}

/// `[r12, r13] + [r12, r23] + [r13, r23]` in `End(V)^{⊗3}` by matrix products.
fn cyb_in_rep(rep: &[DMatrix<f64>], r: &Tensor<Rational>) -> DMatrix<f64> {
    let n = rep[0].nrows();
    let id = DMatrix::identity(n, n);
    let mut r12 = DMatrix::zeros(n * n * n, n * n * n);
    let mut r13 = r12.clone();
    let mut r23 = r12.clone();
    for (idx, c) in r.terms() {
        let (a, b, c) = (&rep[idx[0]], &rep[idx[1]], c.to_f64());
        r12 += kron3(a, b, &id) * c;
        r13 += kron3(a, &id, b) * c;
        r23 += kron3(&id, a, b) * c;
    }
    let br = |x: &DMatrix<f64>, y: &DMatrix<f64>| x * y - y * x;
    br(&r12, &r13) + br(&r12, &r23) + br(&r13, &r23)
}

/// Ratio `CYB(r) = k · ρ^{⊗3}([Λ, Λ] + φ_s)` in the defining representation,
/// fixed once from the doubled standard Λ on sl2.
const CYB_RATIO: f64 = 0.5;

fn cyb_matches_oracle(r: &RMatrix<Rational>) -> f64 {
    let rep = r.algebra().rep().expect("matrix algebra");
    let oracle = cyb_in_rep(rep, r.full());
    let ours = rep3(rep, &cyb_check(r).defect.to_tensor());
    (oracle - ours * CYB_RATIO).abs().max()
}

#[test]
fn cyb_defect_agrees_with_matrix_oracle() {
    let r = sl2_standard();
    assert!(cyb_in_rep(r.algebra().rep().unwrap(), r.full()).abs().max() < 1e-14);
    let doubled = r.with_antisym(r.antisym().scale(&q(2))).unwrap();
    assert!(cyb_in_rep(r.algebra().rep().unwrap(), doubled.full()).abs().max() > 0.1);
    for r in [r.clone(), doubled, gl2_standard(), gl2_standard().bar()] {
        assert!(cyb_matches_oracle(&r) < 1e-12);
    }
}

#[test]
fn e_wedge_h_control_solves_cyb_in_the_oracle_too() {
    let r = sl2_standard();
    let shift = AltTensor::from_terms(3, 2, [(vec![1, 0], q(1))]).unwrap();
    let shifted = r.with_antisym(r.antisym().clone() + shift).unwrap();
    assert!(cyb_in_rep(r.algebra().rep().unwrap(), shifted.full()).abs().max() < 1e-14);
}

#[test]
fn cobracket_of_e() {
    // δ(e) = ad_e(½ e∧f) = ½ e∧h, basis (h, e, f)
    let delta = delta_r(&sl2_standard()).unwrap();
    assert_eq!(delta.image(1), &AltTensor::from_terms(3, 2, [(vec![1, 0], Rational::from_ratio(1, 2))]).unwrap());
    assert_eq!(delta.image(1).get(&[0, 1]), Rational::from_ratio(-1, 2));
    assert!(delta.is_cocycle(&sl2()));
}

#[test]
fn ad_invariance_oracle() {
    let alg = sl2();
    let ee = Tensor::from_terms(3, 2, [(vec![1, 1], q(1))]).unwrap();
    assert!(!ad_invariant(&alg, &ee));
    assert!(ad_invariant(&alg, sl2_standard().sym()));
    assert!(ad_invariant(&gl2(), gl2_standard().sym()));
}

#[test]
fn phi_of_standard_s() {
    // [½ e∧f, ½ e∧f] = ½ h∧e∧f, so φ_s = −½ h∧e∧f
    let phi = phi_s(&sl2(), sl2_standard().sym()).unwrap();
    assert_eq!(phi, AltTensor::from_terms(3, 3, [(vec![0, 1, 2], Rational::from_ratio(-1, 2))]).unwrap());
    let ll = schouten(&sl2(), sl2_standard().antisym(), sl2_standard().antisym()).unwrap();
    assert_eq!(ll, -phi);
}

/// Terms of `t` on components `j < k` of `𝔤^n`, re-indexed onto `𝔤^2`.
fn restrict(t: &AltTensor<Rational>, d: usize, j: usize, k: usize) -> AltTensor<Rational> {
    let slot = |i: usize| match i / d {
        c if c == j => Some(i % d),
        c if c == k => Some(d + i % d),
        _ => None,
    };
    let terms = t.terms().filter_map(|(idx, c)| Some((idx.iter().map(|&i| slot(i)).collect::<Option<Vec<_>>>()?, c.clone())));
    AltTensor::from_terms(2 * d, 2, terms).unwrap()
}

fn algebras() -> Vec<Alg> {
    vec![sl2(), gl2(), abelian(2).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schouten_graded_antisymmetry(
        (p, qd, a, b) in (1usize..=2, 1usize..=2).prop_flat_map(|(p, qd)| (Just(p), Just(qd), arb_alt(4, p), arb_alt(4, qd)))
    ) {
        let alg = gl2();
        let ab = schouten(&alg, &a, &b).unwrap();
        let ba = schouten(&alg, &b, &a).unwrap();
        prop_assert_eq!(ab, ba.scale(&q(koszul(p, qd))));
    }

    #[test]
    fn schouten_graded_jacobi(a in arb_alt(4, 1), b in arb_alt(4, 2), c in arb_alt(4, 2)) {
        let alg = gl2();
        let br = |x: &AltTensor<Rational>, y: &AltTensor<Rational>| schouten(&alg, x, y).unwrap();
        // (−1)^{(p−1)(r−1)} [a, [b, c]] + cyclic, degrees (1, 2, 2)
        let sign = |p: usize, r: usize| q(if (p - 1) * (r - 1) % 2 == 0 { 1 } else { -1 });
        let total = br(&a, &br(&b, &c)).scale(&sign(1, 2))
            + br(&b, &br(&c, &a)).scale(&sign(2, 1))
            + br(&c, &br(&a, &b)).scale(&sign(2, 2));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn embedding_commutes_with_schouten(which in 0usize..3, comp in 0usize..2, p in 1usize..=2, coeffs in prop::collection::vec(-3i64..=3, 12)) {
        let alg = &algebras()[which];
        let d = alg.dim();
        let a = alt(d, p, &coeffs[..binom(d, p)]);
        let b = alt(d, 2, &coeffs[6..6 + binom(d, 2)]);
        let sum = DirectSum::power(alg, 2).unwrap();
        let lhs = sum.embed_alt(comp, &schouten(alg, &a, &b).unwrap()).unwrap();
        let rhs = schouten(sum.algebra(), &sum.embed_alt(comp, &a).unwrap(), &sum.embed_alt(comp, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_is_invariant_and_quadratic(which in 0usize..2, c in -4i64..=4) {
        let (alg, r) = [(sl2(), sl2_standard()), (gl2(), gl2_standard())][which].clone();
        let phi = phi_s(&alg, r.sym()).unwrap();
        prop_assert!(ad_invariant(&alg, &phi));
        let scaled = phi_s(&alg, &r.sym().scale(&q(c))).unwrap();
        prop_assert_eq!(scaled, phi.scale(&q(c * c)));
    }

    #[test]
    fn mix_restricts_to_mix2(which in 0usize..2, n in 2usize..=4, j in 0usize..4, k in 0usize..4) {
        prop_assume!(j < k && k < n);
        let r = [sl2_standard(), gl2_standard()][which].clone();
        let d = r.algebra().dim();
        let mix = mix_tensor(r.full(), n).unwrap();
        prop_assert_eq!(restrict(&mix, d, j, k), mix_tensor(r.full(), 2).unwrap());
    }

    #[test]
    fn cyb_defect_is_bar_invariant_and_matches_oracle(which in 0usize..2, coeffs in prop::collection::vec(-2i64..=2, 6)) {
        let r = [sl2_standard(), gl2_standard()][which].clone();
        let d = r.algebra().dim();
        let lambda = alt(d, 2, &coeffs[..binom(d, 2)]);
        let r = r.with_antisym(lambda).unwrap();
        let c = cyb_check(&r);
        let cb = cyb_check(&r.bar());
        prop_assert_eq!(c.holds, cb.holds);
        prop_assert_eq!(&c.defect, &cb.defect);
        prop_assert!(cyb_matches_oracle(&r) < 1e-9);
    }
}
