use std::sync::Arc;

use proptest::prelude::*;

use frpoisson_core::ciliated_graph::{disk2, graph_equal, random_skeleton, sigma_n, Relabeling, Skeleton};
use frpoisson_core::group_numerics::split_rng;
use frpoisson_core::invariant_calculus::{fuse_poisson, pi_gamma, FrContext, RAssignment};
use frpoisson_core::lie_core::sl2;
use frpoisson_core::r_matrix::{sl2_standard, RMatrix};
use frpoisson_core::Rational;

fn uniform(s: &Skeleton, r: &RMatrix<Rational>) -> RAssignment<Rational> {
    s.graph.vertices().iter().map(|v| (v.clone(), r.clone())).collect()
}

fn random(seed: u64) -> Skeleton {
    random_skeleton(&mut split_rng(seed, 0), 5, 6).unwrap()
}

#[test]
fn sigma_n_is_fused_disks() {
    for n in 1..=4 {
        let mut s = disk2().prefixed("1.").unwrap();
        for k in 2..=n {
            s = s.disjoint_union(&disk2().prefixed(&format!("{k}.")).unwrap()).unwrap();
        }
        // sources in order 1..n, targets in order n..1
        let (mut src, mut tgt) = ("1.v1".to_string(), format!("{n}.v2"));
        for k in 2..=n {
            s = s.fuse(&src, &format!("{k}.v1")).unwrap();
            src = format!("{src}={k}.v1");
        }
        for k in (1..n).rev() {
            s = s.fuse(&tgt, &format!("{k}.v2")).unwrap();
            tgt = format!("{tgt}={k}.v2");
        }
        let mut map = Relabeling::default().vertex(&src, "v1").vertex(&tgt, "v2");
        for k in 1..=n {
            map = map.half_edge(&format!("{k}.a1"), &format!("a{k}")).half_edge(&format!("{k}.b1"), &format!("b{k}"));
        }
        assert!(graph_equal(&s.graph, &sigma_n(n).unwrap().graph, Some(&map)), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_fusion_is_associative(seed in any::<u64>()) {
        let s = random(seed);
        let v = s.graph.vertices();
        prop_assume!(v.len() >= 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let left = s.fuse(a, b).unwrap().fuse(&format!("{a}={b}"), c).unwrap();
        let right = s.fuse(b, c).unwrap().fuse(a, &format!("{b}={c}")).unwrap();
        prop_assert!(graph_equal(&left.graph, &right.graph, None));
    }

    #[test]
    fn poisson_fusion_is_associative_and_matches_fused_graph(seed in any::<u64>()) {
        let s = random(seed);
        prop_assume!(s.graph.vertices().len() >= 3);
        let r = sl2_standard();
        let ctx = FrContext::new(s.clone(), Arc::new(sl2())).unwrap();
        let pi = pi_gamma(&ctx, &uniform(&s, &r)).unwrap();
        let rho = ctx.rho_v().unwrap();
        let (once, rho_once) = fuse_poisson(&pi, &rho, &[0, 1, 2], &r).unwrap();
        let (step, rho_step) = fuse_poisson(&pi, &rho, &[0, 1], &r).unwrap();
        let (twice, rho_twice) = fuse_poisson(&step, &rho_step, &[0, 1], &r).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(rho_once.map(), rho_twice.map());

        let v = s.graph.vertices();
        let fused = s.fuse(&v[0], &v[1]).unwrap();
        let fused = fused.fuse(&format!("{}={}", v[0], v[1]), &v[2]).unwrap();
        let fctx = FrContext::new(fused.clone(), Arc::new(sl2())).unwrap();
        prop_assert_eq!(&once, &pi_gamma(&fctx, &uniform(&fused, &r)).unwrap());
        let rho_fused = fctx.rho_v().unwrap();
        prop_assert_eq!(rho_once.map(), rho_fused.map());
    }

    #[test]
    fn split_then_fuse_is_identity(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let s = random(seed);
        let v = pick.get(s.graph.vertices()).clone();
        let n = s.graph.order(&v).unwrap().len();
        prop_assume!(n >= 2);
        let k = 1 + seed as usize % (n - 1);
        let back = s.split(&v, k).unwrap().fuse(&format!("{v}.1"), &format!("{v}.2")).unwrap();
        let map = Relabeling::default().vertex(&format!("{v}.1={v}.2"), &v);
        prop_assert!(graph_equal(&back.graph, &s.graph, Some(&map)));
    }
}
