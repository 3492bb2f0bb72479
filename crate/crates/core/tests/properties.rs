use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use linset_core::linset::{apply_semilinear, linset_of};
use linset_core::{Elem, FieldCtx, QPoly, SemilinearMap};

fn f36() -> Arc<FieldCtx> {
    static K: OnceLock<Arc<FieldCtx>> = OnceLock::new();
    K.get_or_init(|| Arc::new(FieldCtx::new(3, 1, 6, None).unwrap())).clone()
}

fn f24() -> Arc<FieldCtx> {
    static K: OnceLock<Arc<FieldCtx>> = OnceLock::new();
    K.get_or_init(|| Arc::new(FieldCtx::new(2, 2, 3, None).unwrap())).clone()
}

fn el(k: &FieldCtx, i: usize) -> Elem {
    k.from_dlog_or_neg(i as i64 - 1).unwrap()
}

fn poly(k: &Arc<FieldCtx>, raw: &[usize]) -> QPoly {
    QPoly::new(k.clone(), raw.iter().map(|&i| el(k, i % k.size())).collect()).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..729, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_involution(raw in coeffs()) {
        let k = f36();
        let f = poly(&k, &raw);
        prop_assert_eq!(f.adjoint().adjoint(), f);
    }

    #[test]
    fn adjoint_reverses_composition(a in coeffs(), b in coeffs()) {
        let k = f36();
        let (f, g) = (poly(&k, &a), poly(&k, &b));
        let lhs = f.compose(&g).unwrap().adjoint();
        let rhs = g.adjoint().compose(&f.adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_duality(raw in coeffs(), x in 0usize..729, y in 0usize..729) {
        let k = f36();
        let f = poly(&k, &raw);
        let (x, y) = (el(&k, x), el(&k, y));
        let lhs = k.rel_trace(k.mul(f.eval(x), y), 1).unwrap();
        let rhs = k.rel_trace(k.mul(x, f.adjoint().eval(y)), 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_matches_pointwise(a in coeffs(), b in coeffs(), x in 0usize..729) {
        let k = f36();
        let (f, g) = (poly(&k, &a), poly(&k, &b));
        let x = el(&k, x);
        prop_assert_eq!(f.compose(&g).unwrap().eval(x), f.eval(g.eval(x)));
    }

    #[test]
    fn evaluation_is_additive(raw in coeffs(), x in 0usize..729, y in 0usize..729) {
        let k = f36();
        let f = poly(&k, &raw);
        let (x, y) = (el(&k, x), el(&k, y));
        prop_assert_eq!(f.eval(k.add(x, y)), k.add(f.eval(x), f.eval(y)));
    }

    #[test]
    fn group_action(raw in coeffs(), m1 in proptest::collection::vec(0usize..729, 5),
                    m2 in proptest::collection::vec(0usize..729, 5)) {
        let k = f36();
        let l = linset_of(&poly(&k, &raw));
        let mk = |v: &[usize]| {
            SemilinearMap::projective(&k, el(&k, v[0]), el(&k, v[1]), el(&k, v[2]), el(&k, v[3]), (v[4] % 6) as u32)
        };
        let (Ok(a), Ok(b)) = (mk(&m1), mk(&m2)) else { return Ok(()) };
        let both = apply_semilinear(&b.compose(&k, &a), &l).unwrap();
        let step = apply_semilinear(&b, &apply_semilinear(&a, &l).unwrap()).unwrap();
        prop_assert_eq!(both, step);
        let back = apply_semilinear(&a.inverse(&k), &apply_semilinear(&a, &l).unwrap()).unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn inverse_composes_to_identity(raw in proptest::collection::vec(0usize..64, 3)) {
        let k = f24();
        let f = poly(&k, &raw);
        match f.inverse() {
            Some(h) => {
                prop_assert_eq!(h.compose(&f).unwrap(), QPoly::identity(k.clone()));
                prop_assert_eq!(f.rank(), 3);
            }
            None => prop_assert!(f.rank() < 3),
        }
    }

    #[test]
    fn scalar_twist_keeps_linear_set(raw in coeffs(), a in 1usize..729) {
        let k = f36();
        let f = poly(&k, &raw);
        let g = f.scalar_twist(el(&k, a)).unwrap();
        prop_assert_eq!(linset_of(&f), linset_of(&g));
    }
}
