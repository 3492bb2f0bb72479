use std::collections::BTreeSet;
use std::sync::Arc;

use linset_core::autgrp::stabilizer;
use linset_core::equiv::{gammal_search, pgl_search, PglSearcher, DEFAULT_BUDGET};
use linset_core::linset::{apply_semilinear, linset_of};
use linset_core::{Elem, FieldCtx, QPoly, SemilinearMap};

/// Every element of PΓL(2, q^n) in normalized form.
fn all_maps(k: &FieldCtx) -> Vec<SemilinearMap> {
    let els: Vec<Elem> = k.elements().collect();
    let mut out = BTreeSet::new();
    for rho in 0..k.degree() {
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    for &d in &els {
                        if let Ok(m) = SemilinearMap::projective(k, a, b, c, d, rho) {
                            out.insert(m);
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

#[test]
fn stabilizers_match_brute_force() {
    let k = Arc::new(FieldCtx::new(2, 1, 4, None).unwrap());
    let maps = all_maps(&k);
    assert_eq!(maps.len(), 17 * 16 * 15 * 4);
    let g = k.g();
    let polys = [
        QPoly::from_terms(k.clone(), &[(1, Elem::ONE)]),
        QPoly::from_terms(k.clone(), &[(1, Elem::ONE), (3, g)]),
        QPoly::from_terms(k.clone(), &[(0, g), (2, k.g_pow(3))]),
        QPoly::from_terms(k.clone(), &[(1, g), (2, Elem::ONE), (3, k.g_pow(7))]),
    ];
    for f in &polys {
        let l = linset_of(f);
        if l.card() < 3 {
            continue;
        }
        let want: Vec<SemilinearMap> = maps.iter().copied().filter(|m| m.maps_onto(&l, &l)).collect();
        let got = stabilizer(&l, DEFAULT_BUDGET).unwrap();
        assert_eq!(got.elements, want, "stabilizer of L_({f})");
        assert!(got.closed);
    }
}

#[test]
fn pgl_search_agrees_with_brute_force() {
    let k = Arc::new(FieldCtx::new(2, 1, 4, None).unwrap());
    let maps = all_maps(&k);
    let g = k.g();
    let f = QPoly::from_terms(k.clone(), &[(1, Elem::ONE), (2, g)]);
    let lf = linset_of(&f);
    let searcher = PglSearcher::new(&lf);
    for i in 0..8u64 {
        let h = QPoly::from_terms(k.clone(), &[(1, k.g_pow(i)), (2, Elem::ONE)]);
        let lh = linset_of(&h);
        let brute = maps.iter().find(|m| m.maps_onto(&lh, &lf)).copied();
        let fast = searcher.find(&lh, DEFAULT_BUDGET).unwrap();
        assert_eq!(brute.is_some(), fast.witness.is_some(), "{h}");
        if let Some(w) = fast.witness {
            assert_eq!(apply_semilinear(&w, &lh).unwrap(), lf);
        }
        assert_eq!(pgl_search(&lh, &lf, DEFAULT_BUDGET).unwrap(), fast);
    }
}

#[test]
fn gammal_search_agrees_with_brute_force() {
    let k = Arc::new(FieldCtx::new(2, 1, 3, None).unwrap());
    let els: Vec<Elem> = k.elements().collect();
    let f = QPoly::from_terms(k.clone(), &[(1, Elem::ONE)]);
    for t in k.nonzero() {
        let g = QPoly::from_terms(k.clone(), &[(1, t), (2, Elem::ONE)]);
        let mut brute = false;
        'outer: for rho in 0..k.degree() {
            for &a in &els {
                for &b in &els {
                    for &c in &els {
                        for &d in &els {
                            if let Ok(m) = SemilinearMap::new(&k, a, b, c, d, rho) {
                                if m.maps_subspace(&f, &g).unwrap() {
                                    brute = true;
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        let fast = gammal_search(&f, &g, DEFAULT_BUDGET).unwrap();
        assert_eq!(fast.witness.is_some(), brute, "{g}");
        if let Some(w) = fast.witness {
            assert!(w.maps_subspace(&f, &g).unwrap());
        }
    }
}
