//! The scattered trinomials in degree six, the binomial family, their explicit inverses, and
//! constructive equivalence witnesses.

use std::sync::Arc;

use crate::equiv::{gammal_search, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::gf::{gcd, Elem, FieldCtx};
use crate::linpoly::QPoly;
use crate::linset::{apply_semilinear, linset_of, SemilinearMap};

fn check_theta(k: &FieldCtx, theta: Elem) -> Result<()> {
    let v = k.sub(k.add(k.mul(theta, theta), theta), Elem::ONE);
    if k.p() == 2 || !v.is_zero() {
        return Err(Error::BadTheta);
    }
    if k.n() != 6 {
        return Err(Error::BadShape(format!("trinomial family needs n = 6, got {}", k.n())));
    }
    Ok(())
}

/// X^q + X^(q^3) + θ X^(q^5) with θ^2 + θ = 1.
pub fn cmmz_poly(ctx: &Arc<FieldCtx>, theta: Elem) -> Result<QPoly> {
    check_theta(ctx, theta)?;
    Ok(QPoly::from_terms(ctx.clone(), &[(1, Elem::ONE), (3, Elem::ONE), (5, theta)]))
}

/// Compositional inverse of the degree-six trinomial:
/// -(θ^q + 1) X^q + X^(q^3) + X^(q^5).
pub fn cmmz_inverse(ctx: &Arc<FieldCtx>, theta: Elem) -> Result<QPoly> {
    let f = cmmz_poly(ctx, theta)?;
    let k = &**ctx;
    let c = k.neg(k.add(k.frob_q(theta, 1), Elem::ONE));
    let h = QPoly::from_terms(ctx.clone(), &[(1, c), (3, Elem::ONE), (5, Elem::ONE)]);
    verify_inverse(&f, &h);
    Ok(h)
}

fn verify_inverse(f: &QPoly, h: &QPoly) {
    let id = QPoly::identity(f.ctx().clone());
    assert!(
        h.compose(f).unwrap() == id && f.compose(h).unwrap() == id,
        "closed-form inverse of {f} failed verification"
    );
    assert_eq!(f.inverse().as_ref(), Some(h), "matrix inverse disagrees for {f}");
}

/// A PΓL map carrying L_(f_θ1) onto L_(f_θ2), from the chain
/// L_f → {x/f(x)} = L_h = L_ĥ, with ĥ the trinomial of the other root.
pub fn cmmz_equivalence_witness(ctx: &Arc<FieldCtx>, theta1: Elem, theta2: Elem) -> Result<SemilinearMap> {
    let k = &**ctx;
    let f1 = cmmz_poly(ctx, theta1)?;
    let f2 = cmmz_poly(ctx, theta2)?;
    let h = cmmz_inverse(ctx, theta1)?;
    let (l1, l2) = (linset_of(&f1), linset_of(&f2));
    let w = if h.adjoint() == f2 {
        SemilinearMap::projective(k, Elem::ZERO, Elem::ONE, Elem::ONE, Elem::ZERO, 0)?
    } else if theta1 == theta2 {
        SemilinearMap::identity()
    } else {
        return Err(Error::NoSolution);
    };
    assert_eq!(apply_semilinear(&w, &l1)?, l2, "trinomial chain failed verification");
    Ok(w)
}

/// X^(q^s) + δ X^(q^(s+m)) over F_(q^(2m)).
pub fn cmpz_poly(ctx: &Arc<FieldCtx>, m: u32, s: u32, delta: Elem) -> Result<QPoly> {
    if !(m == 3 || m == 4) || ctx.n() != 2 * m {
        return Err(Error::BadShape(format!("need m in {{3, 4}} and n = 2m, got m = {m}, n = {}", ctx.n())));
    }
    if s == 0 || gcd(s as u64, m as u64) != 1 {
        return Err(Error::BadShape(format!("gcd(s, m) must be 1, got s = {s}, m = {m}")));
    }
    Ok(QPoly::from_terms(ctx.clone(), &[(s, Elem::ONE), (s + m, delta)]))
}

/// Inverse of X^q + θ X^(q^(m+1)) over F_(q^(2m)), none when N(θ) = 1:
/// (-θ^(q^(2m-1)) X^(q^(m-1)) + X^(q^(2m-1))) / (1 - θ^(q^(m-1) + q^(2m-1))).
pub fn binomial_inverse(ctx: &Arc<FieldCtx>, m: u32, theta: Elem) -> Result<Option<QPoly>> {
    let f = cmpz_poly(ctx, m, 1, theta)?;
    let k = &**ctx;
    let t_last = k.frob_q(theta, (2 * m - 1) as u64);
    let denom = k.sub(Elem::ONE, k.mul(k.frob_q(theta, (m - 1) as u64), t_last));
    let Some(scale) = k.inv(denom) else {
        debug_assert_eq!(k.rel_norm(theta, m)?, Elem::ONE);
        return Ok(None);
    };
    let h = QPoly::from_terms(
        ctx.clone(),
        &[(m - 1, k.neg(k.mul(t_last, scale))), (2 * m - 1, scale)],
    );
    verify_inverse(&f, &h);
    Ok(Some(h))
}

/// diag(1, d) with automorphism x ↦ x^(p^rho) carrying L_θ onto L_δ, where
/// d^(1 + q + ... + q^(m-1)) θ^(σ q^(m-1)) = δ^(q^(m-1)).
pub fn equivalence_witness_binomial(
    ctx: &Arc<FieldCtx>,
    m: u32,
    delta: Elem,
    theta: Elem,
    rho: u32,
) -> Result<SemilinearMap> {
    let k = &**ctx;
    let f_delta = cmpz_poly(ctx, m, 1, delta)?;
    let f_theta = cmpz_poly(ctx, m, 1, theta)?;
    if k.rel_norm(delta, m)? != k.frob(k.rel_norm(theta, m)?, rho as u64) {
        return Err(Error::NoSolution);
    }
    let d = match (delta.is_zero(), theta.is_zero()) {
        (true, true) => Elem::ONE,
        (false, false) => {
            let q = k.q();
            let expo = (q.pow(m) - 1) / (q - 1);
            let rhs = k.div(
                k.frob_q(delta, (m - 1) as u64),
                k.frob_q(k.frob(theta, rho as u64), (m - 1) as u64),
            );
            k.solve_power(expo, rhs.unwrap())?.ok_or(Error::NoSolution)?
        }
        _ => return Err(Error::NoSolution),
    };
    let w = SemilinearMap::projective(k, Elem::ONE, Elem::ZERO, Elem::ZERO, d, rho)?;
    assert_eq!(
        apply_semilinear(&w, &linset_of(&f_theta))?,
        linset_of(&f_delta),
        "diagonal witness failed verification"
    );
    Ok(w)
}

/// An s = 1 binomial X^q + b X^(q^(m+1)) together with a ΓL map carrying
/// U_(δ,s) onto it. Candidates b with N(δ) N(b)^σ = 1 or N(b)^σ = N(δ) are
/// tried first.
pub fn reduce_to_s1(ctx: &Arc<FieldCtx>, m: u32, s: u32, delta: Elem) -> Result<(QPoly, SemilinearMap)> {
    let f = cmpz_poly(ctx, m, s, delta)?;
    if delta.is_zero() {
        return Err(Error::BadShape("δ = 0 is excluded".into()));
    }
    if s == 1 {
        return Ok((f, SemilinearMap::identity()));
    }
    let k = &**ctx;
    let nd = k.rel_norm(delta, m)?;
    let autos = 0..k.e() * m;
    let preferred = |b: Elem| {
        let nb = k.rel_norm(b, m).unwrap();
        autos.clone().any(|r| {
            let t = k.frob(nb, r as u64);
            t == nd || k.mul(t, nd) == Elem::ONE
        })
    };
    let (first, rest): (Vec<Elem>, Vec<Elem>) = k.nonzero().partition(|&b| preferred(b));
    for b in first.into_iter().chain(rest) {
        let g = cmpz_poly(ctx, m, 1, b)?;
        if let Some(w) = gammal_search(&f, &g, DEFAULT_BUDGET)?.witness {
            return Ok((g, w));
        }
    }
    Err(Error::SearchExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, 1, n, None).unwrap())
    }

    #[test]
    fn cmmz_inverses() {
        for p in [3, 5, 7] {
            let k = ctx(p, 6);
            for t in k.roots_x2_plus_x_minus_1() {
                let h = cmmz_inverse(&k, t).unwrap();
                let other = *k.roots_x2_plus_x_minus_1().iter().find(|&&r| r != t).unwrap_or(&t);
                assert_eq!(h.adjoint(), cmmz_poly(&k, other).unwrap());
                let w = cmmz_equivalence_witness(&k, t, other).unwrap();
                assert!(w.b == Elem::ONE || t == other);
                assert!(cmmz_poly(&k, t).unwrap().is_scattered());
                if p == 5 {
                    let two = k.fmt_elem(k.from_int(2));
                    assert_eq!(h.to_string(), format!("{two}*x^q + x^q^3 + x^q^5"));
                }
            }
        }
        let k = ctx(3, 6);
        assert_eq!(cmmz_poly(&k, Elem::ONE).unwrap_err(), Error::BadTheta);
    }

    #[test]
    fn binomial_inverses() {
        let k = ctx(3, 6);
        let h = binomial_inverse(&k, 3, Elem::ZERO).unwrap().unwrap();
        assert_eq!(h, QPoly::monomial(k.clone(), 5, Elem::ONE));
        assert!(binomial_inverse(&k, 3, k.g()).unwrap().is_some());
        // g^26 has norm g^(26*28) = 1
        assert_eq!(k.rel_norm(k.g_pow(26), 3).unwrap(), Elem::ONE);
        assert!(binomial_inverse(&k, 3, k.g_pow(26)).unwrap().is_none());
    }

    #[test]
    fn witnesses() {
        let k = ctx(3, 6);
        let t = k.g_pow(5);
        assert_eq!(
            equivalence_witness_binomial(&k, 3, t, t, 0).unwrap(),
            SemilinearMap::identity()
        );
        assert_eq!(
            equivalence_witness_binomial(&k, 3, k.g(), k.g_pow(2), 0).unwrap_err(),
            Error::NoSolution
        );
        let (g, w) = reduce_to_s1(&k, 3, 1, t).unwrap();
        assert_eq!(w, SemilinearMap::identity());
        assert_eq!(g, cmpz_poly(&k, 3, 1, t).unwrap());
        assert!(matches!(reduce_to_s1(&k, 3, 2, Elem::ZERO), Err(Error::BadShape(_))));
        assert!(matches!(cmpz_poly(&k, 3, 3, t), Err(Error::BadShape(_))));
    }
}
