//! Necessary conditions for L_f = L_g: power sums of slopes, the coefficient
//! identities they imply, and the binomial invariants for n = 6 and n = 8.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linpoly::{same_ctx, QPoly};

/// Σ_{x ∈ F_(q^n)^*} x^d.
pub fn monomial_sum(k: &FieldCtx, d: u64) -> Elem {
    k.nonzero().fold(Elem::ZERO, |acc, x| k.add(acc, k.pow(x, d)))
}

/// Slopes f(x)/x over one representative per projective point.
fn transversal_slopes(f: &QPoly) -> Vec<Elem> {
    let k = f.ctx();
    (0..k.transversal_len() as u64)
        .into_par_iter()
        .map(|t| {
            let x = k.g_pow(t);
            k.div(f.eval(x), x).unwrap()
        })
        .collect()
}

fn sum_powers(k: &FieldCtx, slopes: &[Elem], d: u64) -> Elem {
    // Each slope occurs q - 1 times over F_(q^n)^*, and q - 1 = -1 in F_p.
    let s = slopes
        .par_chunks(4096)
        .map(|c| c.iter().fold(Elem::ZERO, |acc, &v| k.add(acc, k.pow(v, d))))
        .reduce(|| Elem::ZERO, |a, b| k.add(a, b));
    k.neg(s)
}

/// Σ_{x ∈ F_(q^n)^*} (f(x)/x)^d, with 0^0 = 1.
pub fn power_sum(f: &QPoly, d: u64) -> Elem {
    sum_powers(f.ctx(), &transversal_slopes(f), d)
}

/// Power sums for several exponents, evaluating f only once.
pub fn power_sum_profile(f: &QPoly, ds: &[u64]) -> BTreeMap<u64, Elem> {
    let slopes = transversal_slopes(f);
    ds.iter().map(|&d| (d, sum_powers(f.ctx(), &slopes, d))).collect()
}

/// d = 1..2n, q^i - 1 for i = 1..n, and the exponents used for the binomial
/// invariants when n is 6 or 8.
pub fn default_power_indices(k: &FieldCtx) -> Vec<u64> {
    let q = k.q();
    let n = k.n();
    let mut ds: Vec<u64> = (1..=2 * n as u64).collect();
    ds.extend((1..=n).map(|i| q.pow(i) - 1));
    match n {
        6 => ds.push(q.pow(4) + q.pow(2) + 1),
        8 => {
            ds.push(q.pow(3) + q.pow(2) + q + 1);
            ds.push(q.pow(6) + q.pow(3) + q + 1);
        }
        _ => {}
    }
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// Which identity failed: (family, k), family 0 for a_0 = b_0, 1 for
/// a_k a_(n-k)^(q^k) = b_k b_(n-k)^(q^k), 2 for the three-term identity.
pub fn lem26_failures(f: &QPoly, g: &QPoly) -> Result<Vec<(u8, u32)>> {
    if !same_ctx(f.ctx(), g.ctx()) {
        return Err(Error::CtxMismatch);
    }
    let k = &**f.ctx();
    let n = k.n();
    let pair = |p: &QPoly, i: u32| k.mul(p.coeff(i), k.frob_q(p.coeff(n - i), i as u64));
    let triple = |p: &QPoly, i: u32| {
        let t1 = k.mul(
            k.mul(p.coeff(1), k.frob_q(p.coeff(i - 1), 1)),
            k.frob_q(p.coeff(n - i), i as u64),
        );
        let t2 = k.mul(
            k.mul(p.coeff(i), k.frob_q(p.coeff(n - 1), 1)),
            k.frob_q(p.coeff(n - i + 1), i as u64),
        );
        k.add(t1, t2)
    };
    let mut out = Vec::new();
    if f.coeff(0) != g.coeff(0) {
        out.push((0, 0));
    }
    for i in 1..n {
        if pair(f, i) != pair(g, i) {
            out.push((1, i));
        }
    }
    for i in 2..n {
        if triple(f, i) != triple(g, i) {
            out.push((2, i));
        }
    }
    Ok(out)
}

pub fn lem26_identities(f: &QPoly, g: &QPoly) -> Result<bool> {
    Ok(lem26_failures(f, g)?.is_empty())
}

fn check_binomial(f: &QPoly, n: u32, support: [u32; 2]) -> Result<()> {
    if f.n() != n {
        return Err(Error::ShapeMismatch(format!("need n = {n}, field has n = {}", f.n())));
    }
    if f.support().iter().any(|i| !support.contains(i)) {
        return Err(Error::ShapeMismatch(format!(
            "coefficients outside indices {support:?}"
        )));
    }
    Ok(())
}

/// a_4^(q^4 + q^2 + 1) for f = a_1 X^q + a_4 X^(q^4) over F_(q^6).
pub fn d6_invariant(f: &QPoly) -> Result<Elem> {
    check_binomial(f, 6, [1, 4])?;
    let k = f.ctx();
    let q = k.q();
    Ok(k.pow(f.coeff(4), q.pow(4) + q.pow(2) + 1))
}

/// (a_1^(q^2+q+1) a_5^(q^3), a_1 a_5^(q^6+q^3+q)) for f = a_1 X^q + a_5 X^(q^5)
/// over F_(q^8).
pub fn d8_invariants(f: &QPoly) -> Result<(Elem, Elem)> {
    check_binomial(f, 8, [1, 5])?;
    let k = f.ctx();
    let q = k.q();
    let (a1, a5) = (f.coeff(1), f.coeff(5));
    let first = k.mul(k.pow(a1, q * q + q + 1), k.frob_q(a5, 3));
    let second = k.mul(a1, k.pow(a5, q.pow(6) + q.pow(3) + q));
    Ok((first, second))
}
