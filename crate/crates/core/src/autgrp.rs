//! Stabilizers of linear sets in PΓL(2, q^n), the predicted groups for the
//! degree-six trinomials and the binomial families, and closure checks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equiv::PglSearcher;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linset::{LinearSet, SemilinearMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDescription {
    pub order: usize,
    pub elements: Vec<SemilinearMap>,
    pub closed: bool,
}

impl GroupDescription {
    /// Sorted, deduplicated, normalized; `closed` is left unset.
    pub fn from_elements(k: &FieldCtx, elements: impl IntoIterator<Item = SemilinearMap>) -> GroupDescription {
        let mut elements: Vec<SemilinearMap> = elements.into_iter().map(|m| m.normalized(k)).collect();
        elements.sort();
        elements.dedup();
        GroupDescription { order: elements.len(), elements, closed: false }
    }

    pub fn contains(&self, m: &SemilinearMap) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// Runs [`group_check`] and records the outcome.
    pub fn verified(mut self, k: &FieldCtx) -> GroupDescription {
        self.closed = group_check(k, &self);
        self
    }
}

/// Identity present, elements normalized and distinct, closed under
/// composition and inverses.
pub fn group_check(k: &FieldCtx, g: &GroupDescription) -> bool {
    let set: HashSet<SemilinearMap> = g.elements.iter().copied().collect();
    if set.len() != g.elements.len() || g.order != g.elements.len() {
        return false;
    }
    if !set.contains(&SemilinearMap::identity()) {
        return false;
    }
    if g.elements.iter().any(|m| m.normalized(k) != *m) {
        return false;
    }
    g.elements.par_iter().all(|x| {
        set.contains(&x.inverse(k).normalized(k))
            && g.elements.iter().all(|y| set.contains(&x.compose(k, y).normalized(k)))
    })
}

/// Size of the stabilizer of an i-point set for i < 3 in PΓL(2, q^n).
fn small_stabilizer_size(k: &FieldCtx, card: usize) -> u128 {
    let qn = k.size() as u128;
    let pgl = (qn + 1) * qn * (qn - 1);
    let deg = k.degree() as u128;
    match card {
        0 => pgl * deg,
        1 => qn * (qn - 1) * deg,
        _ => 2 * (qn - 1) * deg,
    }
}

/// All φ in PΓL(2, q^n) with φ(L) = L, by exhaustive triple transport.
pub fn stabilizer(l: &LinearSet, budget: u128) -> Result<GroupDescription> {
    let k = &**l.ctx();
    if l.card() < 3 {
        return Err(Error::SearchSpaceTooLarge {
            candidates: small_stabilizer_size(k, l.card()),
            budget,
        });
    }
    let np = l.card() as u128;
    let total = np * np * np * k.degree() as u128;
    if total > budget {
        return Err(Error::SearchSpaceTooLarge { candidates: total, budget });
    }
    let maps = PglSearcher::new(l).find_all(l, budget)?;
    let g = GroupDescription::from_elements(k, maps).verified(k);
    assert!(g.closed, "stabilizer failed the closure check");
    Ok(g)
}

fn antidiag(k: &FieldCtx, c: Elem, rho: u32) -> SemilinearMap {
    SemilinearMap::projective(k, Elem::ZERO, Elem::ONE, c, Elem::ZERO, rho).expect("c != 0")
}

fn diag(k: &FieldCtx, d: Elem, rho: u32) -> SemilinearMap {
    SemilinearMap::projective(k, Elem::ONE, Elem::ZERO, Elem::ZERO, d, rho).expect("d != 0")
}

fn check_cmmz_theta(k: &FieldCtx, theta: Elem) -> Result<()> {
    let v = k.sub(k.add(k.mul(theta, theta), theta), Elem::ONE);
    if k.p() == 2 || k.n() != 6 || !v.is_zero() {
        return Err(Error::BadTheta);
    }
    Ok(())
}

/// D = {diag(1, d) τ : θ^τ = θ, d^(q+1) = 1}, together with
/// C = {antidiag(1; c) τ : θ^(τ+1) = -1, c^(q+1) = 1} when q ≡ 0, ±2 mod 5.
pub fn predicted_aut_cmmz(k: &FieldCtx, theta: Elem) -> Result<GroupDescription> {
    check_cmmz_theta(k, theta)?;
    let q = k.q();
    let units = k.roots_of_unity(q + 1);
    let minus_one = k.neg(Elem::ONE);
    let mut els = Vec::new();
    for rho in 0..k.degree() {
        let t = k.frob(theta, rho as u64);
        if t == theta {
            els.extend(units.iter().map(|&d| diag(k, d, rho)));
        }
        if matches!(q % 5, 0 | 2 | 3) && k.mul(t, theta) == minus_one {
            els.extend(units.iter().map(|&c| antidiag(k, c, rho)));
        }
    }
    Ok(GroupDescription::from_elements(k, els).verified(k))
}

/// Predicted automorphism group of L for f = X^q + θ X^(q^(m+1)) over
/// F_(q^(2m)): the diagonal part D, plus the antidiagonal part C when
/// N(θ) ≠ 1.
pub fn predicted_aut_binomial(k: &FieldCtx, theta: Elem) -> Result<GroupDescription> {
    if theta.is_zero() {
        return Err(Error::BadTheta);
    }
    if !k.n().is_multiple_of(2) || k.n() < 4 {
        return Err(Error::BadShape(format!("n = {} is not 2m with m >= 2", k.n())));
    }
    let m = k.n() / 2;
    let q = k.q();
    let norm = k.rel_norm(theta, m)?;
    let expo = (q.pow(m) - 1) / (q - 1);
    let mut els = Vec::new();
    for rho in 0..k.degree() {
        if k.frob(norm, rho as u64) != norm {
            continue;
        }
        let t = k.frob(theta, rho as u64);
        let rhs_d = k.frob_q(k.div(theta, t).unwrap(), (m - 1) as u64);
        for d in k.power_solutions(expo, rhs_d)? {
            els.push(diag(k, d, rho));
        }
        if norm != Elem::ONE {
            let t_last = k.frob_q(t, (2 * m - 1) as u64);
            let rhs_c = k.div(k.frob_q(theta, (m - 1) as u64), k.neg(t_last)).unwrap();
            let scale = k.sub(Elem::ONE, k.mul(k.frob_q(t, (m - 1) as u64), t_last));
            for chat in k.power_solutions(expo, rhs_c)? {
                let c = k.mul(chat, scale);
                if !c.is_zero() {
                    els.push(antidiag(k, c, rho));
                }
            }
        }
    }
    Ok(GroupDescription::from_elements(k, els).verified(k))
}

/// Uniformly random element of PΓL(2, q^n) in normalized form.
pub fn random_element<R: Rng>(k: &FieldCtx, rng: &mut R) -> SemilinearMap {
    let size = k.size();
    loop {
        let mut e = || Elem::from_index(rng.gen_range(0..size));
        let (a, b, c, d) = (e(), e(), e(), e());
        let rho = rng.gen_range(0..k.degree());
        if let Ok(m) = SemilinearMap::projective(k, a, b, c, d, rho) {
            return m;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub sampled: u64,
    pub skipped_predicted: u64,
    pub stabilizing: u64,
}

/// Draws `samples` random elements outside `predicted` and counts those
/// that nevertheless stabilize `l`. Deterministic for a given seed.
pub fn sample_non_stabilizers(
    l: &LinearSet,
    predicted: &GroupDescription,
    samples: u64,
    seed: u64,
) -> SampleReport {
    let k = &**l.ctx();
    const CHUNK: u64 = 10_000;
    let chunks = samples.div_ceil(CHUNK);
    let (skipped, stabilizing) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c));
            let want = CHUNK.min(samples - c * CHUNK);
            let (mut done, mut skipped, mut stab) = (0, 0, 0);
            while done < want {
                let m = random_element(k, &mut rng);
                if predicted.contains(&m) {
                    skipped += 1;
                    continue;
                }
                done += 1;
                if m.maps_onto(l, l) {
                    stab += 1;
                }
            }
            (skipped, stab)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    SampleReport { sampled: samples, skipped_predicted: skipped, stabilizing }
}
