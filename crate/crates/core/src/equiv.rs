//! Equivalence of subspaces U_f under ΓL(2, q^n), of linear sets under
//! PΓL(2, q^n), and the closed-form norm criteria.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{gcd, Elem, FieldCtx};
use crate::linpoly::{same_ctx, QPoly};
use crate::linset::{LinearSet, ProjPoint, SemilinearMap};

/// Default cap on the number of candidates an exhaustive search may visit.
pub const DEFAULT_BUDGET: u128 = 2_000_000_000;

/// Bitset caches above this size are recomputed on the fly instead.
const CACHE_LIMIT_BYTES: usize = 512 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub witness: Option<SemilinearMap>,
    /// Candidates in search order up to and including the witness, or the
    /// whole space when there is none.
    pub candidates_scanned: u128,
}

// ---------------------------------------------------------------------------
// ΓL search

/// A map φ = (M, rho) with U_f^φ = U_g, where φ(x, y) = M (x^σ, y^σ).
pub fn gammal_equivalent(f: &QPoly, g: &QPoly) -> Result<Option<SemilinearMap>> {
    Ok(gammal_search(f, g, DEFAULT_BUDGET)?.witness)
}

/// Exhaustive search over rho and (a, b); c and d are read off from
/// g ∘ (aX + b f^σ) = cX + d f^σ, where f^σ is f with twisted coefficients.
pub fn gammal_search(f: &QPoly, g: &QPoly, budget: u128) -> Result<SearchOutcome> {
    if !same_ctx(f.ctx(), g.ctx()) {
        return Err(Error::CtxMismatch);
    }
    let k = &**f.ctx();
    let n = k.n() as usize;
    let size = k.size();
    let deg = k.degree();
    let total = (size as u128) * (size as u128) * deg as u128;
    if total > budget {
        return Err(Error::SearchSpaceTooLarge { candidates: total, budget });
    }
    let gc = g.coeffs();
    // H1[a][j] = g_j a^(q^j), independent of rho.
    let h1: Vec<Elem> = k
        .elements()
        .flat_map(|a| (0..n).map(move |j| k.mul(gc[j], k.frob_q(a, j as u64))))
        .collect();

    for rho in 0..deg {
        let ft = f.twist(rho);
        let fc = ft.coeffs();
        let pivot = (1..n).find(|&i| !fc[i].is_zero());
        // H2[b][j] = Σ_i g_i (b F_(j - i))^(q^i)
        let h2: Vec<Elem> = k
            .elements()
            .collect::<Vec<_>>()
            .par_iter()
            .flat_map_iter(|&b| {
                (0..n).map(move |j| {
                    (0..n).fold(Elem::ZERO, |acc, i| {
                        let c = fc[(j + n - i) % n];
                        k.add(acc, k.mul(gc[i], k.frob_q(k.mul(b, c), i as u64)))
                    })
                })
            })
            .collect();

        let hit = (0..size).into_par_iter().find_map_first(|ai| {
            let a = Elem::from_index(ai);
            let ha = &h1[ai * n..(ai + 1) * n];
            (0..size).find_map(|bi| {
                let b = Elem::from_index(bi);
                let hb = &h2[bi * n..(bi + 1) * n];
                let h = |j: usize| k.add(ha[j], hb[j]);
                let d = pivot.map(|i| k.div(h(i), fc[i]).unwrap());
                let dd = d.unwrap_or(Elem::ZERO);
                if !(1..n).all(|j| h(j) == k.mul(dd, fc[j])) {
                    return None;
                }
                let h0 = h(0);
                let ds = match d {
                    Some(d) => vec![d],
                    None => vec![Elem::ZERO, Elem::ONE],
                };
                ds.into_iter().find_map(|d| {
                    let c = k.sub(h0, k.mul(d, fc[0]));
                    SemilinearMap::new(k, a, b, c, d, rho).ok().map(|m| (bi, m))
                })
            })
            .map(|(bi, m)| (ai, bi, m))
        });
        if let Some((ai, bi, m)) = hit {
            assert!(m.maps_subspace(f, g)?, "ΓL witness failed verification");
            let scanned =
                ((rho as u128 * size as u128 + ai as u128) * size as u128) + bi as u128 + 1;
            return Ok(SearchOutcome { witness: Some(m), candidates_scanned: scanned });
        }
    }
    Ok(SearchOutcome { witness: None, candidates_scanned: total })
}

// ---------------------------------------------------------------------------
// PΓL search

type Mat = [Elem; 4];

fn mat_mul(k: &FieldCtx, x: &Mat, y: &Mat) -> Mat {
    [
        k.add(k.mul(x[0], y[0]), k.mul(x[1], y[2])),
        k.add(k.mul(x[0], y[1]), k.mul(x[1], y[3])),
        k.add(k.mul(x[2], y[0]), k.mul(x[3], y[2])),
        k.add(k.mul(x[2], y[1]), k.mul(x[3], y[3])),
    ]
}

/// Projective inverse (adjugate).
fn mat_adj(k: &FieldCtx, x: &Mat) -> Mat {
    [x[3], k.neg(x[1]), k.neg(x[2]), x[0]]
}

/// A matrix sending p1 to infinity and p2 to slope 0.
fn pair_form(k: &FieldCtx, p1: ProjPoint, p2: ProjPoint) -> Mat {
    use ProjPoint::*;
    match (p1, p2) {
        (Slope(a), Slope(b)) => [k.neg(a), Elem::ONE, k.neg(b), Elem::ONE],
        (Infinity, Slope(b)) => [Elem::ONE, Elem::ZERO, k.neg(b), Elem::ONE],
        (Slope(a), Infinity) => [k.neg(a), Elem::ONE, Elem::ONE, Elem::ZERO],
        (Infinity, Infinity) => unreachable!("points must be distinct"),
    }
}

fn mat_point(k: &FieldCtx, m: &Mat, p: ProjPoint) -> ProjPoint {
    SemilinearMap { rho: 0, a: m[0], b: m[1], c: m[2], d: m[3] }.apply_point(k, p)
}

fn to_map(k: &FieldCtx, m: &Mat, rho: u32) -> SemilinearMap {
    SemilinearMap::projective(k, m[0], m[1], m[2], m[3], rho).expect("transport is nonsingular")
}

/// Projective map sending (p1, p2) to (q1, q2) with rho = 0.
fn two_point_transport(k: &FieldCtx, p: [ProjPoint; 2], q: [ProjPoint; 2]) -> SemilinearMap {
    let a = pair_form(k, p[0], p[1]);
    let b = pair_form(k, q[0], q[1]);
    to_map(k, &mat_mul(k, &mat_adj(k, &b), &a), 0)
}

fn other_point(p: ProjPoint) -> ProjPoint {
    if p == ProjPoint::Slope(Elem::ZERO) {
        ProjPoint::Slope(Elem::ONE)
    } else {
        ProjPoint::Slope(Elem::ZERO)
    }
}

/// Normalizing data for the source set under one twist: the matrix A with
/// A(P1^σ) = ∞, A(P2^σ) = 0, A(P3^σ) = 1, and dlogs of A(P_k^σ) for k ≥ 4.
struct SourceFrame {
    a: Mat,
    alphas: Vec<u32>,
}

fn source_frame(k: &FieldCtx, pts: &[ProjPoint], rho: u32) -> SourceFrame {
    let tw: Vec<ProjPoint> = pts.iter().map(|p| p.frob(k, rho)).collect();
    let a0 = pair_form(k, tw[0], tw[1]);
    let ProjPoint::Slope(b3) = mat_point(k, &a0, tw[2]) else { unreachable!() };
    let a = mat_mul(k, &[Elem::ONE, Elem::ZERO, Elem::ZERO, k.inv(b3).unwrap()], &a0);
    let alphas = tw[3..]
        .iter()
        .map(|&p| match mat_point(k, &a, p) {
            ProjPoint::Slope(s) => k.dlog(s).expect("distinct points"),
            ProjPoint::Infinity => unreachable!(),
        })
        .collect();
    SourceFrame { a, alphas }
}

/// Exhaustive PΓL search onto a fixed target set.
///
/// For an ordered pair (Q1, Q2) of target points let B be the pair form
/// sending Q1 to ∞ and Q2 to 0; S(Q1, Q2) is the set of dlogs of B(Q) for the
/// remaining target points. A map with P1, P2 ↦ Q1, Q2 is B^-1 diag(1, s) A,
/// and it carries the source onto the target exactly when
/// log s ∈ S ∩ ⋂_k (S - α_k). S is stored over Z/(q^n - 1) written out twice,
/// so every shift S - α is a window of consecutive bits.
pub struct PglSearcher {
    ctx: Arc<FieldCtx>,
    target: LinearSet,
    /// D[i][k] = dlog(Q_k - Q_i), 0 if either point is infinity.
    dtab: Vec<u32>,
    words: usize,
    dwords: usize,
    cache: Option<Vec<u64>>,
}

impl PglSearcher {
    pub fn new(target: &LinearSet) -> PglSearcher {
        let ctx = target.ctx().clone();
        let k = &*ctx;
        let pts = target.points();
        let np = pts.len();
        let m = k.order() as usize;
        let dtab: Vec<u32> = (0..np * np)
            .into_par_iter()
            .map(|ik| {
                let (i, kk) = (ik / np, ik % np);
                match (pts[i], pts[kk]) {
                    (ProjPoint::Slope(a), ProjPoint::Slope(b)) if i != kk => {
                        k.dlog(k.sub(b, a)).unwrap()
                    }
                    _ => 0,
                }
            })
            .collect();
        let words = m.div_ceil(64);
        let dwords = (2 * m).div_ceil(64) + 2;
        let mut s = PglSearcher { ctx, target: target.clone(), dtab, words, dwords, cache: None };
        let pairs = np.saturating_sub(1) * np;
        if np >= 3 && pairs * dwords * 8 <= CACHE_LIMIT_BYTES {
            let mut cache = vec![0u64; pairs * dwords];
            cache.par_chunks_mut((np - 1) * dwords).enumerate().for_each(|(i, chunk)| {
                for (slot, j) in (0..np).filter(|&j| j != i).enumerate() {
                    s.fill_set(i, j, &mut chunk[slot * dwords..(slot + 1) * dwords]);
                }
            });
            s.cache = Some(cache);
        }
        s
    }

    pub fn target(&self) -> &LinearSet {
        &self.target
    }

    fn fill_set(&self, i: usize, j: usize, out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        let np = self.target.card();
        let m = self.ctx.order() as usize;
        let (di, dj) = (&self.dtab[i * np..(i + 1) * np], &self.dtab[j * np..(j + 1) * np]);
        for kk in 0..np {
            if kk == i || kk == j {
                continue;
            }
            let mut pos = dj[kk] as usize + m - di[kk] as usize;
            if pos >= m {
                pos -= m;
            }
            out[pos / 64] |= 1 << (pos % 64);
            let p2 = pos + m;
            out[p2 / 64] |= 1 << (p2 % 64);
        }
    }

    #[inline]
    fn window(set: &[u64], off: usize, w: usize) -> u64 {
        let b = off + 64 * w;
        let (word, sh) = (b / 64, b % 64);
        if sh == 0 {
            set[word]
        } else {
            (set[word] >> sh) | (set[word + 1] << (64 - sh))
        }
    }

    /// Candidate dlogs of s for the pair (i, j), as a bitset over Z/(q^n - 1).
    fn candidates(&self, set: &[u64], alphas: &[u32], cand: &mut [u64]) -> bool {
        let m = self.ctx.order() as usize;
        for (w, c) in cand.iter_mut().enumerate() {
            *c = Self::window(set, 0, w);
        }
        let tail = m % 64;
        if tail != 0 {
            cand[self.words - 1] &= (1u64 << tail) - 1;
        }
        for &a in alphas {
            let mut any = 0;
            for (w, c) in cand.iter_mut().enumerate() {
                *c &= Self::window(set, a as usize, w);
                any |= *c;
            }
            if any == 0 {
                return false;
            }
        }
        cand.iter().any(|&c| c != 0)
    }

    /// Every (j, log s) hit for a fixed Q1 index, in increasing j.
    fn hits_for(&self, frame: &SourceFrame, i: usize, first_only: bool) -> Vec<(usize, Vec<u32>)> {
        let np = self.target.card();
        let mut buf = vec![0u64; self.dwords];
        let mut cand = vec![0u64; self.words];
        let mut out = Vec::new();
        for (slot, j) in (0..np).filter(|&j| j != i).enumerate() {
            let set: &[u64] = match &self.cache {
                Some(c) => {
                    let base = (i * (np - 1) + slot) * self.dwords;
                    &c[base..base + self.dwords]
                }
                None => {
                    self.fill_set(i, j, &mut buf);
                    &buf
                }
            };
            if self.candidates(set, &frame.alphas, &mut cand) {
                let mut logs = Vec::new();
                for (w, &c) in cand.iter().enumerate() {
                    let mut c = c;
                    while c != 0 {
                        logs.push((w * 64 + c.trailing_zeros() as usize) as u32);
                        c &= c - 1;
                    }
                }
                out.push((j, logs));
                if first_only {
                    break;
                }
            }
        }
        out
    }

    fn build(&self, frame: &SourceFrame, rho: u32, i: usize, j: usize, log_s: u32) -> (SemilinearMap, ProjPoint) {
        let k = &*self.ctx;
        let pts = self.target.points();
        let b = pair_form(k, pts[i], pts[j]);
        let s = k.g_pow(log_s as u64);
        let binv = mat_adj(k, &b);
        let q3 = mat_point(k, &binv, ProjPoint::Slope(s));
        let m = mat_mul(k, &binv, &mat_mul(k, &[Elem::ONE, Elem::ZERO, Elem::ZERO, s], &frame.a));
        (to_map(k, &m, rho), q3)
    }

    fn check_source(&self, source: &LinearSet) -> Result<()> {
        if !same_ctx(source.ctx(), &self.ctx) {
            return Err(Error::CtxMismatch);
        }
        Ok(())
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        let np = self.target.card() as u128;
        let total = np * np * np * self.ctx.degree() as u128;
        if total > budget {
            return Err(Error::SearchSpaceTooLarge { candidates: total, budget });
        }
        Ok(())
    }

    /// First witness in (rho, Q1, Q2, Q3) order carrying `source` onto the target.
    pub fn find(&self, source: &LinearSet, budget: u128) -> Result<SearchOutcome> {
        self.check_source(source)?;
        let k = &*self.ctx;
        let np = self.target.card();
        if source.card() != np {
            return Ok(SearchOutcome { witness: None, candidates_scanned: 0 });
        }
        if np < 3 {
            return Ok(SearchOutcome {
                witness: Some(small_transport(k, source, &self.target)),
                candidates_scanned: 1,
            });
        }
        self.check_budget(budget)?;
        let per_rho = (np * (np - 1) * (np - 2)) as u128;
        for rho in 0..k.degree() {
            let frame = source_frame(k, source.points(), rho);
            let hit = (0..np).into_par_iter().find_map_first(|i| {
                self.hits_for(&frame, i, true).into_iter().next().map(|(j, logs)| (i, j, logs))
            });
            if let Some((i, j, logs)) = hit {
                let (map, q3) = logs
                    .into_iter()
                    .map(|l| self.build(&frame, rho, i, j, l))
                    .min_by_key(|(_, q3)| *q3)
                    .unwrap();
                assert!(map.maps_onto(source, &self.target), "PΓL witness failed verification");
                let k3 = self.target.position(q3).unwrap();
                let jpos = j - usize::from(j > i);
                let k3pos = k3 - usize::from(k3 > i) - usize::from(k3 > j);
                let scanned = rho as u128 * per_rho
                    + ((i * (np - 1) + jpos) * (np - 2) + k3pos) as u128
                    + 1;
                return Ok(SearchOutcome { witness: Some(map), candidates_scanned: scanned });
            }
        }
        Ok(SearchOutcome { witness: None, candidates_scanned: per_rho * k.degree() as u128 })
    }

    /// Every normalized map carrying `source` onto the target, sorted.
    pub fn find_all(&self, source: &LinearSet, budget: u128) -> Result<Vec<SemilinearMap>> {
        self.check_source(source)?;
        let k = &*self.ctx;
        let np = self.target.card();
        if source.card() != np {
            return Ok(Vec::new());
        }
        if np < 3 {
            return Err(Error::PreconditionViolated(
                "exhaustive enumeration needs at least 3 points".into(),
            ));
        }
        self.check_budget(budget)?;
        let mut out = Vec::new();
        for rho in 0..k.degree() {
            let frame = source_frame(k, source.points(), rho);
            let maps: Vec<SemilinearMap> = (0..np)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let frame = &frame;
                    self.hits_for(frame, i, false).into_iter().flat_map(move |(j, logs)| {
                        logs.into_iter().map(move |l| self.build(frame, rho, i, j, l).0)
                    })
                })
                .collect();
            out.extend(maps);
        }
        out.sort();
        debug_assert!(out.iter().all(|m| m.maps_onto(source, &self.target)));
        Ok(out)
    }
}

fn small_transport(k: &FieldCtx, from: &LinearSet, to: &LinearSet) -> SemilinearMap {
    let (p, q) = (from.points(), to.points());
    match p.len() {
        0 => SemilinearMap::identity(),
        1 => two_point_transport(k, [p[0], other_point(p[0])], [q[0], other_point(q[0])]),
        _ => two_point_transport(k, [p[0], p[1]], [q[0], q[1]]),
    }
}

/// Some φ in PΓL(2, q^n) with φ(L1) = L2.
pub fn pgl_equivalent(l1: &LinearSet, l2: &LinearSet) -> Result<Option<SemilinearMap>> {
    Ok(pgl_search(l1, l2, DEFAULT_BUDGET)?.witness)
}

pub fn pgl_search(l1: &LinearSet, l2: &LinearSet, budget: u128) -> Result<SearchOutcome> {
    if !same_ctx(l1.ctx(), l2.ctx()) {
        return Err(Error::CtxMismatch);
    }
    if l1.card() != l2.card() {
        return Ok(SearchOutcome { witness: None, candidates_scanned: 0 });
    }
    let np = l2.card() as u128;
    let total = np * np * np * l2.ctx().degree() as u128;
    if np >= 3 && total > budget {
        return Err(Error::SearchSpaceTooLarge { candidates: total, budget });
    }
    PglSearcher::new(l2).find(l1, budget)
}

// ---------------------------------------------------------------------------
// Closed-form criteria

fn half_norms(k: &FieldCtx, delta: Elem, theta: Elem, m: u32) -> Result<(Elem, Elem)> {
    if k.n() != 2 * m {
        return Err(Error::NotASubfield { m, n: k.n() });
    }
    Ok((k.rel_norm(delta, m)?, k.rel_norm(theta, m)?))
}

/// Least rho < e m with N(δ) = N(θ)^(p^rho), norms taken from F_(q^(2m)) to F_(q^m).
pub fn norm_condition(k: &FieldCtx, delta: Elem, theta: Elem, m: u32) -> Result<Option<u32>> {
    let (nd, nt) = half_norms(k, delta, theta, m)?;
    Ok((0..k.e() * m).find(|&rho| k.frob(nt, rho as u64) == nd))
}

/// Whether U_(δ,s1) and U_(θ,s2) are ΓL-equivalent according to the norm
/// criterion for binomial subspaces.
pub fn binomial_subspace_condition(
    k: &FieldCtx,
    s1: u32,
    s2: u32,
    delta: Elem,
    theta: Elem,
    m: u32,
) -> Result<bool> {
    let (nd, nt) = half_norms(k, delta, theta, m)?;
    for s in [s1, s2] {
        if s == 0 || s >= m || gcd(s as u64, m as u64) != 1 {
            return Err(Error::PreconditionViolated(format!("s = {s} with m = {m}")));
        }
    }
    if nd.is_zero() || nt.is_zero() || nd == Elem::ONE || nt == Elem::ONE {
        return Err(Error::PreconditionViolated("norms must differ from 0 and 1".into()));
    }
    let autos = 0..k.e() * m;
    let same = s1 == s2 && autos.clone().any(|r| k.frob(nt, r as u64) == nd);
    let dual = s1 + s2 == m && autos.into_iter().any(|r| k.mul(nd, k.frob(nt, r as u64)) == Elem::ONE);
    Ok(same || dual)
}
