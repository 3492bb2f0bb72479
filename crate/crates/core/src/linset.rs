//! Point sets of PG(1, q^n) in slope-or-infinity encoding, linear sets L_f,
//! and the action of PΓL(2, q^n).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linpoly::{same_ctx, QPoly};

/// The point <(1, s)> or the point <(0, 1)>. Slopes sort before infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    Slope(Elem),
    Infinity,
}

impl ProjPoint {
    /// Point spanned by (x, y), which must not be the zero vector.
    pub fn from_coords(k: &FieldCtx, x: Elem, y: Elem) -> ProjPoint {
        match k.div(y, x) {
            Some(s) => ProjPoint::Slope(s),
            None => {
                debug_assert!(!y.is_zero());
                ProjPoint::Infinity
            }
        }
    }

    /// Homogeneous representative, (1, s) or (0, 1).
    pub fn coords(self) -> (Elem, Elem) {
        match self {
            ProjPoint::Slope(s) => (Elem::ONE, s),
            ProjPoint::Infinity => (Elem::ZERO, Elem::ONE),
        }
    }

    /// Dense index in `0..=field_size`, infinity last.
    #[inline]
    pub fn index(self, k: &FieldCtx) -> usize {
        match self {
            ProjPoint::Slope(s) => s.index(),
            ProjPoint::Infinity => k.size(),
        }
    }

    pub fn frob(self, k: &FieldCtx, rho: u32) -> ProjPoint {
        match self {
            ProjPoint::Slope(s) => ProjPoint::Slope(k.frob(s, rho as u64)),
            ProjPoint::Infinity => ProjPoint::Infinity,
        }
    }
}

#[derive(Clone)]
pub struct LinearSet {
    ctx: Arc<FieldCtx>,
    points: Vec<ProjPoint>,
    member: Vec<u64>,
    source: Option<QPoly>,
}

impl PartialEq for LinearSet {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.points == other.points
    }
}

impl Eq for LinearSet {}

impl std::fmt::Debug for LinearSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearSet")
            .field("card", &self.card())
            .field("source", &self.source)
            .finish()
    }
}

impl Serialize for LinearSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let slopes: Vec<Elem> = self
            .points
            .iter()
            .filter_map(|p| match p {
                ProjPoint::Slope(s) => Some(*s),
                ProjPoint::Infinity => None,
            })
            .collect();
        let mut st = s.serialize_struct("LinearSet", 3)?;
        st.serialize_field("card", &self.card())?;
        st.serialize_field("slopes_dlog", &slopes)?;
        st.serialize_field("infinity", &self.has_infinity())?;
        st.end()
    }
}

impl LinearSet {
    pub fn from_points(ctx: Arc<FieldCtx>, points: impl IntoIterator<Item = ProjPoint>) -> LinearSet {
        let bits = ctx.size() + 1;
        let mut member = vec![0u64; bits.div_ceil(64)];
        for p in points {
            let i = p.index(&ctx);
            member[i / 64] |= 1 << (i % 64);
        }
        let mut points = Vec::new();
        for (w, &word) in member.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let i = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                points.push(if i == ctx.size() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Slope(Elem::from_index(i))
                });
            }
        }
        LinearSet { ctx, points, member, source: None }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Points in sorted order.
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn card(&self) -> usize {
        self.points.len()
    }

    pub fn source(&self) -> Option<&QPoly> {
        self.source.as_ref()
    }

    pub fn has_infinity(&self) -> bool {
        self.points.last() == Some(&ProjPoint::Infinity)
    }

    #[inline]
    pub fn contains(&self, p: ProjPoint) -> bool {
        let i = p.index(&self.ctx);
        self.member[i / 64] >> (i % 64) & 1 == 1
    }

    /// Position of `p` in the sorted point list.
    pub fn position(&self, p: ProjPoint) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }
}

/// L_f = { <(x, f(x))> : x != 0 }, one representative per projective point.
pub fn linset_of(f: &QPoly) -> LinearSet {
    let k = f.ctx();
    let pts = (0..k.transversal_len() as u64).map(|t| {
        let x = k.g_pow(t);
        ProjPoint::Slope(k.div(f.eval(x), x).unwrap())
    });
    let mut l = LinearSet::from_points(k.clone(), pts);
    l.source = Some(f.clone());
    l
}

/// For each element b (by index), #{x in F_(q^n)^* : f(x)/x = b}.
pub fn slope_counts(f: &QPoly) -> Vec<u32> {
    let k = f.ctx();
    let mut counts = vec![0u32; k.size()];
    for t in 0..k.transversal_len() as u64 {
        let x = k.g_pow(t);
        counts[k.div(f.eval(x), x).unwrap().index()] += 1;
    }
    let scale = (k.q() - 1) as u32;
    counts.iter_mut().for_each(|c| *c *= scale);
    counts
}

/// Map from point weight to the number of points of L_f with that weight.
pub fn weight_spectrum(f: &QPoly) -> BTreeMap<u32, usize> {
    let q = f.ctx().q();
    let mut out = BTreeMap::new();
    for c in slope_counts(f).into_iter().filter(|&c| c > 0) {
        let mut w = 0;
        let mut qw = 1u64;
        while qw < c as u64 + 1 {
            qw *= q;
            w += 1;
        }
        debug_assert_eq!(qw, c as u64 + 1);
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

/// P -> M P^σ with M = (a b; c d) and σ: x -> x^(p^rho).
///
/// Maps produced by projective searches are normalized (first nonzero entry
/// among a, b, c, d equal to 1); subspace witnesses keep their scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemilinearMap {
    pub rho: u32,
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl Serialize for SemilinearMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SemilinearMap", 2)?;
        st.serialize_field("matrix_dlogs", &[self.a, self.b, self.c, self.d])?;
        st.serialize_field("rho", &self.rho)?;
        st.end()
    }
}

impl SemilinearMap {
    pub fn identity() -> SemilinearMap {
        SemilinearMap { rho: 0, a: Elem::ONE, b: Elem::ZERO, c: Elem::ZERO, d: Elem::ONE }
    }

    /// Unnormalized map; rejects singular matrices.
    pub fn new(k: &FieldCtx, a: Elem, b: Elem, c: Elem, d: Elem, rho: u32) -> Result<SemilinearMap> {
        let m = SemilinearMap { rho: rho % k.degree(), a, b, c, d };
        if m.det(k).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(m)
    }

    /// Normalized projective map.
    pub fn projective(k: &FieldCtx, a: Elem, b: Elem, c: Elem, d: Elem, rho: u32) -> Result<SemilinearMap> {
        Ok(SemilinearMap::new(k, a, b, c, d, rho)?.normalized(k))
    }

    pub fn det(&self, k: &FieldCtx) -> Elem {
        k.sub(k.mul(self.a, self.d), k.mul(self.b, self.c))
    }

    pub fn normalized(&self, k: &FieldCtx) -> SemilinearMap {
        let lead = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("nonsingular matrix has a nonzero entry");
        let s = k.inv(lead).unwrap();
        SemilinearMap {
            rho: self.rho,
            a: k.mul(self.a, s),
            b: k.mul(self.b, s),
            c: k.mul(self.c, s),
            d: k.mul(self.d, s),
        }
    }

    /// Image of the vector (x, y).
    #[inline]
    pub fn apply_vec(&self, k: &FieldCtx, x: Elem, y: Elem) -> (Elem, Elem) {
        let xs = k.frob(x, self.rho as u64);
        let ys = k.frob(y, self.rho as u64);
        (
            k.add(k.mul(self.a, xs), k.mul(self.b, ys)),
            k.add(k.mul(self.c, xs), k.mul(self.d, ys)),
        )
    }

    #[inline]
    pub fn apply_point(&self, k: &FieldCtx, p: ProjPoint) -> ProjPoint {
        let (x, y) = p.coords();
        let (u, v) = self.apply_vec(k, x, y);
        ProjPoint::from_coords(k, u, v)
    }

    /// self ∘ first: apply `first`, then `self`.
    pub fn compose(&self, k: &FieldCtx, first: &SemilinearMap) -> SemilinearMap {
        let s = self.rho as u64;
        let (a1, b1, c1, d1) = (
            k.frob(first.a, s),
            k.frob(first.b, s),
            k.frob(first.c, s),
            k.frob(first.d, s),
        );
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        SemilinearMap {
            rho: (self.rho + first.rho) % k.degree(),
            a: k.add(k.mul(a, a1), k.mul(b, c1)),
            b: k.add(k.mul(a, b1), k.mul(b, d1)),
            c: k.add(k.mul(c, a1), k.mul(d, c1)),
            d: k.add(k.mul(c, b1), k.mul(d, d1)),
        }
    }

    pub fn inverse(&self, k: &FieldCtx) -> SemilinearMap {
        let det_inv = k.inv(self.det(k)).expect("nonsingular");
        let back = (k.degree() - self.rho) % k.degree();
        let t = |x: Elem| k.frob(k.mul(x, det_inv), back as u64);
        SemilinearMap {
            rho: back,
            a: t(self.d),
            b: t(k.neg(self.b)),
            c: t(k.neg(self.c)),
            d: t(self.a),
        }
    }

    /// True iff the map carries every point of `from` into `to` and the
    /// sets have equal size, i.e. `from` is mapped onto `to`.
    pub fn maps_onto(&self, from: &LinearSet, to: &LinearSet) -> bool {
        let k = &**from.ctx();
        from.card() == to.card() && from.points().iter().all(|&p| to.contains(self.apply_point(k, p)))
    }

    /// True iff U_f is mapped onto U_g as F_q-subspaces of F_(q^n)^2:
    /// c X + d f^σ = g ∘ (a X + b f^σ) as q-polynomials.
    pub fn maps_subspace(&self, f: &QPoly, g: &QPoly) -> Result<bool> {
        let k = f.ctx().clone();
        let ft = f.twist(self.rho);
        let inner = ft.scale(self.b).add(&QPoly::monomial(k.clone(), 0, self.a))?;
        let lhs = ft.scale(self.d).add(&QPoly::monomial(k.clone(), 0, self.c))?;
        Ok(g.compose(&inner)? == lhs)
    }
}

/// Image of a point set under a semilinear map.
pub fn apply_semilinear(m: &SemilinearMap, l: &LinearSet) -> Result<LinearSet> {
    let k = l.ctx();
    if m.det(k).is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(LinearSet::from_points(
        k.clone(),
        l.points().iter().map(|&p| m.apply_point(k, p)),
    ))
}
