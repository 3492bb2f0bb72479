//! q-polynomials f = Σ a_i X^(q^i), i < n, over F_(q^n), viewed both as
//! coefficient vectors and as F_q-linear maps of F_(q^n).

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::Matrix;

#[derive(Clone)]
pub struct QPoly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<Elem>,
}

impl PartialEq for QPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for QPoly {}

pub(crate) fn same_ctx(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// Prints in the syntax accepted by [`crate::parse::parse_qpoly`].
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c != Elem::ONE {
                write!(f, "{}*", self.ctx.fmt_elem(c))?;
            }
            match i {
                0 => write!(f, "x")?,
                1 => write!(f, "x^q")?,
                _ => write!(f, "x^q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QPoly", 2)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("coeffs_dlog", &self.coeffs)?;
        st.end()
    }
}

impl QPoly {
    pub fn new(ctx: Arc<FieldCtx>, coeffs: Vec<Elem>) -> Result<QPoly> {
        if coeffs.len() != ctx.n() as usize {
            return Err(Error::ShapeMismatch(format!(
                "expected {} coefficients, got {}",
                ctx.n(),
                coeffs.len()
            )));
        }
        Ok(QPoly { ctx, coeffs })
    }

    pub fn zero(ctx: Arc<FieldCtx>) -> QPoly {
        let n = ctx.n() as usize;
        QPoly { ctx, coeffs: vec![Elem::ZERO; n] }
    }

    /// c X^(q^i), i taken modulo n.
    pub fn monomial(ctx: Arc<FieldCtx>, i: u32, c: Elem) -> QPoly {
        let mut f = QPoly::zero(ctx);
        let n = f.n();
        f.coeffs[(i % n) as usize] = c;
        f
    }

    /// The identity map X.
    pub fn identity(ctx: Arc<FieldCtx>) -> QPoly {
        QPoly::monomial(ctx, 0, Elem::ONE)
    }

    /// Builds from (index, coefficient) pairs; repeated indices are summed.
    pub fn from_terms(ctx: Arc<FieldCtx>, terms: &[(u32, Elem)]) -> QPoly {
        let mut f = QPoly::zero(ctx);
        for &(i, c) in terms {
            let i = (i % f.n()) as usize;
            f.coeffs[i] = f.ctx.add(f.coeffs[i], c);
        }
        f
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn n(&self) -> u32 {
        self.ctx.n()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32) -> Elem {
        self.coeffs[(i % self.n()) as usize]
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self) -> Vec<u32> {
        (0..self.n()).filter(|&i| !self.coeff(i).is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_ctx(&self, other: &QPoly) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    #[inline]
    pub fn eval(&self, x: Elem) -> Elem {
        let k = &*self.ctx;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Elem::ZERO, |acc, (i, &c)| k.add(acc, k.mul(c, k.frob_q(x, i as u64))))
    }

    /// The adjoint with respect to (x, y) -> Tr_(q^n/q)(xy):
    /// coefficient a_i moves to index n - i and is raised to q^(n-i).
    pub fn adjoint(&self) -> QPoly {
        let n = self.n();
        let mut out = QPoly::zero(self.ctx.clone());
        for i in 0..n {
            let j = (n - i) % n;
            out.coeffs[j as usize] = self.ctx.frob_q(self.coeff(i), j as u64);
        }
        out
    }

    /// self ∘ inner reduced modulo X^(q^n) - X.
    pub fn compose(&self, inner: &QPoly) -> Result<QPoly> {
        self.check_ctx(inner)?;
        let k = &*self.ctx;
        let n = self.n() as usize;
        let mut out = vec![Elem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in inner.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = k.mul(a, k.frob_q(b, i as u64));
                out[(i + j) % n] = k.add(out[(i + j) % n], t);
            }
        }
        Ok(QPoly { ctx: self.ctx.clone(), coeffs: out })
    }

    /// Coefficientwise image under x -> x^(p^rho).
    pub fn twist(&self, rho: u32) -> QPoly {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.frob(c, rho as u64)).collect();
        QPoly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn scale(&self, c: Elem) -> QPoly {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        QPoly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn add(&self, other: &QPoly) -> Result<QPoly> {
        self.check_ctx(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Ok(QPoly { ctx: self.ctx.clone(), coeffs })
    }

    pub fn sub(&self, other: &QPoly) -> Result<QPoly> {
        self.add(&other.scale(self.ctx.neg(Elem::ONE)))
    }

    /// x -> f(alpha x)/alpha, which has the same value multiset f(x)/x.
    pub fn scalar_twist(&self, alpha: Elem) -> Result<QPoly> {
        let k = &*self.ctx;
        let inv = k.inv(alpha).ok_or(Error::ZeroArgument)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| k.mul(k.mul(a, k.frob_q(alpha, i as u64)), inv))
            .collect();
        Ok(QPoly { ctx: self.ctx.clone(), coeffs })
    }

    /// Matrix over F_q of the map with respect to `basis`: column j holds the
    /// coordinates of f(basis[j]).
    pub fn matrix(&self, basis: &[Elem]) -> Result<Matrix> {
        let coords = Coordinates::new(&self.ctx, basis)?;
        let n = basis.len();
        let mut m = Matrix::zeros(n, n);
        for (j, &b) in basis.iter().enumerate() {
            for (i, c) in coords.of(self.eval(b)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    /// Rank of the F_q-linear map.
    pub fn rank(&self) -> usize {
        let basis = default_basis(&self.ctx);
        self.matrix(&basis).expect("default basis is a basis").rank(&self.ctx)
    }

    /// Compositional inverse modulo X^(q^n) - X, if the map is bijective.
    pub fn inverse(&self) -> Option<QPoly> {
        let k = &*self.ctx;
        let basis = default_basis(k);
        let inv = self.matrix(&basis).ok()?.inverse(k)?;
        let n = basis.len();
        // f^{-1}(b_j) = Σ_i inv[i][j] b_i
        let values: Vec<Elem> = (0..n)
            .map(|j| {
                (0..n).fold(Elem::ZERO, |acc, i| k.add(acc, k.mul(inv.get(i, j), basis[i])))
            })
            .collect();
        let g = interpolate(&self.ctx, &basis, &values)?;
        let id = QPoly::identity(self.ctx.clone());
        debug_assert!(g.compose(self).ok()? == id && self.compose(&g).ok()? == id);
        Some(g)
    }

    /// True iff x -> f(x)/x is injective on projective representatives,
    /// i.e. every point of L_f has weight one.
    pub fn is_scattered(&self) -> bool {
        let k = &*self.ctx;
        let mut seen = vec![false; k.size()];
        for t in 0..k.transversal_len() as u64 {
            let x = k.g_pow(t);
            let v = k.div(self.eval(x), x).unwrap();
            if std::mem::replace(&mut seen[v.index()], true) {
                return false;
            }
        }
        true
    }
}

/// 1, g, ..., g^(n-1). A primitive element generates F_(q^n) over F_q, so
/// its minimal polynomial over F_q has degree n and these powers are always
/// an F_q-basis.
pub fn default_basis(k: &FieldCtx) -> Vec<Elem> {
    (0..k.n() as u64).map(|i| k.g_pow(i)).collect()
}

/// Coordinates over F_q via the trace-dual basis.
pub struct Coordinates<'a> {
    ctx: &'a FieldCtx,
    dual: Vec<Elem>,
}

impl<'a> Coordinates<'a> {
    pub fn new(ctx: &'a FieldCtx, basis: &[Elem]) -> Result<Coordinates<'a>> {
        let n = ctx.n() as usize;
        if basis.len() != n {
            return Err(Error::NotABasis);
        }
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, ctx.rel_trace(ctx.mul(basis[i], basis[j]), 1)?);
            }
        }
        let ginv = gram.inverse(ctx).ok_or(Error::NotABasis)?;
        let dual = (0..n)
            .map(|j| {
                (0..n).fold(Elem::ZERO, |acc, i| {
                    ctx.add(acc, ctx.mul(ginv.get(i, j), basis[i]))
                })
            })
            .collect();
        Ok(Coordinates { ctx, dual })
    }

    pub fn of(&self, x: Elem) -> Vec<Elem> {
        self.dual
            .iter()
            .map(|&d| self.ctx.rel_trace(self.ctx.mul(x, d), 1).unwrap())
            .collect()
    }
}

/// The unique q-polynomial taking `values[j]` at `basis[j]` (Moore system).
pub fn interpolate(ctx: &Arc<FieldCtx>, basis: &[Elem], values: &[Elem]) -> Option<QPoly> {
    let k = &**ctx;
    let n = k.n() as usize;
    let mut moore = Matrix::zeros(n, n);
    for (j, &b) in basis.iter().enumerate() {
        for i in 0..n {
            moore.set(j, i, k.frob_q(b, i as u64));
        }
    }
    let coeffs = moore.solve(k, values)?;
    QPoly::new(ctx.clone(), coeffs).ok()
}
