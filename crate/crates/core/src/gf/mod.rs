//! Table-driven arithmetic in F_(p^(e n)).
//!
//! The whole tower F_p ⊆ F_q ⊆ F_(q^m) ⊆ F_(q^n), q = p^e, lives inside one
//! ambient field. Subfields are never separate types: an element lies in
//! F_(q^m) exactly when it is fixed by `frob(., e*m)`.
//!
//! Elements are stored by discrete logarithm with respect to a fixed
//! primitive element `g` (raw value 0 is zero, raw value k+1 is g^k), so
//! multiplication and Frobenius are integer arithmetic modulo p^(en) - 1 and
//! addition is a single Zech-logarithm lookup. The residue polynomial of an
//! element is recovered through the antilog table.

mod fp_poly;

use serde::Serialize;

use crate::error::{Error, Result};
use fp_poly::{is_irreducible, is_prime, prime_factors};

/// Largest field the tables are built for (2^24 elements).
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

/// A field element. Ordering is zero first, then by discrete log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Dense index in `0..field_size`; zero maps to 0 and g^k to k+1.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Discrete log with -1 standing for zero; the wire format for elements.
    pub fn dlog_or_neg(self) -> i64 {
        self.0 as i64 - 1
    }

    #[inline]
    pub(crate) fn from_index(i: usize) -> Elem {
        Elem(i as u32)
    }
}

impl Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.dlog_or_neg())
    }
}

/// An explicit model of F_(p^(e n)) together with its subfield tower.
pub struct FieldCtx {
    p: u32,
    e: u32,
    n: u32,
    degree: u32,
    size: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: Vec<u32>,
    /// exp[k] = residue code of g^k, k < order.
    exp: Vec<u32>,
    /// log[code] = raw element for a residue code.
    log: Vec<u32>,
    /// zech[k] = raw element of 1 + g^k.
    zech: Vec<u32>,
    /// p^i mod order for i < degree.
    frob_mul: Vec<u64>,
    neg_one: Elem,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds F_(p^(e n)). Without a modulus the lexicographically smallest
    /// monic irreducible of degree e*n is used, comparing coefficients
    /// constant term first.
    pub fn new(p: u32, e: u32, n: u32, modulus: Option<&[u32]>) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let degree = e.checked_mul(n).filter(|&d| d >= 1).ok_or(Error::DegreeMismatch {
            expected: 1,
            got: 0,
        })?;
        let size = (p as u64).checked_pow(degree).filter(|&s| s <= MAX_FIELD_SIZE);
        let size = size.ok_or(Error::FieldTooLarge { p, degree })? as u32;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != degree as usize + 1 {
                    return Err(Error::DegreeMismatch {
                        expected: degree,
                        got: m.len().saturating_sub(1),
                    });
                }
                let m: Vec<u32> = m.iter().map(|&c| c % p).collect();
                if m[degree as usize] != 1 {
                    return Err(Error::DegreeMismatch {
                        expected: degree,
                        got: m.len() - 1,
                    });
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                m
            }
            None => smallest_irreducible(p, degree),
        };

        let order = size - 1;
        let generator = smallest_primitive(p, degree, &modulus, order as u64);
        let (exp, log) = build_log_tables(p, degree, &modulus, &generator, size);
        let zech = (0..order as usize)
            .map(|k| {
                let code = exp[k];
                let d0 = code % p;
                let bumped = code - d0 + (d0 + 1) % p;
                log[bumped as usize]
            })
            .collect();
        let mut frob_mul = Vec::with_capacity(degree as usize);
        let mut acc = 1u64 % order.max(1) as u64;
        for _ in 0..degree {
            frob_mul.push(acc);
            acc = acc * p as u64 % order.max(1) as u64;
        }
        let neg_one = if p == 2 { Elem::ONE } else { Elem(order / 2 + 1) };
        Ok(FieldCtx {
            p,
            e,
            n,
            degree,
            size,
            order,
            modulus,
            generator,
            exp,
            log,
            zech,
            frob_mul,
            neg_one,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// q = p^e.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
    /// Degree of the ambient field over F_p.
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn size(&self) -> usize {
        self.size as usize
    }
    /// Order of the multiplicative group, p^(en) - 1.
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Residue of the fixed primitive element.
    pub fn generator_residue(&self) -> &[u32] {
        &self.generator
    }
    /// Number of projective points per F_q-subspace line: (q^n - 1)/(q - 1).
    pub fn transversal_len(&self) -> usize {
        (self.order as u64 / (self.q() - 1)) as usize
    }

    /// The primitive element g.
    pub fn g(&self) -> Elem {
        self.g_pow(1)
    }

    #[inline]
    pub fn g_pow(&self, k: u64) -> Elem {
        Elem((k % self.order as u64) as u32 + 1)
    }

    #[inline]
    pub fn dlog(&self, x: Elem) -> Option<u32> {
        x.0.checked_sub(1)
    }

    /// Element with a given wire value (dlog, or -1 for zero).
    pub fn from_dlog_or_neg(&self, v: i64) -> Option<Elem> {
        match v {
            -1 => Some(Elem::ZERO),
            v if v >= 0 && v < self.order as i64 => Some(Elem(v as u32 + 1)),
            _ => None,
        }
    }

    /// All elements in canonical order (zero, then g^0, g^1, ...).
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.size).map(Elem)
    }

    pub fn from_int(&self, k: i64) -> Elem {
        let c = k.rem_euclid(self.p as i64) as usize;
        Elem(self.log[c])
    }

    pub fn from_residue(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.degree as usize {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: coeffs.len(),
            });
        }
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            code = code * self.p as u64 + (c % self.p) as u64;
        }
        Ok(Elem(self.log[code as usize]))
    }

    /// Residue polynomial of `x` modulo the field modulus, low-to-high,
    /// always `degree` coefficients long.
    pub fn residue(&self, x: Elem) -> Vec<u32> {
        let mut code = match self.dlog(x) {
            None => 0,
            Some(k) => self.exp[k as usize],
        };
        (0..self.degree)
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let (la, lb) = (a.0 - 1, b.0 - 1);
        let d = if lb >= la { lb - la } else { lb + self.order - la };
        let z = self.zech[d as usize];
        if z == 0 {
            return Elem::ZERO;
        }
        let s = la + z - 1;
        Elem(if s >= self.order { s - self.order } else { s } + 1)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.mul(a, self.neg_one)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let s = a.0 + b.0 - 2;
        Elem(if s >= self.order { s - self.order } else { s } + 1)
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        let la = self.dlog(a)?;
        Some(Elem(if la == 0 { 0 } else { self.order - la } + 1))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        Some(self.mul(a, self.inv(b)?))
    }

    /// a^k with 0^0 = 1.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        match self.dlog(a) {
            None if k == 0 => Elem::ONE,
            None => Elem::ZERO,
            Some(la) => {
                let r = (la as u128 * k as u128 % self.order as u128) as u32;
                Elem(r + 1)
            }
        }
    }

    /// a^k for a signed exponent; negative powers of zero give zero.
    pub fn pow_signed(&self, a: Elem, k: i64) -> Elem {
        if k >= 0 {
            return self.pow(a, k as u64);
        }
        match self.inv(a) {
            Some(ia) => self.pow(ia, k.unsigned_abs()),
            None => Elem::ZERO,
        }
    }

    /// x^(p^i), exponent reduced modulo e*n.
    #[inline]
    pub fn frob(&self, x: Elem, i: u64) -> Elem {
        if x.0 == 0 {
            return x;
        }
        let m = self.frob_mul[(i % self.degree as u64) as usize];
        Elem(((x.0 - 1) as u64 * m % self.order as u64) as u32 + 1)
    }

    /// x^(q^i).
    #[inline]
    pub fn frob_q(&self, x: Elem, i: u64) -> Elem {
        self.frob(x, i * self.e as u64)
    }

    fn check_subfield(&self, m: u32) -> Result<()> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotASubfield { m, n: self.n });
        }
        Ok(())
    }

    /// Relative norm N_(q^n/q^m)(x) = x^((q^n - 1)/(q^m - 1)).
    pub fn rel_norm(&self, x: Elem, m: u32) -> Result<Elem> {
        self.check_subfield(m)?;
        let qm = self.q().pow(m);
        Ok(self.pow(x, self.order as u64 / (qm - 1)))
    }

    /// Relative trace Tr_(q^n/q^m)(x) = sum of x^(q^(m i)), i < n/m.
    pub fn rel_trace(&self, x: Elem, m: u32) -> Result<Elem> {
        self.check_subfield(m)?;
        Ok((0..self.n / m).fold(Elem::ZERO, |acc, i| {
            self.add(acc, self.frob_q(x, (m * i) as u64))
        }))
    }

    pub fn in_subfield(&self, x: Elem, m: u32) -> bool {
        self.frob_q(x, m as u64) == x
    }

    /// Some x with x^k = a, choosing the one of least discrete log.
    pub fn solve_power(&self, k: u64, a: Elem) -> Result<Option<Elem>> {
        let la = self.dlog(a).ok_or(Error::ZeroArgument)? as u64;
        let m = self.order as u64;
        let g = gcd(k % m, m);
        if !la.is_multiple_of(g) {
            return Ok(None);
        }
        let mg = m / g;
        let t = if mg == 1 {
            0
        } else {
            let inv = mod_inverse((k / g) % mg, mg).expect("coprime after dividing by gcd");
            (la / g) as u128 * inv as u128 % mg as u128
        };
        Ok(Some(self.g_pow(t as u64)))
    }

    /// Every x with x^k = a, sorted.
    pub fn power_solutions(&self, k: u64, a: Elem) -> Result<Vec<Elem>> {
        let Some(x0) = self.solve_power(k, a)? else {
            return Ok(Vec::new());
        };
        let mut out: Vec<Elem> = self
            .roots_of_unity(k)
            .into_iter()
            .map(|z| self.mul(x0, z))
            .collect();
        out.sort();
        Ok(out)
    }

    /// All z with z^k = 1.
    pub fn roots_of_unity(&self, k: u64) -> Vec<Elem> {
        let m = self.order as u64;
        let g = gcd(k % m, m);
        (0..g).map(|j| self.g_pow(j * (m / g))).collect()
    }

    /// Roots of X^2 + X - 1 in the ambient field, sorted and deduplicated.
    pub fn roots_x2_plus_x_minus_1(&self) -> Vec<Elem> {
        let one = Elem::ONE;
        if self.p == 2 {
            return self
                .elements()
                .filter(|&x| {
                    let v = self.add(self.add(self.mul(x, x), x), self.neg(one));
                    v.is_zero()
                })
                .collect();
        }
        let half = self.inv(self.from_int(2)).expect("2 is invertible in odd characteristic");
        let minus_half = self.neg(half);
        let disc = self.from_int(5);
        if disc.is_zero() {
            return vec![minus_half];
        }
        let Some(s) = self.solve_power(2, disc).expect("5 != 0") else {
            return Vec::new();
        };
        let r1 = self.add(minus_half, self.mul(s, half));
        let r2 = self.sub(minus_half, self.mul(s, half));
        let mut roots = vec![r1, r2];
        roots.sort();
        roots.dedup();
        roots
    }

    /// Human-readable form: `0`, `1`, or `g^k`.
    pub fn fmt_elem(&self, x: Elem) -> String {
        match self.dlog(x) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(1) => "g".into(),
            Some(k) => format!("g^{k}"),
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

fn smallest_irreducible(p: u32, degree: u32) -> Vec<u32> {
    let d = degree as usize;
    // coefficient tuple (c_0, .., c_{d-1}) counted with c_{d-1} fastest
    let mut c = vec![0u32; d];
    loop {
        let mut f = c.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        let mut i = d;
        loop {
            i -= 1;
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            assert!(i > 0, "an irreducible polynomial of every degree exists");
        }
    }
}

fn decode(mut code: u64, p: u32, degree: u32) -> Vec<u32> {
    (0..degree)
        .map(|_| {
            let d = (code % p as u64) as u32;
            code /= p as u64;
            d
        })
        .collect()
}

fn smallest_primitive(p: u32, degree: u32, modulus: &[u32], order: u64) -> Vec<u32> {
    if order == 1 {
        return vec![1];
    }
    let factors = prime_factors(order);
    (1..=order)
        .map(|code| decode(code, p, degree))
        .find(|x| {
            factors
                .iter()
                .all(|&l| fp_poly::pow_mod(x, order / l, modulus, p) != vec![1])
        })
        .expect("the multiplicative group is cyclic")
}

fn build_log_tables(
    p: u32,
    degree: u32,
    modulus: &[u32],
    generator: &[u32],
    size: u32,
) -> (Vec<u32>, Vec<u32>) {
    let d = degree as usize;
    let order = size - 1;
    // column j holds the residue of g * X^j
    let cols: Vec<Vec<u32>> = (0..d)
        .map(|j| {
            let mut xj = vec![0u32; j + 1];
            xj[j] = 1;
            let mut r = fp_poly::mul_mod(&xj, generator, modulus, p);
            r.resize(d, 0);
            r
        })
        .collect();
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![0u32; size as usize];
    let mut cur = vec![0u32; d];
    cur[0] = 1;
    let mut next = vec![0u32; d];
    for k in 0..order {
        let code = cur.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        exp.push(code);
        log[code as usize] = k + 1;
        next.iter_mut().for_each(|v| *v = 0);
        for (j, &cj) in cur.iter().enumerate() {
            if cj != 0 {
                for (v, &col) in next.iter_mut().zip(&cols[j]) {
                    *v = (*v + cj * col) % p;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    (exp, log)
}
