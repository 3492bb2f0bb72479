//! Dense polynomials over a prime field, used only while constructing a
//! [`FieldCtx`](super::FieldCtx): irreducibility testing and the primitive
//! element search. Coefficients are stored low-to-high.

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn is_zero(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    pow_mod_u64(a as u64, p as u64 - 2, p as u64) as u32
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Remainder of `a` modulo the monic-or-not polynomial `f`.
pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let f = trim(f.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p) as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] % p64 * lead_inv % p64;
        if c != 0 {
            let shift = top - df;
            for (i, &fc) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p64 - c * fc as u64 % p64) % p64;
            }
        }
        r.pop();
    }
    trim(r.into_iter().map(|c| (c % p64) as u32).collect())
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, f, p)
}

pub(crate) fn pow_mod(a: &[u32], mut exp: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut base = rem(a, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &base, f, p);
        }
        base = mul_mod(&base, &base, f, p);
        exp >>= 1;
    }
    rem(&acc, f, p)
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero(&b) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    // normalise to monic
    let lead = *a.last().unwrap();
    if lead != 0 {
        let inv = inv_mod_p(lead, p) as u64;
        for c in a.iter_mut() {
            *c = (*c as u64 * inv % p as u64) as u32;
        }
    }
    a
}

/// X^(p^k) mod f by k successive p-th powers.
fn x_frobenius(k: u32, f: &[u32], p: u32) -> Vec<u32> {
    let mut x = rem(&[0, 1], f, p);
    for _ in 0..k {
        x = pow_mod(&x, p as u64, f, p);
    }
    x
}

/// Rabin's irreducibility test for a monic `f` of degree >= 1.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = (f.len() - 1) as u32;
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0, 1];
    if sub(&x_frobenius(d, f, p), &rem(&x, f, p), p) != vec![0] {
        return false;
    }
    prime_factors(d as u64).into_iter().all(|l| {
        let h = sub(&x_frobenius(d / l as u32, f, p), &x, p);
        gcd(&h, f, p) == vec![1]
    })
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // X^2 + 1 over F_3 is irreducible, over F_5 it is not.
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // (X^2 + 1)(X^3 + 2X + 1) over F_3: factor degrees 2 and 3 have lcm 6,
        // so it passes the X^(p^(d/l)) != X test yet is reducible.
        let a = [1, 0, 1];
        let b = [1, 2, 0, 1];
        let mut prod = vec![0u32; 6];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % 3;
            }
        }
        assert!(is_irreducible(&b, 3));
        assert!(!is_irreducible(&prod, 3));
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(13) && !is_prime(9) && !is_prime(1));
        assert_eq!(prime_factors(728), vec![2, 7, 13]);
    }
}
