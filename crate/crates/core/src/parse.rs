//! Text syntax for q-polynomials and field specifications.
//!
//! ```text
//! poly   := ws ['-'] term (ws ('+'|'-') ws term)* ws
//! term   := [cterm ws '*' ws] var | cterm        (a bare cterm must be 0)
//! var    := 'x' frob?
//! frob   := '^q' | '^q^' uint | '^(q^' uint ')'
//! cexpr  := ['-'] cterm (('+'|'-') cterm)*
//! cterm  := cfact ('*' cfact)*
//! cfact  := catom ['^' uint]
//! catom  := uint | 'g' | '(' cexpr ')'
//! ```
//!
//! A top-level coefficient is a product; sums of coefficients need
//! parentheses, which keeps `+` between terms unambiguous.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linpoly::QPoly;

pub fn parse_qpoly(text: &str, ctx: &Arc<FieldCtx>) -> Result<QPoly> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, k: ctx };
    let mut coeffs = vec![Elem::ZERO; ctx.n() as usize];
    p.ws();
    let mut negate = p.eat(b'-');
    loop {
        p.ws();
        let (c, idx) = p.term()?;
        let c = if negate { ctx.neg(c) } else { c };
        if let Some(i) = idx {
            coeffs[i as usize] = ctx.add(coeffs[i as usize], c);
        }
        p.ws();
        if p.eat(b'+') {
            negate = false;
        } else if p.eat(b'-') {
            negate = true;
        } else {
            break;
        }
    }
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err(&["'+'", "'-'", "end of input"]));
    }
    QPoly::new(ctx.clone(), coeffs)
}

/// A single field element in the coefficient syntax, e.g. `g^3+1`.
pub fn parse_elem(text: &str, ctx: &FieldCtx) -> Result<Elem> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, k: ctx };
    let v = p.cexpr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err(&["'+'", "'-'", "'*'", "end of input"]));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    k: &'a FieldCtx,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&[&format!("'{}'", c as char)]))
        }
    }

    fn err(&self, expected: &[&str]) -> Error {
        Error::Parse { pos: self.pos, expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn at_var(&self) -> bool {
        matches!(self.peek(), Some(b'x' | b'X'))
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(&["integer"]));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, expected: vec!["integer below 2^64".into()] })
    }

    /// Returns the coefficient and the q-exponent index, or no index for a
    /// bare zero constant.
    fn term(&mut self) -> Result<(Elem, Option<u32>)> {
        if self.at_var() {
            return Ok((Elem::ONE, Some(self.var()?)));
        }
        let start = self.pos;
        let (c, star) = self.cterm(true)?;
        if star {
            self.ws();
            return Ok((c, Some(self.var()?)));
        }
        if c.is_zero() {
            return Ok((c, None));
        }
        Err(Error::Parse { pos: start.max(self.pos), expected: vec!["'*'".into()] })
    }

    fn var(&mut self) -> Result<u32> {
        if !(self.eat(b'x') || self.eat(b'X')) {
            return Err(self.err(&["'x'"]));
        }
        let save = self.pos;
        self.ws();
        if !self.eat(b'^') {
            self.pos = save;
            return Ok(0);
        }
        self.ws();
        let k = if self.eat(b'(') {
            self.ws();
            self.expect(b'q')?;
            self.ws();
            self.expect(b'^')?;
            self.ws();
            let k = self.uint()?;
            self.ws();
            self.expect(b')')?;
            k
        } else {
            self.expect(b'q')?;
            let save = self.pos;
            self.ws();
            if self.eat(b'^') {
                self.ws();
                self.uint()?
            } else {
                self.pos = save;
                1
            }
        };
        let n = self.k.n();
        if k >= n as u64 {
            return Err(Error::ExponentOutOfRange { k, n });
        }
        Ok(k as u32)
    }

    fn cexpr(&mut self) -> Result<Elem> {
        self.ws();
        let neg = self.eat(b'-');
        let (mut acc, _) = self.cterm(false)?;
        if neg {
            acc = self.k.neg(acc);
        }
        loop {
            self.ws();
            if self.eat(b'+') {
                let (t, _) = self.cterm(false)?;
                acc = self.k.add(acc, t);
            } else if self.eat(b'-') {
                let (t, _) = self.cterm(false)?;
                acc = self.k.sub(acc, t);
            } else {
                return Ok(acc);
            }
        }
    }

    /// A product of factors. At top level a `*` followed by the variable
    /// ends the coefficient; the flag reports that case.
    fn cterm(&mut self, top: bool) -> Result<(Elem, bool)> {
        self.ws();
        let mut acc = self.cfact()?;
        loop {
            let save = self.pos;
            self.ws();
            if !self.eat(b'*') {
                self.pos = save;
                return Ok((acc, false));
            }
            self.ws();
            if top && self.at_var() {
                return Ok((acc, true));
            }
            let f = self.cfact()?;
            acc = self.k.mul(acc, f);
        }
    }

    fn cfact(&mut self) -> Result<Elem> {
        let base = self.catom()?;
        let save = self.pos;
        self.ws();
        if self.eat(b'^') {
            self.ws();
            let e = self.uint()?;
            Ok(self.k.pow(base, e))
        } else {
            self.pos = save;
            Ok(base)
        }
    }

    fn catom(&mut self) -> Result<Elem> {
        self.ws();
        match self.peek() {
            Some(b'g') => {
                self.pos += 1;
                Ok(self.k.g())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.cexpr()?;
                self.ws();
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.uint()?;
                Ok(self.k.from_int((v % self.k.p() as u64) as i64))
            }
            _ => Err(self.err(&["integer", "'g'", "'('", "'x'"])),
        }
    }
}

/// "p^e^n" into (p, e, n).
pub fn parse_field_spec(text: &str) -> Result<(u32, u32, u32)> {
    let parts: Vec<&str> = text.trim().split('^').collect();
    if parts.len() != 3 {
        return Err(Error::Parse { pos: 0, expected: vec!["p^e^n".into()] });
    }
    let mut out = [0u32; 3];
    let mut pos = 0;
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse { pos, expected: vec!["integer".into()] })?;
        pos += part.len() + 1;
    }
    Ok((out[0], out[1], out[2]))
}

/// "c0,c1,...,1" into a coefficient list.
pub fn parse_modulus(text: &str) -> Result<Vec<u32>> {
    let mut pos = 0;
    text.split(',')
        .map(|part| {
            let v = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse { pos, expected: vec!["integer".into()] });
            pos += part.len() + 1;
            v
        })
        .collect()
}
