//! Text grammar for polynomials in `x`, `t` (and `u`, the generator of
//! `F_{p^2}`):
//!
//! ```text
//! expr   := [+|-] term ((+|-) term)*
//! term   := power ([*] power)*
//! power  := atom [^ integer]
//! atom   := integer | x | t | u | ( expr )
//! ```
//!
//! Parsing produces sparse integer-coefficient [`Terms`], which are then
//! specialized to `Z[t]`, `F_q[t]` or a quadratic map.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IntPoly, Poly};
use crate::error::{Error, Result};
use crate::fields::{FieldDesc, Fq};

const MAX_EXPONENT: u32 = 1 << 16;

/// Sparse polynomial in `x, t, u` over `Z`, keyed by exponent triples.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Terms {
    map: BTreeMap<[u32; 3], BigInt>,
}

impl Terms {
    fn constant(c: BigInt) -> Terms {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert([0, 0, 0], c);
        }
        Terms { map }
    }

    fn var(i: usize) -> Terms {
        let mut e = [0; 3];
        e[i] = 1;
        Terms {
            map: BTreeMap::from([(e, BigInt::one())]),
        }
    }

    fn add(&self, o: &Terms) -> Terms {
        let mut map = self.map.clone();
        for (k, v) in &o.map {
            let e = map.entry(*k).or_default();
            *e += v;
            if e.is_zero() {
                map.remove(k);
            }
        }
        Terms { map }
    }

    fn neg(&self) -> Terms {
        Terms {
            map: self.map.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    fn mul(&self, o: &Terms) -> Terms {
        let mut out = Terms::default();
        for (ka, va) in &self.map {
            for (kb, vb) in &o.map {
                let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
                let e = out.map.entry(k).or_default();
                *e += va * vb;
                if e.is_zero() {
                    out.map.remove(&k);
                }
            }
        }
        out
    }

    fn pow(&self, n: u32) -> Terms {
        let mut acc = Terms::constant(BigInt::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Highest power of `x` present (0 for none).
    pub fn x_degree(&self) -> u32 {
        self.map.keys().map(|k| k[0]).max().unwrap_or(0)
    }

    /// Coefficient of `x^i` as its own `Terms` (free of `x`).
    pub fn x_coeff(&self, i: u32) -> Terms {
        Terms {
            map: self
                .map
                .iter()
                .filter(|(k, _)| k[0] == i)
                .map(|(k, v)| ([0, k[1], k[2]], v.clone()))
                .collect(),
        }
    }

    pub fn to_int_poly(&self) -> Result<IntPoly> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (k, v) in &self.map {
            if k[0] != 0 || k[2] != 0 {
                return Err(Error::parse(0, "expected a polynomial in t over the integers"));
            }
            let i = k[1] as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, BigInt::zero());
            }
            coeffs[i] += v;
        }
        Ok(IntPoly::new(coeffs))
    }

    pub fn to_poly(&self, desc: FieldDesc) -> Result<Poly> {
        let mut coeffs: Vec<Fq> = Vec::new();
        let u = desc.generator();
        for (k, v) in &self.map {
            if k[0] != 0 {
                return Err(Error::parse(0, "unexpected x in a polynomial in t"));
            }
            let upow = match (k[2], u) {
                (0, _) => desc.one(),
                (e, Some(g)) => desc.pow(g, e as u128),
                (_, None) => return Err(Error::parse(0, "u is only defined over F_{p^2}")),
            };
            let c = desc.mul(desc.from_bigint(v), upow);
            let i = k[1] as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Fq::ZERO);
            }
            coeffs[i] = desc.add(coeffs[i], c);
        }
        Ok(Poly::new(desc, coeffs))
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.power()?;
        loop {
            // juxtaposition is multiplication
            if self.eat('*')
                || matches!(self.peek(), Some(c) if c == '(' || c == 'x' || c == 't' || c == 'u' || c.is_ascii_digit())
            {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| Error::parse(at, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some('x') => {
                self.pos += 1;
                Ok(Terms::var(0))
            }
            Some('t') => {
                self.pos += 1;
                Ok(Terms::var(1))
            }
            Some('u') => {
                self.pos += 1;
                Ok(Terms::var(2))
            }
            Some(c) if c.is_ascii_digit() => Ok(Terms::constant(self.integer()?)),
            Some(c) => Err(Error::parse(at, format!("unexpected character {c:?}"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

/// Parses the polynomial grammar into sparse integer terms.
pub fn parse_poly_terms(s: &str) -> Result<Terms> {
    let chars: Vec<char> = s.chars().map(|c| if c == '\u{2212}' { '-' } else { c }).collect();
    let mut p = Parser { chars, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::parse(p.pos, format!("unexpected trailing {:?}", p.chars[p.pos])));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let f = IntPoly::parse("t^4+2*t^3+t^2+t").unwrap();
        assert_eq!(f, IntPoly::from_i64s(&[0, 1, 1, 2, 1]));
        assert_eq!(f.to_string(), "t^4+2*t^3+t^2+t");
        assert_eq!(IntPoly::parse("-(t+1)").unwrap(), IntPoly::from_i64s(&[-1, -1]));
        assert_eq!(IntPoly::parse("2 t (t - 3)").unwrap(), IntPoly::from_i64s(&[0, -6, 2]));
        assert_eq!(IntPoly::parse("\u{2212}t").unwrap(), IntPoly::from_i64s(&[0, -1]));
    }

    #[test]
    fn field_coefficients() {
        let d = FieldDesc::prime(5).unwrap();
        assert_eq!(Poly::parse(d, "-t").unwrap().to_string(), "4*t");
        let d9 = FieldDesc::quadratic(3).unwrap();
        let f = Poly::parse(d9, "(1+2*u)*t^2+u").unwrap();
        assert_eq!(f.to_string(), "(1+2*u)*t^2+(0+1*u)");
        assert_eq!(Poly::parse(d9, &f.to_string()).unwrap(), f);
        assert!(Poly::parse(d, "u*t").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match IntPoly::parse("t^2 + * t") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(IntPoly::parse("(t+1"), Err(Error::Parse { .. })));
        assert!(matches!(IntPoly::parse("t^99999999999"), Err(Error::Parse { .. })));
        assert!(matches!(IntPoly::parse("x+t"), Err(Error::Parse { .. })));
    }
}
