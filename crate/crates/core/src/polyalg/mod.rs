//! Dense univariate polynomials in `t` over `F_q` ([`Poly`]) and over `Z`
//! ([`IntPoly`]), rational functions, factorization and resultants.
//!
//! Polynomials whose coefficients are themselves polynomials in `t` (for
//! instance iterates in `x`) use [`UPoly`], generic over the [`Ring`] trait.

mod factor;
mod intpoly;
mod parse;
mod ratfn;
mod resultant;
mod upoly;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElem, Fq};

pub use factor::{irreducibles_of_degree, FactorOptions, DEFAULT_SEED};
pub use intpoly::IntPoly;
pub use parse::{parse_poly_terms, Terms};
pub use ratfn::RationalFn;
pub use resultant::{crt_resultant, discriminant_generic, subresultant};
pub use upoly::UPoly;

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }

    /// Height convention: `h(0) = 0`.
    pub fn height(self) -> usize {
        self.finite().unwrap_or(0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Commutative ring with exact division, instantiated by the coefficient
/// domains the generic algorithms run over.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / other` when the division is exact, `None` otherwise.
    fn div_exact(&self, other: &Self) -> Option<Self>;

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.square();
            }
        }
        acc
    }
}

/// A polynomial ring in `t` over `F_q` or `Z`: the coefficient rings of maps.
pub trait TPoly: Ring + fmt::Display {
    fn degree(&self) -> Degree;
    fn t_like(&self) -> Self;
    fn derivative(&self) -> Self;
    /// Normalized gcd (monic over a field, primitive with positive leading
    /// coefficient over `Z`); zero when both inputs are zero.
    fn gcd_norm(&self, other: &Self) -> Self;
    /// Associate used as a canonical representative (monic / primitive).
    fn normalize(&self) -> Self;

    fn height(&self) -> usize {
        self.degree().height()
    }

    fn is_constant(&self) -> bool {
        self.degree() <= Degree::Finite(0)
    }
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::from(0)
    }
    fn one_like(&self) -> Self {
        BigInt::from(1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigInt::from(n)
    }
    fn vanishes(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if num_traits::Zero::is_zero(o) {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(self, o);
        num_traits::Zero::is_zero(&r).then_some(q)
    }
}

impl Ring for FieldElem {
    fn zero_like(&self) -> Self {
        FieldElem::from_i64(self.desc(), 0)
    }
    fn one_like(&self) -> Self {
        FieldElem::from_i64(self.desc(), 1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        FieldElem::from_i64(self.desc(), n)
    }
    fn vanishes(&self) -> bool {
        FieldElem::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        FieldElem::new(self.desc(), self.desc().add(self.value(), o.value()))
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElem::new(self.desc(), self.desc().sub(self.value(), o.value()))
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElem::new(self.desc(), self.desc().mul(self.value(), o.value()))
    }
    fn neg(&self) -> Self {
        FieldElem::new(self.desc(), self.desc().neg(self.value()))
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.desc()
            .div(self.value(), o.value())
            .map(|v| FieldElem::new(self.desc(), v))
    }
}

/// Unit, factor list and completeness flag. `unit * prod(f^m)` is the input.
///
/// `complete` is set only when every listed factor is irreducible; a
/// squarefree decomposition is exact but reports `complete = false`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<P, U> {
    pub unit: U,
    pub factors: Vec<(P, u32)>,
    pub complete: bool,
}

impl<P: fmt::Display, U: fmt::Display> Factorization<P, U> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "unit": self.unit.to_string(),
            "factors": self
                .factors
                .iter()
                .map(|(f, m)| serde_json::json!({"poly": f.to_string(), "mult": m}))
                .collect::<Vec<_>>(),
            "complete": self.complete,
        })
    }
}

/// Polynomial in `t` over `F_p` or `F_{p^2}`, coefficients ascending.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    desc: FieldDesc,
    coeffs: Vec<Fq>,
}

fn trim(v: &mut Vec<Fq>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl Poly {
    pub fn new(desc: FieldDesc, mut coeffs: Vec<Fq>) -> Self {
        trim(&mut coeffs);
        Poly { desc, coeffs }
    }

    /// From ascending integer coefficients, reduced mod `p`.
    pub fn from_ints(desc: FieldDesc, coeffs: &[i64]) -> Self {
        Poly::new(desc, coeffs.iter().map(|&c| desc.from_i64(c)).collect())
    }

    pub fn zero(desc: FieldDesc) -> Self {
        Poly {
            desc,
            coeffs: Vec::new(),
        }
    }

    pub fn one(desc: FieldDesc) -> Self {
        Poly::constant(desc, desc.one())
    }

    pub fn constant(desc: FieldDesc, c: Fq) -> Self {
        Poly::new(desc, vec![c])
    }

    /// The variable `t`.
    pub fn t(desc: FieldDesc) -> Self {
        Poly::monomial(desc, desc.one(), 1)
    }

    pub fn monomial(desc: FieldDesc, c: Fq, n: usize) -> Self {
        let mut v = vec![Fq::ZERO; n + 1];
        v[n] = c;
        Poly::new(desc, v)
    }

    pub fn desc(&self) -> FieldDesc {
        self.desc
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree with the `h(0) = 0` convention.
    pub fn height(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.desc.one()
    }

    /// True for zero and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == self.desc.one()
    }

    /// Moves the polynomial into another field over the same prime (e.g. `F_p`
    /// into `F_{p^2}`).
    pub fn lift(&self, desc: FieldDesc) -> Result<Poly> {
        if desc.p() != self.desc.p() || (desc.degree() < self.desc.degree()) {
            return Err(Error::DomainMismatch);
        }
        Ok(Poly {
            desc,
            coeffs: self.coeffs.clone(),
        })
    }

    /// True if all coefficients lie in the prime field.
    pub fn in_prime_field(&self) -> bool {
        self.coeffs.iter().all(|c| c.c1 == 0)
    }

    /// Moves back into `F_p` when all coefficients lie there.
    pub fn descend(&self) -> Option<Poly> {
        self.in_prime_field().then(|| Poly {
            desc: self.desc.base(),
            coeffs: self.coeffs.clone(),
        })
    }

    fn check(&self, other: &Poly) {
        assert_eq!(self.desc, other.desc, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let f = self.desc;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check(other);
        let f = self.desc;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, v)
    }

    pub fn neg(&self) -> Poly {
        let f = self.desc;
        Poly {
            desc: f,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: Fq) -> Poly {
        let f = self.desc;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fq::ZERO; n];
        v.extend_from_slice(&self.coeffs);
        Poly {
            desc: self.desc,
            coeffs: v,
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.desc);
        }
        if self.desc.degree() == 1 {
            let p = self.desc.p();
            let a: Vec<u64> = self.coeffs.iter().map(|c| c.c0).collect();
            let b: Vec<u64> = other.coeffs.iter().map(|c| c.c0).collect();
            let v = conv_prime(&a, &b, p);
            return Poly::new(self.desc, v.into_iter().map(|c0| Fq { c0, c1: 0 }).collect());
        }
        let f = self.desc;
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn square(&self) -> Poly {
        if self.desc.degree() == 1 && !self.is_zero() {
            let p = self.desc.p();
            let a: Vec<u64> = self.coeffs.iter().map(|c| c.c0).collect();
            let v = square_prime(&a, p);
            return Poly::new(self.desc, v.into_iter().map(|c0| Fq { c0, c1: 0 }).collect());
        }
        self.mul(self)
    }

    pub fn pow(&self, e: u64) -> Poly {
        Ring::pow(self, e)
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.desc;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(d.lc()).expect("nonzero leading coefficient");
        let dn = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![Fq::ZERO; r.len() - dn];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dn], inv);
            q[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.coeffs[..dn].iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(c, dj));
            }
            r[k + dn] = Fq::ZERO;
        }
        r.truncate(dn);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        if self.desc.degree() == 1 && !d.is_zero() && self.coeffs.len() >= d.coeffs.len() {
            return Ok(rem_prime(self, d));
        }
        self.divrem(d).map(|(_, r)| r)
    }

    /// Exact quotient, `None` if `d` does not divide `self` (or is zero).
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        match self.divrem(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, f: &Poly) -> bool {
        !self.is_zero() && f.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Leading coefficient made 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.desc.inv(self.lc()) {
            Some(inv) if inv != self.desc.one() => self.scale(inv),
            _ => self.clone(),
        }
    }

    /// Monic gcd; errors when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::Undefined("gcd(0, 0)".into()));
        }
        Ok(self.gcd_monic(other))
    }

    pub(crate) fn gcd_monic(&self, other: &Poly) -> Poly {
        self.check(other);
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.desc;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut u0, mut u1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let u = u0.sub(&q.mul(&u1));
            u0 = std::mem::replace(&mut u1, u);
        }
        match f.inv(r0.lc()) {
            Some(inv) => (r0.scale(inv), s0.scale(inv), u0.scale(inv)),
            None => (r0, s0, u0),
        }
    }

    pub fn derivative(&self) -> Poly {
        let f = self.desc;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_u64(i as u64)))
            .collect();
        Poly::new(f, v)
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let f = self.desc;
        self.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m`, with the exponent given as little-endian 64-bit words.
    pub fn powmod(&self, e: &[u64], m: &Poly) -> Poly {
        let mut acc = Poly::one(self.desc).rem(m).expect("nonzero modulus");
        let base = self.rem(m).expect("nonzero modulus");
        let bits = e.len() * 64;
        for i in (0..bits).rev() {
            acc = acc.square().rem(m).expect("nonzero modulus");
            if (e[i / 64] >> (i % 64)) & 1 == 1 {
                acc = acc.mul(&base).rem(m).expect("nonzero modulus");
            }
        }
        acc
    }

    /// `g` with `g^p = self`; requires every exponent in the support to be a
    /// multiple of `p`.
    pub fn pth_root(&self) -> Result<Poly> {
        let f = self.desc;
        let p = f.p() as usize;
        let mut v = Vec::with_capacity(self.coeffs.len() / p + 1);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                v.push(f.frobenius_inv(c));
            } else if !c.is_zero() {
                return Err(Error::NotAPthPower);
            }
        }
        Ok(Poly::new(f, v))
    }

    /// Monic `g` with `g^2 = self` for monic `self`, if one exists.
    pub fn sqrt_monic(&self) -> Option<Poly> {
        if !self.is_monic() {
            return None;
        }
        let n = self.coeffs.len() - 1;
        if n % 2 == 1 {
            return None;
        }
        let f = self.desc;
        let m = n / 2;
        let half = f.inv(f.from_u64(2)).expect("odd characteristic");
        let mut g = vec![Fq::ZERO; m + 1];
        g[m] = f.one();
        for k in 1..=m {
            let mut s = Fq::ZERO;
            for i in 1..k {
                s = f.add(s, f.mul(g[m - i], g[m - k + i]));
            }
            g[m - k] = f.mul(f.sub(self.coeffs[n - k], s), half);
        }
        let g = Poly::new(f, g);
        (g.square() == *self).then_some(g)
    }

    /// Squarefree decomposition `unit * prod g_i^{m_i}` with the `g_i` monic,
    /// squarefree, pairwise coprime, sorted by multiplicity.
    pub fn squarefree_decomposition(&self) -> Result<Factorization<Poly, FieldElem>> {
        if self.is_zero() {
            return Err(Error::Undefined("squarefree decomposition of 0".into()));
        }
        let mut factors = Vec::new();
        sqf_rec(&self.monic(), 1, &mut factors);
        factors.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| cmp_poly(&a.0, &b.0)));
        Ok(Factorization {
            unit: FieldElem::new(self.desc, self.lc()),
            factors,
            complete: false,
        })
    }

    /// Monic product of the odd-multiplicity irreducible factors. Units are
    /// ignored since every constant is a square over the algebraic closure.
    pub fn squarefree_part_geometric(&self) -> Result<Poly> {
        let sfd = self.squarefree_decomposition()?;
        Ok(sfd
            .factors
            .iter()
            .filter(|(_, m)| m % 2 == 1)
            .fold(Poly::one(self.desc), |acc, (g, _)| acc.mul(g)))
    }

    /// Monic product of the distinct irreducible factors.
    pub fn radical(&self) -> Result<Poly> {
        let sfd = self.squarefree_decomposition()?;
        Ok(sfd
            .factors
            .iter()
            .fold(Poly::one(self.desc), |acc, (g, _)| acc.mul(g)))
    }

    /// Whether `self = c * g^2` with `c` constant. A monic square root over the
    /// algebraic closure is determined coefficient by coefficient over `F_q`,
    /// so the test never leaves the coefficient field.
    pub fn is_square_in_closure(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Undefined("square test of 0".into()));
        }
        Ok(self.monic().sqrt_monic().is_some())
    }

    /// Whether `self` is a square in `F_q[t]` itself: geometric square with a
    /// square leading coefficient.
    pub fn is_square_arithmetic(&self) -> Result<bool> {
        Ok(self.is_square_in_closure()? && self.desc.is_square(self.lc()))
    }

    pub fn format(&self) -> String {
        let f = self.desc;
        format_terms(
            self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| {
                let body = if c.c1 == 0 {
                    c.c0.to_string()
                } else {
                    format!("({})", f.format(c))
                };
                (i, false, body)
            }),
            "t",
        )
    }

    pub fn parse(desc: FieldDesc, s: &str) -> Result<Poly> {
        parse::parse_poly_terms(s)?.to_poly(desc)
    }
}

/// Total order used for deterministic output: degree, then coefficients from
/// the top down.
pub(crate) fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

fn sqf_rec(f: &Poly, mult: u32, out: &mut Vec<(Poly, u32)>) {
    if f.is_constant() {
        return;
    }
    let p = f.desc.p() as u32;
    let d = f.derivative();
    if d.is_zero() {
        let r = f.pth_root().expect("zero derivative means a p-th power");
        sqf_rec(&r, mult * p, out);
        return;
    }
    let mut c = f.gcd_monic(&d);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd_monic(&c);
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_constant() {
            out.push((z.monic(), i * mult));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
    }
    if !c.is_constant() {
        let r = c.pth_root().expect("remaining cofactor is a p-th power");
        sqf_rec(&r.monic(), mult * p, out);
    }
}

/// Writes `sum c_i v^i` in descending order. Each item is
/// `(exponent, negative, |coefficient| text)`.
pub(crate) fn format_terms<I>(terms: I, var: &str) -> String
where
    I: Iterator<Item = (usize, bool, String)>,
{
    let mut s = String::new();
    for (i, neg, body) in terms {
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            s.push_str(&body);
        } else if body == "1" {
            s.push_str(&mono);
        } else {
            s.push_str(&body);
            s.push('*');
            s.push_str(&mono);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

// Word-size kernels for prime fields. Products of residues below 2^32 fit in
// u64, so sums of up to 2^64 of them fit in u128 and reduce once.

fn conv_prime(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len() + b.len() - 1;
    let mut out = vec![0u64; n];
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for (k, o) in out.iter_mut().enumerate() {
        let lo = k.saturating_sub(b.len() - 1);
        let hi = k.min(a.len() - 1);
        let mut acc: u128 = 0;
        for i in lo..=hi {
            acc += (a[i] * b[k - i]) as u128;
        }
        *o = (acc % p as u128) as u64;
    }
    out
}

fn square_prime(a: &[u64], p: u64) -> Vec<u64> {
    let n = 2 * a.len() - 1;
    let mut out = vec![0u64; n];
    for (k, o) in out.iter_mut().enumerate() {
        let lo = k.saturating_sub(a.len() - 1);
        let hi = k.min(a.len() - 1);
        let mut acc: u128 = 0;
        let mut i = lo;
        let mut j = hi;
        while i < j {
            acc += (a[i] * a[j]) as u128;
            i += 1;
            j -= 1;
        }
        acc *= 2;
        if i == j {
            acc += (a[i] * a[i]) as u128;
        }
        *o = (acc % p as u128) as u64;
    }
    out
}

/// Remainder over a prime field with a monic-normalized divisor.
fn rem_prime(f: &Poly, d: &Poly) -> Poly {
    let field = f.desc;
    let p = field.p();
    let inv = field.inv(d.lc()).expect("nonzero leading coefficient").c0;
    let dn = d.coeffs.len() - 1;
    // negated, monic divisor tail so the inner loop is a multiply-add
    let dneg: Vec<u64> = d.coeffs[..dn]
        .iter()
        .map(|c| (p - crate::arith::mul_mod(c.c0, inv, p)) % p)
        .collect();
    let mut r: Vec<u64> = f.coeffs.iter().map(|c| c.c0).collect();
    for k in (0..r.len() - dn).rev() {
        let c = r[k + dn] % p;
        if c != 0 {
            for (j, &dj) in dneg.iter().enumerate() {
                r[k + j] = (r[k + j] + c * dj) % p;
            }
        }
        r[k + dn] = 0;
    }
    r.truncate(dn);
    Poly::new(field, r.into_iter().map(|c0| Fq { c0, c1: 0 }).collect())
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.desc)
    }
    fn one_like(&self) -> Self {
        Poly::one(self.desc)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Poly::constant(self.desc, self.desc.from_i64(n))
    }
    fn vanishes(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        Poly::div_exact(self, o)
    }
    fn square(&self) -> Self {
        Poly::square(self)
    }
}

impl TPoly for Poly {
    fn degree(&self) -> Degree {
        Poly::degree(self)
    }
    fn t_like(&self) -> Self {
        Poly::t(self.desc)
    }
    fn derivative(&self) -> Self {
        Poly::derivative(self)
    }
    fn gcd_norm(&self, o: &Self) -> Self {
        self.gcd_monic(o)
    }
    fn normalize(&self) -> Self {
        self.monic()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.desc, self.format())
    }
}

/// `h(f)` for polynomials: the degree, with `h(0) = 0`.
pub fn height<P: TPoly>(f: &P) -> usize {
    f.height()
}

/// Gcd-free basis of a family of nonzero polynomials: pairwise coprime,
/// nonconstant, normalized elements such that every input is a unit times a
/// product of powers of basis elements. Returns the basis (sorted by degree,
/// then text) and, for each input, its exponent vector over the basis.
pub fn coprime_base<P: TPoly>(inputs: &[P]) -> (Vec<P>, Vec<Vec<u32>>) {
    let mut base: Vec<P> = Vec::new();
    for f in inputs {
        let mut todo = vec![f.normalize()];
        'next: while let Some(x) = todo.pop() {
            if x.is_constant() {
                continue;
            }
            for i in 0..base.len() {
                let g = base[i].gcd_norm(&x);
                if g.is_constant() {
                    continue;
                }
                // b = g*(b/g), x = g*(x/g); total degree drops by deg g
                let b = base.swap_remove(i);
                todo.push(b.div_exact(&g).expect("gcd divides").normalize());
                todo.push(x.div_exact(&g).expect("gcd divides").normalize());
                todo.push(g);
                continue 'next;
            }
            base.push(x);
        }
    }
    base.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    let exps = inputs
        .iter()
        .map(|f| base.iter().map(|b| multiplicity(f, b)).collect())
        .collect();
    (base, exps)
}

/// Largest `e` with `b^e | f` (`f` nonzero, `b` nonconstant).
pub fn multiplicity<P: TPoly>(f: &P, b: &P) -> u32 {
    let mut e = 0;
    let mut g = f.clone();
    while let Some(q) = g.div_exact(b) {
        g = q;
        e += 1;
    }
    e
}
