//! Polynomials in `t` with arbitrary-precision integer coefficients.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{format_terms, Degree, Factorization, Poly, Ring, TPoly};
use crate::arith::CrtPrimes;
use crate::error::{Error, Result};
use crate::fields::FieldDesc;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn t() -> Self {
        IntPoly::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn height(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn square(&self) -> IntPoly {
        let n = self.coeffs.len();
        if n == 0 {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); 2 * n - 1];
        for i in 0..n {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            let a2 = a << 1;
            for j in i + 1..n {
                out[i + j] += &a2 * &self.coeffs[j];
            }
            out[2 * i] += a * a;
        }
        IntPoly::new(out)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Nonnegative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Exact quotient over `Z`, `None` if it does not exist.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let dn = d.coeffs.len() - 1;
        let dl = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + dn].div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (j, dj) in d.coeffs[..dn].iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r[..dn].iter().all(|c| c.is_zero()).then(|| IntPoly::new(q))
    }

    /// Reduction modulo the characteristic of `desc`.
    pub fn reduce(&self, desc: FieldDesc) -> Poly {
        Poly::new(desc, self.coeffs.iter().map(|c| desc.from_bigint(c)).collect())
    }

    /// Primitive gcd with positive leading coefficient (content ignored),
    /// computed by CRT over word-size primes with an exact trial-division
    /// certificate. Zero when both inputs are zero.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let a = self.primitive_part();
        let b = other.primitive_part();
        if a.is_constant() || b.is_constant() {
            return IntPoly::one();
        }
        let l = a.lc().gcd(&b.lc());
        let mut best = usize::MAX;
        let mut acc: Vec<BigInt> = Vec::new();
        let mut modulus = BigInt::one();
        let mut last: Option<IntPoly> = None;
        for p in CrtPrimes::new() {
            let pb = BigInt::from(p);
            if (a.lc() % &pb).is_zero() || (b.lc() % &pb).is_zero() {
                continue;
            }
            let f = FieldDesc::prime(p).expect("CRT moduli are prime");
            let g = a.reduce(f).gcd_monic(&b.reduce(f));
            let d = g.height();
            if d == 0 {
                return IntPoly::one();
            }
            if d > best {
                continue;
            }
            let lp = f.from_bigint(&l);
            let scaled: Vec<u64> = (0..=d).map(|i| f.mul(g.coeff(i), lp).c0).collect();
            if d < best {
                best = d;
                acc = scaled.iter().map(|&c| BigInt::from(c)).collect();
                modulus = pb;
                last = None;
                continue;
            }
            crt_combine(&mut acc, &modulus, &scaled, p);
            modulus *= &pb;
            let cand = IntPoly::new(acc.iter().map(|c| symmetric(c, &modulus)).collect())
                .primitive_part();
            if last.as_ref() == Some(&cand)
                && a.div_exact(&cand).is_some()
                && b.div_exact(&cand).is_some()
            {
                return cand;
            }
            last = Some(cand);
        }
        unreachable!("ran out of CRT primes")
    }

    /// Squarefree decomposition over `Q` with integer bookkeeping:
    /// `self = unit * prod a_i^i`, each `a_i` primitive with positive leading
    /// coefficient, squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Result<Factorization<IntPoly, BigInt>> {
        if self.is_zero() {
            return Err(Error::Undefined("squarefree decomposition of 0".into()));
        }
        let mut unit = self.content();
        if self.lc().is_negative() {
            unit = -unit;
        }
        let f = self.primitive_part();
        let mut factors = Vec::new();
        if !f.is_constant() {
            let df = f.derivative();
            let a0 = f.gcd(&df);
            let mut b = f.div_exact(&a0).expect("gcd divides");
            let mut c = df.div_exact(&a0).expect("gcd divides");
            let mut d = c.sub(&b.derivative());
            let mut i = 1u32;
            loop {
                let a = b.gcd(&d);
                if !a.is_constant() {
                    factors.push((a.clone(), i));
                }
                b = b.div_exact(&a).expect("gcd divides");
                if b.is_constant() {
                    break;
                }
                c = d.div_exact(&a).expect("gcd divides");
                d = c.sub(&b.derivative());
                i += 1;
            }
        }
        Ok(Factorization {
            unit,
            factors,
            complete: false,
        })
    }

    /// Product of the odd-multiplicity squarefree factors (primitive, positive
    /// leading coefficient); `self` is a rational constant times this times a
    /// square.
    pub fn squarefree_part(&self) -> Result<IntPoly> {
        let sfd = self.squarefree_decomposition()?;
        Ok(sfd
            .factors
            .iter()
            .filter(|(_, m)| m % 2 == 1)
            .fold(IntPoly::one(), |acc, (g, _)| acc.mul(g)))
    }

    /// Integer obstruction to being a square modulo primes.
    ///
    /// Let `Q = self / lc` and let `g` be the unique monic polynomial over
    /// `Z[1/(2 lc)]` with `deg(Q - g^2) < deg(Q)/2`. Returns the content of
    /// `D * (g^2 - Q)` where `D` clears denominators (a product of powers of 2
    /// and of primes dividing `lc`). For an odd prime `p` not dividing `lc`,
    /// `self mod p` is a constant times a square in `F_p-bar[t]` exactly when
    /// `p` divides the returned value. `None` for odd degree (never a square
    /// when the degree is preserved). A zero return means `self` is a square
    /// times a constant over `Q`.
    pub fn square_obstruction(&self) -> Option<BigInt> {
        let n = self.height();
        if self.is_zero() || n % 2 == 1 {
            return None;
        }
        let lc = BigRational::from_integer(self.lc());
        let q: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()) / &lc)
            .collect();
        let m = n / 2;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut g = vec![BigRational::zero(); m + 1];
        g[m] = BigRational::one();
        for k in 1..=m {
            let mut s = BigRational::zero();
            for i in 1..k {
                s += &g[m - i] * &g[m - k + i];
            }
            g[m - k] = (&q[n - k] - s) * &half;
        }
        let mut r = vec![BigRational::zero(); n + 1];
        for i in 0..=m {
            for j in 0..=m {
                r[i + j] += &g[i] * &g[j];
            }
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= qi;
        }
        let den = r
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = r.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        Some(IntPoly::new(ints).content())
    }

    /// The primes of `n` dividing [`square_obstruction`](Self::square_obstruction),
    /// as `gcd(n, obstruction)`, computed in `Z/n` without forming the
    /// obstruction itself. Needs `gcd(n, 2 lc) = 1`; `None` for odd degree or
    /// when that fails.
    pub fn square_obstruction_mod(&self, n: &BigInt) -> Option<BigInt> {
        let deg = self.height();
        if self.is_zero() || deg % 2 == 1 || !(self.lc() * BigInt::from(2)).gcd(n).is_one() {
            return None;
        }
        let md = |x: BigInt| x.mod_floor(n);
        let inv = |x: &BigInt| -> BigInt {
            let e = x.mod_floor(n).extended_gcd(n);
            e.x.mod_floor(n)
        };
        let lc_inv = inv(&self.lc());
        let half = inv(&BigInt::from(2));
        let q: Vec<BigInt> = self.coeffs.iter().map(|c| md(c * &lc_inv)).collect();
        let m = deg / 2;
        let mut g = vec![BigInt::zero(); m + 1];
        g[m] = BigInt::one();
        for k in 1..=m {
            let mut s = BigInt::zero();
            for i in 1..k {
                s += &g[m - i] * &g[m - k + i];
            }
            g[m - k] = md((&q[deg - k] - s) * &half);
        }
        let mut acc = n.clone();
        for (k, qk) in q.iter().enumerate().take(deg - m) {
            let lo = k.saturating_sub(m);
            let mut r = -qk.clone();
            for i in lo..=k.min(m) {
                r += &g[i] * &g[k - i];
            }
            acc = acc.gcd(&md(r));
            if acc.is_one() {
                break;
            }
        }
        Some(acc)
    }

    pub fn format(&self) -> String {
        format_terms(
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.sign() == Sign::Minus, c.abs().to_string())),
            "t",
        )
    }

    pub fn parse(s: &str) -> Result<IntPoly> {
        super::parse::parse_poly_terms(s)?.to_int_poly()
    }

    /// Euclidean norm squared of the coefficient vector.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// `acc <- x` with `x = acc mod modulus`, `x = r mod p`.
pub(crate) fn crt_combine(acc: &mut [BigInt], modulus: &BigInt, r: &[u64], p: u64) {
    let pb = BigInt::from(p);
    let m_mod_p = (modulus % &pb).to_u64().unwrap();
    let inv = crate::arith::inv_mod(m_mod_p, p);
    for (a, &ri) in acc.iter_mut().zip(r) {
        let a_mod_p = a.mod_floor(&pb).to_u64().unwrap();
        let diff = crate::arith::sub_mod(ri, a_mod_p, p);
        let k = crate::arith::mul_mod(diff, inv, p);
        *a += modulus * BigInt::from(k);
    }
}

/// Representative of `x mod m` in `(-m/2, m/2]`.
pub(crate) fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

impl Ring for IntPoly {
    fn zero_like(&self) -> Self {
        IntPoly::zero()
    }
    fn one_like(&self) -> Self {
        IntPoly::one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        IntPoly::constant(BigInt::from(n))
    }
    fn vanishes(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        IntPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        IntPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        IntPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        IntPoly::neg(self)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        IntPoly::div_exact(self, o)
    }
    fn square(&self) -> Self {
        IntPoly::square(self)
    }
}

impl TPoly for IntPoly {
    fn degree(&self) -> Degree {
        IntPoly::degree(self)
    }
    fn t_like(&self) -> Self {
        IntPoly::t()
    }
    fn derivative(&self) -> Self {
        IntPoly::derivative(self)
    }
    fn gcd_norm(&self, o: &Self) -> Self {
        self.gcd(o)
    }
    fn normalize(&self) -> Self {
        self.primitive_part()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.format())
    }
}
