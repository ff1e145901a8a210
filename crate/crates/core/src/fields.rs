//! Prime fields `F_p` (odd `p < 2^32`) and their quadratic extensions `F_{p^2}`.
//!
//! Elements are stored as raw coordinate pairs [`Fq`] and interpreted through a
//! [`FieldDesc`]. `F_{p^2}` is presented as `F_p[u]/(u^2 + b)` where `u^2 + b` is
//! the least monic irreducible quadratic when coefficients are compared from the
//! `x^1` term down; since some `x^2 + b` is always irreducible, the linear term
//! is zero and `u^2 = -b` is a non-residue.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::arith::{add_mod, inv_mod, is_prime_u64, mul_mod, pow_mod, sub_mod};
use crate::error::{Error, Result};

/// Description of `F_p` (`k = 1`) or `F_{p^2}` (`k = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u64,
    k: u8,
    /// Constant term `b` of the modulus `u^2 + b`; zero when `k = 1`.
    modulus_b: u64,
    /// `u^2 = -b`.
    u_sq: u64,
}

/// Raw coordinates `c0 + c1*u`, each reduced into `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    pub(crate) c0: u64,
    pub(crate) c1: u64,
}

impl Fq {
    pub const ZERO: Fq = Fq { c0: 0, c1: 0 };

    pub fn coords(&self) -> [u64; 2] {
        [self.c0, self.c1]
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }
}

impl FieldDesc {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::FieldTooLarge(p));
        }
        if p == 2 || !is_prime_u64(p) {
            return Err(Error::NotAnOddPrime(p));
        }
        Ok(FieldDesc {
            p,
            k: 1,
            modulus_b: 0,
            u_sq: 0,
        })
    }

    /// The quadratic extension `F_{p^2}`.
    pub fn quadratic(p: u64) -> Result<Self> {
        let base = FieldDesc::prime(p)?;
        let b = (1..p)
            .find(|&b| base.legendre(p - b) == -1)
            .expect("every odd prime field has a non-residue");
        Ok(FieldDesc {
            p,
            k: 2,
            modulus_b: b,
            u_sq: p - b,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree over the prime field (1 or 2).
    pub fn degree(&self) -> u8 {
        self.k
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    /// Modulus coefficients `[b, a, 1]` of `u^2 + a*u + b`; `None` for `F_p`.
    pub fn modulus(&self) -> Option<[u64; 3]> {
        (self.k == 2).then_some([self.modulus_b, 0, 1])
    }

    /// `F_{p^2}` over the same prime (identity when already quadratic).
    pub fn extension(&self) -> FieldDesc {
        if self.k == 2 {
            *self
        } else {
            FieldDesc::quadratic(self.p).expect("p was validated at construction")
        }
    }

    pub fn base(&self) -> FieldDesc {
        FieldDesc {
            p: self.p,
            k: 1,
            modulus_b: 0,
            u_sq: 0,
        }
    }

    /// Embeds an element of the prime subfield.
    pub fn embed(&self, x: Fq) -> Fq {
        debug_assert_eq!(x.c1, 0);
        x
    }

    pub fn in_prime_field(&self, x: Fq) -> bool {
        x.c1 == 0
    }

    // ---- raw arithmetic -------------------------------------------------

    #[inline]
    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fq {
        Fq { c0: 1, c1: 0 }
    }

    pub fn from_u64(&self, n: u64) -> Fq {
        Fq {
            c0: n % self.p,
            c1: 0,
        }
    }

    pub fn from_i64(&self, n: i64) -> Fq {
        Fq {
            c0: n.rem_euclid(self.p as i64) as u64,
            c1: 0,
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Fq {
        let r = n.mod_floor(&BigInt::from(self.p));
        Fq {
            c0: r.to_u64().expect("residue fits in u64"),
            c1: 0,
        }
    }

    /// Element with coordinates `c0 + c1*u`; `c1` must be zero in `F_p`.
    pub fn from_coords(&self, c0: u64, c1: u64) -> Result<Fq> {
        if self.k == 1 && c1 % self.p != 0 {
            return Err(Error::DomainMismatch);
        }
        Ok(Fq {
            c0: c0 % self.p,
            c1: c1 % self.p,
        })
    }

    /// The adjoined root `u` of `F_{p^2}`.
    pub fn generator(&self) -> Option<Fq> {
        (self.k == 2).then_some(Fq { c0: 0, c1: 1 })
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq {
            c0: add_mod(a.c0, b.c0, self.p),
            c1: add_mod(a.c1, b.c1, self.p),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        Fq {
            c0: sub_mod(a.c0, b.c0, self.p),
            c1: sub_mod(a.c1, b.c1, self.p),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.sub(Fq::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p;
        if self.k == 1 {
            return Fq {
                c0: mul_mod(a.c0, b.c0, p),
                c1: 0,
            };
        }
        let re = add_mod(
            mul_mod(a.c0, b.c0, p),
            mul_mod(self.u_sq, mul_mod(a.c1, b.c1, p), p),
            p,
        );
        let im = add_mod(mul_mod(a.c0, b.c1, p), mul_mod(a.c1, b.c0, p), p);
        Fq { c0: re, c1: im }
    }

    /// Norm to `F_p`: `c0^2 - u^2 c1^2` (the identity on `F_p`).
    pub fn norm(&self, a: Fq) -> u64 {
        let p = self.p;
        if self.k == 1 {
            return a.c0;
        }
        sub_mod(
            mul_mod(a.c0, a.c0, p),
            mul_mod(self.u_sq, mul_mod(a.c1, a.c1, p), p),
            p,
        )
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let p = self.p;
        if self.k == 1 {
            return Some(Fq {
                c0: inv_mod(a.c0, p),
                c1: 0,
            });
        }
        let n_inv = inv_mod(self.norm(a), p);
        Some(Fq {
            c0: mul_mod(a.c0, n_inv, p),
            c1: mul_mod(sub_mod(0, a.c1, p), n_inv, p),
        })
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, mut base: Fq, mut exp: u128) -> Fq {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `a^p`. The identity on `F_p`, conjugation `u -> -u` on `F_{p^2}`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        Fq {
            c0: a.c0,
            c1: sub_mod(0, a.c1, self.p),
        }
    }

    /// Inverse of [`frobenius`](Self::frobenius); Frobenius is an involution here.
    pub fn frobenius_inv(&self, a: Fq) -> Fq {
        self.frobenius(a)
    }

    /// Legendre symbol of `a` in `F_p`: 0, 1 or -1.
    fn legendre(&self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if pow_mod(a, ((self.p - 1) / 2) as u128, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a.is_zero() || self.legendre(self.norm(a)) == 1
    }

    /// Tonelli–Shanks square root in `F_p` (any root; callers canonicalize).
    fn sqrt_prime(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(pow_mod(a, ((p + 1) / 4) as u128, p));
        }
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let z = (2..p).find(|&z| self.legendre(z) == -1).expect("non-residue exists");
        let mut m = s;
        let mut c = pow_mod(z, q as u128, p);
        let mut t = pow_mod(a, q as u128, p);
        let mut r = pow_mod(a, q.div_ceil(2) as u128, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u128 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        Some(r)
    }

    fn any_sqrt(&self, a: Fq) -> Option<Fq> {
        let p = self.p;
        if self.k == 1 {
            return self.sqrt_prime(a.c0).map(|r| Fq { c0: r, c1: 0 });
        }
        if a.c1 == 0 {
            if let Some(r) = self.sqrt_prime(a.c0) {
                return Some(Fq { c0: r, c1: 0 });
            }
            // a = y^2 * u^2 with y in F_p
            let y = self.sqrt_prime(mul_mod(a.c0, inv_mod(self.u_sq, p), p))?;
            return Some(Fq { c0: 0, c1: y });
        }
        let s = self.sqrt_prime(self.norm(a))?;
        let half = inv_mod(2, p);
        for cand in [add_mod(a.c0, s, p), sub_mod(a.c0, s, p)] {
            let cand = mul_mod(cand, half, p);
            if cand == 0 {
                continue;
            }
            if let Some(x) = self.sqrt_prime(cand) {
                let y = mul_mod(a.c1, inv_mod(mul_mod(2, x, p), p), p);
                return Some(Fq { c0: x, c1: y });
            }
        }
        None
    }

    /// Canonical square root: of `r` and `-r`, the one with the
    /// lexicographically smaller coordinate vector `(c0, c1)`.
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        let r = self.any_sqrt(a)?;
        debug_assert_eq!(self.mul(r, r), a);
        Some(std::cmp::min(r, self.neg(r)))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq {
            c0: rng.gen_range(0..self.p),
            c1: if self.k == 2 { rng.gen_range(0..self.p) } else { 0 },
        }
    }

    /// Every element of the field, in coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        let hi = if self.k == 2 { self.p } else { 1 };
        (0..hi).flat_map(move |c1| (0..self.p).map(move |c0| Fq { c0, c1 }))
    }

    pub fn format(&self, a: Fq) -> String {
        if self.k == 1 {
            a.c0.to_string()
        } else {
            format!("{}+{}*u", a.c0, a.c1)
        }
    }

    /// Parses the output of [`format`](Self::format). Integers are reduced mod `p`.
    pub fn parse(&self, s: &str) -> Result<Fq> {
        let s = s.trim();
        let int = |t: &str, pos: usize| -> Result<u64> {
            let v: BigInt = t
                .trim()
                .parse()
                .map_err(|_| Error::parse(pos, format!("expected an integer, got {t:?}")))?;
            Ok(self.from_bigint(&v).c0)
        };
        match s.strip_suffix("*u") {
            Some(head) if self.k == 2 => {
                let split = head
                    .rfind('+')
                    .filter(|&i| i > 0)
                    .ok_or_else(|| Error::parse(0, "expected a+b*u"))?;
                let c0 = int(&head[..split], 0)?;
                let c1 = int(&head[split + 1..], split + 1)?;
                Ok(Fq { c0, c1 })
            }
            Some(_) => Err(Error::DomainMismatch),
            None => Ok(Fq {
                c0: int(s, 0)?,
                c1: 0,
            }),
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^2 (u^2+{})", self.p, self.modulus_b)
        }
    }
}

/// A field element bundled with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    desc: FieldDesc,
    value: Fq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub fn new(desc: FieldDesc, value: Fq) -> Self {
        FieldElem { desc, value }
    }

    pub fn from_i64(desc: FieldDesc, n: i64) -> Self {
        FieldElem::new(desc, desc.from_i64(n))
    }

    pub fn desc(&self) -> FieldDesc {
        self.desc
    }

    pub fn value(&self) -> Fq {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn arith(self, other: FieldElem, op: ArithOp) -> Result<FieldElem> {
        if self.desc != other.desc {
            return Err(Error::DomainMismatch);
        }
        let d = self.desc;
        let v = match op {
            ArithOp::Add => d.add(self.value, other.value),
            ArithOp::Sub => d.sub(self.value, other.value),
            ArithOp::Mul => d.mul(self.value, other.value),
            ArithOp::Div => d.div(self.value, other.value).ok_or(Error::DivisionByZero)?,
        };
        Ok(FieldElem::new(d, v))
    }

    pub fn inv(self) -> Result<FieldElem> {
        self.desc
            .inv(self.value)
            .map(|v| FieldElem::new(self.desc, v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn is_square(&self) -> bool {
        self.desc.is_square(self.value)
    }

    pub fn sqrt(&self) -> Result<FieldElem> {
        self.desc
            .sqrt(self.value)
            .map(|v| FieldElem::new(self.desc, v))
            .ok_or(Error::NotASquare)
    }

    pub fn frobenius(&self) -> FieldElem {
        FieldElem::new(self.desc, self.desc.frobenius(self.value))
    }

    pub fn parse(desc: FieldDesc, s: &str) -> Result<FieldElem> {
        desc.parse(s).map(|v| FieldElem::new(desc, v))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.desc.format(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> FieldDesc {
        FieldDesc::prime(p).unwrap()
    }

    #[test]
    fn rejects_bad_characteristics() {
        assert_eq!(FieldDesc::prime(2), Err(Error::NotAnOddPrime(2)));
        assert_eq!(FieldDesc::prime(9), Err(Error::NotAnOddPrime(9)));
        assert!(matches!(FieldDesc::prime(4_294_967_311), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn inverse_of_three_mod_seven() {
        let d = f(7);
        let three = FieldElem::from_i64(d, 3);
        let one = FieldElem::from_i64(d, 1);
        assert_eq!(one.arith(three, ArithOp::Div).unwrap(), FieldElem::from_i64(d, 5));
    }

    #[test]
    fn add_zero_is_identity() {
        let d = f(11);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = FieldElem::new(d, d.random(&mut rng));
            assert_eq!(a.arith(FieldElem::from_i64(d, 0), ArithOp::Add).unwrap(), a);
        }
    }

    #[test]
    fn division_errors() {
        let d = f(7);
        let a = FieldElem::from_i64(d, 3);
        assert_eq!(
            a.arith(FieldElem::from_i64(d, 0), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        let other = FieldElem::from_i64(f(11), 3);
        assert_eq!(a.arith(other, ArithOp::Add), Err(Error::DomainMismatch));
    }

    /// Brute-force multiplication table of F_9 built from polynomial arithmetic
    /// modulo the chosen irreducible quadratic.
    #[test]
    fn f9_against_polynomial_multiplication_table() {
        let d = FieldDesc::quadratic(3).unwrap();
        let [b, a, _] = d.modulus().unwrap();
        assert_eq!((a, b), (0, 1), "x^2+1 is the least irreducible over F_3");
        for x in d.elements() {
            for y in d.elements() {
                // (x0 + x1 u)(y0 + y1 u) with u^2 = -b, done with plain integers
                let c0 = (x.c0 * y.c0 + 3 * 3 - (b * x.c1 * y.c1) % 3) % 3;
                let c1 = (x.c0 * y.c1 + x.c1 * y.c0) % 3;
                assert_eq!(d.mul(x, y), Fq { c0, c1 });
                if !y.is_zero() {
                    assert_eq!(d.mul(d.div(x, y).unwrap(), y), x);
                }
            }
        }
    }

    #[test]
    fn mul_div_round_trip_in_f101_squared() {
        let d = FieldDesc::quadratic(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = d.random(&mut rng);
            let y = d.random(&mut rng);
            if y.is_zero() {
                continue;
            }
            assert_eq!(d.div(d.mul(x, y), y).unwrap(), x);
        }
    }

    #[test]
    fn inverse_property_many_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [f(3), f(101), f(65_521), FieldDesc::quadratic(7).unwrap(), FieldDesc::quadratic(65_521).unwrap()] {
            for _ in 0..10_000 {
                let a = d.random(&mut rng);
                if let Some(ai) = d.inv(a) {
                    assert_eq!(d.mul(a, ai), d.one());
                } else {
                    assert!(a.is_zero());
                }
            }
        }
    }

    #[test]
    fn squares_mod_seven() {
        let d = f(7);
        let squares: Vec<u64> = (0..7).map(|x| x * x % 7).collect();
        assert!(squares.contains(&2));
        assert!(!squares.contains(&3));
        assert!(d.is_square(d.from_u64(2)));
        assert!(!d.is_square(d.from_u64(3)));
        assert!(d.is_square(d.zero()));
    }

    #[test]
    fn canonical_sqrt_examples() {
        let d = f(7);
        assert_eq!(d.sqrt(d.from_u64(2)), Some(d.from_u64(3)));
        assert_eq!(d.sqrt(d.zero()), Some(d.zero()));
        assert_eq!(d.sqrt(d.one()), Some(d.one()));
        assert_eq!(
            FieldElem::from_i64(d, 3).sqrt(),
            Err(Error::NotASquare)
        );
    }

    #[test]
    fn sqrt_matches_brute_force_below_100() {
        for p in crate::arith::odd_primes_up_to(100) {
            for d in [f(p), FieldDesc::quadratic(p).unwrap()] {
                if d.degree() == 2 && p > 31 {
                    continue;
                }
                for a in d.elements() {
                    let roots: Vec<Fq> = d.elements().filter(|&r| d.mul(r, r) == a).collect();
                    match d.sqrt(a) {
                        Some(r) => assert_eq!(Some(&r), roots.iter().min()),
                        None => assert!(roots.is_empty()),
                    }
                }
            }
        }
    }

    #[test]
    fn euler_criterion_and_square_counts() {
        for p in crate::arith::odd_primes_up_to(11) {
            for d in [f(p), FieldDesc::quadratic(p).unwrap()] {
                let q = d.order();
                let mut nonzero_squares = 0u128;
                for a in d.elements() {
                    let euler = d.pow(a, (q - 1) / 2);
                    assert_eq!(d.is_square(a), a.is_zero() || euler == d.one());
                    if !a.is_zero() && d.is_square(a) {
                        nonzero_squares += 1;
                    }
                }
                assert_eq!(nonzero_squares, (q - 1) / 2);
            }
        }
    }

    #[test]
    fn frobenius_behaviour() {
        let d = f(7);
        for a in d.elements() {
            assert_eq!(d.frobenius(a), a);
        }
        let d9 = FieldDesc::quadratic(3).unwrap();
        // u generates F_9^* iff its order is 8.
        let g = d9
            .elements()
            .find(|&g| (1..8).all(|k| d9.pow(g, k) != d9.one()) && !g.is_zero())
            .unwrap();
        let g3 = d9.pow(g, 3);
        assert_eq!(d9.frobenius(g), g3);
        assert_eq!(d9.pow(g3, 3), g);
        for a in d9.elements() {
            assert_eq!(d9.frobenius(d9.frobenius(a)), a);
            assert_eq!(d9.frobenius(a), d9.pow(a, 3));
        }
    }

    #[test]
    fn sqrt_is_deterministic() {
        let d = FieldDesc::quadratic(10_007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let a = d.random(&mut rng);
            let a2 = d.mul(a, a);
            let r = d.sqrt(a2).unwrap();
            assert_eq!(d.mul(r, r), a2);
            assert_eq!(d.sqrt(a2), Some(r));
        }
    }

    #[test]
    fn text_round_trip() {
        let d = FieldDesc::quadratic(13).unwrap();
        for a in d.elements() {
            let s = d.format(a);
            assert_eq!(d.parse(&s).unwrap(), a);
        }
        let e = f(13);
        assert_eq!(e.format(e.from_i64(-1)), "12");
        assert_eq!(e.parse("12").unwrap(), e.from_i64(-1));
    }
}
