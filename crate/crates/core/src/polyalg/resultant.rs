//! Resultants and discriminants: Euclid over `F_q`, CRT over `Z`, and a
//! subresultant PRS over any exact-division ring (used for coefficients in
//! `F_q[t]` / `Z[t]`, and as the oracle for the CRT path).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::intpoly::{crt_combine, symmetric};
use super::{IntPoly, Poly, Ring, UPoly};
use crate::arith::CrtPrimes;
use crate::error::{Error, Result};
use crate::fields::{FieldDesc, Fq};

impl Poly {
    /// `Res(self, g)` by the Euclidean recurrence; zero if either input is zero.
    pub fn resultant(&self, g: &Poly) -> Fq {
        let f = self.desc();
        if self.is_zero() || g.is_zero() {
            return Fq::ZERO;
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        let mut acc = f.one();
        loop {
            let da = a.height() as u64;
            let db = b.height() as u64;
            if db == 0 {
                return f.mul(acc, f.pow(b.lc(), da as u128));
            }
            if da == 0 {
                return f.mul(acc, f.pow(a.lc(), db as u128));
            }
            let r = a.rem(&b).expect("nonzero divisor");
            if r.is_zero() {
                return Fq::ZERO;
            }
            let dr = r.height() as u64;
            // Res(a,b) = (-1)^(da db) Res(b,a) = (-1)^(da db) lc(b)^(da-dr) Res(b,r)
            let mut factor = f.pow(b.lc(), (da - dr) as u128);
            if da % 2 == 1 && db % 2 == 1 {
                factor = f.neg(factor);
            }
            acc = f.mul(acc, factor);
            a = b;
            b = r;
        }
    }

    /// `disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)` for nonconstant `f`,
    /// normalized so that `disc = lc^(2d-2) prod_{i<j} (r_i - r_j)^2` even when
    /// `deg f' < d - 1` in small characteristic.
    pub fn discriminant(&self) -> Result<Fq> {
        let f = self.desc();
        let d = self.height();
        if self.is_constant() {
            return Err(Error::Precondition("discriminant of a constant".into()));
        }
        let df = self.derivative();
        if df.is_zero() {
            return Ok(Fq::ZERO);
        }
        let mut r = self.resultant(&df);
        let e = d as i64 - 2 - df.height() as i64;
        let lc = self.lc();
        r = if e >= 0 {
            f.mul(r, f.pow(lc, e as u128))
        } else {
            f.mul(r, f.inv(lc).expect("nonzero"))
        };
        if (d * (d - 1) / 2) % 2 == 1 {
            r = f.neg(r);
        }
        Ok(r)
    }
}

/// Resultant by the subresultant PRS (no content removal), exact over any
/// integral domain with exact division.
pub fn subresultant<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> Option<R> {
    let like = a.coeffs().first().or(b.coeffs().first())?.clone();
    if a.is_zero() || b.is_zero() {
        return Some(like.zero_like());
    }
    let deg = |p: &UPoly<R>| p.degree().finite().unwrap();
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            negate = true;
        }
    }
    let mut g = like.one_like();
    let mut h = like.one_like();
    while deg(&b) > 0 {
        let (da, db) = (deg(&a), deg(&b));
        let delta = (da - db) as u64;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Some(like.zero_like());
        }
        a = b;
        b = r.div_exact_scalar(&g.mul(&h.pow(delta)))?;
        g = a.lc().unwrap().clone();
        if delta > 0 {
            h = g.pow(delta).div_exact(&h.pow(delta - 1))?;
        }
    }
    let da = deg(&a) as u64;
    let res = if da == 0 {
        like.one_like()
    } else {
        b.lc().unwrap().pow(da).div_exact(&h.pow(da - 1))?
    };
    Some(if negate { res.neg() } else { res })
}

/// Generic discriminant `(-1)^(d(d-1)/2) Res(f, f') / lc(f)` over an exact
/// ring, with the same small-characteristic correction as [`Poly::discriminant`].
pub fn discriminant_generic<R: Ring>(f: &UPoly<R>) -> Option<R> {
    let d = f.degree().finite()?;
    if d == 0 {
        return None;
    }
    let df = f.derivative();
    let lc = f.lc()?.clone();
    if df.is_zero() {
        return Some(lc.zero_like());
    }
    let r = subresultant(f, &df)?;
    let e = d as i64 - 2 - df.degree().finite().unwrap() as i64;
    let r = if e >= 0 {
        r.mul(&lc.pow(e as u64))
    } else {
        r.div_exact(&lc)?
    };
    Some(if (d * (d - 1) / 2) % 2 == 1 { r.neg() } else { r })
}

fn bits_of(n: &BigUint) -> u64 {
    n.bits()
}

/// `Res(f, g)` over `Z` by CRT over 31-bit primes. The number of primes is
/// fixed up front from the Hadamard bound `|Res| <= |f|_2^deg g * |g|_2^deg f`,
/// the residues are computed in parallel and merged in prime order, so the
/// result does not depend on scheduling.
pub fn crt_resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (m, n) = (f.height() as u32, g.height() as u32);
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    if m == 0 {
        return f.lc().pow(n);
    }
    if n == 0 {
        return g.lc().pow(m);
    }
    // need prod(p)^2 > 4 * |f|^(2n) |g|^(2m)
    let b2 = f.norm2_sq().magnitude().pow(n) * g.norm2_sq().magnitude().pow(m);
    let need_bits = bits_of(&b2) + 3;
    let lf = f.lc();
    let lg = g.lc();
    let mut primes = Vec::new();
    let mut have_bits = 0u64;
    for p in CrtPrimes::new() {
        let pb = BigInt::from(p);
        if (&lf % &pb).is_zero() || (&lg % &pb).is_zero() {
            continue;
        }
        primes.push(p);
        // each prime exceeds 2^30, so contributes >= 60 bits to prod^2
        have_bits += 60;
        if have_bits >= need_bits {
            break;
        }
    }
    let residues: Vec<u64> = primes
        .par_iter()
        .map(|&p| {
            let fd = FieldDesc::prime(p).expect("CRT moduli are prime");
            f.reduce(fd).resultant(&g.reduce(fd)).c0
        })
        .collect();
    let mut acc = vec![BigInt::from(residues[0])];
    let mut modulus = BigInt::from(primes[0]);
    for (&p, &r) in primes.iter().zip(&residues).skip(1) {
        crt_combine(&mut acc, &modulus, &[r], p);
        modulus *= BigInt::from(p);
    }
    symmetric(&acc[0], &modulus)
}

impl IntPoly {
    pub fn resultant(&self, g: &IntPoly) -> BigInt {
        crt_resultant(self, g)
    }

    /// Integer discriminant of a nonconstant polynomial via the CRT resultant.
    pub fn discriminant(&self) -> Result<BigInt> {
        let d = self.height();
        if self.is_constant() {
            return Err(Error::Precondition("discriminant of a constant".into()));
        }
        let r = crt_resultant(self, &self.derivative());
        let q = r / self.lc();
        Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
    }

    /// Same value via the subresultant PRS; slow, kept as an oracle.
    pub fn discriminant_prs(&self) -> Result<BigInt> {
        let u: UPoly<BigInt> = UPoly::new(self.coeffs().to_vec());
        discriminant_generic(&u).ok_or_else(|| Error::Precondition("discriminant of a constant".into()))
    }

    pub fn resultant_prs(&self, g: &IntPoly) -> BigInt {
        let a: UPoly<BigInt> = UPoly::new(self.coeffs().to_vec());
        let b: UPoly<BigInt> = UPoly::new(g.coeffs().to_vec());
        subresultant(&a, &b).unwrap_or_default()
    }
}

/// Residue of `x` modulo a small prime as u64.
#[allow(dead_code)]
pub(crate) fn mod_u64(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let r = x % &pb;
    (if r.is_negative() { r + pb } else { r }).to_u64().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn random(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> IntPoly {
        let mut v: Vec<BigInt> = (0..deg).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
        let mut top = 0;
        while top == 0 {
            top = rng.gen_range(-bound..=bound);
        }
        v.push(BigInt::from(top));
        IntPoly::new(v)
    }

    #[test]
    fn cubic_discriminant() {
        let f = ip(&[1, 1, 2, 1]);
        // 18abc - 4a^3 c + a^2 b^2 - 4 b^3 - 27 c^2 with (a,b,c) = (2,1,1)
        let (a, b, c) = (2i64, 1i64, 1i64);
        let formula = 18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c;
        assert_eq!(formula, -23);
        assert_eq!(f.discriminant().unwrap(), BigInt::from(-23));
        assert_eq!(f.discriminant_prs().unwrap(), BigInt::from(-23));
    }

    #[test]
    fn quadratic_discriminant_over_z_t() {
        // x^2 + t as a polynomial in x over Z[t]: b^2 - 4ac = -4t
        let t = IntPoly::t();
        let f = UPoly::new(vec![t.clone(), IntPoly::zero(), IntPoly::one()]);
        assert_eq!(discriminant_generic(&f).unwrap(), ip(&[0, -4]));
    }

    #[test]
    fn crt_matches_prs_up_to_degree_20() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let f = { let n = rng.gen_range(1..=20); random(&mut rng, n, 50) };
            let g = { let n = rng.gen_range(1..=20); random(&mut rng, n, 50) };
            assert_eq!(crt_resultant(&f, &g), f.resultant_prs(&g), "f={f} g={g}");
            if f.height() >= 1 {
                assert_eq!(f.discriminant().unwrap(), f.discriminant_prs().unwrap());
            }
        }
    }

    #[test]
    fn resultant_reduces_mod_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let f = { let n = rng.gen_range(1..=8); random(&mut rng, n, 1000) };
            let g = { let n = rng.gen_range(1..=8); random(&mut rng, n, 1000) };
            let r = crt_resultant(&f, &g);
            for p in [3u64, 5, 7, 101, 65_537] {
                let pb = BigInt::from(p);
                if (f.lc() % &pb).is_zero() || (g.lc() % &pb).is_zero() {
                    continue;
                }
                let d = FieldDesc::prime(p).unwrap();
                assert_eq!(f.reduce(d).resultant(&g.reduce(d)).c0, mod_u64(&r, p));
            }
        }
    }

    #[test]
    fn euclid_matches_subresultant_over_fp() {
        let d = FieldDesc::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let f = { let n = rng.gen_range(1..7); random(&mut rng, n, 3) }.reduce(d);
            let g = { let n = rng.gen_range(1..7); random(&mut rng, n, 3) }.reduce(d);
            if f.is_zero() || g.is_zero() {
                continue;
            }
            let uf = UPoly::new(f.coeffs().iter().map(|&c| crate::fields::FieldElem::new(d, c)).collect());
            let ug = UPoly::new(g.coeffs().iter().map(|&c| crate::fields::FieldElem::new(d, c)).collect());
            let sr = subresultant(&uf, &ug).unwrap();
            assert_eq!(f.resultant(&g), sr.value());
        }
    }

    #[test]
    fn discriminant_in_characteristic_p_matches_roots() {
        // (t-1)(t-2)(t-3) over F_3^2 has disc prod (ri - rj)^2 = (1*2*1)^2 = 4 = 1
        let d = FieldDesc::prime(3).unwrap();
        let f = Poly::from_ints(d, &[-1, 1]).mul(&Poly::from_ints(d, &[-2, 1])).mul(&Poly::from_ints(d, &[-3, 1]));
        // roots 1,2,0 in F_3: (1-2)^2 (1-0)^2 (2-0)^2 = 1*1*4 = 4 = 1 mod 3
        assert_eq!(f.discriminant().unwrap(), d.one());
    }
}
