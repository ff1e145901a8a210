//! Factorization over `F_q`: squarefree decomposition, distinct-degree
//! factorization, then Cantor–Zassenhaus equal-degree splitting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{cmp_poly, Factorization, Poly};
use crate::error::Result;
use crate::fields::{FieldDesc, FieldElem, Fq};

pub const DEFAULT_SEED: u64 = 0x5eed_a7b0_4d15;

#[derive(Clone, Copy, Debug)]
pub struct FactorOptions {
    pub seed: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { seed: DEFAULT_SEED }
    }
}

fn words(e: u128) -> [u64; 2] {
    [e as u64, (e >> 64) as u64]
}

impl Poly {
    /// Irreducible factorization with the default seed.
    pub fn factor(&self) -> Result<Factorization<Poly, FieldElem>> {
        self.factor_with(FactorOptions::default())
    }

    /// Irreducible factorization; factors are monic and sorted by degree, then
    /// coefficients from the top down.
    pub fn factor_with(&self, opts: FactorOptions) -> Result<Factorization<Poly, FieldElem>> {
        let sfd = self.squarefree_decomposition()?;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut factors = Vec::new();
        for (g, m) in &sfd.factors {
            for (block, d) in ddf(g) {
                for irr in edf(&block, d, &mut rng) {
                    factors.push((irr, *m));
                }
            }
        }
        factors.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        Ok(Factorization {
            unit: sfd.unit,
            factors,
            complete: true,
        })
    }

    pub fn is_irreducible(&self) -> bool {
        if self.is_constant() {
            return false;
        }
        match self.factor() {
            Ok(f) => f.factors.len() == 1 && f.factors[0].1 == 1,
            Err(_) => false,
        }
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial: products
/// of all irreducible factors of each degree.
fn ddf(f: &Poly) -> Vec<(Poly, usize)> {
    let desc = f.desc();
    let q = words(desc.order());
    let t = Poly::t(desc);
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = t.rem(&f).unwrap_or_else(|_| t.clone());
    let mut d = 0;
    while f.height() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&q, &f);
        let g = f.gcd_monic(&h.sub(&t));
        if !g.is_constant() {
            f = f.div_exact(&g).expect("gcd divides");
            h = h.rem(&f).expect("nonzero");
            out.push((g, d));
        }
    }
    if !f.is_constant() {
        let n = f.height();
        out.push((f, n));
    }
    out
}

/// Splits a monic product of distinct degree-`d` irreducibles.
fn edf(g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = g.height();
    if n == d {
        return vec![g.clone()];
    }
    let desc = g.desc();
    let q = words(desc.order());
    let half = words((desc.order() - 1) / 2);
    loop {
        let a = Poly::new(desc, (0..n).map(|_| desc.random(rng)).collect());
        if a.is_constant() {
            continue;
        }
        // a^((q^d - 1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
        let mut norm = a.clone();
        let mut cur = a.clone();
        for _ in 1..d {
            cur = cur.powmod(&q, g);
            norm = norm.mul(&cur).rem(g).expect("nonzero");
        }
        let b = norm.powmod(&half, g).sub(&Poly::one(desc));
        let h = g.gcd_monic(&b);
        if !h.is_constant() && h.height() < n {
            let mut out = edf(&h, d, rng);
            out.extend(edf(&g.div_exact(&h).expect("gcd divides"), d, rng));
            return out;
        }
    }
}

/// All monic irreducible polynomials of degree `d` over `desc`, by exhaustive
/// sieving (test oracle; exponential in `d`).
pub fn irreducibles_of_degree(desc: FieldDesc, d: usize) -> Vec<Poly> {
    let elems: Vec<Fq> = desc.elements().collect();
    let q = elems.len();
    let total = q.pow(d as u32);
    let lower: Vec<Poly> = (1..=d / 2).flat_map(|k| irreducibles_of_degree(desc, k)).collect();
    let mut out = Vec::new();
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut r = idx;
        for _ in 0..d {
            coeffs.push(elems[r % q]);
            r /= q;
        }
        coeffs.push(desc.one());
        let f = Poly::new(desc, coeffs);
        if lower.iter().all(|g| !g.divides(&f)) {
            out.push(f);
        }
    }
    out.sort_by(cmp_poly);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn reconstruct(f: &Factorization<Poly, FieldElem>, desc: FieldDesc) -> Poly {
        f.factors.iter().fold(Poly::constant(desc, f.unit.value()), |acc, (g, m)| {
            acc.mul(&g.pow(*m as u64))
        })
    }

    /// Factor by trial division with all monic irreducibles of degree <= 3.
    fn trial_division(f: &Poly) -> Vec<(Poly, u32)> {
        let desc = f.desc();
        let mut rest = f.monic();
        let mut out = Vec::new();
        for d in 1..=3 {
            for g in irreducibles_of_degree(desc, d) {
                let mut m = 0;
                while let Some(q) = rest.div_exact(&g) {
                    rest = q;
                    m += 1;
                }
                if m > 0 {
                    out.push((g, m));
                }
            }
        }
        if !rest.is_constant() {
            // remaining cofactor has no factor of degree <= 3, so with deg <= 6 it is irreducible
            out.push((rest, 1));
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        out
    }

    #[test]
    fn examples() {
        let d5 = FieldDesc::prime(5).unwrap();
        let f = Poly::from_ints(d5, &[0, 1, 1]).factor().unwrap();
        assert_eq!(
            f.factors,
            vec![(Poly::from_ints(d5, &[0, 1]), 1), (Poly::from_ints(d5, &[1, 1]), 1)]
        );
        let d3 = FieldDesc::prime(3).unwrap();
        assert!(Poly::from_ints(d3, &[1, 0, 1]).is_irreducible());
        // t^3+2t^2+t+1: f(0)=1, f(1)=2, f(2)=1 -> no roots
        let c = Poly::from_ints(d3, &[1, 1, 2, 1]);
        assert!((0..3).all(|x| c.eval(d3.from_u64(x)) != Fq::ZERO));
        assert!(c.is_irreducible());
    }

    #[test]
    fn matches_trial_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for p in [3u64, 5, 7] {
            let desc = FieldDesc::prime(p).unwrap();
            for _ in 0..150 {
                let deg = rng.gen_range(1..=6);
                let mut c: Vec<Fq> = (0..deg).map(|_| desc.random(&mut rng)).collect();
                c.push(desc.from_u64(rng.gen_range(1..p)));
                let f = Poly::new(desc, c);
                let fac = f.factor().unwrap();
                assert!(fac.complete);
                assert_eq!(reconstruct(&fac, desc), f);
                assert_eq!(fac.factors, trial_division(&f), "f = {f} over F_{p}");
            }
        }
    }

    #[test]
    fn factors_over_quadratic_extension() {
        let d9 = FieldDesc::quadratic(3).unwrap();
        // t^2+1 is irreducible over F_3 but splits over F_9
        let f = Poly::from_ints(d9, &[1, 0, 1]);
        let fac = f.factor().unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(reconstruct(&fac, d9), f);
    }

    #[test]
    fn irreducible_counts() {
        // Gauss: number of monic irreducibles of degree d over F_q
        let d3 = FieldDesc::prime(3).unwrap();
        assert_eq!(irreducibles_of_degree(d3, 1).len(), 3);
        assert_eq!(irreducibles_of_degree(d3, 2).len(), 3);
        assert_eq!(irreducibles_of_degree(d3, 3).len(), 8);
        assert_eq!(irreducibles_of_degree(d3, 4).len(), 18);
    }

    #[test]
    fn seed_does_not_change_result() {
        let d = FieldDesc::prime(11).unwrap();
        let f = Poly::from_ints(d, &[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5]);
        let a = f.factor_with(FactorOptions { seed: 1 }).unwrap();
        let b = f.factor_with(FactorOptions { seed: 2 }).unwrap();
        assert_eq!(a, b);
    }
}
