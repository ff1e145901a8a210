//! Stoll's criterion: the arboreal representation of `phi` is surjective up
//! to level `n` exactly when `c_1, ..., c_n` are independent in
//! `k^x / (k^x)^2` for `k` the function field.
//!
//! Square classes are read off squarefree decompositions: over a perfect
//! constant field a squarefree block stays squarefree after any constant
//! extension, so the odd-multiplicity blocks, refined into a coprime base,
//! give exact coordinates without factoring into irreducibles.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use super::bitmatrix::{BitMatrix, BitRow};
use crate::error::{Error, Result};
use crate::orbit::{OrbitCache, QuadMap};
use crate::polyalg::{coprime_base, IntPoly, Poly};
use crate::zsig::{OrbitRing, FACTOR_DEGREE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StollMode {
    /// Classes over the algebraic closure of the constants: units are squares.
    #[default]
    Geometric,
    /// Classes over the constant field itself, with unit coordinates.
    Arithmetic,
}

/// The constant factor of an orbit element, up to squares.
pub enum UnitClass {
    /// Over `F_q`: whether the leading coefficient is a non-square.
    Field(bool),
    /// Over `Z`: the rational constant `sign * content`.
    Integer(BigInt),
}

/// Rings whose fraction fields have computable square classes.
pub trait SquareClassRing: OrbitRing {
    /// Squarefree blocks of odd multiplicity (normalized, pairwise coprime).
    fn odd_blocks(&self) -> Result<Vec<Self>>;
    fn unit_class(&self) -> UnitClass;
}

impl SquareClassRing for Poly {
    fn odd_blocks(&self) -> Result<Vec<Poly>> {
        if self.is_constant() {
            return Ok(Vec::new());
        }
        Ok(self
            .squarefree_decomposition()?
            .factors
            .into_iter()
            .filter(|(_, m)| m % 2 == 1)
            .map(|(g, _)| g)
            .collect())
    }

    fn unit_class(&self) -> UnitClass {
        UnitClass::Field(!self.desc().is_square(self.lc()))
    }
}

impl SquareClassRing for IntPoly {
    fn odd_blocks(&self) -> Result<Vec<IntPoly>> {
        Ok(self
            .squarefree_decomposition()?
            .factors
            .into_iter()
            .filter(|(_, m)| m % 2 == 1)
            .map(|(g, _)| g)
            .collect())
    }

    fn unit_class(&self) -> UnitClass {
        let mut u = self.content();
        if self.lc().is_negative() {
            u = -u;
        }
        UnitClass::Integer(u)
    }
}

/// Pairwise coprime integers `> 1`, none a perfect square, such that every
/// input is a product of powers of them times a square.
fn integer_square_base(values: &[BigUint]) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = Vec::new();
    let mut todo: Vec<BigUint> = values.to_vec();
    while let Some(x) = todo.pop() {
        if x.is_one() {
            continue;
        }
        match base.iter().position(|b| !b.gcd(&x).is_one()) {
            None => base.push(x),
            Some(i) => {
                // b = g (b/g) and x = g (x/g); every piece is refined again
                let b = base.swap_remove(i);
                let g = b.gcd(&x);
                todo.push(&b / &g);
                todo.push(&x / &g);
                todo.push(g);
            }
        }
    }
    base.sort();
    base.dedup();
    base.retain(|b| {
        let r = b.sqrt();
        &r * &r != *b
    });
    base
}

fn valuation(mut x: BigUint, b: &BigUint) -> u32 {
    let mut e = 0;
    while (&x % b).bits() == 0 {
        x /= b;
        e += 1;
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StollReport {
    pub map: String,
    pub ring: String,
    pub depth: usize,
    pub mode: StollMode,
    /// Column labels: unit coordinates first in arithmetic mode, then the
    /// coprime polynomial base (text up to degree 64, else `[degree d]`).
    pub base: Vec<String>,
    /// Row `i` is the class of `c_(i+1)`.
    pub parity_matrix: Vec<String>,
    pub rank: usize,
    /// Largest `m` such that `c_1, ..., c_m` are independent.
    pub surjective_up_to: usize,
}

fn label<P: OrbitRing>(b: &P) -> String {
    if b.height() <= FACTOR_DEGREE_CAP {
        b.to_string()
    } else {
        format!("[degree {}]", b.height())
    }
}

pub fn stoll_rank<P: SquareClassRing>(
    map: &QuadMap<P>,
    depth: usize,
    mode: StollMode,
) -> Result<StollReport> {
    map.require_nonsquare()?;
    stoll_rank_cached(&OrbitCache::new(map.clone()), depth, mode)
}

pub fn stoll_rank_cached<P: SquareClassRing>(
    cache: &OrbitCache<P>,
    depth: usize,
    mode: StollMode,
) -> Result<StollReport> {
    let map = cache.map();
    map.require_nonsquare()?;
    let mut blocks: Vec<P> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let mut units = Vec::with_capacity(depth);
    for i in 1..=depth {
        let c = cache.c(i);
        if c.vanishes() {
            return Err(Error::Precondition(format!("c_{i} = 0 has no square class")));
        }
        for b in c.odd_blocks()? {
            blocks.push(b);
            owner.push(i - 1);
        }
        units.push(c.unit_class());
    }
    let (base, exps) = coprime_base(&blocks);

    let mut unit_labels: Vec<String> = Vec::new();
    let mut unit_bits: Vec<Vec<usize>> = vec![Vec::new(); depth];
    if mode == StollMode::Arithmetic {
        let ints: Vec<BigUint> = units
            .iter()
            .filter_map(|u| match u {
                UnitClass::Integer(v) => Some(v.magnitude().clone()),
                UnitClass::Field(_) => None,
            })
            .collect();
        let primes = integer_square_base(&ints);
        match units.first() {
            Some(UnitClass::Field(_)) => unit_labels.push("nonsquare constant".into()),
            Some(UnitClass::Integer(_)) => {
                unit_labels.push("-1".into());
                unit_labels.extend(primes.iter().map(|p| p.to_string()));
            }
            None => {}
        }
        for (i, u) in units.iter().enumerate() {
            match u {
                UnitClass::Field(ns) => {
                    if *ns {
                        unit_bits[i].push(0);
                    }
                }
                UnitClass::Integer(v) => {
                    if v.is_negative() {
                        unit_bits[i].push(0);
                    }
                    for (j, p) in primes.iter().enumerate() {
                        if valuation(v.magnitude().clone(), p) % 2 == 1 {
                            unit_bits[i].push(1 + j);
                        }
                    }
                }
            }
        }
    }
    let offset = unit_labels.len();
    let cols = offset + base.len();
    let mut rows: Vec<BitRow> = (0..depth).map(|_| BitRow::zeros(cols)).collect();
    for (i, bits) in unit_bits.iter().enumerate() {
        for &b in bits {
            rows[i].flip(b);
        }
    }
    for (k, e) in exps.iter().enumerate() {
        for (j, &m) in e.iter().enumerate() {
            if m % 2 == 1 {
                rows[owner[k]].flip(offset + j);
            }
        }
    }
    let mut matrix = BitMatrix::new(cols);
    for r in rows {
        matrix.push(r);
    }
    let (rank, independent) = matrix.echelon();
    let surjective_up_to = independent.iter().take_while(|&&b| b).count();
    let mut labels = unit_labels;
    labels.extend(base.iter().map(label));
    Ok(StollReport {
        map: map.to_string(),
        ring: map.c1().ring_name(),
        depth,
        mode,
        base: labels,
        parity_matrix: matrix.to_strings(),
        rank,
        surjective_up_to,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StabilityCertificate {
    /// Full geometric rank: the geometric image is the whole automorphism
    /// group of the tree to this level, hence transitive, hence `phi^(n)` is
    /// irreducible over `k-bar(t)` for every `n <= depth`.
    CertifiedStable { depth: usize },
    /// Rank deficiency says nothing about stability either way.
    Unknown,
}

pub fn geometric_stability_certificate<P: SquareClassRing>(
    map: &QuadMap<P>,
    depth: usize,
) -> Result<StabilityCertificate> {
    let r = stoll_rank(map, depth, StollMode::Geometric)?;
    Ok(if r.surjective_up_to == depth {
        StabilityCertificate::CertifiedStable { depth }
    } else {
        StabilityCertificate::Unknown
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDesc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fmap(p: u64, s: &str) -> QuadMap<Poly> {
        QuadMap::<Poly>::parse(FieldDesc::prime(p).unwrap(), s).unwrap()
    }

    fn zmap(s: &str) -> QuadMap<IntPoly> {
        QuadMap::<IntPoly>::parse(s).unwrap()
    }

    /// Square classes by full factorization: the oracle for the coprime-base
    /// route.
    fn factored_rank(map: &QuadMap<Poly>, depth: usize) -> usize {
        let cache = OrbitCache::new(map.clone());
        let mut irr: Vec<Poly> = Vec::new();
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        for i in 1..=depth {
            let f = cache.c(i).factor().unwrap();
            let odd: Vec<Poly> = f
                .factors
                .into_iter()
                .filter(|(_, m)| m % 2 == 1)
                .map(|(g, _)| g)
                .collect();
            for g in &odd {
                if !irr.contains(g) {
                    irr.push(g.clone());
                }
            }
            rows.push(odd);
        }
        let mut m = BitMatrix::new(irr.len());
        for r in rows {
            let mut b = BitRow::zeros(irr.len());
            for g in r {
                b.set(irr.iter().position(|h| *h == g).unwrap(), true);
            }
            m.push(b);
        }
        m.rank()
    }

    #[test]
    fn x2_plus_t_mod_5_full_rank() {
        let r = stoll_rank(&fmap(5, "x^2+t"), 4, StollMode::Geometric).unwrap();
        assert_eq!((r.rank, r.surjective_up_to), (4, 4));
        assert_eq!(factored_rank(&fmap(5, "x^2+t"), 4), 4);
    }

    #[test]
    fn constant_c1_modes() {
        let m = zmap("(x+t)^2+1");
        assert_eq!(*m.c1(), IntPoly::from_i64s(&[-1]));
        assert_eq!(stoll_rank(&m, 1, StollMode::Geometric).unwrap().rank, 0);
        let a = stoll_rank(&m, 1, StollMode::Arithmetic).unwrap();
        assert_eq!(a.rank, 1);
        assert_eq!(a.base, vec!["-1"]);
        assert_eq!(
            geometric_stability_certificate(&m, 1).unwrap(),
            StabilityCertificate::Unknown
        );
    }

    #[test]
    fn isotrivial_map_is_deficient() {
        let r = stoll_rank(&fmap(3, "(x-t)^2+t+1"), 6, StollMode::Geometric).unwrap();
        assert!(r.rank < 6);
        assert_eq!(r.surjective_up_to, 2);
    }

    #[test]
    fn stability_certificates() {
        assert_eq!(
            geometric_stability_certificate(&zmap("x^2+t"), 8).unwrap(),
            StabilityCertificate::CertifiedStable { depth: 8 }
        );
        assert_eq!(
            geometric_stability_certificate(&fmap(3, "x^2+t"), 11).unwrap(),
            StabilityCertificate::CertifiedStable { depth: 11 }
        );
    }

    #[test]
    fn coprime_route_matches_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..40 {
            let p = [3u64, 5, 7][rng.gen_range(0..3)];
            let f = FieldDesc::prime(p).unwrap();
            let rand_poly = |rng: &mut ChaCha8Rng, d: usize| {
                Poly::new(f, (0..=d).map(|_| f.from_u64(rng.gen_range(0..p))).collect())
            };
            let m = QuadMap::new(rand_poly(&mut rng, 1), rand_poly(&mut rng, 2));
            if m.c1().is_zero() {
                continue;
            }
            let cache = OrbitCache::new(m.clone());
            if (1..=4).any(|i| cache.c(i).is_zero()) {
                continue;
            }
            let r = stoll_rank(&m, 4, StollMode::Geometric).unwrap();
            assert_eq!(r.rank, factored_rank(&m, 4), "{m}");
        }
    }

    #[test]
    fn integer_units() {
        let base = integer_square_base(&[
            BigUint::from(12u32),
            BigUint::from(18u32),
            BigUint::from(9u32),
        ]);
        // 12 = 4*3, 18 = 2*9: classes live on 2 and 3
        assert_eq!(base, vec![BigUint::from(2u32), BigUint::from(3u32)]);
        // 2*t and 8*t share a class over Q(t)
        let m = QuadMap::new(IntPoly::zero(), IntPoly::from_i64s(&[0, 2]));
        let r = stoll_rank(&m, 1, StollMode::Arithmetic).unwrap();
        assert_eq!(r.rank, 1);
    }
}
