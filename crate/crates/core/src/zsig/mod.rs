//! Squarefree Zsigmondy sets of adjusted orbits, the effective height bounds
//! that confine them, and the global bound over `Q`.
//!
//! An irreducible `r` dividing `c_m` (`m < n`) divides `c_n` exactly when it
//! divides `phi^(n-m)(0)`, because `c_n = phi^(n-m)(c_m)` for `m >= 2` and
//! `c_n = phi^(n-1)(-c_1)` for `m = 1`. So the non-primitive support of `c_n`
//! is found with one gcd per earlier index against a short critical orbit
//! reduced modulo `c_m`, and no factorization of `c_n` is needed to decide
//! membership.

mod bound;
mod global;

pub use bound::{
    bound_constants, bound_constants_char0, effective_bound, effective_bound_char0, remark_bound,
    BoundConstants, BoundIngredients, EffectiveBound, LedgerRow,
};
pub use global::{
    exceptional_primes, global_bound, soundness_scan, ExceptionalPrimes, GlobalBound, PrimeBound,
    SoundnessScan, TaggedPrime, Violation,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::{OrbitCache, QuadMap};
use crate::polyalg::{IntPoly, Poly, TPoly};

/// Above this degree the primitive part is reported as squarefree blocks
/// instead of irreducible factors.
pub const FACTOR_DEGREE_CAP: usize = 64;

/// Coefficient rings the Zsigmondy scan runs over.
pub trait OrbitRing: TPoly {
    /// `phi^(j)(0)` reduced modulo `m` where division is available, exact
    /// otherwise; only its gcd with `m` is used.
    fn crit0_mod(cache: &OrbitCache<Self>, j: usize, m: &Self) -> Self;
    /// A nonzero constant times a square over the algebraic closure.
    fn is_closure_square(&self) -> bool;
    /// Factors of `self` with multiplicities, and whether they are irreducible.
    fn divisors(&self, factor: bool) -> Result<(Vec<(Self, u32)>, bool)>;
    fn ring_name(&self) -> String;
}

impl OrbitRing for Poly {
    fn crit0_mod(cache: &OrbitCache<Self>, j: usize, m: &Self) -> Self {
        let map = cache.map();
        let mut x = Poly::zero(m.desc());
        for _ in 0..j {
            x = map.apply(&x).rem(m).expect("nonzero modulus");
        }
        x
    }

    fn is_closure_square(&self) -> bool {
        self.is_square_in_closure().unwrap_or(false)
    }

    fn divisors(&self, factor: bool) -> Result<(Vec<(Self, u32)>, bool)> {
        if self.is_constant() {
            return Ok((Vec::new(), true));
        }
        let f = if factor {
            self.factor()?
        } else {
            self.squarefree_decomposition()?
        };
        Ok((f.factors, f.complete))
    }

    fn ring_name(&self) -> String {
        let f = self.desc();
        match f.degree() {
            1 => format!("F_{}[t]", f.p()),
            _ => format!("F_{}^2[t]", f.p()),
        }
    }
}

impl OrbitRing for IntPoly {
    fn crit0_mod(cache: &OrbitCache<Self>, j: usize, _m: &Self) -> Self {
        cache.crit0(j).as_ref().clone()
    }

    fn is_closure_square(&self) -> bool {
        self.square_obstruction().is_some_and(|o| o == num_bigint::BigInt::from(0))
    }

    fn divisors(&self, _factor: bool) -> Result<(Vec<(Self, u32)>, bool)> {
        if self.is_constant() {
            return Ok((Vec::new(), true));
        }
        Ok((self.squarefree_decomposition()?.factors, false))
    }

    fn ring_name(&self) -> String {
        "Z[t]".into()
    }
}

/// `c_n` stripped of every irreducible shared with an earlier nonzero orbit
/// element: the product of its primitive divisors, normalized.
pub fn primitive_part<P: OrbitRing>(cache: &OrbitCache<P>, n: usize) -> Result<P> {
    let cn = cache.c(n);
    if cn.vanishes() {
        return Err(Error::Precondition(format!("c_{n} vanishes")));
    }
    let mut r = cn.normalize();
    for m in 1..n {
        let cm = cache.c(m);
        if cm.vanishes() {
            continue;
        }
        let g = cm.gcd_norm(&P::crit0_mod(cache, n - m, &cm));
        if g.is_constant() {
            continue;
        }
        loop {
            let h = r.gcd_norm(&g);
            if h.is_constant() {
                break;
            }
            r = r.div_exact(&h).expect("gcd divides");
        }
    }
    Ok(r)
}

/// Irreducible factors of `c_n` (with multiplicity) dividing no earlier
/// nonzero `c_i`.
pub fn primitive_divisors(cache: &OrbitCache<Poly>, n: usize) -> Result<Vec<(Poly, u32)>> {
    let r = primitive_part(cache, n)?;
    Ok(r.divisors(true)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divisor {
    /// Text of the factor; omitted above [`FACTOR_DEGREE_CAP`].
    pub poly: Option<String>,
    pub degree: usize,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZsigEntry {
    pub n: usize,
    pub degree: usize,
    pub vanishes: bool,
    pub member: bool,
    /// Primitive divisors; squarefree blocks rather than irreducibles when
    /// `irreducible` is false.
    pub primitive: Vec<Divisor>,
    pub irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZsigmondyReport {
    pub map: String,
    pub ring: String,
    pub scanned_up_to: usize,
    pub members: Vec<usize>,
    /// Indices with `c_n = 0`; they count as members and are skipped as
    /// comparison indices.
    pub vanishing: Vec<usize>,
    pub per_n: Vec<ZsigEntry>,
}

/// Exact membership in the squarefree Zsigmondy set for `1 <= n <= depth`.
pub fn zsigmondy_set<P: OrbitRing>(map: &QuadMap<P>, depth: usize) -> Result<ZsigmondyReport> {
    map.require_nonsquare()?;
    let cache = OrbitCache::new(map.clone());
    zsigmondy_scan(&cache, depth)
}

pub fn zsigmondy_scan<P: OrbitRing>(cache: &OrbitCache<P>, depth: usize) -> Result<ZsigmondyReport> {
    cache.map().require_nonsquare()?;
    let mut per_n = Vec::with_capacity(depth);
    for n in 1..=depth {
        let cn = cache.c(n);
        if cn.vanishes() {
            per_n.push(ZsigEntry {
                n,
                degree: 0,
                vanishes: true,
                member: true,
                primitive: Vec::new(),
                irreducible: true,
            });
            continue;
        }
        let r = primitive_part(cache, n)?;
        let member = r.is_closure_square();
        let (divs, irreducible) = r.divisors(r.height() <= FACTOR_DEGREE_CAP)?;
        per_n.push(ZsigEntry {
            n,
            degree: cn.height(),
            vanishes: false,
            member,
            primitive: divs
                .iter()
                .map(|(g, m)| Divisor {
                    poly: (g.height() <= FACTOR_DEGREE_CAP).then(|| g.to_string()),
                    degree: g.height(),
                    mult: *m,
                })
                .collect(),
            irreducible,
        });
    }
    Ok(ZsigmondyReport {
        map: cache.map().to_string(),
        ring: cache.map().c1().ring_name(),
        scanned_up_to: depth,
        members: per_n.iter().filter(|e| e.member).map(|e| e.n).collect(),
        vanishing: per_n.iter().filter(|e| e.vanishes).map(|e| e.n).collect(),
        per_n,
    })
}
