//! Uniform bound over `Q`: the characteristic-zero solver handles all but
//! finitely many primes, and the remaining ones are re-solved after reduction.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::bound::{effective_bound, effective_bound_char0, EffectiveBound};
use crate::arith::odd_primes_up_to;
use crate::error::Result;
use crate::fields::FieldDesc;
use crate::intfactor::factor_integer;
use crate::orbit::QuadMap;
use crate::polyalg::{crt_resultant, IntPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedPrime {
    pub prime: String,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalPrimes {
    /// Primes where the reduced map stops being a regular input
    /// (`c1 = 0` or isotrivial); they are excluded from the uniform bound.
    pub t: Vec<TaggedPrime>,
    /// Primes where the characteristic-zero constants may fail; includes `t`.
    pub s: Vec<TaggedPrime>,
    /// Integers the factoring budget could not split; their prime divisors
    /// are missing from `s`.
    pub unfactored: Vec<String>,
    /// Every odd prime up to this bound is in `s`: below it a nonconstant
    /// `p`-th power fits in the degrees involved.
    pub pth_power_cap: u64,
    pub complete: bool,
}

#[derive(Default)]
struct Collector {
    tags: BTreeMap<BigUint, BTreeSet<String>>,
    unfactored: BTreeSet<BigUint>,
}

impl Collector {
    fn add(&mut self, v: &BigInt, effort: u64, why: &str) {
        // a vanishing quantity carries no information about particular primes
        if v.is_zero() {
            return;
        }
        let f = factor_integer(v.magnitude(), effort);
        for (p, _) in f.primes {
            if p != BigUint::from(2u8) {
                self.tags.entry(p).or_default().insert(why.to_string());
            }
        }
        self.unfactored.extend(f.cofactors);
    }

    fn tag(&mut self, p: u64, why: &str) {
        self.tags
            .entry(BigUint::from(p))
            .or_default()
            .insert(why.to_string());
    }
}

fn tagged(m: &BTreeMap<BigUint, BTreeSet<String>>) -> Vec<TaggedPrime> {
    m.iter()
        .map(|(p, r)| TaggedPrime {
            prime: p.to_string(),
            reasons: r.iter().cloned().collect(),
        })
        .collect()
}

fn nonconstant_part(f: &IntPoly) -> IntPoly {
    f.sub(&IntPoly::constant(f.coeff(0)))
}

/// Odd primes of bad reduction for a regular map over `Z[t]`, each tagged
/// with the reasons it was included.
pub fn exceptional_primes(map: &QuadMap<IntPoly>, effort: u64) -> Result<ExceptionalPrimes> {
    map.require_regular()?;
    let (gamma, c1) = (map.gamma(), map.c1());
    let gc = map.gamma_plus_c1();
    let c2 = map.c2();

    let mut t = Collector::default();
    t.add(&c1.content(), effort, "c1 vanishes mod p");
    t.add(
        &nonconstant_part(&gc).content(),
        effort,
        "gamma + c1 becomes constant mod p",
    );

    let mut s = Collector::default();
    if !gamma.is_zero() {
        s.add(&gamma.lc(), effort, "leading coefficient of gamma");
    }
    s.add(&c1.lc(), effort, "leading coefficient of c1");
    s.add(&gc.lc(), effort, "leading coefficient of gamma + c1");
    s.add(&c2.content(), effort, "c2 vanishes mod p");
    s.add(&c2.lc(), effort, "leading coefficient of c2");
    s.add(&c1.derivative().content(), effort, "c1 becomes a p-th power");
    let w = c2.derivative().mul(c1).sub(&c2.mul(&c1.derivative()));
    s.add(&w.content(), effort, "c2/c1 becomes a p-th power");
    let two = IntPoly::constant(BigInt::from(2));
    let w2 = two
        .mul(&gc.derivative())
        .mul(c1)
        .sub(&gc.mul(&c1.derivative()));
    s.add(&w2.content(), effort, "(gamma + c1)/sqrt(c1) becomes a p-th power");
    if let Some(o) = c1.square_obstruction() {
        s.add(&o, effort, "c1 becomes a square");
    }
    let d = c1.squarefree_part()?;
    if !d.is_constant() {
        s.add(&d.lc(), effort, "leading coefficient of the squarefree part of c1");
        s.add(
            &crt_resultant(&d, &d.derivative()),
            effort,
            "squarefree part of c1 acquires a repeated factor",
        );
    }
    for f in [&c2, &gc.add(&two), &gc.neg().add(&two)] {
        if f.is_zero() || f.is_constant() {
            continue;
        }
        let r = f.squarefree_part()?;
        if !r.is_constant() {
            s.add(
                &crt_resultant(&r, &r.derivative()),
                effort,
                "radical degree of an ingredient drops",
            );
        }
    }
    let cap = 2 * map.height_profile().h_phi as u64;
    for p in odd_primes_up_to(cap) {
        s.tag(p, "small enough for a nonconstant p-th power");
    }
    for (p, r) in &t.tags {
        s.tags.entry(p.clone()).or_default().extend(r.iter().cloned());
    }
    s.unfactored.extend(t.unfactored.iter().cloned());
    Ok(ExceptionalPrimes {
        t: tagged(&t.tags),
        s: tagged(&s.tags),
        complete: s.unfactored.is_empty(),
        unfactored: s.unfactored.iter().map(|n| n.to_string()).collect(),
        pth_power_cap: cap,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeBound {
    pub prime: u64,
    pub reasons: Vec<String>,
    pub e: u32,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub n_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalBound {
    /// `max(N, N_q)`: bounds the Zsigmondy index of every reduction outside `T`.
    pub n_phi: u32,
    pub generic: EffectiveBound,
    pub exceptional: ExceptionalPrimes,
    pub per_prime: Vec<PrimeBound>,
    /// Primes of `S \ T` that could not be reduced (too large for the
    /// field arithmetic).
    pub skipped: Vec<String>,
    pub complete: bool,
}

pub fn global_bound(map: &QuadMap<IntPoly>, effort: u64) -> Result<GlobalBound> {
    let generic = effective_bound_char0(map)?;
    let exceptional = exceptional_primes(map, effort)?;
    let excluded: BTreeSet<&str> = exceptional.t.iter().map(|p| p.prime.as_str()).collect();
    let mut work = Vec::new();
    let mut skipped = Vec::new();
    for tp in &exceptional.s {
        if excluded.contains(tp.prime.as_str()) {
            continue;
        }
        match tp.prime.parse::<BigUint>().ok().and_then(|p| p.to_u64()) {
            Some(p) if p < 1 << 32 => work.push((p, tp.reasons.clone())),
            _ => skipped.push(tp.prime.clone()),
        }
    }
    let per_prime = work
        .into_par_iter()
        .map(|(q, reasons)| -> Result<PrimeBound> {
            let reduced = map.reduce(FieldDesc::prime(q)?);
            let eb = effective_bound(&reduced)?;
            let c = eb.constants.as_ref().expect("map bounds carry constants");
            Ok(PrimeBound {
                prime: q,
                reasons,
                e: c.e,
                a: c.a,
                b: c.b,
                n_bound: eb.n_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n_phi = per_prime
        .iter()
        .map(|b| b.n_bound)
        .fold(generic.n_bound, u32::max);
    Ok(GlobalBound {
        n_phi,
        complete: exceptional.complete && skipped.is_empty(),
        generic,
        exceptional,
        per_prime,
        skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub prime: u64,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessScan {
    pub cap: u64,
    pub depth: usize,
    pub bound: u32,
    pub primes_checked: usize,
    /// Primes whose reduction is not a regular input (`c1 = 0` or isotrivial).
    pub primes_skipped: Vec<u64>,
    /// Reductions with a Zsigmondy index above `bound`.
    pub violations: Vec<Violation>,
}

/// Direct Zsigmondy scans of the reductions at odd primes up to `cap`,
/// looking for members above `bound`.
pub fn soundness_scan(
    map: &QuadMap<IntPoly>,
    bound: u32,
    cap: u64,
    depth: usize,
) -> Result<SoundnessScan> {
    let primes = odd_primes_up_to(cap);
    let rows: Vec<(u64, Option<Vec<usize>>)> = primes
        .par_iter()
        .map(|&p| {
            let m = map.reduce(FieldDesc::prime(p)?);
            if m.require_regular().is_err() {
                return Ok((p, None));
            }
            let r = super::zsigmondy_set(&m, depth)?;
            let high: Vec<usize> = r.members.into_iter().filter(|&n| n > bound as usize).collect();
            Ok((p, Some(high)))
        })
        .collect::<Result<_>>()?;
    let mut scan = SoundnessScan {
        cap,
        depth,
        bound,
        primes_checked: 0,
        primes_skipped: Vec::new(),
        violations: Vec::new(),
    };
    for (p, r) in rows {
        match r {
            None => scan.primes_skipped.push(p),
            Some(high) => {
                scan.primes_checked += 1;
                if !high.is_empty() {
                    scan.violations.push(Violation {
                        prime: p,
                        members: high,
                    });
                }
            }
        }
    }
    Ok(scan)
}
