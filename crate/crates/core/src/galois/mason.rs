//! The genus-0 abc inequality over `F_q(t)`: for coprime `a + b + c = 0` with
//! `b/c` nonconstant and a `p^e`-th power but no higher,
//! `h(b/c) <= p^e (|V| - 2)` where `V` is the set of places (finite roots of
//! `abc` over the closure, plus infinity when the degrees are unbalanced).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fields::FieldDesc;
use crate::polyalg::{Poly, RationalFn};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MasonReport {
    pub a: String,
    pub b: String,
    pub c: String,
    /// Set when the inputs do not satisfy the hypotheses; nothing else is
    /// then meaningful.
    pub precondition: Option<String>,
    /// `b/c` is a `p^e`-th power; `e > 0` means the inseparable branch.
    pub e: u32,
    pub lhs: usize,
    pub finite_places: usize,
    pub infinite_place: bool,
    pub rhs: i64,
    pub holds: bool,
}

fn rejected(a: &Poly, b: &Poly, c: &Poly, why: &str) -> MasonReport {
    MasonReport {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        precondition: Some(why.into()),
        e: 0,
        lhs: 0,
        finite_places: 0,
        infinite_place: false,
        rhs: 0,
        holds: false,
    }
}

/// Checks the inequality for `a`, `b` and `c = -a - b`.
pub fn mason_stothers_check(a: &Poly, b: &Poly) -> Result<MasonReport> {
    let c = a.add(b).neg();
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Ok(rejected(a, b, &c, "a, b and c must be nonzero"));
    }
    if !a.gcd(b)?.is_constant() {
        return Ok(rejected(a, b, &c, "a and b are not coprime"));
    }
    let ratio = RationalFn::new(b.clone(), c.clone())?;
    if ratio.is_constant() {
        return Ok(rejected(a, b, &c, "b/c is constant"));
    }
    let e = ratio.pth_power_degree()?;
    let lhs = b.height().max(c.height());
    let finite_places = a.mul(b).mul(&c).radical()?.height();
    let infinite_place = !(a.height() == b.height() && b.height() == c.height());
    let places = finite_places as i64 + i64::from(infinite_place);
    let rhs = (a.desc().p() as i64).pow(e) * (places - 2);
    Ok(MasonReport {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        precondition: None,
        e,
        lhs,
        finite_places,
        infinite_place,
        rhs,
        holds: lhs as i64 <= rhs,
    })
}

fn random_poly(rng: &mut ChaCha8Rng, f: FieldDesc, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    Poly::new(f, (0..=d).map(|_| f.random(rng)).collect())
}

/// `samples` random triples satisfying the hypotheses over `F_p`, a quarter
/// of them `p`-th powers of a separable triple so that `e > 0` occurs.
pub fn mason_random_batch(p: u64, samples: usize, seed: u64) -> Result<Vec<MasonReport>> {
    let f = FieldDesc::prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let mut a = random_poly(&mut rng, f, 6);
        let mut b = random_poly(&mut rng, f, 6);
        if rng.gen_ratio(1, 4) {
            a = a.pow(p);
            b = b.pow(p);
        }
        let r = mason_stothers_check(&a, &b)?;
        if r.precondition.is_none() {
            out.push(r);
        }
    }
    Ok(out)
}
