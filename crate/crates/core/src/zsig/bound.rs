//! Bound constants `A`, `B` and the exclusion solver.
//!
//! For `n` in the Zsigmondy set the squarefree part `d_n` of `c_n` divides
//! `prod_{i <= n/2} c_i * phi^(i)(0)` (only the `c_i` when `gamma = 0`), so
//! `h(d_n)` is bounded by the height laws, while `h(c_{n-1}) <= A h(d_n) + B`
//! (`c_{n-2}` for singular maps). Past the point where the left side is known
//! exactly it doubles at every step and eventually beats the right side for
//! good.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::insep::{canonical_sqrt, insep_degree, Singular};
use crate::orbit::{HeightLaw, HeightProfile, OrbitCache, QuadMap};
use crate::polyalg::{IntPoly, Poly, TPoly};

/// The solver gives up (with an error) past this index.
pub const SOLVER_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundIngredients {
    /// `h(d_1)`; for singular maps the squarefree part of `sqrt(c1)` instead.
    pub h_d1: usize,
    pub h_rad_c1: usize,
    /// `h(rad c2)`; for singular maps `h(rad(sqrt(c1) + 2))`, maximized over
    /// both roots.
    pub h_rad_second: usize,
    pub h_gamma: usize,
    pub h_c1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundConstants {
    /// 0 for maps over `Z[t]` (heights taken over `Q`).
    pub characteristic: u64,
    pub e: u32,
    pub p_pow_e: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    /// Smallest `n` for which the height inequality is proven.
    pub n0: u32,
    pub singular: Singular,
    pub ingredients: BoundIngredients,
    pub profile: HeightProfile,
}

fn overflow() -> Error {
    Error::CapExceeded("bound constants overflow 64 bits".into())
}

fn assemble(
    characteristic: u64,
    e: u32,
    singular: Singular,
    ingredients: BoundIngredients,
    profile: HeightProfile,
) -> Result<BoundConstants> {
    let pe = if characteristic == 0 {
        1
    } else {
        characteristic.checked_pow(e).ok_or_else(overflow)?
    };
    let i = ingredients;
    let inner = (i.h_d1 + 4 + 4 * i.h_rad_c1 + 4 * i.h_rad_second) as u64;
    let head = pe.checked_mul(8).and_then(|a| a.checked_mul(inner)).ok_or_else(overflow)?;
    let (b, n0) = if singular.is_singular() {
        (head + 10 * i.h_c1 as u64, 4)
    } else {
        let mut n0 = 3u32;
        while (profile.h_gc << (n0 - 3)) <= profile.h_phi {
            n0 += 1;
        }
        (head + 4 * i.h_gamma as u64 + 8 * i.h_c1 as u64, n0)
    };
    Ok(BoundConstants {
        characteristic,
        e,
        p_pow_e: pe,
        a: 8 * pe,
        b,
        n0,
        singular,
        ingredients,
        profile,
    })
}

/// Constants of the height inequality over `F_q[t]`, with `e` the dynamical
/// inseparability degree.
pub fn bound_constants(map: &QuadMap<Poly>) -> Result<BoundConstants> {
    map.require_regular()?;
    let insep = insep_degree(map)?;
    let c1 = map.c1();
    let h_rad_c1 = c1.radical()?.height();
    let (h_d1, h_rad_second) = if insep.singular.is_singular() {
        let r = canonical_sqrt(c1).expect("singular maps have a square c1");
        let two = Poly::constant(r.desc(), r.desc().from_u64(2));
        let rad = |f: Poly| -> Result<usize> { Ok(f.radical()?.height()) };
        (
            r.squarefree_part_geometric()?.height(),
            rad(r.add(&two))?.max(rad(r.neg().add(&two))?),
        )
    } else {
        let c2 = map.c2();
        if c2.is_zero() {
            return Err(Error::Precondition("c2 = 0".into()));
        }
        (c1.squarefree_part_geometric()?.height(), c2.radical()?.height())
    };
    let ingredients = BoundIngredients {
        h_d1,
        h_rad_c1,
        h_rad_second,
        h_gamma: map.gamma().height(),
        h_c1: c1.height(),
    };
    assemble(map.desc().p(), insep.e, insep.singular, ingredients, map.height_profile())
}

fn rad_height(f: &IntPoly) -> Result<usize> {
    Ok(f.squarefree_decomposition()?
        .factors
        .iter()
        .map(|(g, _)| g.height())
        .sum())
}

/// Characteristic-zero constants (`e = 0`) for a map over `Z[t]`, with
/// squarefree parts and radicals taken over `Q`.
pub fn bound_constants_char0(map: &QuadMap<IntPoly>) -> Result<BoundConstants> {
    map.require_regular()?;
    let c1 = map.c1();
    // gamma = -c1 - eta sqrt(c1) forces sqrt(c1) = -eta (gamma + c1) in Z[t]
    let s = map.gamma_plus_c1().neg();
    let singular = if s.square() == *c1 {
        Singular::Yes {
            eta: if s.lc().is_negative() { -1 } else { 1 },
        }
    } else {
        Singular::No
    };
    let (h_d1, h_rad_second) = if singular.is_singular() {
        let two = IntPoly::constant(BigInt::from(2));
        (
            s.squarefree_part()?.height(),
            rad_height(&s.add(&two))?.max(rad_height(&s.neg().add(&two))?),
        )
    } else {
        let c2 = map.c2();
        if c2.is_zero() {
            return Err(Error::Precondition("c2 = 0".into()));
        }
        (c1.squarefree_part()?.height(), rad_height(&c2)?)
    };
    let ingredients = BoundIngredients {
        h_d1,
        h_rad_c1: rad_height(c1)?,
        h_rad_second,
        h_gamma: map.gamma().height(),
        h_c1: c1.height(),
    };
    assemble(0, 0, singular, ingredients, map.height_profile())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub n: u32,
    pub lhs: u128,
    pub rhs: u128,
    /// `lhs > rhs`: `n` cannot lie in the Zsigmondy set.
    pub excluded: bool,
    /// The left side beats the uniform majorant of the right side, which
    /// then persists for all larger `n` once it holds twice in a row.
    pub permanent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectiveBound {
    /// Every Zsigmondy index is at most this.
    pub n_bound: u32,
    pub n0: u32,
    pub ledger: Vec<LedgerRow>,
    /// Human-readable form of the inequality being solved.
    pub inequality: String,
    pub constants: Option<BoundConstants>,
}

struct Row {
    lhs: u128,
    rhs: u128,
    /// Uniform majorant of the right side, when the left side is exact.
    majorant: Option<u128>,
}

fn solve(n0: u32, mut row: impl FnMut(u32) -> Result<Row>) -> Result<(u32, Vec<LedgerRow>)> {
    let mut ledger: Vec<LedgerRow> = Vec::new();
    let mut n = n0;
    loop {
        if n > SOLVER_CAP {
            return Err(Error::CapExceeded(format!(
                "exclusion did not become permanent by n = {SOLVER_CAP}"
            )));
        }
        let r = row(n)?;
        let permanent = r.majorant.is_some_and(|m| r.lhs > m);
        let stop = permanent && ledger.last().is_some_and(|l| l.permanent);
        ledger.push(LedgerRow {
            n,
            lhs: r.lhs,
            rhs: r.rhs,
            excluded: r.lhs > r.rhs,
            permanent,
        });
        if stop {
            break;
        }
        n += 1;
    }
    let n_bound = ledger
        .iter()
        .filter(|l| !l.excluded)
        .map(|l| l.n)
        .max()
        .unwrap_or(0)
        .max(n0 - 1);
    Ok((n_bound, ledger))
}

fn checked(v: Option<u128>) -> Result<u128> {
    v.ok_or_else(|| Error::CapExceeded("height arithmetic overflow".into()))
}

fn law(l: Option<HeightLaw>) -> Result<HeightLaw> {
    l.ok_or_else(|| Error::CapExceeded("height law out of range".into()))
}

fn solve_orbit<P: TPoly>(consts: BoundConstants, cache: &OrbitCache<P>) -> Result<EffectiveBound> {
    let prof = consts.profile;
    let gamma_zero = cache.map().gamma().vanishes();
    let shift = if consts.singular.is_singular() { 2 } else { 1 };
    let (a, b) = (consts.a as u128, consts.b as u128);
    // h(c_i) <= 2^(i-1) h(phi) and h(phi^(i)(0)) <= 2^i h(phi) in every case
    let sigma = prof.h_phi as u128 * if gamma_zero { 1 } else { 3 };
    let (n_bound, ledger) = solve(consts.n0, |n| {
        let k = n - shift;
        let (lhs, exact) = match law(prof.c_law(k))? {
            HeightLaw::Exact(v) => (v as u128, true),
            HeightLaw::AtMost(_) => (cache.c(k as usize).height() as u128, false),
        };
        let half = n / 2;
        let mut sum = 0u128;
        for i in 1..=half {
            sum += law(prof.c_law(i))?.bound() as u128;
            if !gamma_zero {
                sum += law(prof.crit0_law(i))?.bound() as u128;
            }
        }
        let rhs = checked(a.checked_mul(sum).and_then(|x| x.checked_add(b)))?;
        let majorant = checked(
            a.checked_mul(sigma)
                .and_then(|x| x.checked_mul(1u128 << half))
                .and_then(|x| x.checked_add(b)),
        )?;
        Ok(Row {
            lhs,
            rhs,
            majorant: exact.then_some(majorant),
        })
    })?;
    let idx = if shift == 2 { "n-2" } else { "n-1" };
    let terms = if gamma_zero {
        "h(c_i)"
    } else {
        "h(c_i) + h(phi^(i)(0))"
    };
    Ok(EffectiveBound {
        n_bound,
        n0: consts.n0,
        ledger,
        inequality: format!(
            "h(c_({idx})) <= {a} * sum_{{i<=n/2}} ({terms}) + {b}"
        ),
        constants: Some(consts),
    })
}

/// Largest `n` the height inequality cannot exclude, over `F_q[t]`.
pub fn effective_bound(map: &QuadMap<Poly>) -> Result<EffectiveBound> {
    let consts = bound_constants(map)?;
    solve_orbit(consts, &OrbitCache::new(map.clone()))
}

/// The same solver with characteristic-zero constants (`e = 0`).
pub fn effective_bound_char0(map: &QuadMap<IntPoly>) -> Result<EffectiveBound> {
    let consts = bound_constants_char0(map)?;
    solve_orbit(consts, &OrbitCache::new(map.clone()))
}

/// Solver for the closed-form inequality valid for every map with
/// `h(gamma) != h(c1)`:
/// `2^(n-2) <= 8 p^e (3 * 2^floor(n/2) - 3) + 136 p^e + 12`.
pub fn remark_bound(p_pow_e: u64) -> Result<EffectiveBound> {
    let pe = p_pow_e as u128;
    let (n_bound, ledger) = solve(3, |n| {
        let k = 1u128 << (n / 2);
        Ok(Row {
            lhs: 1u128 << (n - 2),
            rhs: 8 * pe * (3 * k - 3) + 136 * pe + 12,
            majorant: Some(8 * pe * 3 * k + 136 * pe + 12),
        })
    })?;
    Ok(EffectiveBound {
        n_bound,
        n0: 3,
        ledger,
        inequality: format!(
            "2^(n-2) <= 8*{p_pow_e}*(3*2^floor(n/2) - 3) + 136*{p_pow_e} + 12"
        ),
        constants: None,
    })
}
