//! Dynamical inseparability degree of `phi = (x - gamma)^2 - c1` over `F_q[t]`.
//!
//! When `c1` is a square over the algebraic closure its root is taken as
//! `u * g`, with `g` the monic square root of `c1 / lc(c1)` and `u` the
//! canonical square root of `lc(c1)`, which may live in `F_{p^2}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::QuadMap;
use crate::polyalg::{Poly, RationalFn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InsepCase {
    NonSquareC1,
    SquareC1NonConstExpr,
    SquareC1ConstExpr,
}

/// Whether `gamma = -c1 - eta * sqrt(c1)` for the canonical root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Singular {
    No,
    Yes { eta: i8 },
}

impl Singular {
    pub fn is_singular(&self) -> bool {
        matches!(self, Singular::Yes { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsepReport {
    pub e: u32,
    pub case: InsepCase,
    pub singular: Singular,
    /// The rational function whose `p`-power degree is `e`.
    pub tested: String,
    /// `tested, tested^(1/p), ...`: each successive `p`-th root.
    pub chain: Vec<String>,
    pub sqrt_c1: Option<String>,
    /// Both square roots of `c1` were tried and gave the same `e`.
    pub root_choice_checked: bool,
}

/// Canonical square root of `c1` over the algebraic closure, or `None` when
/// `c1` is not a constant times a square. The result is over `F_{p^2}` exactly
/// when the leading coefficient is a non-residue in `F_p`.
pub fn canonical_sqrt(c1: &Poly) -> Option<Poly> {
    if c1.is_zero() {
        return Some(c1.clone());
    }
    let g = c1.monic().sqrt_monic()?;
    let f = c1.desc();
    match f.sqrt(c1.lc()) {
        Some(u) => Some(g.scale(u)),
        None => {
            let ext = f.extension();
            let u = ext.sqrt(ext.embed(c1.lc()))?;
            Some(g.lift(ext).ok()?.scale(u))
        }
    }
}

pub fn detect_singular(map: &QuadMap<Poly>) -> Singular {
    let Some(r) = canonical_sqrt(map.c1()) else {
        return Singular::No;
    };
    if map.c1().is_zero() {
        return Singular::No;
    }
    let ext = r.desc();
    let (Ok(g), Ok(c1)) = (map.gamma().lift(ext), map.c1().lift(ext)) else {
        return Singular::No;
    };
    let base = c1.neg();
    if g == base.sub(&r) {
        Singular::Yes { eta: 1 }
    } else if g == base.add(&r) {
        Singular::Yes { eta: -1 }
    } else {
        Singular::No
    }
}

fn chain_of(f: &RationalFn) -> Result<(u32, Vec<String>)> {
    let chain = f.pth_root_chain()?;
    Ok((
        chain.len() as u32 - 1,
        chain.iter().map(|r| r.format()).collect(),
    ))
}

pub fn insep_degree(map: &QuadMap<Poly>) -> Result<InsepReport> {
    map.require_regular()?;
    let singular = detect_singular(map);
    let Some(r) = canonical_sqrt(map.c1()) else {
        let tested = RationalFn::new(map.c2(), map.c1().clone())?;
        let (e, chain) = chain_of(&tested)?;
        return Ok(InsepReport {
            e,
            case: InsepCase::NonSquareC1,
            singular,
            tested: tested.format(),
            chain,
            sqrt_c1: None,
            root_choice_checked: false,
        });
    };
    let ext = r.desc();
    let gc = map.gamma_plus_c1().lift(ext)?;
    // gamma / sqrt(c1) + sqrt(c1) = (gamma + c1) / sqrt(c1)
    let expr = RationalFn::new(gc.clone(), r.clone())?;
    if expr.is_constant() {
        let tested = RationalFn::from_poly(map.c1().clone());
        let (e, chain) = chain_of(&tested)?;
        return Ok(InsepReport {
            e,
            case: InsepCase::SquareC1ConstExpr,
            singular,
            tested: tested.format(),
            chain,
            sqrt_c1: Some(r.format()),
            root_choice_checked: true,
        });
    }
    let (e, chain) = chain_of(&expr)?;
    let (e_other, _) = chain_of(&RationalFn::new(gc, r.neg())?)?;
    if e != e_other {
        return Err(Error::Undefined(format!(
            "inseparability degree depends on the root of c1 ({e} vs {e_other})"
        )));
    }
    Ok(InsepReport {
        e,
        case: InsepCase::SquareC1NonConstExpr,
        singular,
        tested: expr.format(),
        chain,
        sqrt_c1: Some(r.format()),
        root_choice_checked: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDesc;

    fn fmap(p: u64, s: &str) -> QuadMap<Poly> {
        QuadMap::<Poly>::parse(FieldDesc::prime(p).unwrap(), s).unwrap()
    }

    fn map_gc(p: u64, gamma: &str, c1: &str) -> QuadMap<Poly> {
        let f = FieldDesc::prime(p).unwrap();
        QuadMap::new(Poly::parse(f, gamma).unwrap(), Poly::parse(f, c1).unwrap())
    }

    #[test]
    fn x2_plus_t_is_separable() {
        for p in [3, 5, 7, 11, 13] {
            let r = insep_degree(&fmap(p, "x^2+t")).unwrap();
            assert_eq!((r.e, r.case, r.singular), (0, InsepCase::NonSquareC1, Singular::No));
        }
    }

    #[test]
    fn x2_minus_t3_mod_3() {
        let r = insep_degree(&fmap(3, "x^2-t^3")).unwrap();
        assert_eq!((r.e, r.case), (1, InsepCase::NonSquareC1));
        assert_eq!(r.chain, ["t^3+2", "t+2"]);
    }

    #[test]
    fn singular_fixture() {
        let m = map_gc(5, "-t^2-t", "t^2");
        let r = insep_degree(&m).unwrap();
        assert_eq!(r.case, InsepCase::SquareC1ConstExpr);
        assert_eq!(r.singular, Singular::Yes { eta: 1 });
        assert_eq!(r.e, 0);
        assert_eq!(detect_singular(&map_gc(5, "-t^2+t", "t^2")), Singular::Yes { eta: -1 });
        assert_eq!(detect_singular(&fmap(5, "x^2+t")), Singular::No);
    }

    #[test]
    fn square_c1_nonconstant_branch() {
        // c1 = t^2, gamma = t^4: (gamma + c1)/t = t^3 + t
        let r = insep_degree(&map_gc(3, "t^4", "t^2")).unwrap();
        assert_eq!((r.case, r.e), (InsepCase::SquareC1NonConstExpr, 0));
        // gamma = t^4 - t^2, c1 = t^2 over F_3: expression t^3, e = 1
        let r = insep_degree(&map_gc(3, "t^4-t^2", "t^2")).unwrap();
        assert_eq!((r.case, r.e), (InsepCase::SquareC1NonConstExpr, 1));
    }

    #[test]
    fn non_residue_leading_coefficient_uses_extension() {
        // 2 is a non-residue mod 5, so sqrt(2 t^2) lives over F_25
        let c1 = Poly::parse(FieldDesc::prime(5).unwrap(), "2*t^2").unwrap();
        let r = canonical_sqrt(&c1).unwrap();
        assert_eq!(r.desc().degree(), 2);
        assert_eq!(r.square(), c1.lift(r.desc()).unwrap());
        let m = map_gc(5, "t^3", "2*t^2");
        assert_eq!(insep_degree(&m).unwrap().case, InsepCase::SquareC1NonConstExpr);
    }

    #[test]
    fn ill_defined_inputs() {
        assert!(matches!(insep_degree(&fmap(3, "(x-t)^2+t+1")), Err(Error::IllDefined(_))));
        assert!(matches!(insep_degree(&map_gc(3, "t", "0")), Err(Error::IllDefined(_))));
    }
}
