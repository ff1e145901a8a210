//! Quadratic maps `phi = (x - gamma)^2 - c1` over `F_q[t]` or `Z[t]`, their
//! adjusted post-critical orbits and the height laws those orbits obey.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::FieldDesc;
use crate::polyalg::{discriminant_generic, parse_poly_terms, IntPoly, Poly, TPoly, Terms, UPoly};

/// Largest iterate `phi^(n)(x)` expanded symbolically (degree `2^n` in `x`).
pub const MAX_ITERATE: u32 = 12;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadMap<P> {
    gamma: P,
    c1: P,
}

impl<P: TPoly> QuadMap<P> {
    pub fn new(gamma: P, c1: P) -> Self {
        QuadMap { gamma, c1 }
    }

    pub fn gamma(&self) -> &P {
        &self.gamma
    }

    pub fn c1(&self) -> &P {
        &self.c1
    }

    pub fn apply(&self, x: &P) -> P {
        x.sub(&self.gamma).square().sub(&self.c1)
    }

    /// `c2 = (-c1 - gamma)^2 - c1`.
    pub fn c2(&self) -> P {
        self.apply(&self.c1.neg())
    }

    /// `gamma + c1`, whose degree decides isotriviality.
    pub fn gamma_plus_c1(&self) -> P {
        self.gamma.add(&self.c1)
    }

    pub fn is_isotrivial(&self) -> bool {
        self.gamma_plus_c1().is_constant()
    }

    pub fn require_nonsquare(&self) -> Result<()> {
        if self.c1.vanishes() {
            Err(Error::DegenerateSquare)
        } else {
            Ok(())
        }
    }

    /// Hypotheses shared by the inseparability degree and the bounds.
    pub fn require_regular(&self) -> Result<()> {
        if self.c1.vanishes() {
            return Err(Error::IllDefined("c1 = 0".into()));
        }
        if self.is_isotrivial() {
            return Err(Error::IllDefined(format!(
                "the map is isotrivial (gamma + c1 = {})",
                self.gamma_plus_c1()
            )));
        }
        Ok(())
    }

    pub fn height_profile(&self) -> HeightProfile {
        HeightProfile::new(
            self.gamma.height(),
            self.c1.height(),
            self.gamma_plus_c1().height(),
        )
    }

    /// `phi^(n)(x)` as a polynomial in `x`; `n = 0` gives `x`.
    pub fn iterate(&self, n: u32) -> Result<UPoly<P>> {
        if n > MAX_ITERATE {
            return Err(Error::CapExceeded(format!(
                "iterate of order {n} has degree 2^{n} in x (cap 2^{MAX_ITERATE})"
            )));
        }
        let g = UPoly::constant(self.gamma.clone());
        let c = UPoly::constant(self.c1.clone());
        let mut f = UPoly::x(&self.gamma);
        for _ in 0..n {
            f = f.sub(&g).square().sub(&c);
        }
        Ok(f)
    }

    pub fn format(&self) -> String {
        let f = self.c1.neg();
        let tail = |wrap: bool| {
            if f.vanishes() {
                return String::new();
            }
            let s = f.to_string();
            match (wrap, s.strip_prefix('-')) {
                (false, Some(_)) => s,
                (false, None) => format!("+{s}"),
                (true, _) => format!("+({s})"),
            }
        };
        if self.gamma.vanishes() {
            format!("x^2{}", tail(false))
        } else {
            format!("(x-({}))^2{}", self.gamma, tail(true))
        }
    }
}

impl<P: TPoly> fmt::Display for QuadMap<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// Splits `x^2 + b x + c` into its `x`-coefficients, rejecting anything else.
fn split_quadratic(s: &str) -> Result<(Terms, Terms, Terms)> {
    let terms = parse_poly_terms(s)?;
    if terms.x_degree() != 2 {
        return Err(Error::parse(0, "a map must be quadratic in x"));
    }
    Ok((terms.x_coeff(2), terms.x_coeff(1), terms.x_coeff(0)))
}

impl QuadMap<IntPoly> {
    /// Accepts any text expanding to `x^2 + b x + c` with `b` even.
    pub fn parse(s: &str) -> Result<Self> {
        let (lead, b, c) = split_quadratic(s)?;
        if lead.to_int_poly()? != IntPoly::one() {
            return Err(Error::parse(0, "the map must be monic in x"));
        }
        let b = b.to_int_poly()?;
        let two = BigInt::from(2);
        if b.coeffs().iter().any(|k| !(k % &two).is_zero()) {
            return Err(Error::parse(
                0,
                "over Z the coefficient of x must be even (x^2 + bx + c = (x - gamma)^2 - c1)",
            ));
        }
        let gamma = IntPoly::new(b.coeffs().iter().map(|k| -k / &two).collect());
        let c1 = gamma.square().sub(&c.to_int_poly()?);
        Ok(QuadMap::new(gamma, c1))
    }

    pub fn reduce(&self, desc: FieldDesc) -> QuadMap<Poly> {
        QuadMap::new(self.gamma.reduce(desc), self.c1.reduce(desc))
    }
}

impl QuadMap<Poly> {
    pub fn parse(desc: FieldDesc, s: &str) -> Result<Self> {
        let (lead, b, c) = split_quadratic(s)?;
        if lead.to_poly(desc)? != Poly::one(desc) {
            return Err(Error::parse(0, "the map must be monic in x"));
        }
        let half = desc.inv(desc.from_u64(2)).expect("odd characteristic");
        let gamma = b.to_poly(desc)?.scale(desc.neg(half));
        let c1 = gamma.square().sub(&c.to_poly(desc)?);
        Ok(QuadMap::new(gamma, c1))
    }

    pub fn desc(&self) -> FieldDesc {
        self.gamma.desc()
    }

    pub fn lift(&self, desc: FieldDesc) -> Result<QuadMap<Poly>> {
        Ok(QuadMap::new(self.gamma.lift(desc)?, self.c1.lift(desc)?))
    }
}

/// A map over either coefficient ring, as chosen on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMap {
    Int(QuadMap<IntPoly>),
    Field(QuadMap<Poly>),
}

impl AnyMap {
    /// `modulus = None` reads the map over `Z[t]`.
    pub fn parse(s: &str, modulus: Option<u64>) -> Result<AnyMap> {
        match modulus {
            None => QuadMap::<IntPoly>::parse(s).map(AnyMap::Int),
            Some(p) => QuadMap::<Poly>::parse(FieldDesc::prime(p)?, s).map(AnyMap::Field),
        }
    }

    pub fn ring_label(&self) -> String {
        match self {
            AnyMap::Int(_) => "Z[t]".into(),
            AnyMap::Field(m) => format!("F_{}[t]", m.desc().p()),
        }
    }
}

impl fmt::Display for AnyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyMap::Int(m) => m.fmt(f),
            AnyMap::Field(m) => m.fmt(f),
        }
    }
}

/// `kappa = log2(h(gamma) / h(gamma + c1)) + 1`. Only the comparisons
/// `n <= kappa` are ever needed, and for integer `n` they reduce to
/// `n <= floor(kappa)` whether or not the logarithm is rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Kappa {
    pub floor: u32,
    /// The ratio is a power of two, so `kappa = floor` exactly.
    pub exact: bool,
}

impl Kappa {
    fn from_ratio(num: usize, den: usize) -> Kappa {
        let mut k = 0u32;
        while den << (k + 1) <= num {
            k += 1;
        }
        Kappa {
            floor: k + 1,
            exact: den << k == num,
        }
    }

    pub fn at_least(&self, n: u32) -> bool {
        n <= self.floor
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", content = "value", rename_all = "snake_case")]
pub enum HeightLaw {
    Exact(usize),
    AtMost(usize),
}

impl HeightLaw {
    pub fn admits(&self, h: usize) -> bool {
        match *self {
            HeightLaw::Exact(v) => h == v,
            HeightLaw::AtMost(v) => h <= v,
        }
    }

    pub fn bound(&self) -> usize {
        match *self {
            HeightLaw::Exact(v) | HeightLaw::AtMost(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, HeightLaw::Exact(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeightProfile {
    pub h_gamma: usize,
    pub h_c1: usize,
    pub h_phi: usize,
    pub h_gc: usize,
    pub kappa: Option<Kappa>,
}

impl HeightProfile {
    pub fn new(h_gamma: usize, h_c1: usize, h_gc: usize) -> Self {
        let kappa = (h_gamma == h_c1 && h_gc > 0).then(|| Kappa::from_ratio(h_gamma, h_gc));
        HeightProfile {
            h_gamma,
            h_c1,
            h_phi: h_gamma.max(h_c1),
            h_gc,
            kappa,
        }
    }

    pub fn is_isotrivial(&self) -> bool {
        self.h_gc == 0
    }

    /// Unequal heights of `gamma` and `c1` (the first family of height laws).
    pub fn unbalanced(&self) -> bool {
        self.h_gamma != self.h_c1
    }

    /// Height law for `h(c_n)`; `None` for isotrivial maps.
    pub fn c_law(&self, n: u32) -> Option<HeightLaw> {
        if self.is_isotrivial() || n == 0 {
            return None;
        }
        let scale = |h: usize| h.checked_shl(n - 1).filter(|v| v >> (n - 1) == h);
        Some(if self.unbalanced() {
            if n == 1 {
                HeightLaw::Exact(self.h_c1)
            } else {
                HeightLaw::Exact(scale(self.h_phi)?)
            }
        } else if self.kappa?.at_least(n) {
            HeightLaw::AtMost(self.h_gamma)
        } else {
            HeightLaw::Exact(scale(self.h_gc)?)
        })
    }

    /// Height law for `h(phi^(n)(0))`.
    pub fn crit0_law(&self, n: u32) -> Option<HeightLaw> {
        if self.is_isotrivial() || n == 0 {
            return None;
        }
        let scale = |h: usize| h.checked_shl(n).filter(|v| v >> n == h);
        Some(if self.unbalanced() {
            HeightLaw::AtMost(scale(self.h_phi)?)
        } else {
            HeightLaw::Exact(scale(self.h_gamma)?)
        })
    }
}

struct Sequence<P> {
    items: RwLock<Vec<Arc<P>>>,
    grow: Mutex<()>,
}

impl<P: TPoly> Sequence<P> {
    fn len(&self) -> usize {
        self.items.read().unwrap().len()
    }

    /// Extends to `n` terms. Only one extender runs at a time; the new terms
    /// are computed without holding the read-write lock, which is taken only
    /// to publish each term.
    fn ensure(&self, n: usize, first: impl Fn() -> P, next: impl Fn(usize, &P) -> P) {
        if self.len() >= n {
            return;
        }
        let _g = self.grow.lock().unwrap();
        let mut last = self.items.read().unwrap().last().cloned();
        while self.len() < n {
            let v = Arc::new(match &last {
                None => first(),
                Some(prev) => next(self.len() + 1, prev),
            });
            self.items.write().unwrap().push(v.clone());
            last = Some(v);
        }
    }

    fn get(&self, i: usize) -> Arc<P> {
        self.items.read().unwrap()[i].clone()
    }
}

/// Memoized adjusted orbit `c_1 = c1, c_n = phi^(n)(gamma)` and critical-zero
/// orbit `phi^(n)(0)`, both 1-indexed. Safe to share between threads.
pub struct OrbitCache<P> {
    map: QuadMap<P>,
    c: Sequence<P>,
    crit0: Sequence<P>,
}

impl<P: TPoly> OrbitCache<P> {
    pub fn new(map: QuadMap<P>) -> Self {
        OrbitCache {
            map,
            c: Sequence {
                items: RwLock::new(Vec::new()),
                grow: Mutex::new(()),
            },
            crit0: Sequence {
                items: RwLock::new(Vec::new()),
                grow: Mutex::new(()),
            },
        }
    }

    pub fn map(&self) -> &QuadMap<P> {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `c_n`, extending the orbit if needed. Panics for `n = 0`.
    pub fn c(&self, n: usize) -> Arc<P> {
        assert!(n >= 1, "orbit indices start at 1");
        let m = &self.map;
        // c_2 = phi(phi(gamma)) = phi(-c1); afterwards c_n = phi(c_{n-1})
        self.c.ensure(n, || m.c1.clone(), |k, prev| {
            if k == 2 {
                m.apply(&prev.neg())
            } else {
                m.apply(prev)
            }
        });
        self.c.get(n - 1)
    }

    /// `phi^(n)(0)`.
    pub fn crit0(&self, n: usize) -> Arc<P> {
        assert!(n >= 1, "orbit indices start at 1");
        let m = &self.map;
        self.crit0.ensure(n, || m.apply(&m.gamma.zero_like()), |_, prev| m.apply(prev));
        self.crit0.get(n - 1)
    }

    /// `[c_1, ..., c_n]`.
    pub fn prefix(&self, n: usize) -> Vec<Arc<P>> {
        if n > 0 {
            self.c(n);
        }
        (0..n).map(|i| self.c.get(i)).collect()
    }

    pub fn to_json(&self, n: usize) -> serde_json::Value {
        let c: Vec<String> = self.prefix(n).iter().map(|p| p.to_string()).collect();
        let z: Vec<String> = (1..=n).map(|i| self.crit0(i).to_string()).collect();
        serde_json::json!({ "c": c, "crit0": z })
    }
}

/// Orbit of length `n` (`n >= 1`), populated eagerly.
pub fn adjusted_orbit<P: TPoly>(map: &QuadMap<P>, n: usize) -> OrbitCache<P> {
    let cache = OrbitCache::new(map.clone());
    cache.c(n.max(1));
    cache.crit0(n.max(1));
    cache
}

/// Ratios of the discriminant recursion live in `Z` or in `F_q`; this is what
/// the check needs to know about them.
pub trait PowerOfTwoTest: TPoly {
    /// `(sign, m)` with `self = sign * 2^m`, `m` minimal; `None` otherwise.
    fn as_pm_power_of_two(&self) -> Option<(i8, u64)>;
    /// Whether `self = +-2^m` for the given `m`.
    fn is_pm_two_to(&self, m: u64) -> bool;
}

impl PowerOfTwoTest for IntPoly {
    fn as_pm_power_of_two(&self) -> Option<(i8, u64)> {
        if !self.is_constant() || self.is_zero() {
            return None;
        }
        let v = self.lc();
        let a = v.abs();
        let m = a.trailing_zeros()?;
        (a == BigInt::one() << m).then_some((if v.is_negative() { -1 } else { 1 }, m))
    }

    fn is_pm_two_to(&self, m: u64) -> bool {
        self.as_pm_power_of_two().is_some_and(|(_, e)| e == m)
    }
}

impl PowerOfTwoTest for Poly {
    fn as_pm_power_of_two(&self) -> Option<(i8, u64)> {
        if !self.is_constant() || self.is_zero() {
            return None;
        }
        let f = self.desc();
        let v = self.lc();
        let mut x = f.one();
        let two = f.from_u64(2);
        for m in 0..f.p() {
            if x == v {
                return Some((1, m));
            }
            if f.neg(x) == v {
                return Some((-1, m));
            }
            x = f.mul(x, two);
        }
        None
    }

    fn is_pm_two_to(&self, m: u64) -> bool {
        if !self.is_constant() || self.is_zero() {
            return false;
        }
        let f = self.desc();
        let x = f.pow(f.from_u64(2), m as u128);
        let v = self.lc();
        v == x || v == f.neg(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscRecursionReport {
    pub n: u32,
    pub delta_n: String,
    pub delta_prev: String,
    pub c_n: String,
    /// `Delta_n / (Delta_{n-1}^2 c_n)`.
    pub ratio: String,
    pub is_pm_power_of_two: bool,
    /// Least `m` with `ratio = +-2^m` (over `F_p` the exponent is only
    /// determined modulo the order of 2).
    pub observed_exponent: Option<u64>,
    pub sign: Option<i8>,
    /// `ratio = +-2^(2^n)`.
    pub matches_two_to_two_to_n: bool,
    /// `ratio = +-2^(2^(n+1))`, the exponent as printed in the literature.
    pub matches_printed_exponent: bool,
}

/// Computes `Delta_n = disc_x phi^(n)` (with `Delta_0 = 1`) by subresultants
/// and compares it with `Delta_{n-1}^2 c_n`.
pub fn discriminant_recursion_check<P: PowerOfTwoTest>(
    map: &QuadMap<P>,
    n: u32,
) -> Result<DiscRecursionReport> {
    if n == 0 || n > 4 {
        return Err(Error::Precondition(format!(
            "discriminant recursion is checked for 1 <= n <= 4, got {n}"
        )));
    }
    let disc = |k: u32| -> Result<P> {
        if k == 0 {
            return Ok(map.gamma.one_like());
        }
        let f = map.iterate(k)?;
        let d = discriminant_generic(&f)
            .ok_or_else(|| Error::Undefined("discriminant of a constant".into()))?;
        if d.vanishes() {
            return Err(Error::IteratesInseparable(format!(
                "disc of phi^({k}) vanishes"
            )));
        }
        Ok(d)
    };
    let dn = disc(n)?;
    let dp = disc(n - 1)?;
    let cn = OrbitCache::new(map.clone()).c(n as usize).as_ref().clone();
    if cn.vanishes() {
        return Err(Error::IteratesInseparable(format!("c_{n} vanishes")));
    }
    let den = dp.square().mul(&cn);
    let ratio = dn.div_exact(&den).ok_or_else(|| {
        Error::Undefined(format!(
            "Delta_{n} is not divisible by Delta_{}^2 c_{n}",
            n - 1
        ))
    })?;
    let pm = ratio.as_pm_power_of_two();
    Ok(DiscRecursionReport {
        n,
        delta_n: dn.to_string(),
        delta_prev: dp.to_string(),
        c_n: cn.to_string(),
        ratio: ratio.to_string(),
        is_pm_power_of_two: pm.is_some(),
        observed_exponent: pm.map(|(_, m)| m),
        sign: pm.map(|(s, _)| s),
        matches_two_to_two_to_n: ratio.is_pm_two_to(1 << n),
        matches_printed_exponent: ratio.is_pm_two_to(1 << (n + 1)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitPeriod {
    /// `phi^(tail)(gamma)` is the first point of a cycle of length `cycle`.
    Found { tail: usize, cycle: usize },
    NotDetectedWithinCap,
}

/// Orbit points above this degree are not tracked (they can only repeat if
/// the degrees stop growing, which the cap on steps would not reveal anyway).
const PERIOD_DEGREE_CAP: usize = 1 << 14;

/// Searches for a repetition in `gamma, phi(gamma), phi^2(gamma), ...` among
/// the first `cap + 1` points.
pub fn orbit_period(map: &QuadMap<Poly>, cap: usize) -> OrbitPeriod {
    let mut seen: HashMap<Poly, usize> = HashMap::new();
    let mut x = map.gamma.clone();
    for i in 0..=cap {
        if let Some(&j) = seen.get(&x) {
            return OrbitPeriod::Found {
                tail: j,
                cycle: i - j,
            };
        }
        if x.height() > PERIOD_DEGREE_CAP {
            break;
        }
        let next = map.apply(&x);
        seen.insert(x, i);
        x = next;
    }
    OrbitPeriod::NotDetectedWithinCap
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmap(s: &str) -> QuadMap<IntPoly> {
        QuadMap::<IntPoly>::parse(s).unwrap()
    }

    fn fmap(p: u64, s: &str) -> QuadMap<Poly> {
        QuadMap::<Poly>::parse(FieldDesc::prime(p).unwrap(), s).unwrap()
    }

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn parsing_normalizes() {
        let m = zmap("x^2+t");
        assert_eq!((m.gamma().clone(), m.c1().clone()), (ip(&[]), ip(&[0, -1])));
        let m = zmap("(x-t)^2+t+1");
        assert_eq!((m.gamma().clone(), m.c1().clone()), (ip(&[0, 1]), ip(&[-1, -1])));
        let m = zmap("(x - (t^2))^2 - (t^3+1)");
        assert_eq!((m.gamma().clone(), m.c1().clone()), (ip(&[0, 0, 1]), ip(&[1, 0, 0, 1])));
        assert!(QuadMap::<IntPoly>::parse("x^2+t*x").is_err());
        assert!(QuadMap::<IntPoly>::parse("x^3+t").is_err());
        assert!(QuadMap::<IntPoly>::parse("2*x^2+t").is_err());
        assert!(matches!(
            QuadMap::<IntPoly>::parse("x^2+*t"),
            Err(Error::Parse { .. })
        ));
        // over F_p an odd linear coefficient is fine
        let m = fmap(5, "x^2+x");
        assert_eq!(m.gamma(), &Poly::from_ints(m.desc(), &[2]));
    }

    #[test]
    fn formatting_round_trips() {
        for s in ["x^2+t", "x^2-t^3", "(x-t)^2+t+1", "(x - (t^2))^2 - (t^3+1)", "x^2", "(x-t)^2"] {
            let m = zmap(s);
            assert_eq!(zmap(&m.format()), m, "{s} -> {}", m.format());
        }
        assert_eq!(zmap("x^2+t").format(), "x^2+t");
        assert_eq!(zmap("x^2-t").format(), "x^2-t");
        let q = FieldDesc::quadratic(7).unwrap();
        let m = QuadMap::<Poly>::parse(q, "(x-u*t)^2+(2+u)").unwrap();
        assert_eq!(QuadMap::<Poly>::parse(q, &m.format()).unwrap(), m);
    }

    #[test]
    fn orbit_examples() {
        let o = adjusted_orbit(&zmap("x^2+t"), 3);
        let c: Vec<String> = o.prefix(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(c, ["-t", "t^2+t", "t^4+2*t^3+t^2+t"]);
        assert_eq!(o.crit0(1).to_string(), "t");
        assert_eq!(o.crit0(2).to_string(), "t^2+t");
        let o = adjusted_orbit(&zmap("(x-t)^2+t+1"), 2);
        assert_eq!(*o.c(1), ip(&[-1, -1]));
        assert_eq!(*o.c(2), ip(&[2, 1]));
    }

    #[test]
    fn isotriviality() {
        assert!(zmap("(x-t)^2+t+1").is_isotrivial());
        assert!(!zmap("x^2+t").is_isotrivial());
        assert!(zmap("x^2-3").is_isotrivial());
    }

    #[test]
    fn height_profile_examples() {
        let h = zmap("x^2+t").height_profile();
        assert_eq!((h.h_gamma, h.h_c1, h.h_phi, h.h_gc, h.kappa), (0, 1, 1, 1, None));
        // gamma = t, c1 = t + 1: gamma + c1 = 2t + 1
        let h = QuadMap::new(ip(&[0, 1]), ip(&[1, 1])).height_profile();
        assert_eq!((h.h_gamma, h.h_c1, h.h_gc), (1, 1, 1));
        assert_eq!(h.kappa, Some(Kappa { floor: 1, exact: true }));
        let o = adjusted_orbit(&zmap("x^2+t"), 5);
        let law = zmap("x^2+t").height_profile().c_law(5).unwrap();
        assert_eq!(law, HeightLaw::Exact(16));
        assert!(law.admits(o.c(5).height()));
    }

    #[test]
    fn kappa_floor() {
        assert_eq!(Kappa::from_ratio(4, 1), Kappa { floor: 3, exact: true });
        assert_eq!(Kappa::from_ratio(5, 2), Kappa { floor: 2, exact: false });
        assert_eq!(Kappa::from_ratio(3, 3), Kappa { floor: 1, exact: true });
    }

    #[test]
    fn iterates() {
        let m = zmap("x^2+t");
        let f = m.iterate(2).unwrap();
        assert_eq!(f.format("x"), "x^4+2*t*x^2+(t^2+t)");
        assert_eq!(m.iterate(1).unwrap().coeffs(), &[ip(&[0, 1]), ip(&[]), ip(&[1])][..]);
        assert!(matches!(m.iterate(40), Err(Error::CapExceeded(_))));
        let g = fmap(5, "(x-t^2)^2+3*t+1").iterate(5).unwrap();
        assert_eq!(g.degree().finite(), Some(32));
        assert!(g.lc().unwrap().is_one());
    }

    #[test]
    fn discriminant_recursion_for_x2_plus_t() {
        let m = zmap("x^2+t");
        let r1 = discriminant_recursion_check(&m, 1).unwrap();
        assert_eq!((r1.ratio.as_str(), r1.observed_exponent), ("4", Some(2)));
        let r2 = discriminant_recursion_check(&m, 2).unwrap();
        assert_eq!(r2.delta_n, IntPoly::from_i64s(&[0, 0, 0, 256, 256]).to_string());
        assert_eq!((r2.ratio.as_str(), r2.observed_exponent), ("16", Some(4)));
        assert!(r2.matches_two_to_two_to_n && !r2.matches_printed_exponent);
        let f = fmap(5, "x^2+t");
        let r = discriminant_recursion_check(&f, 3).unwrap();
        assert!(r.is_pm_power_of_two);
    }

    #[test]
    fn inseparable_iterates_are_reported() {
        // gamma = 0, c1 = 0: phi = x^2
        let m = QuadMap::new(ip(&[]), ip(&[]));
        assert!(matches!(
            discriminant_recursion_check(&m, 2),
            Err(Error::IteratesInseparable(_))
        ));
    }

    #[test]
    fn periods() {
        assert_eq!(
            orbit_period(&fmap(3, "(x-t)^2+t+1"), 10),
            OrbitPeriod::Found { tail: 2, cycle: 1 }
        );
        assert_eq!(orbit_period(&fmap(3, "x^2+t"), 8), OrbitPeriod::NotDetectedWithinCap);
        assert_eq!(
            orbit_period(&fmap(5, "x^2-1"), 10),
            OrbitPeriod::Found { tail: 0, cycle: 2 }
        );
    }

    #[test]
    fn concurrent_extension_is_consistent() {
        let cache = OrbitCache::new(fmap(7, "x^2+t"));
        std::thread::scope(|s| {
            for k in 1..=6 {
                let c = &cache;
                s.spawn(move || {
                    c.c(2 * k);
                });
            }
        });
        let serial = adjusted_orbit(&fmap(7, "x^2+t"), 12);
        for n in 1..=12 {
            assert_eq!(cache.c(n), serial.c(n));
        }
        assert_eq!(cache.len(), 12);
    }
}
