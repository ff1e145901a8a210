//! Rational functions over `F_q` in lowest terms with monic denominator.

use std::fmt;

use super::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// Reduces `num/den` to lowest terms with a monic denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFn {
                den: Poly::one(num.desc()),
                num,
            });
        }
        let g = num.gcd_monic(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let inv = num.desc().inv(den.lc()).expect("nonzero");
        Ok(RationalFn {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.desc());
        RationalFn { num: p, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// `max(deg num, deg den)`; `h(0) = 0`.
    pub fn height(&self) -> usize {
        self.num.height().max(self.den.height())
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        RationalFn::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, o: &RationalFn) -> RationalFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        RationalFn::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn div(&self, o: &RationalFn) -> Result<RationalFn> {
        RationalFn::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    /// `g` with `g^p = self`, if `self` is a `p`-th power in `F_q(t)`.
    pub fn pth_root(&self) -> Result<RationalFn> {
        let n = self.num.pth_root()?;
        let d = self.den.pth_root()?;
        RationalFn::new(n, d)
    }

    /// Largest `i` with `self` a `p^i`-th power in `F_q(t)`.
    ///
    /// Since Frobenius is bijective on `F_q`, a function with `F_q`
    /// coefficients is a `p^i`-th power over the algebraic closure exactly when
    /// it is one over `F_q`: in lowest terms with monic denominator both
    /// numerator and denominator must be `p^i`-th powers, and their
    /// coefficient-wise roots stay in `F_q`.
    pub fn pth_power_degree(&self) -> Result<u32> {
        Ok(self.pth_root_chain()?.len() as u32 - 1)
    }

    /// `[self, self^(1/p), self^(1/p^2), ...]` up to the first non-`p`-th power.
    pub fn pth_root_chain(&self) -> Result<Vec<RationalFn>> {
        if self.is_constant() {
            return Err(Error::Undefined(
                "every constant is a p^i-th power for all i".into(),
            ));
        }
        let mut chain = vec![self.clone()];
        while let Ok(r) = chain.last().unwrap().pth_root() {
            chain.push(r);
        }
        Ok(chain)
    }

    pub fn format(&self) -> String {
        if self.den.is_one() {
            return self.num.format();
        }
        let wrap = |p: &Poly| {
            let s = p.format();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({})", self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDesc;

    #[test]
    fn lowest_terms_height() {
        let d = FieldDesc::prime(7).unwrap();
        // (t^2+t)/(-t) = -(t+1)
        let r = RationalFn::new(Poly::from_ints(d, &[0, 1, 1]), Poly::from_ints(d, &[0, -1])).unwrap();
        assert_eq!(r, RationalFn::from_poly(Poly::from_ints(d, &[-1, -1])));
        assert_eq!(r.height(), 1);
    }

    #[test]
    fn pth_power_degree_examples() {
        let d3 = FieldDesc::prime(3).unwrap();
        let f = Poly::from_ints(d3, &[1, 1]).pow(9);
        assert_eq!(RationalFn::from_poly(f).pth_power_degree().unwrap(), 2);
        let d5 = FieldDesc::prime(5).unwrap();
        let g = Poly::from_ints(d5, &[-1, -1]);
        assert_eq!(RationalFn::from_poly(g).pth_power_degree().unwrap(), 0);
        let h = Poly::from_ints(d3, &[2, 0, 0, 1]);
        assert_eq!(RationalFn::from_poly(h).pth_power_degree().unwrap(), 1);
        let c = RationalFn::from_poly(Poly::from_ints(d3, &[2]));
        assert!(matches!(c.pth_power_degree(), Err(Error::Undefined(_))));
    }
}
