//! Univariate polynomials in `x` over a generic [`Ring`], used for iterates
//! `phi^(n)(x)` with coefficients in `F_q[t]` or `Z[t]`.

use std::fmt;

use super::{Degree, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.vanishes()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        UPoly::new(vec![c])
    }

    /// The variable `x`; `like` supplies the coefficient ring.
    pub fn x(like: &R) -> Self {
        UPoly::new(vec![like.zero_like(), like.one_like()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lc(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn get(&self, i: usize, like: &R) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| like.zero_like())
    }

    fn like(&self, other: &Self) -> Option<R> {
        self.coeffs
            .first()
            .or(other.coeffs.first())
            .map(|c| c.zero_like())
    }

    pub fn add(&self, o: &Self) -> Self {
        let Some(z) = self.like(o) else {
            return UPoly::zero();
        };
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.get(i, &z).add(&o.get(i, &z))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let Some(z) = self.like(o) else {
            return UPoly::zero();
        };
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.get(i, &z).sub(&o.get(i, &z))).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        UPoly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut out = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(out)
    }

    pub fn square(&self) -> Self {
        let n = self.coeffs.len();
        if n == 0 {
            return UPoly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let two = z.from_int_like(2);
        let mut out = vec![z; 2 * n - 1];
        for i in 0..n {
            if self.coeffs[i].vanishes() {
                continue;
            }
            let a2 = self.coeffs[i].mul(&two);
            for j in i + 1..n {
                out[i + j] = out[i + j].add(&a2.mul(&self.coeffs[j]));
            }
            out[2 * i] = out[2 * i].add(&self.coeffs[i].square());
        }
        UPoly::new(out)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&c.from_int_like(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(x.zero_like(), |acc, c| acc.mul(x).add(c))
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a = q*b + r`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-division by zero");
        if self.is_zero() || self.deg() < b.deg() {
            return self.clone();
        }
        let db = b.deg();
        let l = b.lc().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut e = self.deg() - db + 1;
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let c = r[k].clone();
            for x in r.iter_mut() {
                *x = x.mul(&l);
            }
            for (j, bj) in b.coeffs[..db].iter().enumerate() {
                let idx = k - db + j;
                r[idx] = r[idx].sub(&c.mul(bj));
            }
            r.pop();
            while r.last().is_some_and(|x| x.vanishes()) {
                r.pop();
            }
            e -= 1;
        }
        let out = UPoly::new(r);
        if e > 0 {
            out.scale(&l.pow(e as u64))
        } else {
            out
        }
    }

    /// Coefficient-wise exact division by a ring element.
    pub fn div_exact_scalar(&self, c: &R) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|a| a.div_exact(c))
            .collect::<Option<Vec<_>>>()
            .map(UPoly::new)
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<R: Ring + fmt::Display> UPoly<R> {
    pub fn format(&self, var: &str) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.vanishes() {
                continue;
            }
            let text = c.to_string();
            let single = !text[1..].contains(['+', '-']);
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if single => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            if neg {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                if single {
                    s.push_str(&body);
                } else {
                    s.push_str(&format!("({body})"));
                }
            } else if body == "1" {
                s.push_str(&mono);
            } else if single {
                s.push_str(&format!("{body}*{mono}"));
            } else {
                s.push_str(&format!("({body})*{mono}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}
