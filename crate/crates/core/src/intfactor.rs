//! Integer factorization for discriminants: trial division, Miller–Rabin and
//! Brent's variant of Pollard rho under an explicit iteration budget.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime_u64, primes_up_to};

/// Trial division bound.
pub const TRIAL_BOUND: u64 = 1_000_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_BOUND))
}

/// Result of a bounded factorization attempt. `primes` carries prime powers;
/// `cofactors` are composite parts the budget could not split.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntFactorization {
    pub primes: Vec<(BigUint, u32)>,
    pub cofactors: Vec<BigUint>,
}

impl IntFactorization {
    pub fn is_complete(&self) -> bool {
        self.cofactors.is_empty()
    }
}

/// Miller–Rabin with the first 20 prime bases. Deterministic below 3.3e24;
/// a probable-prime test beyond (callers never rely on primality for
/// soundness).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    const BASES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    for &b in &BASES {
        if (n % b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &b in &BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Brent's rho: a nontrivial factor of the odd composite `n`, or `None` once
/// `budget` polynomial steps have been spent.
pub fn brent_rho(n: &BigUint, budget: u64) -> Option<BigUint> {
    const M: u64 = 128;
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let step = |v: &BigUint| (v * v + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            spent += r;
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let lim = M.min(r - k);
                for _ in 0..lim {
                    y = step(&y);
                    q = (q * abs_diff(&x, &y)) % n;
                }
                spent += lim;
                g = q.gcd(n);
                k += M;
            }
            r *= 2;
            if spent > budget {
                break;
            }
        }
        if g == *n {
            loop {
                ys = step(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
        if spent > budget {
            return None;
        }
    }
    None
}

/// Factors `|n|` by trial division up to [`TRIAL_BOUND`], then Miller–Rabin and
/// Brent rho with `effort` steps per composite.
pub fn factor_integer(n: &BigUint, effort: u64) -> IntFactorization {
    let mut out = IntFactorization::default();
    if n.is_zero() {
        return out;
    }
    let mut m = n.clone();
    let mut found: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while (&m % p).is_zero() {
            m /= p;
            e += 1;
        }
        if e > 0 {
            found.push((pb, e));
        }
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            found.push((m, 1));
        } else if let Some(d) = brent_rho(&m, effort) {
            stack.push(&m / &d);
            stack.push(d);
        } else {
            out.cofactors.push(m);
        }
    }
    found.sort();
    for (p, e) in found {
        match out.primes.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.primes.push((p, e)),
        }
    }
    out.cofactors.sort();
    out
}
