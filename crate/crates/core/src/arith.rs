//! Word-size modular arithmetic shared by the field and resultant code.

/// `a * b mod m` for `m < 2^32`.
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u128, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat. Caller guarantees `a != 0 mod p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, (p - 2) as u128, p)
}

fn mul_mod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u128(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in `[3, cap]`, ascending.
pub fn odd_primes_up_to(cap: u64) -> Vec<u64> {
    primes_up_to(cap).into_iter().filter(|&p| p != 2).collect()
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(cap: u64) -> Vec<u64> {
    if cap < 2 {
        return Vec::new();
    }
    let n = cap as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Primes just below `2^31`, descending, used as CRT moduli.
pub(crate) struct CrtPrimes {
    next: u64,
}

impl CrtPrimes {
    pub(crate) fn new() -> Self {
        CrtPrimes { next: (1u64 << 31) - 1 }
    }
}

impl Iterator for CrtPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(10_000);
        let mr: Vec<u64> = (0..=10_000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, mr);
    }

    #[test]
    fn large_known_primes() {
        assert!(is_prime_u64(2_147_483_647));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime_u64(2_147_483_647 * 3));
    }

    #[test]
    fn crt_primes_descend() {
        let ps: Vec<u64> = CrtPrimes::new().take(5).collect();
        assert_eq!(ps[0], 2_147_483_647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
    }
}
