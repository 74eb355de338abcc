//! Arithmetic in Z/p^r with p prime.
//!
//! Residues are canonical `u64` values in `[0, p^r)`. The modulus is capped
//! below 2^63 so that sums of two residues never overflow and products fit
//! in `u128`.

use crate::error::{Error, Result};

/// Largest admissible modulus: p^r must stay below 2^63.
pub const MODULUS_BUDGET: u64 = 1 << 63;

/// A fixed coefficient ring Z/p^r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    p: u64,
    r: u32,
    modulus: u64,
}

impl RingParams {
    /// Builds Z/p^r, rejecting composite p, r = 0, and moduli >= 2^63.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidRing(format!("p = {p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidRing("exponent r must be at least 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..r {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m < MODULUS_BUDGET)
                .ok_or_else(|| {
                    Error::InvalidRing(format!("p^r = {p}^{r} exceeds the 2^63 word budget"))
                })?;
        }
        Ok(RingParams { p, r, modulus })
    }

    /// Same prime, smaller exponent. Used for mod-p^k projections.
    pub fn restrict(&self, r: u32) -> Result<Self> {
        if r == 0 || r > self.r {
            return Err(Error::InvalidRing(format!(
                "cannot restrict Z/{}^{} to exponent {}",
                self.p, self.r, r
            )));
        }
        let mut modulus = 1u64;
        for _ in 0..r {
            modulus *= self.p;
        }
        Ok(RingParams { p: self.p, r, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// p^e for 0 <= e <= r.
    pub fn p_pow(&self, e: u32) -> u64 {
        debug_assert!(e <= self.r);
        let mut out = 1u64;
        for _ in 0..e {
            out *= self.p;
        }
        out
    }

    pub fn reduce_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        let m = self.modulus as i128;
        (((x as i128 % m) + m) % m) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b; // both < 2^63, no overflow
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.modulus - b)
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// p-adic valuation of a residue; val(0) = r by convention.
    pub fn val(&self, x: u64) -> u32 {
        if x == 0 {
            return self.r;
        }
        let mut x = x;
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// The unit u with x = u * p^val(x). Undefined for x = 0.
    pub fn unit_part(&self, x: u64) -> u64 {
        debug_assert!(x != 0);
        let mut x = x;
        while x.is_multiple_of(self.p) {
            x /= self.p;
        }
        x
    }

    /// Inverse of a unit residue. Errors if x is divisible by p.
    pub fn inv_unit(&self, x: u64) -> Result<u64> {
        if x.is_multiple_of(self.p) {
            return Err(Error::NotInvertible(format!(
                "{x} is not a unit in Z/{}^{}",
                self.p, self.r
            )));
        }
        let (g, inv, _) = ext_gcd(x as i128, self.modulus as i128);
        debug_assert_eq!(g, 1);
        let m = self.modulus as i128;
        Ok((((inv % m) + m) % m) as u64)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (fixed witness set covers all 64-bit inputs).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, sorted by prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d as u128 * d as u128 <= n as u128 {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of n, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates() {
        assert!(RingParams::new(2, 1).is_ok());
        assert!(RingParams::new(97, 3).is_ok());
        assert!(RingParams::new(4, 1).is_err());
        assert!(RingParams::new(1, 1).is_err());
        assert!(RingParams::new(0, 2).is_err());
        assert!(RingParams::new(2, 0).is_err());
        // 2^62 < 2^63 admissible, 2^63 not
        assert!(RingParams::new(2, 62).is_ok());
        assert!(RingParams::new(2, 63).is_err());
        assert!(RingParams::new(3, 40).is_err());
    }

    #[test]
    fn arithmetic_mod_9() {
        let ring = RingParams::new(3, 2).unwrap();
        assert_eq!(ring.modulus(), 9);
        assert_eq!(ring.add(5, 7), 3);
        assert_eq!(ring.sub(2, 5), 6);
        assert_eq!(ring.mul(5, 7), 8);
        assert_eq!(ring.neg(0), 0);
        assert_eq!(ring.neg(4), 5);
        assert_eq!(ring.reduce_i64(-1), 8);
        assert_eq!(ring.reduce_i64(-9), 0);
    }

    #[test]
    fn valuation_and_units() {
        let ring = RingParams::new(2, 4).unwrap(); // Z/16
        assert_eq!(ring.val(0), 4);
        assert_eq!(ring.val(8), 3);
        assert_eq!(ring.val(12), 2);
        assert_eq!(ring.val(5), 0);
        assert_eq!(ring.unit_part(12), 3);
        let inv = ring.inv_unit(5).unwrap();
        assert_eq!(ring.mul(5, inv), 1);
        assert!(ring.inv_unit(6).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(97));
        assert!(is_prime(4294967311)); // prime just above 2^32
        assert!(!is_prime(1));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn factorization_and_divisors() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
    }
}
