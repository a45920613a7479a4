//! Prime-field arithmetic backing the randomized evaluation paths.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A prime modulus together with the seed that drives sampling under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeCtx {
    pub p: u64,
    pub seed: u64,
}

impl PrimeCtx {
    /// Builds a context, rejecting composite or too-small moduli.
    pub fn new(p: u64, seed: u64) -> Result<Self> {
        if !((1 << 30)..(1 << 63)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "modulus {p} must be a prime in [2^30, 2^63)"
            )));
        }
        Ok(Self { p, seed })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.p)
    }

    /// Reduces an exact rational; fails when the denominator vanishes mod p.
    pub fn reduce(&self, q: &BigRational) -> Result<u64> {
        reduce_rational(q, self.p)
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    if t < 0 {
        t += p as i128;
    }
    Some(t as u64)
}

pub fn reduce_int(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = n.mod_floor(&m);
    r.to_u64().expect("residue fits in u64")
}

pub fn reduce_rational(q: &BigRational, p: u64) -> Result<u64> {
    let num = reduce_int(q.numer(), p);
    let den = reduce_int(q.denom(), p);
    let inv = inv_mod(den, p).ok_or(Error::NonInvertibleModulus { p })?;
    Ok(mul_mod(num, inv, p))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes strictly below `2^bits`.
pub fn primes_below_power_of_two(bits: u32, count: usize) -> Result<Vec<u64>> {
    if !(31..=62).contains(&bits) {
        return Err(Error::InvalidArgument(format!(
            "prime bits must lie in 31..=62, got {bits}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << bits) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    Ok(out)
}

/// Extra primes used when a computation needs more moduli than configured.
pub fn fallback_primes(avoid: &[u64], count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 31) - 1 - 2 * 1000;
    while out.len() < count {
        if is_prime(n) && !avoid.contains(&n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Symmetric lift of a residue to a signed integer.
pub fn symmetric_lift(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Rational reconstruction: finds n/d ≡ a (mod m) with |n|, d ≤ sqrt(m/2).
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let a = a.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Chinese remaindering of `a mod m` and `b mod p` into a residue mod `m·p`.
pub fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let a_mod_p = reduce_int(a, p);
    let m_mod_p = reduce_int(m, p);
    let inv = inv_mod(m_mod_p, p).expect("coprime moduli");
    let k = mul_mod(sub_mod(b, a_mod_p, p), inv, p);
    a + m * BigInt::from(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes_are_31_bit() {
        let ps = primes_below_power_of_two(31, 2).unwrap();
        assert_eq!(ps, vec![2147483647, 2147483629]);
    }

    #[test]
    fn inverse_round_trip() {
        let p = 2147483647;
        for a in [1u64, 2, 12345, p - 1] {
            assert_eq!(mul_mod(a, inv_mod(a, p).unwrap(), p), 1);
        }
        assert_eq!(inv_mod(0, p), None);
    }

    #[test]
    fn reduction_rejects_bad_denominator() {
        let p = 2147483647u64;
        let q = BigRational::new(BigInt::from(1), BigInt::from(p));
        assert_eq!(
            reduce_rational(&q, p),
            Err(Error::NonInvertibleModulus { p })
        );
    }

    #[test]
    fn reconstructs_small_fraction() {
        let p1 = 2147483647u64;
        let p2 = 2147483629u64;
        let q = BigRational::new(BigInt::from(-7), BigInt::from(13));
        let a1 = reduce_rational(&q, p1).unwrap();
        let a2 = reduce_rational(&q, p2).unwrap();
        let m1 = BigInt::from(p1);
        let combined = crt(&BigInt::from(a1), &m1, a2, p2);
        let m = m1 * BigInt::from(p2);
        assert_eq!(rational_reconstruction(&combined, &m), Some(q));
    }

    #[test]
    fn context_rejects_composites() {
        assert!(PrimeCtx::new(2147483647, 0).is_ok());
        assert!(PrimeCtx::new(2147483647 * 3, 0).is_err());
        assert!(PrimeCtx::new(65537, 0).is_err());
    }
}
