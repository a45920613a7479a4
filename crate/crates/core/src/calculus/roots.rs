//! Rational roots of univariate polynomials over ℚ.
//!
//! Roots are found modulo a large prime by distinct-degree and equal-degree
//! splitting, lifted by rational reconstruction, and kept only when they are
//! exact roots over ℚ.

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ratfun::gcd::univariate_gcd_mod;
use crate::ratfun::modp::{
    add_mod, inv_mod, mul_mod, primes_below_power_of_two, rational_reconstruction, reduce_int,
    sub_mod,
};
use crate::ratfun::Coeff;

/// Distinct rational roots of `Σ c_k t^k`, in increasing order.
pub fn rational_roots(coeffs: &[Coeff]) -> Vec<Coeff> {
    let mut c: Vec<Coeff> = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.len() < 2 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    // Factor out t^k by hand; the modular search then sees a nonzero constant.
    let shift = c.iter().position(|x| !x.is_zero()).unwrap();
    if shift > 0 {
        roots.push(Coeff::zero());
        c.drain(..shift);
    }
    if c.len() >= 2 {
        let ints = integer_coeffs(&c);
        let primes = primes_below_power_of_two(62, 3).expect("62-bit primes");
        for p in primes {
            if reduce_int(ints.last().unwrap(), p) == 0 {
                continue;
            }
            let f: Vec<u64> = ints.iter().map(|x| reduce_int(x, p)).collect();
            let m = BigInt::from(p);
            for r in roots_mod(&f, p) {
                if let Some(q) = rational_reconstruction(&BigInt::from(r), &m) {
                    if eval(&c, &q).is_zero() && !roots.contains(&q) {
                        roots.push(q);
                    }
                }
            }
            break;
        }
    }
    roots.sort();
    roots
}

fn integer_coeffs(c: &[Coeff]) -> Vec<BigInt> {
    let l = c.iter().fold(BigInt::one(), |acc, x| num::integer::lcm(acc, x.denom().clone()));
    c.iter().map(|x| (x * Coeff::from_integer(l.clone())).to_integer()).collect()
}

fn eval(c: &[Coeff], x: &Coeff) -> Coeff {
    c.iter().rev().fold(Coeff::zero(), |acc, k| acc * x + k)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p).unwrap();
    while r.len() > db {
        let top = r.len() - 1;
        let q = mul_mod(r[top], inv, p);
        let shift = top - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(q, bc, p), p);
        }
        trim(&mut r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    rem(&out, m, p)
}

fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_rem(&acc, &b, m, p);
        }
        b = mul_rem(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Distinct roots in `F_p` of `f` (low degree first, `f(0) ≠ 0` not required).
fn roots_mod(f: &[u64], p: u64) -> Vec<u64> {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return Vec::new();
    }
    let f = univariate_gcd_mod(f.clone(), f, p);
    // g = gcd(f, t^p - t) collects the linear factors.
    let tp = pow_rem(&[0, 1], p, &f, p);
    let mut h = tp;
    h.resize(h.len().max(2), 0);
    h[1] = sub_mod(h[1], 1, p);
    trim(&mut h);
    let g = univariate_gcd_mod(f, h, p);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x726f_6f74);
    split(g, p, &mut rng, &mut out);
    out.sort_unstable();
    out
}

fn split(g: Vec<u64>, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => {
            // monic: t + g0
            out.push(sub_mod(0, g[0], p));
        }
        _ => loop {
            let a = rng.gen_range(0..p);
            let mut h = pow_rem(&[a, 1], (p - 1) / 2, &g, p);
            if h.is_empty() {
                h.push(0);
            }
            h[0] = sub_mod(h[0], 1, p);
            trim(&mut h);
            let d = univariate_gcd_mod(g.clone(), h, p);
            if d.len() > 1 && d.len() < g.len() {
                let q = quotient(&g, &d, p);
                split(d, p, rng, out);
                split(q, p, rng, out);
                return;
            }
        },
    }
}

fn quotient(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p).unwrap();
    let mut q = vec![0u64; a.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], inv, p);
        q[top - db] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[top - db + i] = sub_mod(r[top - db + i], mul_mod(c, bc, p), p);
        }
        r.pop();
    }
    q
}

/// Whether the polynomial has `deg` rational roots counted without
/// multiplicity, i.e. a square-free polynomial splits into linear factors.
pub fn splits_over_q(coeffs: &[Coeff]) -> bool {
    let deg = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    rational_roots(coeffs).len() == deg
}
