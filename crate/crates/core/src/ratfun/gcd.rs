//! Multivariate polynomial gcd over ℚ.
//!
//! Content extraction plus a recursive primitive pseudo-remainder sequence in
//! the variable of smallest degree. A modular pre-check proves coprimality
//! cheaply in the common case: if the univariate images of `a` and `b` at a
//! random line are coprime and the leading coefficient of `a` survives the
//! specialization, the true gcd cannot involve that variable.

use smallvec::SmallVec;

use super::modp;
use super::poly::{Exponents, ModPoly, Monomial, Poly};
use num::One;

const CHECK_PRIME: u64 = 2_147_483_647;

/// Greatest common divisor, normalized to graded-lex leading coefficient 1.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.arity(), b.arity());
    let arity = a.arity();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(arity);
    }
    let (ma, a1) = split_monomial_content(a);
    let (mb, b1) = split_monomial_content(b);
    let mono: Exponents = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let mono = Poly::monomial(Monomial::new(mono), num::BigRational::one());
    let core = gcd_no_monomial_content(&a1, &b1);
    mono.mul(&core).monic()
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.arity());
    }
    let g = gcd(a, b);
    a.div_exact(&g).expect("gcd divides").mul(b).monic()
}

fn split_monomial_content(p: &Poly) -> (Exponents, Poly) {
    let arity = p.arity();
    let mins: Exponents = (0..arity).map(|i| p.min_degree_in(i)).collect();
    if mins.iter().all(|&e| e == 0) {
        return (mins, p.clone());
    }
    let m = Monomial::new(mins.clone());
    let rest = Poly::from_terms(
        arity,
        p.terms().map(|(k, c)| (m.quotient_of(k), c.clone())),
    );
    (mins, rest)
}

fn gcd_no_monomial_content(a: &Poly, b: &Poly) -> Poly {
    let arity = a.arity();
    if a.is_constant() || b.is_constant() {
        return Poly::one(arity);
    }
    if a.is_monomial() || b.is_monomial() {
        // monomial content already removed, so a monomial here is a constant
        return Poly::one(arity);
    }
    let va = a.variables();
    let vb = b.variables();
    for k in 0..arity {
        if va[k] && !vb[k] {
            return gcd(&content_in(a, k), b);
        }
        if vb[k] && !va[k] {
            return gcd(a, &content_in(b, k));
        }
    }
    let shared: SmallVec<[usize; 8]> = (0..arity).filter(|&k| va[k]).collect();
    if provably_coprime(a, b, &shared) {
        return Poly::one(arity);
    }
    let (small, large) = if a.num_terms() <= b.num_terms() { (a, b) } else { (b, a) };
    if large.div_exact(small).is_some() {
        return small.monic();
    }
    if let Some(g) = super::mgcd::modular_gcd(a, b) {
        return g;
    }
    let k = *shared
        .iter()
        .min_by_key(|&&k| (a.degree_in(k).max(b.degree_in(k)), k))
        .unwrap();
    let ca = content_in(a, k);
    let cb = content_in(b, k);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, k);
    c.mul(&g).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x_k`.
pub fn content_in(p: &Poly, k: usize) -> Poly {
    let mut coeffs: Vec<Poly> = p.coeffs_in(k).into_iter().filter(|c| !c.is_zero()).collect();
    if coeffs.is_empty() {
        return Poly::zero(p.arity());
    }
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = coeffs[0].monic();
    for c in &coeffs[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

pub fn primitive_part_in(p: &Poly, k: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, k);
    p.div_exact(&c).expect("content divides").monic()
}

fn primitive_prs(a: Poly, b: Poly, k: usize) -> Poly {
    let arity = a.arity();
    let (mut f, mut g) = if a.degree_in(k) >= b.degree_in(k) { (a, b) } else { (b, a) };
    loop {
        if g.degree_in(k) == 0 {
            return Poly::one(arity);
        }
        let r = pseudo_remainder(&f, &g, k);
        if r.is_zero() {
            return g.monic();
        }
        if r.degree_in(k) == 0 {
            return Poly::one(arity);
        }
        let r = primitive_part_in(&r, k);
        f = g;
        g = r;
    }
}

/// Sparse pseudo-remainder of `f` by `g` with respect to `x_k`.
pub fn pseudo_remainder(f: &Poly, g: &Poly, k: usize) -> Poly {
    let arity = f.arity();
    let dg = g.degree_in(k);
    let lg = g.lc_in(k);
    let mut r = f.clone();
    if lg.is_constant() {
        let inv = lg.constant_value().recip();
        while !r.is_zero() && r.degree_in(k) >= dg {
            let d = r.degree_in(k) - dg;
            let lr = r.lc_in(k).scale(&inv);
            r = r.sub(&lr.mul(&x_pow(arity, k, d)).mul(g));
        }
        return r;
    }
    while !r.is_zero() && r.degree_in(k) >= dg {
        let d = r.degree_in(k) - dg;
        let lr = r.lc_in(k);
        r = lg.mul(&r).sub(&lr.mul(&x_pow(arity, k, d)).mul(g));
    }
    r
}

fn x_pow(arity: usize, k: usize, d: u32) -> Poly {
    let mut e: Exponents = SmallVec::from_elem(0, arity);
    e[k] = d;
    Poly::monomial(Monomial::new(e), num::BigRational::one())
}

/// Proves `gcd(a, b) = 1` by checking every shared variable on a random line
/// modulo a prime. Returns `false` when the check is inconclusive.
fn provably_coprime(a: &Poly, b: &Poly, shared: &[usize]) -> bool {
    let (Ok(ma), Ok(mb)) = (ModPoly::new(a, CHECK_PRIME), ModPoly::new(b, CHECK_PRIME)) else {
        return false;
    };
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (a.num_terms() as u64) << 32 ^ b.num_terms() as u64;
    let arity = a.arity();
    for &k in shared {
        let da = a.degree_in(k) as usize;
        let mut ok = false;
        for _attempt in 0..2 {
            let point: Vec<u64> = (0..arity)
                .map(|_| {
                    state = splitmix(state);
                    1 + state % (CHECK_PRIME - 1)
                })
                .collect();
            let ua = ma.univariate_image(k, &point);
            if ua.len() != da + 1 {
                continue;
            }
            let ub = mb.univariate_image(k, &point);
            let g = univariate_gcd_mod(ua, ub, CHECK_PRIME);
            if g.len() == 1 {
                ok = true;
            }
            break;
        }
        if !ok {
            return false;
        }
    }
    true
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monic gcd of dense univariate polynomials mod p (low degree first).
pub fn univariate_gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = modp::inv_mod(lc, p).unwrap();
        for c in a.iter_mut() {
            *c = modp::mul_mod(*c, inv, p);
        }
    }
    a
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = modp::inv_mod(b[db], p).unwrap();
    while r.len() > db {
        let top = r.len() - 1;
        let q = modp::mul_mod(r[top], inv, p);
        let shift = top - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = modp::sub_mod(r[shift + i], modp::mul_mod(q, bc, p), p);
        }
        trim(&mut r);
    }
    r
}
