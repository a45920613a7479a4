//! Modular multivariate gcd (Brown's dense algorithm).
//!
//! Images modulo word-size primes are computed by evaluating away one
//! variable at a time and interpolating the univariate-in-that-variable
//! coefficients back; the integer gcd is recovered by Chinese remaindering
//! and accepted only after exact trial division.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{BigInt, BigRational, Integer, One, Zero};
use smallvec::SmallVec;

use super::gcd::univariate_gcd_mod;
use super::modp::{self, add_mod, inv_mod, mul_mod, sub_mod};
use super::poly::{Monomial, Poly};

type Ex = SmallVec<[u32; 6]>;

const MAX_PRIMES: usize = 48;

/// Multivariate polynomial over `Z_p`; keys are exponent vectors compared
/// lexicographically with the first variable most significant.
#[derive(Clone, Debug)]
struct MP {
    nv: usize,
    t: BTreeMap<Ex, u64>,
}

type Dense = Vec<u64>;

fn trim(v: &mut Dense) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn ueval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

fn umul(a: &[u64], b: &[u64], p: u64) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

/// Exact quotient; the caller guarantees divisibility.
fn udiv(a: &[u64], b: &[u64], p: u64) -> Dense {
    let db = b.len() - 1;
    if a.len() <= db {
        return Vec::new();
    }
    let inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let mut q = vec![0; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = mul_mod(r[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (i, &bc) in b.iter().enumerate() {
                r[k + i] = sub_mod(r[k + i], mul_mod(c, bc, p), p);
            }
        }
    }
    q
}

fn ugcd(a: &[u64], b: &[u64], p: u64) -> Dense {
    univariate_gcd_mod(a.to_vec(), b.to_vec(), p)
}

impl MP {
    fn is_zero(&self) -> bool {
        self.t.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.t.len() == 1 && self.t.keys().next().unwrap().iter().all(|&e| e == 0)
    }

    fn lm(&self) -> Option<&Ex> {
        self.t.keys().next_back()
    }

    fn scale(&mut self, c: u64, p: u64) {
        for v in self.t.values_mut() {
            *v = mul_mod(*v, c, p);
        }
        self.t.retain(|_, v| *v != 0);
    }

    fn monic(mut self, p: u64) -> MP {
        if let Some((_, &lc)) = self.t.iter().next_back() {
            self.scale(inv_mod(lc, p).expect("nonzero"), p);
        }
        self
    }

    fn eval_last(&self, alpha: u64, p: u64) -> MP {
        let last = self.nv - 1;
        let maxe = self.t.keys().map(|k| k[last]).max().unwrap_or(0) as usize;
        let mut pw = Vec::with_capacity(maxe + 1);
        let mut acc = 1;
        for _ in 0..=maxe {
            pw.push(acc);
            acc = mul_mod(acc, alpha, p);
        }
        let mut t: BTreeMap<Ex, u64> = BTreeMap::new();
        for (k, &c) in &self.t {
            let v = mul_mod(c, pw[k[last] as usize], p);
            let e = t.entry(k[..last].into()).or_insert(0);
            *e = add_mod(*e, v, p);
        }
        t.retain(|_, v| *v != 0);
        MP { nv: self.nv - 1, t }
    }

    /// Coefficients in the last variable, keyed by the remaining exponents.
    fn group_last(&self) -> BTreeMap<Ex, Dense> {
        let last = self.nv - 1;
        let mut g: BTreeMap<Ex, Dense> = BTreeMap::new();
        for (k, &c) in &self.t {
            let e = k[last] as usize;
            let d = g.entry(k[..last].into()).or_default();
            if d.len() <= e {
                d.resize(e + 1, 0);
            }
            d[e] = c;
        }
        g
    }

    fn ungroup(nv: usize, g: &BTreeMap<Ex, Dense>) -> MP {
        let mut t = BTreeMap::new();
        for (k, d) in g {
            for (e, &c) in d.iter().enumerate() {
                if c != 0 {
                    let mut key = k.clone();
                    key.push(e as u32);
                    t.insert(key, c);
                }
            }
        }
        MP { nv, t }
    }

    fn to_dense(&self) -> Dense {
        let mut d = Vec::new();
        for (k, &c) in &self.t {
            let e = k[0] as usize;
            if d.len() <= e {
                d.resize(e + 1, 0);
            }
            d[e] = c;
        }
        d
    }

    fn from_dense(d: &[u64]) -> MP {
        let t = d
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (Ex::from_elem(e as u32, 1), c))
            .collect();
        MP { nv: 1, t }
    }
}

fn content_of(g: &BTreeMap<Ex, Dense>, p: u64) -> Dense {
    let mut c: Dense = Vec::new();
    for d in g.values() {
        c = ugcd(&c, d, p);
        if c.len() == 1 {
            break;
        }
    }
    c
}

/// Monic gcd in `Z_p[x_0, …, x_{nv−1}]` (lex leading coefficient 1).
fn pgcd(a: &MP, b: &MP, p: u64) -> MP {
    if a.is_zero() {
        return b.clone().monic(p);
    }
    if b.is_zero() {
        return a.clone().monic(p);
    }
    let nv = a.nv;
    if nv == 1 {
        return MP::from_dense(&ugcd(&a.to_dense(), &b.to_dense(), p));
    }
    let mut ga = a.group_last();
    let mut gb = b.group_last();
    let ca = content_of(&ga, p);
    let cb = content_of(&gb, p);
    let c = ugcd(&ca, &cb, p);
    for d in ga.values_mut() {
        *d = udiv(d, &ca, p);
    }
    for d in gb.values_mut() {
        *d = udiv(d, &cb, p);
    }
    let la = ga.values().next_back().unwrap().clone();
    let lb = gb.values().next_back().unwrap().clone();
    let g = ugcd(&la, &lb, p);
    let deg = |m: &BTreeMap<Ex, Dense>| m.values().map(|d| d.len() - 1).max().unwrap_or(0);
    let bound = (g.len() - 1) + deg(&ga).min(deg(&gb));
    let a1 = MP::ungroup(nv, &ga);
    let b1 = MP::ungroup(nv, &gb);

    let lift_c = || {
        let mut m = BTreeMap::new();
        m.insert(Ex::from_elem(0, nv - 1), c.clone());
        MP::ungroup(nv, &m).monic(p)
    };

    let mut lm: Option<Ex> = None;
    let mut interp: BTreeMap<Ex, Dense> = BTreeMap::new();
    let mut q: Dense = vec![1];
    let mut npts = 0usize;
    let mut alpha = 0u64;
    loop {
        alpha += 1;
        if ueval(&la, alpha, p) == 0 || ueval(&lb, alpha, p) == 0 {
            continue;
        }
        let mut ci = pgcd(&a1.eval_last(alpha, p), &b1.eval_last(alpha, p), p);
        if ci.is_constant() {
            return lift_c();
        }
        let m = ci.lm().unwrap().clone();
        ci.scale(ueval(&g, alpha, p), p);
        let ord = lm.as_ref().map(|l| m.cmp(l));
        match ord {
            Some(Ordering::Greater) => continue,
            None | Some(Ordering::Less) => {
                lm = Some(m);
                interp = ci.t.into_iter().map(|(k, v)| (k, vec![v])).collect();
                q = vec![p - alpha % p, 1];
                npts = 1;
            }
            Some(Ordering::Equal) => {
                let qa = ueval(&q, alpha, p);
                let inv = inv_mod(qa, p).expect("distinct points");
                let keys: Vec<Ex> = interp.keys().chain(ci.t.keys()).cloned().collect();
                for k in keys {
                    let v = ci.t.get(&k).copied().unwrap_or(0);
                    let cur = interp.entry(k).or_default();
                    let old = ueval(cur, alpha, p);
                    let diff = mul_mod(sub_mod(v, old, p), inv, p);
                    if diff != 0 {
                        if cur.len() < q.len() {
                            cur.resize(q.len(), 0);
                        }
                        for (i, &qc) in q.iter().enumerate() {
                            cur[i] = add_mod(cur[i], mul_mod(diff, qc, p), p);
                        }
                        trim(cur);
                    }
                }
                interp.retain(|_, d| !d.is_empty());
                q = umul(&q, &[p - alpha % p, 1], p);
                npts += 1;
            }
        }
        if npts > bound {
            break;
        }
    }
    let cc = content_of(&interp, p);
    for d in interp.values_mut() {
        *d = umul(&udiv(d, &cc, p), &c, p);
    }
    MP::ungroup(nv, &interp).monic(p)
}

/// Gcd of two nonzero polynomials by the modular method, normalized like
/// [`super::gcd::gcd`]. Returns `None` if no stable image verifies within
/// the prime budget.
pub(crate) fn modular_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let arity = a.arity();
    let va = a.variables();
    let vb = b.variables();
    let mut order: Vec<usize> = (0..arity).filter(|&k| va[k] || vb[k]).collect();
    if order.is_empty() {
        return Some(Poly::one(arity));
    }
    order.sort_by_key(|&k| std::cmp::Reverse(a.degree_in(k).max(b.degree_in(k))));
    let ints = |f: &Poly| -> BTreeMap<Ex, BigInt> {
        f.primitive_integer()
            .terms()
            .map(|(m, c)| (order.iter().map(|&k| m.exps()[k]).collect(), c.numer().clone()))
            .collect()
    };
    let ai = ints(a);
    let bi = ints(b);
    let lca = ai.values().next_back().unwrap();
    let lcb = bi.values().next_back().unwrap();
    let gamma = lca.gcd(lcb);
    let nv = order.len();
    let reduce = |f: &BTreeMap<Ex, BigInt>, p: u64| MP {
        nv,
        t: f
            .iter()
            .map(|(k, c)| (k.clone(), modp::reduce_int(c, p)))
            .filter(|(_, v)| *v != 0)
            .collect(),
    };

    let primes = modp::primes_below_power_of_two(62, MAX_PRIMES).ok()?;
    let mut lm: Option<Ex> = None;
    let mut acc: BTreeMap<Ex, BigInt> = BTreeMap::new();
    let mut modulus = BigInt::one();
    for p in primes {
        if modp::reduce_int(lca, p) == 0 || modp::reduce_int(lcb, p) == 0 {
            continue;
        }
        let mut cp = pgcd(&reduce(&ai, p), &reduce(&bi, p), p);
        if cp.is_constant() {
            return Some(Poly::one(arity));
        }
        let m = cp.lm().unwrap().clone();
        cp.scale(modp::reduce_int(&gamma, p), p);
        match lm.as_ref().map(|l| m.cmp(l)) {
            Some(Ordering::Greater) => continue,
            None | Some(Ordering::Less) => {
                lm = Some(m);
                acc = cp.t.iter().map(|(k, &v)| (k.clone(), BigInt::from(v))).collect();
                modulus = BigInt::from(p);
                continue;
            }
            Some(Ordering::Equal) => {}
        }
        let stable = acc.len() == cp.t.len()
            && acc.iter().all(|(k, v)| {
                let lifted = modp::symmetric_lift(v, &modulus);
                cp.t.get(k).copied() == Some(modp::reduce_int(&lifted, p))
            });
        if stable {
            if let Some(g) = candidate(&acc, &modulus, &order, arity, a, b) {
                return Some(g);
            }
        }
        let keys: Vec<Ex> = acc.keys().chain(cp.t.keys()).cloned().collect();
        for k in keys {
            let v = cp.t.get(&k).copied().unwrap_or(0);
            let cur = acc.entry(k).or_insert_with(BigInt::zero);
            *cur = modp::crt(cur, &modulus, v, p);
        }
        modulus *= BigInt::from(p);
        acc.retain(|_, v| !v.is_zero());
    }
    None
}

fn candidate(
    acc: &BTreeMap<Ex, BigInt>,
    modulus: &BigInt,
    order: &[usize],
    arity: usize,
    a: &Poly,
    b: &Poly,
) -> Option<Poly> {
    let terms = acc.iter().filter_map(|(k, v)| {
        let c = modp::symmetric_lift(v, modulus);
        if c.is_zero() {
            return None;
        }
        let mut e: SmallVec<[u32; 6]> = SmallVec::from_elem(0, arity);
        for (slot, &var) in order.iter().enumerate() {
            e[var] = k[slot];
        }
        Some((Monomial::new(e), BigRational::from_integer(c)))
    });
    let g = Poly::from_terms(arity, terms);
    if g.is_zero() {
        return None;
    }
    if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
        Some(g.monic())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::gcd::gcd;
    use crate::ratfun::{parse, vars};

    fn poly(e: &str, names: &[&str]) -> Poly {
        let f = parse(e, &vars(names)).unwrap();
        f.num().clone()
    }

    #[test]
    fn matches_planted_gcd() {
        let v = ["x", "y", "z"];
        let g = poly("(x*y + z^2 + 3)*(2*x - y*z + 5)^2", &v);
        let a = g.mul(&poly("(x + y)^3 - z", &v));
        let b = g.mul(&poly("y - 2*z + x^2*y", &v));
        assert_eq!(modular_gcd(&a, &b).unwrap(), g.monic());
        assert_eq!(gcd(&a, &b), g.monic());
    }

    #[test]
    fn coprime_and_content() {
        let v = ["x", "y"];
        let a = poly("(x + 1)*(y^2 + x)", &v);
        let b = poly("(x + 1)*(y - x^3)", &v);
        assert_eq!(modular_gcd(&a, &b).unwrap(), poly("x + 1", &v));
        let c = poly("x + y + 7", &v);
        assert!(modular_gcd(&a, &c).unwrap().is_one());
    }

    #[test]
    fn large_coefficients() {
        let v = ["x", "y"];
        let g = poly("123456789012345*x^3*y - 98765432109876*y^2 + 5555555555555555", &v);
        let a = g.mul(&poly("x - 31415926535*y", &v));
        let b = g.mul(&poly("x^2 + 27182818284*y + 1", &v));
        assert_eq!(modular_gcd(&a, &b).unwrap(), g.monic());
    }
}
