//! Exact reference computations: the symbolic rank of the Jacobian of `L_r`
//! and annihilating polynomials of tuples of rational functions.

use std::collections::HashMap;

use num::{BigInt, One, Signed, Zero};
use rand::Rng;

use crate::dimension::DoublingMap;
use crate::error::{Error, Result};
use crate::linalg::rref_mod;
use crate::ratfun::gcd::lcm;
use crate::ratfun::modp::{crt, fallback_primes, mul_mod, pow_mod, rational_reconstruction};
use crate::ratfun::{Coeff, Monomial, Poly, RatFun};
use crate::settings::Settings;

/// Largest degree of `r` accepted by [`symbolic_rank`].
pub const SYMBOLIC_DEGREE_GUARD: u64 = 6;

const MAX_PRIMES: usize = 24;

/// Rank of the symbolic Jacobian of `L_r`, by fraction-free elimination over
/// polynomials. The Jacobian is obtained by differentiating each component.
pub fn symbolic_rank(map: &DoublingMap) -> Result<usize> {
    let degree = map.base().degree();
    if degree > SYMBOLIC_DEGREE_GUARD {
        return Err(Error::GuardExceeded {
            degree,
            limit: SYMBOLIC_DEGREE_GUARD,
        });
    }
    let cols = 2 * map.n();
    let rows: Vec<Vec<Poly>> = map
        .components()
        .iter()
        .map(|c| clear_row(&(0..cols).map(|j| c.partial(j)).collect::<Vec<_>>()))
        .collect();
    // The rank at a rational point bounds the generic rank from below, so a
    // full rank there settles it without symbolic elimination.
    let full = rows.len().min(cols);
    let mut rng = Settings::default().rng(0x7261_6e6b);
    for _ in 0..3 {
        let point: Vec<Coeff> = (0..cols)
            .map(|_| Coeff::from_integer(rng.gen_range(2..=97).into()))
            .collect();
        if exact_rank(&rows, &point) == full {
            return Ok(full);
        }
    }
    Ok(bareiss_rank(rows))
}

fn exact_rank(rows: &[Vec<Poly>], point: &[Coeff]) -> usize {
    let mut m: Vec<Vec<Coeff>> = rows
        .iter()
        .map(|r| r.iter().map(|e| e.eval(point)).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Multiplies a row of rational functions by the lcm of its denominators.
fn clear_row(row: &[RatFun]) -> Vec<Poly> {
    let arity = row[0].arity();
    let mut l = Poly::one(arity);
    for f in row {
        if !f.den().is_constant() {
            l = lcm(&l, f.den());
        }
    }
    row.iter()
        .map(|f| {
            if f.is_zero() {
                return Poly::zero(arity);
            }
            let k = l.div_exact(f.den()).expect("lcm is a multiple");
            f.num().mul(&k)
        })
        .collect()
}

/// Rank of a polynomial matrix by Bareiss elimination, pivoting on the
/// entry with the fewest terms.
pub fn bareiss_rank(mut m: Vec<Vec<Poly>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let Some(arity) = m.iter().flatten().next().map(Poly::arity) else {
        return 0;
    };
    let mut prev = Poly::one(arity);
    let mut k = 0;
    while k < nrows.min(ncols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                let t = e.num_terms();
                if t > 0 && best.is_none_or(|b| t < b.2) {
                    best = Some((i, j, t));
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            break;
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = m[k][k].clone();
        let pivot_row = m[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            let lead = row[k].clone();
            for j in k + 1..ncols {
                let a = pivot.mul(&row[j]);
                let b = if lead.is_zero() {
                    Poly::zero(arity)
                } else {
                    lead.mul(&pivot_row[j])
                };
                let v = a.sub(&b);
                row[j] = if prev.is_one() {
                    v
                } else {
                    v.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            row[k] = Poly::zero(arity);
        }
        prev = pivot;
        k += 1;
    }
    k
}

/// Monomials of degree at most `dmax` in `m` variables, ascending in graded
/// lexicographic order.
fn monomials_up_to(m: usize, dmax: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::new(cur.as_slice()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, dmax, &mut vec![0; m], &mut out);
    out.sort();
    out
}

/// First null vector of the monomial evaluation matrix modulo `p`: the index
/// of its highest monomial and the vector. `None` when the matrix has full
/// column rank.
fn null_vector_mod(
    fs: &[RatFun],
    monos: &[Monomial],
    p: u64,
    rng: &mut impl Rng,
) -> Result<Option<(usize, Vec<u64>)>> {
    let compiled = fs.iter().map(|f| f.compile(p)).collect::<Result<Vec<_>>>()?;
    let arity = fs[0].arity();
    let want = monos.len() + 8;
    let mut rows = Vec::with_capacity(want);
    let mut misses = 0;
    while rows.len() < want {
        let point: Vec<u64> = (0..arity).map(|_| rng.gen_range(1..p)).collect();
        let vals: Option<Vec<u64>> = compiled.iter().map(|c| c.eval(&point).ok()).collect();
        let Some(vals) = vals else {
            misses += 1;
            if misses > 64 * want {
                return Err(Error::AllSamplesPoles);
            }
            continue;
        };
        let row = monos
            .iter()
            .map(|mono| {
                mono.exps()
                    .iter()
                    .zip(&vals)
                    .fold(1u64, |acc, (&e, &v)| mul_mod(acc, pow_mod(v, e as u64, p), p))
            })
            .collect();
        rows.push(row);
    }
    Ok(rref_mod(rows, monos.len(), p).first_null_vector(p))
}

/// A nonzero polynomial `A` of total degree at most `dmax` with
/// `A(f_1, .., f_m) = 0`, or `None` when no such relation exists.
///
/// The relation is found modulo several primes, lifted by Chinese remaindering
/// and rational reconstruction, and then verified exactly. The result is a
/// primitive integer polynomial whose lexicographically leading coefficient is
/// positive.
pub fn annihilating_poly(fs: &[RatFun], dmax: u32, settings: &Settings) -> Result<Option<Poly>> {
    if !(2..=8).contains(&fs.len()) {
        return Err(Error::InvalidArgument(format!(
            "between 2 and 8 functions are required, got {}",
            fs.len()
        )));
    }
    if dmax < 1 {
        return Err(Error::InvalidArgument("degree bound must be positive".into()));
    }
    let arity = fs[0].arity();
    if let Some(f) = fs.iter().find(|f| f.arity() != arity) {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: f.arity(),
        });
    }
    let monos = monomials_up_to(fs.len(), dmax);
    let mut rng = settings.rng(0x616e_6e69_6869);
    let mut primes: Vec<u64> = settings.primes.clone();
    primes.extend(fallback_primes(&settings.primes, MAX_PRIMES));

    // Images grouped by the index of the leading free column; unlucky primes
    // produce spurious smaller indices.
    let mut images: Vec<(u64, usize, Vec<u64>)> = Vec::new();
    for (count, &p) in primes.iter().enumerate() {
        let image = match null_vector_mod(fs, &monos, p, &mut rng) {
            Ok(x) => x,
            Err(Error::NonInvertibleModulus { .. }) => continue,
            Err(e) => return Err(e),
        };
        let Some((j, v)) = image else {
            return Ok(None);
        };
        images.push((p, j, v));
        let jmax = images.iter().map(|x| x.1).max().unwrap();
        let group: Vec<&(u64, usize, Vec<u64>)> = images.iter().filter(|x| x.1 == jmax).collect();
        if group.len() < 2 && count + 1 < primes.len() {
            continue;
        }
        if let Some(a) = lift(&group, &monos, fs.len()) {
            if vanishes(&a, fs) {
                return Ok(Some(normalize(&a)));
            }
        }
    }
    Err(Error::Inconclusive(
        "annihilator reconstruction did not stabilize".into(),
    ))
}

fn lift(group: &[&(u64, usize, Vec<u64>)], monos: &[Monomial], m: usize) -> Option<Poly> {
    let len = group[0].2.len();
    let mut residues = vec![BigInt::zero(); len];
    let mut modulus = BigInt::one();
    for (p, _, v) in group {
        for (r, &x) in residues.iter_mut().zip(v) {
            *r = crt(r, &modulus, x, *p);
        }
        modulus *= BigInt::from(*p);
    }
    let mut terms = Vec::new();
    for (mono, r) in monos.iter().zip(&residues) {
        if r.is_zero() {
            continue;
        }
        terms.push((mono.clone(), rational_reconstruction(r, &modulus)?));
    }
    Some(Poly::from_terms(m, terms))
}

/// Exact check that `a(f_1, .., f_m)` vanishes, after clearing denominators:
/// `Σ c_e Π num_i^{e_i} den_i^{D_i - e_i}` with `D_i` the degree of `a` in
/// its `i`-th variable.
pub fn vanishes(a: &Poly, fs: &[RatFun]) -> bool {
    let arity = fs[0].arity();
    let degs: Vec<u32> = (0..fs.len()).map(|i| a.degree_in(i)).collect();
    let mut cache: HashMap<(usize, bool, u32), Poly> = HashMap::new();
    let mut power = |i: usize, is_num: bool, e: u32| -> Poly {
        cache
            .entry((i, is_num, e))
            .or_insert_with(|| {
                let base = if is_num { fs[i].num() } else { fs[i].den() };
                base.pow(e)
            })
            .clone()
    };
    let mut total = Poly::zero(arity);
    for (mono, c) in a.terms() {
        let mut t = Poly::constant(arity, c.clone());
        for (i, &e) in mono.exps().iter().enumerate() {
            if e > 0 {
                t = t.mul(&power(i, true, e));
            }
            if degs[i] > e && !fs[i].den().is_one() {
                t = t.mul(&power(i, false, degs[i] - e));
            }
        }
        total = total.add(&t);
    }
    total.is_zero()
}

/// Primitive integer form with positive lexicographically leading coefficient.
pub fn normalize(a: &Poly) -> Poly {
    let mut c: Coeff = a.rational_content();
    if a.lex_leading_term().is_some_and(|(_, lc)| lc.is_negative()) {
        c = -c;
    }
    a.scale(&c.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::doubling_map;
    use crate::ratfun::{parse, vars};

    fn srank(expr: &str, names: &[&str]) -> usize {
        let f = parse(expr, &vars(names)).unwrap();
        symbolic_rank(&doubling_map(&f).unwrap()).unwrap()
    }

    #[test]
    fn symbolic_ranks() {
        assert_eq!(srank("x+y", &["x", "y"]), 3);
        assert_eq!(srank("x*y", &["x", "y"]), 3);
        assert_eq!(srank("(x+y)/(y+z)", &["x", "y", "z"]), 4);
        assert_eq!(srank("x+y+x^2*y^3", &["x", "y"]), 4);
    }

    #[test]
    fn guard() {
        let f = parse("x^7+y", &vars(&["x", "y"])).unwrap();
        assert!(matches!(
            symbolic_rank(&doubling_map(&f).unwrap()),
            Err(Error::GuardExceeded { degree: 7, .. })
        ));
    }

    #[test]
    fn forced_relations() {
        let s = Settings::default();
        let names = vars(&["f00", "f10", "f01", "f11"]);
        let v = vars(&["x", "y"]);
        let m = doubling_map(&parse("x+y", &v).unwrap()).unwrap();
        let a = annihilating_poly(m.components(), 1, &s).unwrap().unwrap();
        assert_eq!(a.fmt_with(&names), "f00 - f10 - f01 + f11");
        let m = doubling_map(&parse("x*y", &v).unwrap()).unwrap();
        let a = annihilating_poly(m.components(), 2, &s).unwrap().unwrap();
        assert_eq!(a, parse("f00*f11 - f10*f01", &names).unwrap().num().clone());
    }

    #[test]
    fn square_relation() {
        let v = vars(&["x", "y"]);
        let pq = vars(&["p", "q"]);
        let fs = [parse("(x+y)^2", &v).unwrap(), parse("x+y", &v).unwrap()];
        let a = annihilating_poly(&fs, 2, &Settings::default()).unwrap().unwrap();
        assert_eq!(a.fmt_with(&pq), "-q^2 + p");
        let fs = [parse("x+y", &v).unwrap(), parse("x*y", &v).unwrap()];
        assert_eq!(annihilating_poly(&fs, 4, &Settings::default()).unwrap(), None);
    }
}
