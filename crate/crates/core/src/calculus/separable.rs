use std::collections::BTreeMap;

use rand::Rng;

use crate::ratfun::gcd::gcd;
use crate::ratfun::{Coeff, Monomial, Poly, RatFun};

const SPECIALIZATION_TRIES: usize = 64;

/// Content of `p` viewed as a polynomial in the variables `block`, with
/// coefficients in the remaining variables. Scaled so that `p / content` has
/// graded-lex leading coefficient 1.
pub fn block_content(p: &Poly, block: &[usize]) -> Poly {
    let arity = p.arity();
    let mut groups: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key: Vec<u32> = block.iter().map(|&i| m.exps()[i]).collect();
        let mut exps = m.exps().to_vec();
        for &i in block {
            exps[i] = 0;
        }
        let entry = groups.entry(key).or_insert_with(|| Poly::zero(arity));
        *entry = entry.add(&Poly::monomial(Monomial::new(exps), c.clone()));
    }
    let mut g = Poly::zero(arity);
    for q in groups.values() {
        g = gcd(&g, q);
        if g.is_one() {
            break;
        }
    }
    let lc = p.div_exact(&g).expect("content divides").lc();
    g.scale(&lc)
}

/// Writes `H = u/v` with `u` free of `Y` and `v` free of `X` when such a
/// splitting exists; variables outside `X ∪ Y` may appear in both.
///
/// With `(X₀, Y₀)` a random small-integer point, `H` splits exactly when
/// `H(X,Y)·H(X₀,Y₀) = H(X,Y₀)·H(X₀,Y)`, and then `u = H(X,Y₀)` and
/// `v = H(X₀,Y₀)/H(X₀,Y)`. The pair is rescaled so that the numerator and
/// denominator of `v` are primitive with leading coefficient 1 as
/// polynomials in `Y`.
pub fn separable_product<R: Rng>(
    h: &RatFun,
    x: &[usize],
    y: &[usize],
    rng: &mut R,
) -> Option<(RatFun, RatFun)> {
    if h.is_zero() || x.is_empty() || y.is_empty() || x.iter().any(|i| y.contains(i)) {
        return None;
    }
    for _ in 0..SPECIALIZATION_TRIES {
        let x0: Vec<(usize, Coeff)> = x.iter().map(|&i| (i, small(rng))).collect();
        let y0: Vec<(usize, Coeff)> = y.iter().map(|&i| (i, small(rng))).collect();
        let Ok(u) = h.specialize(&y0) else { continue };
        let Ok(w) = h.specialize(&x0) else { continue };
        let Ok(c) = u.specialize(&x0) else { continue };
        if c.is_zero() || w.is_zero() {
            continue;
        }
        if h.mul(&c) != u.mul(&w) {
            return None;
        }
        let v = c.div(&w).ok()?;
        return Some(normalize_pair(u, v, y));
    }
    None
}

fn normalize_pair(u: RatFun, v: RatFun, y: &[usize]) -> (RatFun, RatFun) {
    let cn = block_content(v.num(), y);
    let cd = block_content(v.den(), y);
    let lambda = RatFun::new(cn, cd).expect("nonzero content");
    let u = u.div(&lambda).unwrap();
    let v = v.div(&lambda).unwrap();
    (u, v)
}

fn small<R: Rng>(rng: &mut R) -> Coeff {
    Coeff::from_integer(rng.gen_range(2..=97).into())
}

/// The doubled-variable identity `H(X,Y)·H(X',Y') = H(X,Y')·H(X',Y)`, with
/// fresh copies `X'`, `Y'` and the remaining variables shared.
///
/// Decided exactly. Fixing `(X', Y')` at an anchor where `H` is defined and
/// nonzero gives an identity in the original variables that already forces
/// the splitting, so the anchored form is tried first; the full identity in
/// the doubled variables is the fallback when every anchor is degenerate.
pub fn four_point_identity(h: &RatFun, x: &[usize], y: &[usize]) -> bool {
    if h.is_zero() {
        return true;
    }
    for k in 0..ANCHORS {
        let val = |j: usize| Coeff::from_integer((2 + 3 * k as i64 + j as i64).into());
        let x0: Vec<(usize, Coeff)> = x.iter().enumerate().map(|(j, &i)| (i, val(j))).collect();
        let y0: Vec<(usize, Coeff)> = y
            .iter()
            .enumerate()
            .map(|(j, &i)| (i, val(x.len() + j).recip()))
            .collect();
        let (Ok(u), Ok(w)) = (h.specialize(&y0), h.specialize(&x0)) else { continue };
        let Ok(c) = u.specialize(&x0) else { continue };
        if c.is_zero() {
            continue;
        }
        return h.mul(&c) == u.mul(&w);
    }
    doubled_identity(h, x, y)
}

const ANCHORS: usize = 16;

fn doubled_identity(h: &RatFun, x: &[usize], y: &[usize]) -> bool {
    let n = h.arity();
    let m = n + x.len() + y.len();
    let base: Vec<usize> = (0..n).collect();
    let mut xp = base.clone();
    for (k, &i) in x.iter().enumerate() {
        xp[i] = n + k;
    }
    let mut yp = base.clone();
    for (k, &i) in y.iter().enumerate() {
        yp[i] = n + x.len() + k;
    }
    let mut xyp = xp.clone();
    for &i in y {
        xyp[i] = yp[i];
    }
    let at = |map: &[usize]| (h.num().embed(m, map), h.den().embed(m, map));
    let (n_xy, d_xy) = at(&base);
    let (n_xpyp, d_xpyp) = at(&xyp);
    let (n_xyp, d_xyp) = at(&yp);
    let (n_xpy, d_xpy) = at(&xp);
    let lhs = n_xy.mul(&n_xpyp).mul(&d_xyp).mul(&d_xpy);
    let rhs = n_xyp.mul(&n_xpy).mul(&d_xy).mul(&d_xpyp);
    lhs == rhs
}

/// `f` does not depend on `x_var`.
pub fn independent_of(f: &RatFun, var: usize) -> bool {
    !f.involves(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{parse, vars};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rf(e: &str) -> RatFun {
        parse(e, &vars(&["x", "y", "z"])).unwrap()
    }

    #[test]
    fn separations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(separable_product(&rf("x/y"), &[0], &[1], &mut rng), Some((rf("x"), rf("y"))));
        assert_eq!(
            separable_product(&rf("x^2*y^3"), &[0], &[1], &mut rng),
            Some((rf("x^2"), rf("1/y^3")))
        );
        assert_eq!(separable_product(&rf("x+y"), &[0], &[1], &mut rng), None);
        assert_eq!(
            separable_product(&rf("(y+z)/(3*x)"), &[0], &[1], &mut rng),
            Some((rf("1/(3*x)"), rf("1/(y+z)")))
        );
    }

    #[test]
    fn identity_forms_agree() {
        assert!(four_point_identity(&rf("(y+z)/(3*x)"), &[0], &[1]));
        assert!(!four_point_identity(&rf("x+y"), &[0], &[1]));
        for (e, split) in [("(y+z)/(3*x)", true), ("x+y", false), ("x*y+z", false), ("(x-1)*(y+z)/(x*y)", true)] {
            assert_eq!(doubled_identity(&rf(e), &[0], &[1]), split, "{e}");
            assert_eq!(four_point_identity(&rf(e), &[0], &[1]), split, "{e}");
        }
        assert!(four_point_identity(&rf("(y+z)/(3*x)"), &[0], &[2]));
        assert!(!four_point_identity(&rf("x+y*z+x^2*z"), &[0], &[2]));
    }

    #[test]
    fn independence() {
        assert!(independent_of(&rf("1"), 2));
        assert!(!independent_of(&rf("(y+z)/(3*x)"), 2));
    }
}
