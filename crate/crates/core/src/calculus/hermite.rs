use super::upoly::{split, UPoly};
use crate::ratfun::RatFun;

/// `f = P' + g' + A/D` with `P` polynomial, `g` rational and `D` square-free.
#[derive(Debug, Clone)]
pub struct HermiteSplit {
    /// Polynomial part of `f` (not yet integrated).
    pub polynomial: UPoly,
    /// Rational part `g` of the antiderivative.
    pub rational: RatFun,
    /// Remaining proper fraction with square-free denominator.
    pub simple_num: UPoly,
    pub simple_den: UPoly,
    /// Square-free factors of the denominator of `f`; entry `i - 1` has
    /// multiplicity `i`.
    pub squarefree: Vec<UPoly>,
}

/// Hermite reduction of `f` with respect to `x_var`, other variables acting
/// as constants.
pub fn hermite_reduce(f: &RatFun, var: usize) -> HermiteSplit {
    let arity = f.arity();
    let (n, d) = split(f, var);
    let (polynomial, mut a) = if d.deg() == Some(0) {
        (n, UPoly::zero(arity, var))
    } else {
        n.div_rem(&d)
    };
    let squarefree = if d.deg() == Some(0) {
        Vec::new()
    } else {
        d.squarefree()
    };
    let mut g = RatFun::zero(arity);
    let mut den = d;
    if !a.is_zero() {
        for (idx, v) in squarefree.iter().enumerate() {
            let i = idx + 1;
            if i < 2 || v.deg() == Some(0) {
                continue;
            }
            let u = den.div_exact(&v.pow(i as u32));
            let uv = u.mul(&v.derivative());
            for j in (1..i).rev() {
                let rhs = a.scale(&RatFun::from_int(arity, -(j as i64)).inv().unwrap());
                let (b, c) = UPoly::solve_bezout(&uv, v, &rhs);
                let vj = v.pow(j as u32).to_ratfun();
                g = g.add(&b.to_ratfun().div(&vj).expect("nonzero power"));
                a = c
                    .scale(&RatFun::from_int(arity, -(j as i64)))
                    .sub(&u.mul(&b.derivative()));
            }
            den = u.mul(v);
        }
    }
    HermiteSplit {
        polynomial,
        rational: g,
        simple_num: a,
        simple_den: den,
        squarefree,
    }
}

/// A rational `g` with `∂g/∂x_var = f`, when one exists. The polynomial part
/// of `g` has no constant term.
pub fn hermite_antiderivative(f: &RatFun, var: usize) -> Option<RatFun> {
    let h = hermite_reduce(f, var);
    if !h.simple_num.is_zero() {
        return None;
    }
    let g = h.polynomial.integral().to_ratfun().add(&h.rational);
    (g.partial(var) == *f).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{parse, vars};

    fn rf(e: &str) -> RatFun {
        parse(e, &vars(&["x", "y"])).unwrap()
    }

    #[test]
    fn antiderivatives() {
        assert_eq!(hermite_antiderivative(&rf("1/x^2"), 0), Some(rf("-1/x")));
        assert_eq!(hermite_antiderivative(&rf("2*x+3"), 0), Some(rf("x^2+3*x")));
        assert_eq!(hermite_antiderivative(&rf("1/x"), 0), None);
        let g = rf("(x^2+y)/((x-1)^3*(x+y)^2)");
        let back = hermite_antiderivative(&g.partial(0), 0).unwrap();
        assert!(back.sub(&g).partial(0).is_zero());
    }
}
