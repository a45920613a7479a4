use num::{Integer, One, Zero};
use serde::Serialize;

use super::hermite::hermite_reduce;
use super::roots::rational_roots;
use super::upoly::UPoly;
use crate::ratfun::{Coeff, RatFun};

/// Residue data attached to one factor of the simple-pole part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    /// Monic square-free factor, as a function of the integration variable.
    pub factor: RatFun,
    /// Residue at each root of `factor`. When `exact` is false the roots carry
    /// different residues and this is their mean (trace over degree).
    pub value: RatFun,
    /// `factor` is a product of linear factors over the coefficient field.
    pub splits_over_q: bool,
    pub exact: bool,
}

impl Residue {
    pub fn degree(&self, var: usize) -> u32 {
        self.factor.degree_in(var)
    }

    /// Sum of the residues over all roots of the factor.
    pub fn trace(&self, var: usize) -> RatFun {
        self.value.scale(&Coeff::from_integer(self.degree(var).into()))
    }

    pub fn rational_value(&self) -> Option<Coeff> {
        self.value.constant_value()
    }
}

#[derive(Debug, Clone)]
pub struct ResidueProfile {
    pub var: usize,
    /// Square-free factors of the denominator with their multiplicities.
    pub squarefree_poles: Vec<(RatFun, u32)>,
    /// Residues of the simple-pole part left by Hermite reduction.
    pub residues: Vec<Residue>,
    /// Polynomial part of `f` in the integration variable.
    pub polynomial_part: RatFun,
    /// Rational part of the antiderivative found by Hermite reduction.
    pub rational_part: RatFun,
}

impl ResidueProfile {
    /// All residues are known rational numbers.
    pub fn all_rational(&self) -> bool {
        self.residues.iter().all(|r| r.exact && r.rational_value().is_some())
    }

    /// Least positive integer clearing every residue denominator.
    pub fn residue_denominator_lcm(&self) -> Option<u64> {
        let mut l = num::BigInt::one();
        for r in &self.residues {
            if !r.exact {
                return None;
            }
            l = l.lcm(r.rational_value()?.denom());
        }
        u64::try_from(l).ok()
    }
}

/// Multiplication-by-`rho` matrix on `K[t]/(d)` in the monomial basis.
fn multiplication_matrix(rho: &UPoly, d: &UPoly) -> Vec<Vec<RatFun>> {
    let n = d.degree();
    let arity = d.arity();
    let mut cols = Vec::with_capacity(n);
    let mut cur = rho.rem(d);
    let t = UPoly::t(arity, d.var());
    for _ in 0..n {
        cols.push((0..n).map(|i| cur.coeff(i)).collect::<Vec<_>>());
        cur = cur.mul(&t).rem(d);
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

fn mat_mul(a: &[Vec<RatFun>], b: &[Vec<RatFun>]) -> Vec<Vec<RatFun>> {
    let n = a.len();
    let arity = a[0][0].arity();
    let mut out = vec![vec![RatFun::zero(arity); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

/// Characteristic polynomial by the Faddeev–LeVerrier recursion, low degree
/// first.
fn charpoly(m: &[Vec<RatFun>], arity: usize) -> Vec<RatFun> {
    let n = m.len();
    let mut c = vec![RatFun::zero(arity); n + 1];
    c[n] = RatFun::one(arity);
    let mut mk = vec![vec![RatFun::zero(arity); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&c[n - k + 1]);
        }
        mk = next;
        let am = mat_mul(m, &mk);
        let tr = (0..n).fold(RatFun::zero(arity), |acc, i| acc.add(&am[i][i]));
        c[n - k] = tr.scale(&Coeff::new((-1).into(), (k as i64).into()));
    }
    c
}

fn trace(rho: &UPoly, w: &UPoly) -> RatFun {
    let m = multiplication_matrix(rho, w);
    let arity = w.arity();
    (0..m.len()).fold(RatFun::zero(arity), |acc, i| acc.add(&m[i][i]))
}

/// Rational constants among the roots of a polynomial whose coefficients may
/// involve other variables. Candidates come from a specialization of those
/// variables and are confirmed exactly.
fn constant_roots(c: &[RatFun], arity: usize) -> Vec<Coeff> {
    if let Some(q) = c.iter().map(RatFun::constant_value).collect::<Option<Vec<_>>>() {
        return rational_roots(&q);
    }
    for shift in 0..8i64 {
        let point: Vec<Coeff> = (0..arity)
            .map(|i| Coeff::from_integer((3 + 7 * i as i64 + 11 * shift).into()))
            .collect();
        let Ok(spec) = c.iter().map(|k| k.eval(&point)).collect::<Result<Vec<_>, _>>() else {
            continue;
        };
        if spec.last().is_none_or(Zero::is_zero) {
            continue;
        }
        let poly = UPoly::from_coeffs(arity, 0, c.to_vec());
        return rational_roots(&spec)
            .into_iter()
            .filter(|r| poly.eval(&RatFun::constant(arity, r.clone())).is_zero())
            .collect();
    }
    Vec::new()
}

/// Residues of `f` with respect to `x_var` after Hermite reduction.
///
/// Residues at the roots of a square-free denominator `D` are the roots of
/// the characteristic polynomial of multiplication by `A/D'` modulo `D`. For
/// each rational residue `c` the poles carrying it are the roots of
/// `gcd(D, A - c·D')`; poles with irrational residues are grouped into one
/// entry carrying their mean residue.
pub fn residue_profile(f: &RatFun, var: usize) -> ResidueProfile {
    let arity = f.arity();
    let h = hermite_reduce(f, var);
    let squarefree_poles = h
        .squarefree
        .iter()
        .enumerate()
        .filter(|(_, d)| d.degree() > 0)
        .map(|(i, d)| (d.to_ratfun(), i as u32 + 1))
        .collect();
    let mut residues = Vec::new();
    let (a, d) = (&h.simple_num, &h.simple_den);
    if !a.is_zero() && d.degree() > 0 {
        let dp = d.derivative();
        let (_, s, _) = dp.ext_gcd(d);
        let rho = a.mul(&s).rem(d);
        let cp = charpoly(&multiplication_matrix(&rho, d), arity);
        let mut rest = d.clone();
        for c in constant_roots(&cp, arity) {
            let kc = RatFun::constant(arity, c.clone());
            let v = d.gcd(&a.sub(&dp.scale(&kc)));
            if v.degree() == 0 {
                continue;
            }
            rest = rest.div_exact(&v);
            let roots = v.rational_coeffs().map(|q| rational_roots(&q));
            match roots {
                Some(rs) if rs.len() == v.degree() => {
                    for r in rs {
                        let lin = UPoly::t(arity, var).sub(&UPoly::constant(var, RatFun::constant(arity, r)));
                        residues.push(Residue {
                            factor: lin.to_ratfun(),
                            value: kc.clone(),
                            splits_over_q: true,
                            exact: true,
                        });
                    }
                }
                _ => residues.push(Residue {
                    factor: v.to_ratfun(),
                    value: kc,
                    splits_over_q: v.degree() == 1,
                    exact: true,
                }),
            }
        }
        if rest.degree() > 0 {
            let deg = rest.degree() as i64;
            let mean = trace(&rho, &rest).scale(&Coeff::new(1.into(), deg.into()));
            residues.push(Residue {
                factor: rest.to_ratfun(),
                value: mean,
                splits_over_q: false,
                exact: false,
            });
        }
    }
    ResidueProfile {
        var,
        squarefree_poles,
        residues,
        polynomial_part: h.polynomial.to_ratfun(),
        rational_part: h.rational,
    }
}

/// Why a function is not the logarithmic derivative of a rational function
/// over the coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogDerivFailure {
    PolynomialPart,
    HigherOrderPole,
    NonIntegerResidue,
    /// Some residues are irrational, so the poles do not group over ℚ.
    NonSplitting,
}

impl LogDerivFailure {
    pub fn code(self) -> &'static str {
        match self {
            Self::PolynomialPart => "polynomial-part",
            Self::HigherOrderPole => "higher-order-pole",
            Self::NonIntegerResidue => "non-integer-residue",
            Self::NonSplitting => "non-splitting",
        }
    }
}

/// A monic `g` with `(∂g/∂x_var)/g = f`: the product of residue factors raised
/// to their residues.
pub fn logderiv_integrate(f: &RatFun, var: usize) -> Result<RatFun, LogDerivFailure> {
    let arity = f.arity();
    if f.is_zero() {
        return Ok(RatFun::one(arity));
    }
    let prof = residue_profile(f, var);
    if !prof.polynomial_part.is_zero() {
        return Err(LogDerivFailure::PolynomialPart);
    }
    if !prof.rational_part.is_zero() {
        return Err(LogDerivFailure::HigherOrderPole);
    }
    if prof.residues.iter().any(|r| !r.exact) {
        return Err(LogDerivFailure::NonSplitting);
    }
    let mut g = RatFun::one(arity);
    for r in &prof.residues {
        let c = r.rational_value().ok_or(LogDerivFailure::NonIntegerResidue)?;
        if !c.is_integer() {
            return Err(LogDerivFailure::NonIntegerResidue);
        }
        let e = i64::try_from(c.to_integer()).map_err(|_| LogDerivFailure::NonIntegerResidue)?;
        g = g.mul(&r.factor.powi(e).expect("nonzero factor"));
    }
    if g.partial(var).div(&g).ok().as_ref() != Some(f) {
        return Err(LogDerivFailure::HigherOrderPole);
    }
    Ok(g)
}
