use std::fmt;

use num::{BigRational, One, Zero};

use super::gcd::gcd;
use super::modp;
use super::poly::{check_var, int, Coeff, ModPoly, Poly};
use crate::error::{Error, Result};

/// A rational function in canonical form.
///
/// `num` and `den` are coprime and `den` has graded-lex leading coefficient 1,
/// so two values are equal as field elements exactly when their
/// representations are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.arity() != den.arity() {
            return Err(Error::ArityMismatch {
                expected: num.arity(),
                found: den.arity(),
            });
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        let arity = num.arity();
        if num.is_zero() {
            return Self::zero(arity);
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::normalized(num, den)
    }

    /// Scales so the denominator is monic; assumes coprimality.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.lc();
        if lc.is_one() {
            return Self { num, den };
        }
        let inv = lc.recip();
        Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let arity = p.arity();
        Self {
            num: p,
            den: Poly::one(arity),
        }
    }

    pub fn zero(arity: usize) -> Self {
        Self::from_poly(Poly::zero(arity))
    }

    pub fn one(arity: usize) -> Self {
        Self::from_poly(Poly::one(arity))
    }

    pub fn constant(arity: usize, c: Coeff) -> Self {
        Self::from_poly(Poly::constant(arity, c))
    }

    pub fn from_int(arity: usize, n: i64) -> Self {
        Self::constant(arity, int(n))
    }

    pub fn var(arity: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(arity, i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    /// Exact identity test: the canonical numerator is empty.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value of a constant function.
    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_constant() {
            Some(self.num.constant_value() / self.den.constant_value())
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> u64 {
        self.num.total_degree().max(self.den.total_degree())
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.num.degree_in(i).max(self.den.degree_in(i))
    }

    pub fn involves(&self, i: usize) -> bool {
        self.num.involves(i) || self.den.involves(i)
    }

    pub fn variables(&self) -> Vec<bool> {
        let a = self.num.variables();
        let b = self.den.variables();
        a.into_iter().zip(b).map(|(x, y)| x || y).collect()
    }

    fn check_arity(&self, other: &RatFun) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        self.check_arity(other).expect("arity mismatch in add");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let n = self.num.add(&other.num);
            if self.den.is_constant() {
                return Self {
                    num: n,
                    den: self.den.clone(),
                };
            }
            return Self::reduce(n, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let d = self.den.mul(&other.den);
            return Self::normalized(n, d);
        }
        let ad = self.den.div_exact(&g).unwrap();
        let bd = other.den.div_exact(&g).unwrap();
        let n = self.num.mul(&bd).add(&other.num.mul(&ad));
        let d = self.den.mul(&bd);
        if n.is_zero() {
            return Self::zero(self.arity());
        }
        let h = gcd(&n, &g);
        if h.is_one() {
            Self::normalized(n, d)
        } else {
            Self::normalized(n.div_exact(&h).unwrap(), d.div_exact(&h).unwrap())
        }
    }

    pub fn neg(&self) -> RatFun {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        self.check_arity(other).expect("arity mismatch in mul");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.arity());
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let (an, bd) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), other.den.div_exact(&g1).unwrap())
        };
        let (bn, ad) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        Self::normalized(an.mul(&bn), ad.mul(&bd))
    }

    pub fn scale(&self, c: &Coeff) -> RatFun {
        if c.is_zero() {
            return Self::zero(self.arity());
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        self.check_arity(other)?;
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFun {
        Self {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<RatFun> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    /// Exact partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> RatFun {
        check_var(i, self.arity()).expect("variable in range");
        if self.den.is_constant() {
            return Self {
                num: self.num.derivative(i),
                den: self.den.clone(),
            };
        }
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // D = h·D1, D' = h·E with gcd(D1, E) = 1; f' = (N'·D1 - N·E) / (h·D1²)
        let h = gcd(&self.den, &dd);
        let d1 = self.den.div_exact(&h).unwrap();
        let e = dd.div_exact(&h).unwrap();
        let n = dn.mul(&d1).sub(&self.num.mul(&e));
        if n.is_zero() {
            return Self::zero(self.arity());
        }
        let g = gcd(&n, &h);
        let (n, h) = if g.is_one() {
            (n, h)
        } else {
            (n.div_exact(&g).unwrap(), h.div_exact(&g).unwrap())
        };
        Self::normalized(n, h.mul(&d1).mul(&d1))
    }

    pub fn gradient(&self) -> Vec<RatFun> {
        (0..self.arity()).map(|i| self.partial(i)).collect()
    }

    /// Evaluates over ℚ.
    pub fn eval(&self, point: &[Coeff]) -> Result<Coeff> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: point.len(),
            });
        }
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Evaluates modulo a prime.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<u64> {
        self.compile(p)?.eval(point)
    }

    pub fn compile(&self, p: u64) -> Result<ModRatFun> {
        Ok(ModRatFun {
            p,
            num: self.num.to_modp(p)?,
            den: self.den.to_modp(p)?,
        })
    }

    /// Substitutes functions (of the same ambient arity) for some variables.
    pub fn substitute(&self, assignment: &[(usize, RatFun)]) -> Result<RatFun> {
        let arity = self.arity();
        let mut vals: Vec<Option<&RatFun>> = vec![None; arity];
        for (i, v) in assignment {
            check_var(*i, arity)?;
            if v.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: v.arity(),
                });
            }
            vals[*i] = Some(v);
        }
        if vals.iter().all(Option::is_none) {
            return Ok(self.clone());
        }
        if vals.iter().flatten().all(|v| v.is_constant()) {
            let consts: Vec<Option<Coeff>> = vals
                .iter()
                .map(|v| v.map(|f| f.constant_value().unwrap()))
                .collect();
            let n = self.num.eval_partial(&consts);
            let d = self.den.eval_partial(&consts);
            if d.is_zero() {
                return Err(Error::DegenerateSpecialization);
            }
            return Ok(Self::reduce(n, d));
        }
        let (n1, e1) = substitute_poly(&self.num, &vals);
        let (n2, e2) = substitute_poly(&self.den, &vals);
        if n2.is_zero() {
            return Err(Error::DegenerateSpecialization);
        }
        // self = (n1 / Π b^e1) / (n2 / Π b^e2)
        let mut num = n1;
        let mut den = n2;
        for (i, v) in vals.iter().enumerate() {
            if let Some(v) = v {
                let diff = e2[i] as i64 - e1[i] as i64;
                if diff > 0 {
                    num = num.mul(&v.den.pow(diff as u32));
                } else if diff < 0 {
                    den = den.mul(&v.den.pow((-diff) as u32));
                }
            }
        }
        Ok(Self::reduce(num, den))
    }

    /// Substitutes rational constants for some variables.
    pub fn specialize(&self, values: &[(usize, Coeff)]) -> Result<RatFun> {
        let arity = self.arity();
        let assignment: Vec<(usize, RatFun)> = values
            .iter()
            .map(|(i, c)| (*i, RatFun::constant(arity, c.clone())))
            .collect();
        self.substitute(&assignment)
    }

    /// Moves variable `i` to `map[i]` in a space of `new_arity` variables.
    pub fn embed(&self, new_arity: usize, map: &[usize]) -> RatFun {
        Self {
            num: self.num.embed(new_arity, map),
            den: self.den.embed(new_arity, map),
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let n = self.num.fmt_with(names);
        if self.den.is_one() {
            return n;
        }
        let n = if self.num.num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        let d = self.den.fmt_with(names);
        let simple_den = self.den.num_terms() == 1
            && self.den.lc().is_one()
            && self.den.leading_term().unwrap().0.exps().iter().filter(|&&e| e > 0).count() == 1;
        if simple_den {
            format!("{n}/{d}")
        } else {
            format!("{n}/({d})")
        }
    }
}

/// Substitutes into a polynomial; returns the cleared numerator and, per
/// variable, the power of its value's denominator that was cleared.
fn substitute_poly(p: &Poly, vals: &[Option<&RatFun>]) -> (Poly, Vec<u32>) {
    let arity = p.arity();
    let degs: Vec<u32> = (0..arity)
        .map(|i| if vals[i].is_some() { p.degree_in(i) } else { 0 })
        .collect();
    let pow_cache = |base: &Poly, d: u32| -> Vec<Poly> {
        let mut v = Vec::with_capacity(d as usize + 1);
        v.push(Poly::one(arity));
        for k in 1..=d as usize {
            let next = v[k - 1].mul(base);
            v.push(next);
        }
        v
    };
    let num_pows: Vec<Option<Vec<Poly>>> = (0..arity)
        .map(|i| vals[i].map(|v| pow_cache(&v.num, degs[i])))
        .collect();
    let den_pows: Vec<Option<Vec<Poly>>> = (0..arity)
        .map(|i| {
            vals[i].and_then(|v| {
                if v.den.is_one() {
                    None
                } else {
                    Some(pow_cache(&v.den, degs[i]))
                }
            })
        })
        .collect();
    let mut out = Poly::zero(arity);
    for (m, c) in p.terms() {
        let mut exps = m.exps().to_vec();
        let mut term = Poly::zero(arity);
        let mut factors: Vec<&Poly> = Vec::new();
        for i in 0..arity {
            if let Some(np) = &num_pows[i] {
                let e = exps[i];
                factors.push(&np[e as usize]);
                if let Some(dp) = &den_pows[i] {
                    factors.push(&dp[(degs[i] - e) as usize]);
                }
                exps[i] = 0;
            }
        }
        let mono = super::poly::Monomial::new(exps.as_slice());
        term.add_term(mono, c.clone());
        for f in factors {
            term = term.mul(f);
        }
        for (m, c) in term.terms() {
            out.add_term(m.clone(), c.clone());
        }
    }
    let cleared = (0..arity)
        .map(|i| if den_pows[i].is_some() { degs[i] } else { 0 })
        .collect();
    (out, cleared)
}

/// A rational function compiled for evaluation modulo a prime.
#[derive(Clone, Debug)]
pub struct ModRatFun {
    p: u64,
    num: ModPoly,
    den: ModPoly,
}

impl ModRatFun {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn eval(&self, point: &[u64]) -> Result<u64> {
        let d = self.den.eval(point);
        if d == 0 {
            return Err(Error::Pole);
        }
        let inv = modp::inv_mod(d, self.p).unwrap();
        Ok(modp::mul_mod(self.num.eval(point), inv, self.p))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.arity()).map(|i| format!("x{i}")).collect();
        f.write_str(&self.fmt_with(&names))
    }
}

pub fn rational(n: i64, d: i64) -> Coeff {
    BigRational::new(n.into(), d.into())
}
