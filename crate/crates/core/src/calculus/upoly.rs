//! Dense univariate polynomials in one distinguished variable, with
//! coefficients in the field of rational functions of the other variables.

use crate::ratfun::{Coeff, Poly, RatFun};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    arity: usize,
    var: usize,
    /// Entry `k` multiplies `t^k`; no trailing zeros.
    c: Vec<RatFun>,
}

impl UPoly {
    pub fn zero(arity: usize, var: usize) -> Self {
        Self {
            arity,
            var,
            c: Vec::new(),
        }
    }

    pub fn constant(var: usize, k: RatFun) -> Self {
        debug_assert!(!k.involves(var));
        Self::from_coeffs(k.arity(), var, vec![k])
    }

    pub fn one(arity: usize, var: usize) -> Self {
        Self::constant(var, RatFun::one(arity))
    }

    pub fn t(arity: usize, var: usize) -> Self {
        Self::from_coeffs(arity, var, vec![RatFun::zero(arity), RatFun::one(arity)])
    }

    pub fn from_coeffs(arity: usize, var: usize, mut c: Vec<RatFun>) -> Self {
        while c.last().is_some_and(RatFun::is_zero) {
            c.pop();
        }
        Self { arity, var, c }
    }

    pub fn from_poly(p: &Poly, var: usize) -> Self {
        let c = p.coeffs_in(var).into_iter().map(RatFun::from_poly).collect();
        Self::from_coeffs(p.arity(), var, c)
    }

    pub fn to_ratfun(&self) -> RatFun {
        let t = RatFun::var(self.arity, self.var);
        let mut acc = RatFun::zero(self.arity);
        for c in self.c.iter().rev() {
            acc = acc.mul(&t).add(c);
        }
        acc
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> RatFun {
        self.c.get(k).cloned().unwrap_or_else(|| RatFun::zero(self.arity))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial treated as degree 0.
    pub fn degree(&self) -> usize {
        self.deg().unwrap_or(0)
    }

    pub fn lc(&self) -> RatFun {
        self.c.last().cloned().unwrap_or_else(|| RatFun::zero(self.arity))
    }

    /// All coefficients are rational numbers.
    pub fn has_constant_coeffs(&self) -> bool {
        self.c.iter().all(RatFun::is_constant)
    }

    pub fn rational_coeffs(&self) -> Option<Vec<Coeff>> {
        self.c.iter().map(RatFun::constant_value).collect()
    }

    fn like(&self, c: Vec<RatFun>) -> Self {
        Self::from_coeffs(self.arity, self.var, c)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        self.like((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        self.like((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> UPoly {
        self.like(self.c.iter().map(RatFun::neg).collect())
    }

    pub fn scale(&self, k: &RatFun) -> UPoly {
        if k.is_zero() {
            return Self::zero(self.arity, self.var);
        }
        self.like(self.c.iter().map(|c| c.mul(k)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.arity, self.var);
        }
        let mut out = vec![RatFun::zero(self.arity); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        self.like(out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = Self::one(self.arity, self.var);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        self.like(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Coeff::from_integer(k.into())))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> UPoly {
        let mut out = vec![RatFun::zero(self.arity)];
        for (k, c) in self.c.iter().enumerate() {
            out.push(c.scale(&Coeff::new(1.into(), (k + 1).into())));
        }
        self.like(out)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.deg().expect("division by the zero polynomial");
        let inv = d.lc().inv().unwrap();
        let mut r = self.c.clone();
        let mut q = vec![RatFun::zero(self.arity); self.c.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let f = r[top].mul(&inv);
            if !f.is_zero() {
                for (i, dc) in d.c.iter().enumerate() {
                    r[top - dd + i] = r[top - dd + i].sub(&f.mul(dc));
                }
            }
            q[top - dd] = f;
            r.pop();
            while r.last().is_some_and(RatFun::is_zero) {
                r.pop();
            }
        }
        (self.like(q), self.like(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    /// Quotient of an exact division.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g = gcd(self, o)`, `g` monic.
    pub fn ext_gcd(&self, o: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (arity, var) = (self.arity, self.var);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(arity, var), Self::zero(arity, var));
        let (mut t0, mut t1) = (Self::zero(arity, var), Self::one(arity, var));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Solves `s·a + t·b = c` with `deg s < deg b`, assuming `gcd(a, b) = 1`.
    pub fn solve_bezout(a: &UPoly, b: &UPoly, c: &UPoly) -> (UPoly, UPoly) {
        let (_, s, t) = a.ext_gcd(b);
        let s = s.mul(c);
        let t = t.mul(c);
        let (q, s) = s.div_rem(b);
        (s, t.add(&q.mul(a)))
    }

    /// Yun's square-free decomposition: `self = lc · Π d_i^i` with the `d_i`
    /// monic, square-free and pairwise coprime. Entry `i - 1` holds `d_i`.
    pub fn squarefree(&self) -> Vec<UPoly> {
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_exact(&a);
        let mut c = df.div_exact(&a);
        let mut out = Vec::new();
        loop {
            let d = c.sub(&b.derivative());
            if b.deg() == Some(0) {
                break;
            }
            a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_exact(&a);
            c = d.div_exact(&a);
        }
        while out.last().is_some_and(|d| d.deg() == Some(0)) {
            out.pop();
        }
        out
    }

    /// Evaluation at a value of the distinguished variable.
    pub fn eval(&self, x: &RatFun) -> RatFun {
        let mut acc = RatFun::zero(self.arity);
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

/// Splits `f` into numerator and denominator polynomials in `var`, the
/// denominator monic.
pub fn split(f: &RatFun, var: usize) -> (UPoly, UPoly) {
    let n = UPoly::from_poly(f.num(), var);
    let d = UPoly::from_poly(f.den(), var);
    let inv = d.lc().inv().expect("nonzero denominator");
    (n.scale(&inv), d.scale(&inv))
}
