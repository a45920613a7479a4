//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use smallvec::SmallVec;

use super::modp;
use crate::error::{Error, Result};

pub type Coeff = BigRational;
pub type Exponents = SmallVec<[u32; 6]>;

const PACK_BITS: u32 = 16;
const PACK_VARS: usize = 8;

fn pack(exps: &[u32]) -> u128 {
    exps.iter()
        .enumerate()
        .fold(0, |k, (i, &e)| k | (e as u128) << (PACK_BITS as usize * i))
}

fn unpack(k: u128, n: usize) -> Exponents {
    (0..n)
        .map(|i| ((k >> (PACK_BITS as usize * i)) & 0xFFFF) as u32)
        .collect()
}

fn packed_divides(a: u128, b: u128, n: usize) -> bool {
    (0..n).all(|i| {
        let sh = PACK_BITS as usize * i;
        (a >> sh) & 0xFFFF <= (b >> sh) & 0xFFFF
    })
}

/// Multiplicative hash for packed monomial keys.
#[derive(Default)]
struct PackedHasher(u64);

impl std::hash::Hasher for PackedHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
        }
    }

    fn write_u128(&mut self, k: u128) {
        let x = (k as u64) ^ ((k >> 64) as u64).rotate_left(29);
        self.0 = (x ^ (x >> 31)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
}

type PackedMap<V> = HashMap<u128, V, std::hash::BuildHasherDefault<PackedHasher>>;

/// An exponent vector over the ambient variable list.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the first variable, then the second, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    degree: u64,
    exps: Exponents,
}

impl Monomial {
    pub fn new(exps: impl Into<Exponents>) -> Self {
        let exps = exps.into();
        let degree = exps.iter().map(|&e| e as u64).sum();
        Self { degree, exps }
    }

    pub fn one(arity: usize) -> Self {
        Self::new(SmallVec::from_elem(0, arity))
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut exps: Exponents = SmallVec::from_elem(0, arity);
        exps[i] = 1;
        Self::new(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Exponents = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: Exponents = other
            .exps
            .iter()
            .zip(&self.exps)
            .map(|(a, b)| a - b)
            .collect();
        Monomial {
            degree: other.degree - self.degree,
            exps,
        }
    }

    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `arity` variables; terms are kept in graded-lex order and
/// zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

pub(crate) fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Coeff::one())
    }

    pub fn constant(arity: usize, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(arity), c);
        }
        Self { arity, terms }
    }

    pub fn from_int(arity: usize, n: i64) -> Self {
        Self::constant(arity, int(n))
    }

    /// The coordinate function `x_i`.
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable {i} out of range for arity {arity}");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(arity, i), Coeff::one());
        Self { arity, terms }
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Self {
        let arity = m.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { arity, terms }
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut out = Self::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.arity(), arity);
            out.add_term(m, c);
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_one(),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_one()
    }

    /// Value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Coeff {
        self.terms
            .get(&Monomial::one(self.arity))
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[i]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[i]).min().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exps[i] > 0)
    }

    /// Flags for the variables that occur in some term.
    pub fn variables(&self) -> Vec<bool> {
        let mut used = vec![false; self.arity];
        for m in self.terms.keys() {
            for (u, &e) in used.iter_mut().zip(m.exps.iter()) {
                *u |= e > 0;
            }
        }
        used
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    /// Leading coefficient under the graded-lex order (zero for zero).
    pub fn lc(&self) -> Coeff {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coeff::zero)
    }

    /// Leading term under pure lexicographic order.
    pub fn lex_leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Poly) {
        assert_eq!(
            self.arity, other.arity,
            "polynomial arity mismatch ({} vs {})",
            self.arity, other.arity
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_arity(other);
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_arity(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.arity);
        }
        if self.is_constant() {
            return other.scale(&self.constant_value());
        }
        if other.is_constant() {
            return self.scale(&other.constant_value());
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_monomial(m, c);
        }
        if let Some(prod) = self.mul_packed(other) {
            return prod;
        }
        let mut acc: HashMap<Monomial, Coeff> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e += &prod)
                    .or_insert(prod);
            }
        }
        Poly {
            arity: self.arity,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Integer coefficients over a common denominator, with monomials packed
    /// into 16-bit exponent fields.
    fn packed_integer_terms(&self) -> (Vec<(u128, BigInt)>, BigInt) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (pack(&m.exps), c.numer() * (&den / c.denom())))
            .collect();
        (terms, den)
    }

    /// Exact division over the integers after clearing denominators. With
    /// `D` primitive, Gauss's lemma makes `A/D` integral whenever it exists,
    /// so any non-integral step proves non-divisibility. The packed key order
    /// is lex with the last variable most significant. The outer `None`
    /// means the packing does not apply.
    fn div_exact_packed(&self, d: &Poly) -> Option<Option<Poly>> {
        let n = self.arity;
        if n == 0 || n > PACK_VARS || (0..n).any(|i| self.degree_in(i) >= 1 << PACK_BITS) {
            return None;
        }
        for i in 0..n {
            if d.degree_in(i) > self.degree_in(i) {
                return Some(None);
            }
        }
        let (ta, da) = self.packed_integer_terms();
        let dprim = d.primitive_integer();
        let scale = d.lc() / dprim.lc();
        let (td, _) = dprim.packed_integer_terms();
        let (lk, lc) = td.iter().max_by_key(|(k, _)| *k).cloned().unwrap();
        let mut rem: BTreeMap<u128, BigInt> = ta.into_iter().collect();
        let mut quot: Vec<(u128, BigInt)> = Vec::new();
        while let Some((&rk, rc)) = rem.iter().next_back() {
            if !packed_divides(lk, rk, n) {
                return Some(None);
            }
            let (qc, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return Some(None);
            }
            let qk = rk - lk;
            for (k, c) in &td {
                use std::collections::btree_map::Entry;
                let prod = c * &qc;
                match rem.entry(k + qk) {
                    Entry::Vacant(v) => {
                        v.insert(-prod);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() -= prod;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quot.push((qk, qc));
        }
        let den = BigRational::from_integer(da) * scale;
        let terms = quot
            .into_iter()
            .map(|(k, c)| (Monomial::new(unpack(k, n)), BigRational::from_integer(c) / &den))
            .collect();
        Some(Some(Poly { arity: n, terms }))
    }

    /// Product through integer accumulation on packed monomials; `None` when
    /// the exponents do not fit the packing.
    fn mul_packed(&self, other: &Poly) -> Option<Poly> {
        let n = self.arity;
        if n == 0 || n > PACK_VARS {
            return None;
        }
        if (0..n).any(|i| self.degree_in(i) as u64 + other.degree_in(i) as u64 >= 1 << PACK_BITS) {
            return None;
        }
        let (ta, da) = self.packed_integer_terms();
        let (tb, db) = other.packed_integer_terms();
        let bits = |t: &[(u128, BigInt)]| t.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
        let len_bits = 64 - (ta.len().min(tb.len()) as u64).leading_zeros() as u64;
        let den = BigRational::from_integer(da * db);
        let sums: Vec<(u128, BigInt)> = if bits(&ta) + bits(&tb) + len_bits < 126 {
            let small = |t: Vec<(u128, BigInt)>| -> Vec<(u128, i128)> {
                t.into_iter()
                    .map(|(k, c)| (k, i128::try_from(c).expect("bounded")))
                    .collect()
            };
            let (sa, sb) = (small(ta), small(tb));
            let mut acc: PackedMap<i128> = PackedMap::default();
            acc.reserve(sa.len() + sb.len());
            for &(ka, ca) in &sa {
                for &(kb, cb) in &sb {
                    *acc.entry(ka + kb).or_insert(0) += ca * cb;
                }
            }
            acc.into_iter().map(|(k, c)| (k, BigInt::from(c))).collect()
        } else {
            let mut acc: PackedMap<BigInt> = PackedMap::default();
            for (ka, ca) in &ta {
                for (kb, cb) in &tb {
                    *acc.entry(ka + kb).or_default() += ca * cb;
                }
            }
            acc.into_iter().collect()
        };
        let terms = sums
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Monomial::new(unpack(k, n)), BigRational::from_integer(c) / &den))
            .collect();
        Some(Poly {
            arity: n,
            terms,
        })
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        if self.is_monomial() {
            let (m, c) = self.terms.iter().next().unwrap();
            let exps: Exponents = m
                .exps
                .iter()
                .map(|&x| x.checked_mul(e).expect("exponent overflow"))
                .collect();
            return Poly::monomial(Monomial::new(exps), num::pow(c.clone(), e as usize));
        }
        let mut acc = Poly::one(self.arity);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.terms
                .insert(Monomial::new(exps), c * BigRational::from_integer(e.into()));
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.check_arity(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(self.arity));
        }
        if d.is_constant() {
            return Some(self.scale(&d.constant_value().recip()));
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        if d.is_monomial() {
            let inv = dc.recip();
            let mut out = Poly::zero(self.arity);
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                out.terms.insert(dm.quotient_of(m), c * &inv);
            }
            return Some(out);
        }
        if let Some(q) = self.div_exact_packed(d) {
            return q;
        }
        let dinv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.arity);
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) || rm.degree() < dm.degree() {
                return None;
            }
            let qm = dm.quotient_of(&rm);
            let qc = rc * &dinv;
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to `x_i`: entry `k` multiplies `x_i^k`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let deg = self.degree_in(i) as usize;
        let mut out = vec![Poly::zero(self.arity); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps[i] as usize;
            let mut exps = m.exps.clone();
            exps[i] = 0;
            out[k].terms.insert(Monomial::new(exps), c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs_in(arity: usize, i: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(arity);
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                debug_assert_eq!(m.exps[i], 0);
                let mut exps = m.exps.clone();
                exps[i] = k as u32;
                out.add_term(Monomial::new(exps), c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `x_i`, as a polynomial free of `x_i`.
    pub fn lc_in(&self, i: usize) -> Poly {
        let deg = self.degree_in(i);
        let mut out = Poly::zero(self.arity);
        for (m, c) in &self.terms {
            if m.exps[i] == deg {
                let mut exps = m.exps.clone();
                exps[i] = 0;
                out.terms.insert(Monomial::new(exps), c.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.arity);
        let mut total = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps.iter()) {
                if e > 0 {
                    t *= num::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes constants for a subset of the variables, keeping the arity.
    pub fn eval_partial(&self, values: &[Option<Coeff>]) -> Poly {
        assert_eq!(values.len(), self.arity);
        let mut out = Poly::zero(self.arity);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            let mut exps = m.exps.clone();
            for (k, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if exps[k] > 0 {
                        t *= num::pow(v.clone(), exps[k] as usize);
                        exps[k] = 0;
                    }
                }
            }
            out.add_term(Monomial::new(exps), t);
        }
        out
    }

    /// Moves variable `i` to position `map[i]` in a space of `new_arity` variables.
    pub fn embed(&self, new_arity: usize, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.arity);
        let mut out = Poly::zero(new_arity);
        for (m, c) in &self.terms {
            let mut exps: Exponents = SmallVec::from_elem(0, new_arity);
            for (k, &e) in m.exps.iter().enumerate() {
                exps[map[k]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Content over ℚ: the positive rational `c` with `self / c` a primitive
    /// integer polynomial.
    pub fn rational_content(&self) -> Coeff {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Coeff::one();
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Primitive integer polynomial with positive graded-lex leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.rational_content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Scales so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Evaluation modulo a prime after compiling the coefficients.
    pub fn to_modp(&self, p: u64) -> Result<ModPoly> {
        ModPoly::new(self, p)
    }

    /// Writes the polynomial using the given variable names.
    pub fn fmt_with(&self, names: &[String]) -> String {
        assert!(names.len() >= self.arity);
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(format_coeff(&abs));
            }
            for (k, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[k].clone()),
                    _ => factors.push(format!("{}^{}", names[k], e)),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

pub(crate) fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// A polynomial with coefficients reduced modulo a prime, for fast evaluation.
#[derive(Clone, Debug)]
pub struct ModPoly {
    p: u64,
    arity: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Exponents, u64)>,
}

impl ModPoly {
    pub fn new(poly: &Poly, p: u64) -> Result<Self> {
        let mut terms = Vec::with_capacity(poly.num_terms());
        for (m, c) in poly.terms() {
            let r = modp::reduce_rational(c, p)?;
            if r != 0 {
                terms.push((m.exps.clone(), r));
            }
        }
        let max_exp = (0..poly.arity()).map(|i| poly.degree_in(i)).collect();
        Ok(Self {
            p,
            arity: poly.arity(),
            max_exp,
            terms,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.arity);
        let p = self.p;
        let powers: Vec<Vec<u64>> = point
            .iter()
            .zip(&self.max_exp)
            .map(|(&x, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                let mut acc = 1 % p;
                v.push(acc);
                for _ in 0..d {
                    acc = modp::mul_mod(acc, x, p);
                    v.push(acc);
                }
                v
            })
            .collect();
        let mut total = 0u64;
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (k, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t = modp::mul_mod(t, powers[k][e as usize], p);
                }
            }
            total = modp::add_mod(total, t, p);
        }
        total
    }

    /// Univariate image in `x_i` after fixing every other variable.
    pub fn univariate_image(&self, i: usize, point: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.max_exp[i] as usize + 1];
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (k, &e) in exps.iter().enumerate() {
                if k != i && e > 0 {
                    t = modp::mul_mod(t, modp::pow_mod(point[k], e as u64, p), p);
                }
            }
            let slot = &mut out[exps[i] as usize];
            *slot = modp::add_mod(*slot, t, p);
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }
}

/// Builds a polynomial from a list of `(exponents, integer coefficient)`.
pub fn poly_from_ints(arity: usize, terms: &[(&[u32], i64)]) -> Poly {
    Poly::from_terms(
        arity,
        terms
            .iter()
            .map(|(e, c)| (Monomial::new(Exponents::from_slice(e)), int(*c))),
    )
}

pub(crate) fn check_var(i: usize, arity: usize) -> Result<()> {
    if i >= arity {
        Err(Error::VariableOutOfRange { index: i, arity })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(Exponents::from_slice(&[2, 0, 0]));
        let b = Monomial::new(Exponents::from_slice(&[0, 1, 1]));
        let c = Monomial::new(Exponents::from_slice(&[0, 0, 3]));
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn exact_division() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let a = x.mul(&x).sub(&y.mul(&y));
        let b = x.sub(&y);
        assert_eq!(a.div_exact(&b), Some(x.add(&y)));
        assert_eq!(a.div_exact(&x), None);
    }

    #[test]
    fn display() {
        let p = poly_from_ints(3, &[(&[2, 1, 0], 1), (&[0, 0, 1], -3), (&[0, 0, 0], 1)]);
        assert_eq!(p.fmt_with(&names()), "x^2*y - 3*z + 1");
        let q = Poly::var(3, 1).scale(&BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert_eq!(q.fmt_with(&names()), "-3/2*y");
    }

    #[test]
    fn modular_evaluation_matches_exact() {
        let p = poly_from_ints(2, &[(&[3, 1], 5), (&[0, 2], -7), (&[0, 0], 11)]);
        let exact = p.eval(&[int(3), int(4)]);
        let m = p.to_modp(2147483647).unwrap();
        assert_eq!(m.eval(&[3, 4]), modp::reduce_rational(&exact, 2147483647).unwrap());
    }

    #[test]
    fn coefficient_split_round_trip() {
        let p = poly_from_ints(3, &[(&[2, 1, 0], 1), (&[1, 0, 2], -3), (&[0, 0, 0], 4)]);
        let cs = p.coeffs_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(Poly::from_coeffs_in(3, 0, &cs), p);
    }
}
