//! Random instances of the canonical forms, for regression and acceptance
//! runs.
//!
//! Components are built from small integer linear factors so that every
//! residue that the fitters need is rational.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::classify::mobius::{Mobius, SCHEDULE};
use crate::classify::Verdict;
use crate::ratfun::RatFun;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormClass {
    Additive,
    Multiplicative,
    Field,
    Twisted,
}

impl FormClass {
    pub const ALL: [FormClass; 4] = [
        FormClass::Additive,
        FormClass::Multiplicative,
        FormClass::Field,
        FormClass::Twisted,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FormClass::Additive => "additive",
            FormClass::Multiplicative => "multiplicative",
            FormClass::Field => "field",
            FormClass::Twisted => "twisted",
        }
    }

    pub fn matches(&self, v: &Verdict) -> bool {
        matches!(
            (self, v),
            (FormClass::Additive, Verdict::GroupAdditive)
                | (FormClass::Multiplicative, Verdict::GroupMultiplicative)
                | (FormClass::Field, Verdict::Field { .. })
                | (FormClass::Twisted, Verdict::Twisted)
        )
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub class: FormClass,
    /// `q ∘ s`.
    pub p: RatFun,
    pub s: RatFun,
    pub components: Vec<RatFun>,
    pub outer: Mobius,
    pub n: Option<u32>,
}

fn linear(arity: usize, var: usize, root: i64) -> RatFun {
    RatFun::var(arity, var).sub(&RatFun::from_int(arity, root))
}

fn nonzero<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

/// A nonconstant `c·∏(x − aₖ)/∏(x − bₖ)` in variable `var` with numerator
/// and denominator degree at most `max_degree` and disjoint root sets.
pub fn split_component<R: Rng>(arity: usize, var: usize, max_degree: u32, rng: &mut R) -> RatFun {
    let max_degree = max_degree.max(1);
    let mut roots: Vec<i64> = (-6..=6).collect();
    roots.shuffle(rng);
    let dn = rng.gen_range(1..=max_degree) as usize;
    let dd = if rng.gen_bool(0.5) {
        0
    } else {
        rng.gen_range(1..=max_degree) as usize
    };
    let mut r = RatFun::from_int(arity, nonzero(rng, 3));
    for &a in &roots[..dn] {
        r = r.mul(&linear(arity, var, a));
    }
    for &b in &roots[dn..dn + dd] {
        r = r.div(&linear(arity, var, b)).expect("nonzero linear factor");
    }
    r
}

/// `q ∘ s` for a random generating class member with `q` drawn from the
/// Möbius schedule. `q` is rerolled if it makes `q ∘ s` constant or
/// undefined.
pub fn trivariate<R: Rng>(class: FormClass, rng: &mut R) -> Instance {
    let r: Vec<RatFun> = (0..3).map(|i| split_component(3, i, 3, rng)).collect();
    let (s, n) = match class {
        FormClass::Additive => (r[0].add(&r[1]).add(&r[2]), None),
        FormClass::Multiplicative => (r[0].mul(&r[1]).mul(&r[2]), None),
        FormClass::Field => {
            let n = rng.gen_range(1..=5u32);
            (r[0].mul(&r[1].add(&r[2]).pow(n)), Some(n))
        }
        FormClass::Twisted => {
            let num = r[0].add(&r[1]);
            let den = r[1].add(&r[2]);
            (num.div(&den).expect("r₂ + r₃ is nonconstant"), None)
        }
    };
    let (outer, p) = outer_map(&s, rng);
    Instance {
        class,
        p,
        s,
        components: r,
        outer,
        n,
    }
}

/// `Q(F(x) + G(y))` or `Q(F(x)·G(y))` with `Q` from the Möbius schedule.
pub fn bivariate<R: Rng>(multiplicative: bool, rng: &mut R) -> Instance {
    let f = split_component(2, 0, 3, rng);
    let g = split_component(2, 1, 3, rng);
    let (class, s) = if multiplicative {
        (FormClass::Multiplicative, f.mul(&g))
    } else {
        (FormClass::Additive, f.add(&g))
    };
    let (outer, p) = outer_map(&s, rng);
    Instance {
        class,
        p,
        s,
        components: vec![f, g],
        outer,
        n: None,
    }
}

fn outer_map<R: Rng>(s: &RatFun, rng: &mut R) -> (Mobius, RatFun) {
    loop {
        let q = *SCHEDULE.choose(rng).expect("schedule is nonempty");
        if let Ok(p) = q.apply(s) {
            if !p.is_constant() {
                return (q, p);
            }
        }
    }
}
