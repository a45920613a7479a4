//! Exact sparse multivariate rational functions over ℚ, with evaluation over
//! ℚ and over prime fields.

pub mod gcd;
mod mgcd;
pub mod modp;
pub mod parse;
pub mod poly;
#[allow(clippy::module_inception)]
mod ratfun;

use rand::Rng;

pub use modp::PrimeCtx;
pub use parse::{identifiers, parse, parse_coeff};
pub use poly::{Coeff, Monomial, Poly};
pub use ratfun::{rational, ModRatFun, RatFun};

use crate::error::Result;

pub fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Field operations accepted by [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(op: ArithOp, a: &RatFun, b: &RatFun) -> Result<RatFun> {
    if a.arity() != b.arity() {
        return Err(crate::Error::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

/// Randomized identity check: `f` and `g` agree at `points` random points
/// modulo each prime. Pole points are skipped. Used to cross-check the exact
/// canonical comparison.
pub fn probably_equal<R: Rng>(f: &RatFun, g: &RatFun, primes: &[u64], points: usize, rng: &mut R) -> bool {
    let arity = f.arity();
    for &p in primes {
        let (Ok(cf), Ok(cg)) = (f.compile(p), g.compile(p)) else {
            continue;
        };
        let mut done = 0;
        let mut tries = 0;
        while done < points && tries < points * 64 {
            tries += 1;
            let pt: Vec<u64> = (0..arity).map(|_| rng.gen_range(1..p)).collect();
            match (cf.eval(&pt), cg.eval(&pt)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        return false;
                    }
                    done += 1;
                }
                _ => continue,
            }
        }
    }
    true
}
