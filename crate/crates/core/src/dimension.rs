//! The doubling map `L_r` and the dimension of its image.
//!
//! `L_r` evaluates `r` at the `2ⁿ` corners of a box: component `b` replaces
//! `x_i` by `v_i^{b_i}`. Variables are laid out as `v_1⁰..v_n⁰, v_1¹..v_n¹`.
//! The image dimension is the generic rank of the Jacobian, estimated from
//! random points modulo primes.

use std::sync::OnceLock;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rank_mod;
use crate::ratfun::modp::fallback_primes;
use crate::ratfun::{ModRatFun, PrimeCtx, RatFun};
use crate::settings::Settings;

const POLE_RETRIES: usize = 64;
const SEED_RETRIES: u64 = 3;

#[derive(Debug)]
pub struct DoublingMap {
    r: RatFun,
    components: Vec<RatFun>,
    jacobian: OnceLock<Vec<Vec<RatFun>>>,
}

impl DoublingMap {
    pub fn n(&self) -> usize {
        self.r.arity()
    }

    pub fn base(&self) -> &RatFun {
        &self.r
    }

    pub fn components(&self) -> &[RatFun] {
        &self.components
    }

    /// Column of the variable `v_i^bit`.
    pub fn column(&self, i: usize, bit: usize) -> usize {
        bit * self.n() + i
    }

    /// The `2ⁿ × 2n` symbolic Jacobian. Row `b` only involves the columns of
    /// the variables selected by `b`.
    pub fn jacobian(&self) -> &[Vec<RatFun>] {
        self.jacobian.get_or_init(|| {
            let n = self.n();
            let grad: Vec<RatFun> = self.r.gradient();
            (0..self.components.len())
                .map(|b| {
                    let map = corner_map(n, b);
                    let mut row = vec![RatFun::zero(2 * n); 2 * n];
                    for (i, g) in grad.iter().enumerate() {
                        row[map[i]] = g.embed(2 * n, &map);
                    }
                    row
                })
                .collect()
        })
    }
}

fn corner_map(n: usize, b: usize) -> Vec<usize> {
    (0..n).map(|i| if (b >> i) & 1 == 1 { n + i } else { i }).collect()
}

pub fn doubling_map(r: &RatFun) -> Result<DoublingMap> {
    let n = r.arity();
    if n == 0 {
        return Err(Error::UnsupportedArity(0));
    }
    if n > 16 {
        return Err(Error::UnsupportedArity(n));
    }
    let components = (0..1usize << n)
        .map(|b| r.embed(2 * n, &corner_map(n, b)))
        .collect();
    Ok(DoublingMap {
        r: r.clone(),
        components,
        jacobian: OnceLock::new(),
    })
}

/// A generic rank together with the evidence behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankEstimate {
    pub rank: usize,
    pub samples: usize,
    pub primes: Vec<u64>,
    pub unanimous: bool,
}

/// The Jacobian of `L_r` at a point, using compiled partials of `r`.
fn jacobian_at(grad: &[ModRatFun], n: usize, point: &[u64]) -> Result<Vec<Vec<u64>>> {
    let mut sub = vec![0u64; n];
    let mut rows = Vec::with_capacity(1 << n);
    for b in 0..1usize << n {
        let map = corner_map(n, b);
        for i in 0..n {
            sub[i] = point[map[i]];
        }
        let mut row = vec![0u64; 2 * n];
        for (i, g) in grad.iter().enumerate() {
            row[map[i]] = g.eval(&sub)?;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Ranks at `samples` random points modulo one prime; `None` marks a sample
/// that kept hitting poles.
fn sample_ranks(map: &DoublingMap, ctx: &PrimeCtx, samples: usize) -> Result<Vec<Option<usize>>> {
    let n = map.n();
    let grad = map
        .r
        .gradient()
        .iter()
        .map(|g| g.compile(ctx.p))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = Settings::with_seed(ctx.seed).rng(0x6a61_636f_6269);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut rank = None;
        for _ in 0..POLE_RETRIES {
            let point: Vec<u64> = (0..2 * n).map(|_| rng.gen_range(1..ctx.p)).collect();
            if let Ok(m) = jacobian_at(&grad, n, &point) {
                rank = Some(rank_mod(m, ctx.p));
                break;
            }
        }
        out.push(rank);
    }
    Ok(out)
}

/// Maximum Jacobian rank over random points modulo each prime. Primes whose
/// reduction of a coefficient fails are replaced by nearby primes.
pub fn generic_rank(map: &DoublingMap, ctxs: &[PrimeCtx], samples: usize) -> Result<RankEstimate> {
    if samples < 3 {
        return Err(Error::InvalidArgument("at least 3 samples are required".into()));
    }
    if ctxs.is_empty() {
        return Err(Error::InvalidArgument("at least one prime is required".into()));
    }
    let mut used = Vec::new();
    let mut rounds: Vec<Vec<Option<usize>>> = Vec::new();
    for ctx in ctxs {
        let round = match sample_ranks(map, ctx, samples) {
            Ok(r) => {
                used.push(ctx.p);
                r
            }
            Err(Error::NonInvertibleModulus { .. }) => {
                let mut avoid: Vec<u64> = ctxs.iter().map(|c| c.p).collect();
                avoid.extend(&used);
                let mut found = None;
                for p in fallback_primes(&avoid, 8) {
                    let alt = PrimeCtx { p, seed: ctx.seed };
                    if let Ok(r) = sample_ranks(map, &alt, samples) {
                        found = Some((p, r));
                        break;
                    }
                }
                let (p, r) = found.ok_or(Error::NonInvertibleModulus { p: ctx.p })?;
                used.push(p);
                r
            }
            Err(e) => return Err(e),
        };
        rounds.push(round);
    }
    let all: Vec<usize> = rounds.iter().flatten().flatten().copied().collect();
    let Some(&rank) = all.iter().max() else {
        return Err(Error::AllSamplesPoles);
    };
    let last = rounds.last().unwrap();
    let unanimous = last.iter().any(Option::is_some) && last.iter().flatten().all(|&k| k == rank);
    Ok(RankEstimate {
        rank,
        samples: all.len(),
        primes: used,
        unanimous,
    })
}

/// Rank estimate with retries under fresh seeds until the evidence is
/// unanimous.
pub fn rank_estimate(r: &RatFun, settings: &Settings) -> Result<RankEstimate> {
    if r.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let map = doubling_map(r)?;
    let mut last = None;
    for attempt in 0..SEED_RETRIES {
        let s = Settings {
            seed: settings.seed.wrapping_add(attempt.wrapping_mul(0x5851_F42D_4C95_7F2D)),
            ..settings.clone()
        };
        let est = generic_rank(&map, &s.prime_contexts(), settings.samples)?;
        if est.unanimous {
            return Ok(est);
        }
        last = Some(est);
    }
    Err(Error::Inconclusive(format!(
        "sampled ranks disagree (max {})",
        last.map_or(0, |e| e.rank)
    )))
}

/// Dimension of the image of `L_r`.
pub fn image_dimension(r: &RatFun, settings: &Settings) -> Result<usize> {
    rank_estimate(r, settings).map(|e| e.rank)
}

/// Whether the image of `L_r` has dimension below `2n`, for `n ∈ {2, 3}`.
pub fn has_algebraic_constraint(r: &RatFun, settings: &Settings) -> Result<bool> {
    let n = r.arity();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedArity(n));
    }
    Ok(image_dimension(r, settings)? < 2 * n)
}

/// Every partial derivative is nonzero. Constants are degenerate.
pub fn is_nondegenerate(r: &RatFun) -> bool {
    r.arity() > 0 && (0..r.arity()).all(|i| r.involves(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{parse, vars};

    fn dim(expr: &str, names: &[&str]) -> usize {
        let f = parse(expr, &vars(names)).unwrap();
        image_dimension(&f, &Settings::default()).unwrap()
    }

    #[test]
    fn components_in_index_order() {
        let v = vars(&["x", "y"]);
        let m = doubling_map(&parse("x+y", &v).unwrap()).unwrap();
        let w = vars(&["a0", "b0", "a1", "b1"]);
        let expected: Vec<RatFun> = ["a0 + b0", "a1 + b0", "a0 + b1", "a1 + b1"]
            .iter()
            .map(|e| parse(e, &w).unwrap())
            .collect();
        assert_eq!(m.components(), expected.as_slice());
    }

    #[test]
    fn twisted_component_five() {
        let v = vars(&["x", "y", "z"]);
        let m = doubling_map(&parse("(x+y)/(y+z)", &v).unwrap()).unwrap();
        let w = vars(&["a0", "b0", "c0", "a1", "b1", "c1"]);
        assert_eq!(m.components()[5], parse("(a1 + b0)/(b0 + c1)", &w).unwrap());
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(dim("x+y", &["x", "y"]), 3);
        assert_eq!(dim("x*y", &["x", "y"]), 3);
        assert_eq!(dim("x", &["x"]), 2);
        assert_eq!(dim("(x+y)/(y+z)", &["x", "y", "z"]), 4);
        assert_eq!(dim("x+y+z", &["x", "y", "z"]), 4);
        assert_eq!(dim("x+y+x^2*y^3", &["x", "y"]), 4);
    }

    #[test]
    fn degeneracy() {
        let v = vars(&["x", "y", "z"]);
        assert!(is_nondegenerate(&parse("(x+y)/(y+z)", &v).unwrap()));
        assert!(!is_nondegenerate(&parse("x+y", &v).unwrap()));
        assert!(!is_nondegenerate(&parse("7", &v).unwrap()));
    }
}
