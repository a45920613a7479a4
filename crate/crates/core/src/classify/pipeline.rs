use super::bivariate::fit_bivariate;
use super::field::fit_field_with;
use super::group::fit_group_with;
use super::twisted::{fit_twisted_with, twisted_identities_hold};
use super::{var_name, Diagnostics, FormReport, Verdict};
use crate::calculus::four_point_identity;
use crate::dimension::{is_nondegenerate, rank_estimate};
use crate::error::{Error, Result};
use crate::ratfun::{Coeff, RatFun};
use crate::settings::Settings;
use rand::Rng;

const IDENTITY_TRIALS: usize = 20;

/// Outcome of the separability test for one split of the variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDetail {
    pub active: (usize, usize),
    pub parameter: usize,
    pub separable: bool,
}

impl PairDetail {
    pub fn name(&self) -> String {
        format!(
            "2-decomposed[{},{}]",
            var_name(self.active.0),
            var_name(self.active.1)
        )
    }
}

/// For each pair of variables `(a, b)` with the third as a parameter, whether
/// `P_a/P_b` splits as `u(a)/v(b)` (parameter allowed in both). `P` is
/// 2-decomposed when all three splits pass.
pub fn test_2decomposed(p: &RatFun) -> Result<(bool, Vec<PairDetail>)> {
    if p.arity() != 3 {
        return Err(Error::UnsupportedArity(p.arity()));
    }
    let g = p.gradient();
    let mut details = Vec::new();
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
        let separable = match g[a].div(&g[b]) {
            Ok(h) => !h.is_zero() && four_point_identity(&h, &[a], &[b]),
            Err(_) => false,
        };
        details.push(PairDetail {
            active: (a, b),
            parameter: c,
            separable,
        });
    }
    Ok((details.iter().all(|d| d.separable), details))
}

/// Per-identity outcome over random cubes; names follow the frames the
/// identities compare.
fn identity_diagnostics(s: &RatFun, settings: &Settings, diags: &mut Diagnostics) {
    let mut rng = settings.rng(0x6375_6265);
    let mut ok = [true; 3];
    let mut done = 0;
    let mut tries = 0;
    let pick = |rng: &mut _| Coeff::from_integer(Rng::gen_range(rng, 1..=1_000_000i64).into());
    while done < IDENTITY_TRIALS && tries < 50 * IDENTITY_TRIALS {
        tries += 1;
        let u = [pick(&mut rng), pick(&mut rng)];
        let v = [pick(&mut rng), pick(&mut rng)];
        let w = [pick(&mut rng), pick(&mut rng)];
        if let Some(ids) = twisted_identities_hold(s, &u, &v, &w) {
            for k in 0..3 {
                ok[k] &= ids[k];
            }
            done += 1;
        }
    }
    diags.push("twisted-identity-1[frame-I3]", ok[0] && done > 0);
    diags.push("twisted-identity-2[frame-I3]", ok[1] && done > 0);
    diags.push("twisted-identity-3[frame-I1]", ok[2] && done > 0);
}

/// Full trivariate pipeline: degeneracy, image dimension, then the group,
/// field and twisted fitters in that order.
pub fn classify_trivariate(p: &RatFun, settings: &Settings) -> Result<FormReport> {
    if p.arity() != 3 {
        return Err(Error::UnsupportedArity(p.arity()));
    }
    let mut diags = Diagnostics::default();
    let nondegenerate = is_nondegenerate(p);
    diags.push("nondegenerate", nondegenerate);
    if !nondegenerate {
        return Ok(FormReport::bare(Verdict::Degenerate, false, diags));
    }
    let rank = rank_estimate(p, settings)?;
    let dim = rank.rank;
    diags.push("constrained", dim < 6);
    let unresolved = |diags: Diagnostics, rank| {
        let mut r = FormReport::bare(Verdict::Unresolved, true, diags);
        r.rank = Some(rank);
        r
    };
    match dim {
        6.. => {
            let mut r = FormReport::bare(Verdict::NoConstraint, true, diags);
            r.rank = Some(rank);
            return Ok(r);
        }
        5 => {
            diags.push("partial-constraint", true);
            return Ok(unresolved(diags, rank));
        }
        _ => {}
    }

    let (decomposed, pairs) = test_2decomposed(p)?;
    diags.push("2-decomposed", decomposed);
    for d in &pairs {
        diags.push(d.name(), d.separable);
    }

    let mut fit = fit_group_with(p, settings, &mut diags)?;
    if fit.is_none() {
        fit = fit_field_with(p, settings, &mut diags)?;
    }
    if fit.is_none() {
        fit = fit_twisted_with(p, settings, &mut diags)?;
    }
    match fit {
        Some(fit) => {
            if fit.verdict == Verdict::Twisted {
                identity_diagnostics(&fit.fitted.s, settings, &mut diags);
            }
            Ok(FormReport::from_fit(fit, Some(rank), diags))
        }
        None => {
            let elliptic = diags.get("group-ratios") == Some(true)
                && diags.get("group-additive-integrable") == Some(false)
                && diags.get("group-multiplicative-integrable") == Some(false)
                && diags.get("non-splitting-residues") != Some(true);
            diags.push("elliptic-candidate", elliptic);
            diags.push("no-fitter-certified", true);
            Ok(unresolved(diags, rank))
        }
    }
}

/// Dispatches on arity. Bivariate and trivariate functions get the full
/// classification; for other arities only degeneracy and the dimension count
/// are decided, and a constrained function is left unresolved.
pub fn classify(p: &RatFun, settings: &Settings) -> Result<FormReport> {
    match p.arity() {
        2 => fit_bivariate(p, settings),
        3 => classify_trivariate(p, settings),
        n => {
            let mut diags = Diagnostics::default();
            let nondegenerate = is_nondegenerate(p);
            diags.push("nondegenerate", nondegenerate);
            if !nondegenerate {
                return Ok(FormReport::bare(Verdict::Degenerate, false, diags));
            }
            let rank = rank_estimate(p, settings)?;
            let constrained = rank.rank < 2 * n;
            diags.push("constrained", constrained);
            let verdict = if constrained {
                diags.push("no-fitter-for-arity", true);
                Verdict::Unresolved
            } else {
                Verdict::NoConstraint
            };
            let mut r = FormReport::bare(verdict, true, diags);
            r.rank = Some(rank);
            Ok(r)
        }
    }
}
