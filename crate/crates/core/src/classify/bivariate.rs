use super::certificate::auto_certificate;
use super::{common_log_scale, Diagnostics, FormFit, FormReport, Fitted, ScaleFailure, Verdict};
use crate::calculus::{hermite_antiderivative, logderiv_integrate, separable_product};
use crate::dimension::{is_nondegenerate, rank_estimate};
use crate::error::{Error, Result};
use crate::ratfun::RatFun;
use crate::settings::Settings;

/// Classifies `P(x, y)` as `Q(F(x) + G(y))`, `Q(F(x)·G(y))`, unconstrained or
/// unresolved.
///
/// With `P_x/P_y = u(x)/v(y)`, the additive form has `F' = u`, `G' = v` and
/// the multiplicative form has `F'/F = λu`, `G'/G = λv`.
pub fn fit_bivariate(p: &RatFun, settings: &Settings) -> Result<FormReport> {
    if p.arity() != 2 {
        return Err(Error::UnsupportedArity(p.arity()));
    }
    let mut diags = Diagnostics::default();
    let nondegenerate = is_nondegenerate(p);
    diags.push("nondegenerate", nondegenerate);
    if !nondegenerate {
        return Ok(FormReport::bare(Verdict::Degenerate, false, diags));
    }
    let rank = rank_estimate(p, settings)?;
    diags.push("constrained", rank.rank < 4);
    if rank.rank >= 4 {
        let mut report = FormReport::bare(Verdict::NoConstraint, true, diags);
        report.rank = Some(rank);
        return Ok(report);
    }
    let fit = fit_bivariate_forms(p, settings, &mut diags)?;
    Ok(match fit {
        Some(fit) => FormReport::from_fit(fit, Some(rank), diags),
        None => {
            let mut report = FormReport::bare(Verdict::Unresolved, true, diags);
            report.rank = Some(rank);
            report
        }
    })
}

pub(crate) fn fit_bivariate_forms(
    p: &RatFun,
    settings: &Settings,
    diags: &mut Diagnostics,
) -> Result<Option<FormFit>> {
    let mut rng = settings.rng(0x62_6976_6172);
    let h = p.partial(0).div(&p.partial(1))?;
    let Some((u, v)) = separable_product(&h, &[0], &[1], &mut rng) else {
        diags.push("ratio-separable", false);
        return Ok(None);
    };
    diags.push("ratio-separable", true);

    let additive = hermite_antiderivative(&u, 0).zip(hermite_antiderivative(&v, 1));
    diags.push("additive-integrable", additive.is_some());
    if let Some((f, g)) = additive {
        let s = f.add(&g);
        if let Some(cert) = auto_certificate(p, &s, settings)? {
            return Ok(Some(FormFit {
                verdict: Verdict::GroupAdditive,
                fitted: Fitted {
                    components: vec![f, g],
                    s,
                },
                certificate: cert,
            }));
        }
    }

    let multiplicative = match common_log_scale(&[(&u, 0), (&v, 1)]) {
        Ok(lambda) => logderiv_integrate(&u.scale(&lambda), 0)
            .ok()
            .zip(logderiv_integrate(&v.scale(&lambda), 1).ok()),
        Err(ScaleFailure::NonRational) => {
            diags.push("non-splitting-residues", true);
            None
        }
        Err(ScaleFailure::NotLogarithmic) => None,
    };
    diags.push("multiplicative-integrable", multiplicative.is_some());
    if let Some((f, g)) = multiplicative {
        let s = f.mul(&g);
        if let Some(cert) = auto_certificate(p, &s, settings)? {
            return Ok(Some(FormFit {
                verdict: Verdict::GroupMultiplicative,
                fitted: Fitted {
                    components: vec![f, g],
                    s,
                },
                certificate: cert,
            }));
        }
    }
    diags.push("elliptic-candidate", additive_or_mult_failed(diags));
    Ok(None)
}

fn additive_or_mult_failed(diags: &Diagnostics) -> bool {
    diags.get("additive-integrable") == Some(false)
        && diags.get("multiplicative-integrable") == Some(false)
        && diags.get("non-splitting-residues") != Some(true)
}
