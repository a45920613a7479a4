use super::certificate::auto_certificate;
use super::{common_log_scale, Diagnostics, FormFit, Fitted, ScaleFailure, Verdict};
use crate::calculus::{hermite_antiderivative, independent_of, logderiv_integrate, separable_product, LogDerivFailure};
use crate::error::Result;
use crate::ratfun::RatFun;
use crate::settings::Settings;

/// Derivative ratios `d₁ : d₂ : d₃` with `dᵢ` a function of `xᵢ` alone and
/// `P_{xᵢ} / P_{x_j} = dᵢ / d_j`, when they exist.
pub(crate) fn group_ratios(p: &RatFun, settings: &Settings) -> Option<[RatFun; 3]> {
    let mut rng = settings.rng(0x67_726f_7570);
    let g = p.gradient();
    let h_xy = g[0].div(&g[1]).ok()?;
    let h_yz = g[1].div(&g[2]).ok()?;
    if !independent_of(&h_xy, 2) || !independent_of(&h_yz, 0) {
        return None;
    }
    let (u1, v1) = separable_product(&h_xy, &[0], &[1], &mut rng)?;
    let (u2, v2) = separable_product(&h_yz, &[1], &[2], &mut rng)?;
    let mu = v1.div(&u2).ok()?;
    if !mu.is_constant() {
        return None;
    }
    Some([u1, v1, v2.mul(&mu)])
}

/// Group form: `s = r₁ + r₂ + r₃` or `s = r₁·r₂·r₃` with a certificate
/// relating `P` and `s`.
pub fn fit_group(p: &RatFun, settings: &Settings) -> Result<Option<FormFit>> {
    fit_group_with(p, settings, &mut Diagnostics::default())
}

pub(crate) fn fit_group_with(
    p: &RatFun,
    settings: &Settings,
    diags: &mut Diagnostics,
) -> Result<Option<FormFit>> {
    let Some(d) = group_ratios(p, settings) else {
        diags.push("group-ratios", false);
        return Ok(None);
    };
    diags.push("group-ratios", true);

    let additive: Option<Vec<RatFun>> = d
        .iter()
        .enumerate()
        .map(|(i, di)| hermite_antiderivative(di, i))
        .collect();
    diags.push("group-additive-integrable", additive.is_some());
    if let Some(r) = additive {
        let s = r[0].add(&r[1]).add(&r[2]);
        if let Some(cert) = auto_certificate(p, &s, settings)? {
            return Ok(Some(FormFit {
                verdict: Verdict::GroupAdditive,
                fitted: Fitted { components: r, s },
                certificate: cert,
            }));
        }
    }

    let pairs: Vec<(&RatFun, usize)> = d.iter().zip(0..).collect();
    let multiplicative = match common_log_scale(&pairs) {
        Ok(lambda) => d
            .iter()
            .enumerate()
            .map(|(i, di)| logderiv_integrate(&di.scale(&lambda), i))
            .collect::<std::result::Result<Vec<_>, _>>(),
        Err(ScaleFailure::NonRational) => Err(LogDerivFailure::NonSplitting),
        Err(ScaleFailure::NotLogarithmic) => Err(LogDerivFailure::PolynomialPart),
    };
    diags.push("group-multiplicative-integrable", multiplicative.is_ok());
    match multiplicative {
        Ok(r) => {
            let s = r[0].mul(&r[1]).mul(&r[2]);
            if let Some(cert) = auto_certificate(p, &s, settings)? {
                return Ok(Some(FormFit {
                    verdict: Verdict::GroupMultiplicative,
                    fitted: Fitted { components: r, s },
                    certificate: cert,
                }));
            }
        }
        Err(LogDerivFailure::NonSplitting) => diags.push("non-splitting-residues", true),
        Err(_) => {}
    }
    Ok(None)
}
