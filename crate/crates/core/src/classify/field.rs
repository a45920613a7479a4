use super::certificate::auto_certificate;
use super::{var_name, Diagnostics, FormFit, Fitted, Verdict};
use crate::calculus::{
    hermite_antiderivative, independent_of, logderiv_integrate, residue_profile, separable_product,
    LogDerivFailure,
};
use crate::error::Result;
use crate::ratfun::{Coeff, RatFun};
use crate::settings::Settings;

/// Field form `rᵢ(xᵢ)·(r_j(x_j) + r_l(x_l))ⁿ`.
pub fn fit_field(p: &RatFun, settings: &Settings) -> Result<Option<FormFit>> {
    fit_field_with(p, settings, &mut Diagnostics::default())
}

pub(crate) fn fit_field_with(
    p: &RatFun,
    settings: &Settings,
    diags: &mut Diagnostics,
) -> Result<Option<FormFit>> {
    let g = p.gradient();
    let cap = (2 * p.degree()).max(1);
    for i in 0..3 {
        let (j, l) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let probe = format!("field-pivot-{}", var_name(i));
        match fit_pivot(p, &g, i, j, l, cap, settings, diags)? {
            Some(fit) => {
                diags.push(probe, true);
                return Ok(Some(fit));
            }
            None => diags.push(probe, false),
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn fit_pivot(
    p: &RatFun,
    g: &[RatFun],
    i: usize,
    j: usize,
    l: usize,
    cap: u64,
    settings: &Settings,
    diags: &mut Diagnostics,
) -> Result<Option<FormFit>> {
    let mut rng = settings.rng(0x66_6965_6c64 + i as u64);
    let Ok(h) = g[j].div(&g[l]) else { return Ok(None) };
    if !independent_of(&h, i) {
        return Ok(None);
    }
    let Some((u, v)) = separable_product(&h, &[j], &[l], &mut rng) else {
        return Ok(None);
    };
    let (Some(rj), Some(rl)) = (hermite_antiderivative(&u, j), hermite_antiderivative(&v, l)) else {
        return Ok(None);
    };
    let b0 = rj.add(&rl);
    // M = P_i·r_j'/P_j = (r_i'/(n r_i))·(B₀ + β), and ∂_j M = (r_i'/(n r_i))·r_j'.
    let Ok(m) = g[i].mul(&u).div(&g[j]) else { return Ok(None) };
    let Ok(beta) = m.mul(&u).div(&m.partial(j)).map(|q| q.sub(&b0)) else {
        return Ok(None);
    };
    if !beta.is_constant() {
        return Ok(None);
    }
    let b = b0.add(&beta);
    let Ok(k) = m.div(&b) else { return Ok(None) };
    if !independent_of(&k, j) || !independent_of(&k, l) {
        return Ok(None);
    }
    let prof = residue_profile(&k, i);
    let Some(n) = prof.residue_denominator_lcm() else {
        diags.push("non-splitting-residues", true);
        return Ok(None);
    };
    if n > cap {
        diags.push("field-exponent-cap", false);
        return Ok(None);
    }
    let ri = match logderiv_integrate(&k.scale(&Coeff::from_integer(n.into())), i) {
        Ok(r) => r,
        Err(LogDerivFailure::NonSplitting) => {
            diags.push("non-splitting-residues", true);
            return Ok(None);
        }
        Err(_) => return Ok(None),
    };
    let n = n as u32;
    let s = ri.mul(&b.pow(n));
    let Some(cert) = auto_certificate(p, &s, settings)? else {
        return Ok(None);
    };
    let mut components = vec![RatFun::zero(p.arity()); 3];
    components[i] = ri;
    components[j] = rj;
    components[l] = rl.add(&beta);
    Ok(Some(FormFit {
        verdict: Verdict::Field { pivot: i + 1, n },
        fitted: Fitted { components, s },
        certificate: cert,
    }))
}
