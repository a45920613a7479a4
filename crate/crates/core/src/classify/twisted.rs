use num::{One, Zero};
use rand::Rng;

use super::certificate::auto_certificate;
use super::mobius::NORMALIZATIONS;
use super::{Diagnostics, FormFit, Fitted, Verdict};
use crate::calculus::{hermite_antiderivative, independent_of, separable_product};
use crate::error::Result;
use crate::ratfun::{Coeff, RatFun};
use crate::settings::Settings;

const CUBE_RESAMPLES: usize = 1000;

/// Twisted form `(r₁(x) + r₂(y))/(r₂(y) + r₃(z))`.
///
/// For `t = (A + B)/(B + C)`, `∂ₓ log t = A'/(A + B)` is free of `z` and
/// `∂_z log t = −C'/(B + C)` is free of `x`. The fitter tries each Möbius
/// pre-normalization of `P`, reads `A'` and `B'` off `∂_y(A + B)/A' = B'/A'`,
/// and then `C'` from `∂_z log t`.
pub fn fit_twisted(p: &RatFun, settings: &Settings) -> Result<Option<FormFit>> {
    fit_twisted_with(p, settings, &mut Diagnostics::default())
}

pub(crate) fn fit_twisted_with(
    p: &RatFun,
    settings: &Settings,
    diags: &mut Diagnostics,
) -> Result<Option<FormFit>> {
    for m in NORMALIZATIONS {
        let Ok(t) = m.apply(p) else { continue };
        if t.is_constant() {
            continue;
        }
        let Some([r1, r2, r3]) = twisted_components(&t, settings) else {
            continue;
        };
        let s = r1.add(&r2).div(&r2.add(&r3))?;
        if let Some(cert) = auto_certificate(p, &s, settings)? {
            diags.push(format!("twisted-normalization[{}]", m.name), true);
            return Ok(Some(FormFit {
                verdict: Verdict::Twisted,
                fitted: Fitted {
                    components: vec![r1, r2, r3],
                    s,
                },
                certificate: cert,
            }));
        }
    }
    diags.push("twisted", false);
    Ok(None)
}

fn twisted_components(t: &RatFun, settings: &Settings) -> Option<[RatFun; 3]> {
    let mut rng = settings.rng(0x74_7769_7374);
    let g1 = t.partial(0).div(t).ok()?;
    let g2 = t.partial(2).div(t).ok()?;
    if !independent_of(&g1, 2) || !independent_of(&g2, 0) {
        return None;
    }
    // 1/G₁ = (A + B)/A'
    let ig1 = g1.inv().ok()?;
    let h = ig1.partial(1);
    if h.is_zero() {
        return None;
    }
    let (u, v) = separable_product(&h, &[0], &[1], &mut rng)?;
    // B'/A' = u/v, so A' = 1/u and B' = 1/v up to a common scale.
    let (da, db) = (u.inv().ok()?, v.inv().ok()?);
    let mut r1 = hermite_antiderivative(&da, 0)?;
    let r2 = hermite_antiderivative(&db, 1)?;
    let gamma = ig1.mul(&da).sub(&r1).sub(&r2);
    if !gamma.is_constant() {
        return None;
    }
    r1 = r1.add(&gamma);
    // 1/G₂ = −(B + C)/C', so ∂_y(1/G₂) = −B'/C'.
    let ig2 = g2.inv().ok()?;
    let dc = db.div(&ig2.partial(1)).ok()?.neg();
    if !independent_of(&dc, 0) || !independent_of(&dc, 1) {
        return None;
    }
    let mut r3 = hermite_antiderivative(&dc, 2)?;
    let delta = dc.mul(&ig2).neg().sub(&r2).sub(&r3);
    if !delta.is_constant() {
        return None;
    }
    r3 = r3.add(&delta);
    Some([r1, r2, r3])
}

/// Values `t[i][j][k] = s(uᵢ, v_j, w_k)` on a 2×2×2 cube.
fn cube_values(s: &RatFun, u: &[Coeff; 2], v: &[Coeff; 2], w: &[Coeff; 2]) -> Option<[[[Coeff; 2]; 2]; 2]> {
    let mut t: [[[Coeff; 2]; 2]; 2] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                t[i][j][k] = s.eval(&[u[i].clone(), v[j].clone(), w[k].clone()]).ok()?;
            }
        }
    }
    Some(t)
}

fn ratio(a: Coeff, b: Coeff) -> Option<Coeff> {
    (!b.is_zero()).then(|| a / b)
}

/// The three cube identities satisfied by a twisted function (indices 1-based
/// in the names, 0-based in the array):
///
/// 1. `t₂₁₁/t₁₁₁ = t₂₁₂/t₁₁₂`
/// 2. `(t₂₁₁ − 1)/(t₁₁₁ − 1) = (t₂₂₁ − 1)/(t₁₂₁ − 1)`
/// 3. `(t₁₁₂⁻¹ − 1)/(t₁₁₁⁻¹ − 1) = (t₁₂₂⁻¹ − 1)/(t₁₂₁⁻¹ − 1)`
///
/// Returns `None` when some quotient is undefined on this cube.
pub fn twisted_identities_hold(
    s: &RatFun,
    u: &[Coeff; 2],
    v: &[Coeff; 2],
    w: &[Coeff; 2],
) -> Option<[bool; 3]> {
    let t = cube_values(s, u, v, w)?;
    let one = Coeff::one();
    let inv = |c: &Coeff| (!c.is_zero()).then(|| c.recip());
    let id1 = ratio(t[1][0][0].clone(), t[0][0][0].clone())? == ratio(t[1][0][1].clone(), t[0][0][1].clone())?;
    let id2 = ratio(&t[1][0][0] - &one, &t[0][0][0] - &one)?
        == ratio(&t[1][1][0] - &one, &t[0][1][0] - &one)?;
    let id3 = ratio(inv(&t[0][0][1])? - &one, inv(&t[0][0][0])? - &one)?
        == ratio(inv(&t[0][1][1])? - &one, inv(&t[0][1][0])? - &one)?;
    Some([id1, id2, id3])
}

/// Checks the three identities on `trials` random cubes with entries in
/// `[1, 10⁶]`, resampling cubes where a quotient is undefined.
pub fn verify_twisted_identities<R: Rng>(s: &RatFun, trials: usize, rng: &mut R) -> bool {
    let mut done = 0;
    let mut misses = 0;
    let pick = |rng: &mut R| Coeff::from_integer(rng.gen_range(1..=1_000_000i64).into());
    while done < trials {
        let u = [pick(rng), pick(rng)];
        let v = [pick(rng), pick(rng)];
        let w = [pick(rng), pick(rng)];
        match twisted_identities_hold(s, &u, &v, &w) {
            Some(ids) => {
                if ids.contains(&false) {
                    return false;
                }
                done += 1;
            }
            None => {
                misses += 1;
                if misses > CUBE_RESAMPLES {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{parse, rational, vars};

    fn rf(e: &str) -> RatFun {
        parse(e, &vars(&["x", "y", "z"])).unwrap()
    }

    fn c(a: i64, b: i64) -> [Coeff; 2] {
        [rational(a, 1), rational(b, 1)]
    }

    #[test]
    fn identities_on_fixed_cube() {
        let s = rf("(x+y)/(y+z)");
        assert_eq!(twisted_identities_hold(&s, &c(1, 2), &c(1, 3), &c(2, 5)), Some([true; 3]));
        // identity (1) both sides: (u₂ + v₁)/(u₁ + v₁) = 3/2
        let t211 = s.eval(&[rational(2, 1), rational(1, 1), rational(2, 1)]).unwrap();
        let t111 = s.eval(&[rational(1, 1), rational(1, 1), rational(2, 1)]).unwrap();
        assert_eq!(t211 / t111, rational(3, 2));
        let lin = rf("x+y+z");
        assert!(!twisted_identities_hold(&lin, &c(1, 2), &c(1, 3), &c(2, 5)).unwrap()[0]);
    }

    #[test]
    fn degenerate_cube() {
        let s = rf("(x^2+y)/(y+z^3) + 1");
        let ids = twisted_identities_hold(&s, &c(4, 4), &c(1, 3), &c(2, 5)).unwrap();
        assert!(ids[0] && ids[1]);
    }

    #[test]
    fn fits() {
        let st = Settings::default();
        let fit = fit_twisted(&rf("(x+y)/(y+z)"), &st).unwrap().unwrap();
        assert_eq!(fit.fitted.components, vec![rf("x"), rf("y"), rf("z")]);
        assert_eq!(fit.certificate.display(), "p - q");
        let fit = fit_twisted(&rf("(x^2+y)/(y+z^3)"), &st).unwrap().unwrap();
        assert_eq!(fit.fitted.s, rf("(x^2+y)/(y+z^3)"));
        assert!(fit_twisted(&rf("x+y+z"), &st).unwrap().is_none());
    }
}
