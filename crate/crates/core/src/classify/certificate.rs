use crate::error::Result;
use crate::oracle::{annihilating_poly, vanishes};
use crate::ratfun::{Poly, RatFun};
use crate::settings::Settings;

/// Upper bound on the automatically chosen certificate degree.
pub const AUTO_DEGREE_CAP: u32 = 16;

/// A polynomial `A(p, q)` with `A(P, s) = 0`, witnessing that `P` and `s`
/// are algebraically dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceCertificate {
    pub annihilator: Poly,
    pub degree_bound: u32,
    pub verified: bool,
}

impl DependenceCertificate {
    /// Exact re-check by substitution.
    pub fn verify(&self, p: &RatFun, s: &RatFun) -> bool {
        !self.annihilator.is_zero()
            && self.annihilator.arity() == 2
            && self.annihilator.total_degree() <= self.degree_bound as u64
            && vanishes(&self.annihilator, &[p.clone(), s.clone()])
    }

    pub fn display(&self) -> String {
        self.annihilator.fmt_with(&["p".to_string(), "q".to_string()])
    }
}

/// Every 2×2 minor of the gradient matrix `[∇P; ∇s]` vanishes.
pub fn gradients_parallel(p: &RatFun, s: &RatFun) -> bool {
    let gp = p.gradient();
    let gs = s.gradient();
    for a in 0..gp.len() {
        for b in a + 1..gp.len() {
            if gp[a].mul(&gs[b]) != gp[b].mul(&gs[a]) {
                return false;
            }
        }
    }
    true
}

/// Default degree bound: `deg P + deg s`, capped.
pub fn default_degree(p: &RatFun, s: &RatFun) -> u32 {
    ((p.degree() + s.degree()) as u32).clamp(2, AUTO_DEGREE_CAP)
}

/// Searches for an annihilator of `(P, s)` of degree at most `dmax`.
///
/// Gradient parallelism is checked first. Degrees are then tried in the
/// sequence 1, 2, 4, .. up to `dmax`, so low-degree relations are found
/// without building the largest evaluation matrix.
pub fn dependence_certificate(
    p: &RatFun,
    s: &RatFun,
    dmax: u32,
    settings: &Settings,
) -> Result<Option<DependenceCertificate>> {
    if dmax == 0 || p.arity() != s.arity() || !gradients_parallel(p, s) {
        return Ok(None);
    }
    let pair = [p.clone(), s.clone()];
    let mut d = 1;
    loop {
        let d_try = d.min(dmax);
        if let Some(a) = annihilating_poly(&pair, d_try, settings)? {
            return Ok(Some(DependenceCertificate {
                annihilator: a,
                degree_bound: dmax,
                verified: true,
            }));
        }
        if d_try == dmax {
            return Ok(None);
        }
        d *= 2;
    }
}

/// Certificate at the default degree, retried once at twice the degree.
pub fn auto_certificate(
    p: &RatFun,
    s: &RatFun,
    settings: &Settings,
) -> Result<Option<DependenceCertificate>> {
    let d = settings
        .max_degree
        .map(|d| d as u32)
        .unwrap_or_else(|| default_degree(p, s));
    if let Some(c) = dependence_certificate(p, s, d, settings)? {
        return Ok(Some(c));
    }
    if !gradients_parallel(p, s) {
        return Ok(None);
    }
    dependence_certificate(p, s, 2 * d, settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{parse, vars};

    #[test]
    fn examples() {
        let st = Settings::default();
        let v = vars(&["x", "y", "z"]);
        let rf = |e: &str| parse(e, &v).unwrap();
        let c = dependence_certificate(&rf("(x+y)^2"), &rf("x+y"), 2, &st)
            .unwrap()
            .unwrap();
        assert_eq!(c.display(), "-q^2 + p");
        assert!(c.verify(&rf("(x+y)^2"), &rf("x+y")));
        assert_eq!(dependence_certificate(&rf("x+y"), &rf("x*y"), 4, &st).unwrap(), None);
        let p = rf("(x*(y+z)^3 + 1)/(x*(y+z)^3 - 1)");
        let s = rf("x*(y+z)^3");
        let c = dependence_certificate(&p, &s, 2, &st).unwrap().unwrap();
        assert_eq!(c.display(), "p*q - p - q - 1");
        assert!(c.verify(&p, &s));
    }
}
