//! Serializable analysis reports and the batch driver behind the CLI.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify, Diagnostic, FormReport, Verdict};
use crate::error::{Error, Result};
use crate::ratfun::parse::{identifiers, parse};
use crate::ratfun::RatFun;
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    /// Attach the experimental polynomial-decomposition probe.
    pub probe_conjecture: bool,
    /// Record wall-clock seconds per report. Breaks byte-for-byte
    /// reproducibility, so it is off by default.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FittedJson {
    pub r1: Option<String>,
    pub r2: Option<String>,
    pub r3: Option<String>,
    pub s: String,
    pub pivot: Option<usize>,
    pub n: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub annihilator: String,
    pub degree_bound: u32,
}

/// Outcome of the polynomial-shape probe: whether `P = u(s)` with `u` and
/// the fitted components all polynomial. No correctness claim is attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureProbe {
    pub applicable: bool,
    pub fit: bool,
    pub u: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub function: String,
    pub vars: Vec<String>,
    pub nondegenerate: bool,
    pub image_dimension: Option<usize>,
    pub has_constraint: Option<bool>,
    pub verdict: String,
    pub fitted: Option<FittedJson>,
    pub certificate: Option<CertificateJson>,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjecture_probe: Option<ConjectureProbe>,
    pub timing: Option<f64>,
    pub seed: u64,
    pub primes: Vec<u64>,
}

/// Exit-code class of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Decisive,
    Undecided,
}

impl Report {
    pub fn outcome(&self) -> Outcome {
        match self.verdict.as_str() {
            "unresolved" | "inconclusive" => Outcome::Undecided,
            _ => Outcome::Decisive,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let opt = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
        let mut out = String::new();
        let _ = writeln!(out, "function: {}", self.function);
        let _ = writeln!(out, "vars: {}", self.vars.join(", "));
        let _ = writeln!(out, "nondegenerate: {}", self.nondegenerate);
        let _ = writeln!(out, "image_dimension: {}", opt(&self.image_dimension.map(|d| d.to_string())));
        let _ = writeln!(out, "has_constraint: {}", opt(&self.has_constraint.map(|b| b.to_string())));
        let _ = writeln!(out, "verdict: {}", self.verdict);
        if let Some(f) = &self.fitted {
            for (k, v) in [("r1", &f.r1), ("r2", &f.r2), ("r3", &f.r3)] {
                if let Some(v) = v {
                    let _ = writeln!(out, "fitted.{k}: {v}");
                }
            }
            let _ = writeln!(out, "fitted.s: {}", f.s);
            if let (Some(i), Some(n)) = (f.pivot, f.n) {
                let _ = writeln!(out, "fitted.pivot: {i}");
                let _ = writeln!(out, "fitted.n: {n}");
            }
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(out, "certificate.annihilator: {}", c.annihilator);
            let _ = writeln!(out, "certificate.degree_bound: {}", c.degree_bound);
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "diagnostic.{}: {}", d.name, d.value);
        }
        if let Some(p) = &self.conjecture_probe {
            let _ = writeln!(out, "conjecture_probe.applicable: {}", p.applicable);
            let _ = writeln!(out, "conjecture_probe.fit: {}", p.fit);
            if let Some(u) = &p.u {
                let _ = writeln!(out, "conjecture_probe.u: {u}");
            }
        }
        if let Some(t) = self.timing {
            let _ = writeln!(out, "timing: {t:.6}");
        }
        let _ = writeln!(out, "seed: {}", self.seed);
        let primes: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "primes: {}", primes.join(", "));
        out
    }
}

/// Resolves the variable list: the given one, or identifiers in order of
/// first appearance.
pub fn resolve_vars(expr: &str, vars: Option<&[String]>) -> Result<Vec<String>> {
    match vars {
        Some(v) => Ok(v.to_vec()),
        None => identifiers(expr),
    }
}

/// Parses and classifies one function.
pub fn analyze(expr: &str, vars: Option<&[String]>, settings: &Settings, opts: Options) -> Result<Report> {
    let start = Instant::now();
    let vars = resolve_vars(expr, vars)?;
    let f = parse(expr, &vars)?;
    let mut report = match classify(&f, settings) {
        Ok(form) => build(expr, &vars, &f, &form, settings, opts),
        Err(Error::Inconclusive(_)) => Report {
            function: expr.trim().to_string(),
            vars: vars.clone(),
            nondegenerate: crate::dimension::is_nondegenerate(&f),
            image_dimension: None,
            has_constraint: None,
            verdict: "inconclusive".into(),
            fitted: None,
            certificate: None,
            diagnostics: vec![Diagnostic {
                name: "rank-unanimous".into(),
                value: false,
            }],
            conjecture_probe: None,
            timing: None,
            seed: settings.seed,
            primes: settings.primes.clone(),
        },
        Err(e) => return Err(e),
    };
    if opts.timing {
        report.timing = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn build(
    expr: &str,
    vars: &[String],
    f: &RatFun,
    form: &FormReport,
    settings: &Settings,
    opts: Options,
) -> Report {
    let show = |g: &RatFun| g.fmt_with(vars);
    let dim = form.image_dimension();
    let fitted = form.fitted.as_ref().map(|fit| {
        let c = &fit.components;
        let (pivot, n) = match form.verdict {
            Verdict::Field { pivot, n } => (Some(pivot), Some(n)),
            _ => (None, None),
        };
        FittedJson {
            r1: c.first().map(show),
            r2: c.get(1).map(show),
            r3: c.get(2).map(show),
            s: show(&fit.s),
            pivot,
            n,
        }
    });
    let certificate = form.certificate.as_ref().map(|c| CertificateJson {
        annihilator: c.display(),
        degree_bound: c.degree_bound,
    });
    let conjecture_probe = opts.probe_conjecture.then(|| probe(f, form));
    Report {
        function: expr.trim().to_string(),
        vars: vars.to_vec(),
        nondegenerate: form.nondegenerate,
        image_dimension: dim,
        has_constraint: dim.map(|d| d < 2 * f.arity()),
        verdict: form.verdict.name().to_string(),
        fitted,
        certificate,
        diagnostics: form.diagnostics.iter().cloned().collect(),
        conjecture_probe,
        timing: None,
        seed: settings.seed,
        primes: settings.primes.clone(),
    }
}

/// Tests the polynomial shape `P = u(s)`: `P`, `s` and every fitted
/// component polynomial, and the certificate linear in `p` with a constant
/// leading coefficient, which makes `u` explicit.
fn probe(f: &RatFun, form: &FormReport) -> ConjectureProbe {
    let applicable = f.is_polynomial() && f.arity() == 3 && form.verdict.is_positive();
    let no = ConjectureProbe {
        applicable,
        fit: false,
        u: None,
    };
    if !applicable {
        return no;
    }
    let (Some(fit), Some(cert)) = (&form.fitted, &form.certificate) else {
        return no;
    };
    if !fit.s.is_polynomial() || !fit.components.iter().all(RatFun::is_polynomial) {
        return no;
    }
    let coeffs = cert.annihilator.coeffs_in(0);
    if coeffs.len() != 2 || !coeffs[1].is_constant() {
        return no;
    }
    let u = coeffs[0].scale(&(-coeffs[1].constant_value().recip()));
    ConjectureProbe {
        applicable,
        fit: true,
        u: Some(u.fmt_with(&["p".to_string(), "t".to_string()])),
    }
}

/// One input line of a batch: an expression with an optional variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub expr: String,
    pub vars: Option<Vec<String>>,
}

/// Reads a corpus: one expression per line, `#` starts a comment, and an
/// optional `x,y,z:` prefix fixes the variable list for that line.
pub fn parse_corpus(text: &str) -> Vec<Entry> {
    text.lines()
        .filter_map(|line| {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                return None;
            }
            Some(match line.split_once(':') {
                Some((v, e)) => Entry {
                    expr: e.trim().to_string(),
                    vars: Some(split_vars(v)),
                },
                None => Entry {
                    expr: line.to_string(),
                    vars: None,
                },
            })
        })
        .collect()
}

pub fn split_vars(list: &str) -> Vec<String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

/// Analyzes every entry in parallel; results keep the input order. An
/// entry's own variable list takes precedence over `vars`.
pub fn analyze_batch(
    entries: &[Entry],
    vars: Option<&[String]>,
    settings: &Settings,
    opts: Options,
) -> Vec<Result<Report>> {
    entries
        .par_iter()
        .map(|e| analyze(&e.expr, e.vars.as_deref().or(vars), settings, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_lines() {
        let c = parse_corpus("# header\nx*y\n\nx,y,z: x + y  # degenerate\n");
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].vars, None);
        assert_eq!(c[1].expr, "x + y");
        assert_eq!(c[1].vars.as_deref(), Some(&["x".to_string(), "y".into(), "z".into()][..]));
    }

    #[test]
    fn probe_on_polynomial_field_form() {
        let vars = split_vars("x,y,z");
        let opts = Options {
            probe_conjecture: true,
            timing: false,
        };
        let r = analyze("x*(y+z)^3 + 1", Some(&vars), &Settings::default(), opts).unwrap();
        assert_eq!(r.verdict, "field");
        let p = r.conjecture_probe.unwrap();
        assert!(p.applicable && p.fit);
        let r = analyze("(x+y)/(y+z)", Some(&vars), &Settings::default(), opts).unwrap();
        assert!(!r.conjecture_probe.unwrap().applicable);
    }
}
