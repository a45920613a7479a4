//! Recognition of the canonical forms of constrained bivariate and
//! trivariate rational functions.
//!
//! Trivariate forms, each up to an outer change of coordinate:
//!
//! * group: `r₁(x) + r₂(y) + r₃(z)` or `r₁(x)·r₂(y)·r₃(z)`
//! * field: `rᵢ(xᵢ)·(r_j(x_j) + r_l(x_l))ⁿ`
//! * twisted: `(r₁(x) + r₂(y))/(r₂(y) + r₃(z))`
//!
//! Bivariate forms are `Q(F(x) + G(y))` and `Q(F(x)·G(y))`. Every positive
//! verdict carries a fitted `s` and a certificate that `P` is algebraic
//! over `s`.

mod bivariate;
mod certificate;
mod field;
mod group;
pub mod mobius;
mod pipeline;
mod twisted;

use num::{Integer, One, Signed, Zero};
use serde::Serialize;

pub use bivariate::fit_bivariate;
pub use certificate::{
    auto_certificate, default_degree, dependence_certificate, gradients_parallel,
    DependenceCertificate,
};
pub use field::fit_field;
pub use group::fit_group;
pub use pipeline::{classify, classify_trivariate, test_2decomposed, PairDetail};
pub use twisted::{fit_twisted, twisted_identities_hold, verify_twisted_identities};

use crate::calculus::residue_profile;
use crate::dimension::RankEstimate;
use crate::ratfun::{Coeff, RatFun};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    GroupAdditive,
    GroupMultiplicative,
    /// `pivot` is 1-based.
    Field {
        pivot: usize,
        n: u32,
    },
    Twisted,
    NoConstraint,
    Degenerate,
    Unresolved,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::GroupAdditive => "group-additive",
            Self::GroupMultiplicative => "group-multiplicative",
            Self::Field { .. } => "field",
            Self::Twisted => "twisted",
            Self::NoConstraint => "no-constraint",
            Self::Degenerate => "degenerate",
            Self::Unresolved => "unresolved",
        }
    }

    /// One of the canonical forms.
    pub fn is_positive(&self) -> bool {
        matches!(
            self,
            Self::GroupAdditive | Self::GroupMultiplicative | Self::Field { .. } | Self::Twisted
        )
    }

    /// A decision the caller can act on; only `Unresolved` is not.
    pub fn is_decisive(&self) -> bool {
        *self != Self::Unresolved
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: bool,
}

/// Named boolean probes collected while classifying.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn push(&mut self, name: impl Into<String>, value: bool) {
        self.0.push(Diagnostic {
            name: name.into(),
            value,
        });
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.0.iter().rev().find(|d| d.name == name).map(|d| d.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter()
    }
}

/// Components of a recognized form: `[F, G]` or `[r₁, r₂, r₃]` and the
/// combination `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fitted {
    pub components: Vec<RatFun>,
    pub s: RatFun,
}

/// A certified fit returned by the individual fitters.
#[derive(Debug, Clone)]
pub struct FormFit {
    pub verdict: Verdict,
    pub fitted: Fitted,
    pub certificate: DependenceCertificate,
}

#[derive(Debug, Clone)]
pub struct FormReport {
    pub verdict: Verdict,
    pub nondegenerate: bool,
    pub rank: Option<RankEstimate>,
    pub fitted: Option<Fitted>,
    pub certificate: Option<DependenceCertificate>,
    pub diagnostics: Diagnostics,
}

impl FormReport {
    pub fn image_dimension(&self) -> Option<usize> {
        self.rank.as_ref().map(|r| r.rank)
    }

    pub(crate) fn bare(verdict: Verdict, nondegenerate: bool, diagnostics: Diagnostics) -> Self {
        Self {
            verdict,
            nondegenerate,
            rank: None,
            fitted: None,
            certificate: None,
            diagnostics,
        }
    }

    pub(crate) fn from_fit(fit: FormFit, rank: Option<RankEstimate>, diagnostics: Diagnostics) -> Self {
        Self {
            verdict: fit.verdict,
            nondegenerate: true,
            rank,
            fitted: Some(fit.fitted),
            certificate: Some(fit.certificate),
            diagnostics,
        }
    }
}

/// Why a scale for logarithmic integration could not be found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ScaleFailure {
    /// A residue is irrational or carries parameters.
    NonRational,
    /// Polynomial part or a multiple pole: not a logarithmic derivative.
    NotLogarithmic,
}

/// The positive `λ` making every residue of every `λ·f` an integer with no
/// common factor, i.e. `1/gcd` of all residues.
pub(crate) fn common_log_scale(fs: &[(&RatFun, usize)]) -> Result<Coeff, ScaleFailure> {
    let mut num_gcd = num::BigInt::zero();
    let mut den_lcm = num::BigInt::one();
    for (f, var) in fs {
        let prof = residue_profile(f, *var);
        if !prof.polynomial_part.is_zero() || !prof.rational_part.is_zero() {
            return Err(ScaleFailure::NotLogarithmic);
        }
        for r in &prof.residues {
            let c = r
                .exact
                .then(|| r.rational_value())
                .flatten()
                .ok_or(ScaleFailure::NonRational)?;
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    if num_gcd.is_zero() {
        return Err(ScaleFailure::NotLogarithmic);
    }
    Ok(Coeff::new(den_lcm, num_gcd.abs()))
}

pub(crate) fn var_name(i: usize) -> &'static str {
    ["x", "y", "z"].get(i).copied().unwrap_or("v")
}
