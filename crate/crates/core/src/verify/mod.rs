//! Identity checks at a truncation order, with optional perturbation controls.
//!
//! Each check compares two rationals computed along different routes and
//! records every comparison. A perturbation corrupts one input quantity and
//! reruns the check; the control succeeds when some comparison that held on
//! the original input fails on the corrupted one.

mod checks;
mod perturb;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cumulants::{CumulantError, VariableSpec};
use crate::jacobi::{JacobiError, JacobiParams};
use crate::laws::{LawError, LawFile};
use crate::rational::Rational;
use crate::series::SeriesError;

pub use perturb::{Perturbation, PerturbationOp, PerturbationTarget, Quantity};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{0}")]
    Domain(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("{theorem} does not accept a perturbation")]
    NoConverse { theorem: Theorem },
    #[error("invalid perturbation `{0}`: expected e.g. r3=1/5, R3+=1/5, Y.r4=1, beta2=2")]
    BadPerturbation(String),
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error(transparent)]
    Cumulant(#[from] CumulantError),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Theorem {
    Main210,
    Prop46,
    Thm45,
    Prop44,
    Thm42,
    Prop41,
    Lemma35,
    Lemma38,
    Lemma32,
    Lemma36,
    Thm312,
}

impl Theorem {
    pub const ALL: [Theorem; 11] = [
        Theorem::Main210,
        Theorem::Prop46,
        Theorem::Thm45,
        Theorem::Prop44,
        Theorem::Thm42,
        Theorem::Prop41,
        Theorem::Lemma35,
        Theorem::Lemma38,
        Theorem::Lemma32,
        Theorem::Lemma36,
        Theorem::Thm312,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Main210 => "main-2.10",
            Theorem::Prop46 => "prop-4.6",
            Theorem::Thm45 => "thm-4.5",
            Theorem::Prop44 => "prop-4.4",
            Theorem::Thm42 => "thm-4.2",
            Theorem::Prop41 => "prop-4.1",
            Theorem::Lemma35 => "lemma-3.5",
            Theorem::Lemma38 => "lemma-3.8",
            Theorem::Lemma32 => "lemma-3.2",
            Theorem::Lemma36 => "lemma-3.6",
            Theorem::Thm312 => "thm-3.12",
        }
    }

    /// Theorems stated as equivalences, whose converse is exercised by perturbation.
    pub fn accepts_perturbation(self) -> bool {
        matches!(
            self,
            Theorem::Main210 | Theorem::Prop46 | Theorem::Thm45 | Theorem::Prop44
        )
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| VerifyError::UnknownTheorem(s.to_string()))
    }
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Theorem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Recognised parameter names.
pub const PARAMETERS: &[&str] = &["a", "b", "alpha", "a_tilde", "b_tilde", "t", "gamma", "k"];

/// What to check and on which input.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TheoremCheckSpec {
    pub theorem: Theorem,
    #[serde(default)]
    pub params: BTreeMap<String, Rational>,
    pub max_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
    /// A law pair, for checks on a single variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<LawFile>,
    /// Cumulants of a single variable; takes precedence over `law`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<VariableSpec>,
    /// Jacobi data of the φ-law alone, for checks that do not involve ψ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<JacobiParams>,
}

impl TheoremCheckSpec {
    pub fn new(theorem: Theorem, max_n: usize) -> Self {
        TheoremCheckSpec {
            theorem,
            params: BTreeMap::new(),
            max_n,
            perturbation: None,
            law: None,
            variable: None,
            jacobi: None,
        }
    }

    pub fn with(mut self, name: &str, value: Rational) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn perturbed(mut self, p: Perturbation) -> Self {
        self.perturbation = Some(p);
        self
    }

    pub(crate) fn param(&self, name: &'static str) -> Result<Rational, VerifyError> {
        self.params
            .get(name)
            .cloned()
            .ok_or(VerifyError::MissingParameter(name))
    }

    pub(crate) fn param_or(&self, name: &str, default: Rational) -> Rational {
        self.params.get(name).cloned().unwrap_or(default)
    }
}

/// One comparison.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckRow {
    pub identity: String,
    pub n: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(identity: impl Into<String>, n: usize, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs == rhs;
        CheckRow {
            identity: identity.into(),
            n,
            lhs,
            rhs,
            pass,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlVerdict {
    /// A comparison that held on the original input failed after perturbation.
    ControlOk,
    /// The perturbation went undetected.
    ControlMissed,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FirstFailure {
    pub identity: String,
    pub n: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ControlReport {
    pub perturbation: Perturbation,
    pub rows: Vec<CheckRow>,
    pub verdict: ControlVerdict,
    /// Smallest `n` at which a comparison passing on the original input fails.
    pub first_failure: Option<FirstFailure>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub max_n: usize,
    pub params: BTreeMap<String, Rational>,
    pub rows: Vec<CheckRow>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<ControlReport>,
}

impl VerificationReport {
    /// Rows whose comparison failed.
    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// Whether the identity passes at every recorded `n`.
    pub fn identity_passes(&self, identity: &str) -> bool {
        self.rows
            .iter()
            .filter(|r| r.identity == identity)
            .all(|r| r.pass)
    }

    /// The overall outcome: the control verdict when a control ran, the
    /// identity verdict otherwise.
    pub fn success(&self) -> bool {
        match &self.control {
            Some(c) => c.verdict == ControlVerdict::ControlOk,
            None => self.verdict == Verdict::Pass,
        }
    }
}

fn verdict(rows: &[CheckRow]) -> Verdict {
    if rows.iter().all(|r| r.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Runs a check, plus its perturbation control when one is given.
pub fn run_check(spec: &TheoremCheckSpec) -> Result<VerificationReport, VerifyError> {
    for name in spec.params.keys() {
        if !PARAMETERS.contains(&name.as_str()) {
            return Err(VerifyError::Domain(format!("unknown parameter `{name}`")));
        }
    }
    if spec.perturbation.is_some() && !spec.theorem.accepts_perturbation() {
        return Err(VerifyError::NoConverse {
            theorem: spec.theorem,
        });
    }
    let rows = checks::rows(spec, None)?;
    let control = match &spec.perturbation {
        None => None,
        Some(p) => {
            let perturbed = checks::rows(spec, Some(p))?;
            Some(control_report(p, &rows, perturbed))
        }
    };
    Ok(VerificationReport {
        theorem: spec.theorem,
        max_n: spec.max_n,
        params: spec.params.clone(),
        verdict: verdict(&rows),
        rows,
        control,
    })
}

fn control_report(p: &Perturbation, baseline: &[CheckRow], perturbed: Vec<CheckRow>) -> ControlReport {
    let held: std::collections::HashSet<(&str, usize)> = baseline
        .iter()
        .filter(|r| r.pass)
        .map(|r| (r.identity.as_str(), r.n))
        .collect();
    let first_failure = perturbed
        .iter()
        .filter(|r| !r.pass && held.contains(&(r.identity.as_str(), r.n)))
        .min_by_key(|r| r.n)
        .map(|r| FirstFailure {
            identity: r.identity.clone(),
            n: r.n,
        });
    ControlReport {
        perturbation: p.clone(),
        verdict: if first_failure.is_some() {
            ControlVerdict::ControlOk
        } else {
            ControlVerdict::ControlMissed
        },
        first_failure,
        rows: perturbed,
    }
}
