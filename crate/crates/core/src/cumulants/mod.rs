//! Word moments from cumulant data.
//!
//! Each base variable carries two cumulant sequences: free cumulants `r_k`
//! (for the state ψ) and two-state cumulants `R_k` (for φ). Mixed cumulants of
//! distinct variables vanish for both families. Moments are sums over
//! non-crossing partitions: ψ weights every block by `r`, φ weights outer
//! blocks by `R` and inner blocks by `r`.
//!
//! Two evaluation routes are provided and kept independent:
//!
//! * [`enumerate`] walks `NC(n)` explicitly and filters partitions;
//! * [`interval`] sums the same weights recursively by fixing the block of the
//!   first letter, in polynomial time.
//!
//! The plain moments [`psi_moment`] and [`phi_moment`] use the interval route;
//! the partial functionals [`phi_k_partial`] and [`phi_parallel`] filter the
//! enumeration.

pub mod enumerate;
pub mod interval;
pub mod inverse;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncpart::NcError;
use crate::rational::Rational;
use crate::series::{SeriesError, TruncatedSeries};

pub use inverse::{moments_to_free_cumulants, moments_to_twostate_cumulants};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CumulantError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("word of length {len} exceeds the available cumulant order {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("partial moment needs 1 <= k <= |w|, got k = {k} for |w| = {len}")]
    PartialIndex { k: usize, len: usize },
    #[error("first/last functional needs a word of length >= 2, got {0}")]
    ParallelTooShort(usize),
    #[error("moment sequence must start with 1, found {0}")]
    MomentNormalization(Rational),
    #[error("two moment sequences must have equal length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Partition(#[from] NcError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A base variable described by its cumulant sequences, both indexed from 1.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    /// `r_1, r_2, ...`
    #[serde(rename = "r")]
    pub free: Vec<Rational>,
    /// `R_1, R_2, ...`
    #[serde(rename = "R")]
    pub two_state: Vec<Rational>,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, free: Vec<Rational>, two_state: Vec<Rational>) -> Self {
        VariableSpec {
            name: name.into(),
            free,
            two_state,
        }
    }

    /// All cumulants zero up to `order`.
    pub fn zero(name: impl Into<String>, order: usize) -> Self {
        Self::new(
            name,
            vec![Rational::zero(); order],
            vec![Rational::zero(); order],
        )
    }

    /// Highest cumulant index available in both sequences.
    pub fn order(&self) -> usize {
        self.free.len().min(self.two_state.len())
    }

    /// `r_k`; zero for `k = 0` or beyond the stored order.
    pub fn r(&self, k: usize) -> Rational {
        nth(&self.free, k)
    }

    /// `R_k`; zero for `k = 0` or beyond the stored order.
    pub fn big_r(&self, k: usize) -> Rational {
        nth(&self.two_state, k)
    }

    /// Every cumulant multiplied by `t`: the law of the c-free convolution power.
    pub fn scaled_cumulants(&self, t: &Rational) -> Self {
        VariableSpec {
            name: self.name.clone(),
            free: self.free.iter().map(|x| x * t).collect(),
            two_state: self.two_state.iter().map(|x| x * t).collect(),
        }
    }

    /// Cumulants of `γX`: `k`-th cumulants scale by `γ^k`.
    pub fn dilated(&self, gamma: &Rational) -> Self {
        let scale = |v: &[Rational]| {
            v.iter()
                .enumerate()
                .map(|(i, x)| x * &gamma.pow(i as u32 + 1))
                .collect()
        };
        VariableSpec {
            name: self.name.clone(),
            free: scale(&self.free),
            two_state: scale(&self.two_state),
        }
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        VariableSpec {
            name: name.into(),
            ..self.clone()
        }
    }

    pub fn truncated(&self, order: usize) -> Self {
        VariableSpec {
            name: self.name.clone(),
            free: self.free.iter().take(order).cloned().collect(),
            two_state: self.two_state.iter().take(order).cloned().collect(),
        }
    }
}

fn nth(v: &[Rational], k: usize) -> Rational {
    if k == 0 {
        Rational::zero()
    } else {
        v.get(k - 1).cloned().unwrap_or_default()
    }
}

/// A formal linear combination of base variables.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter {
    coefficients: BTreeMap<String, Rational>,
}

impl Letter {
    pub fn zero() -> Self {
        Letter::default()
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::scaled(name, Rational::one())
    }

    pub fn scaled(name: impl Into<String>, c: Rational) -> Self {
        Letter::default().plus(name, c)
    }

    /// Adds `c * name` to the combination.
    pub fn plus(mut self, name: impl Into<String>, c: Rational) -> Self {
        let name = name.into();
        let entry = self.coefficients.entry(name.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coefficients.remove(&name);
        }
        self
    }

    pub fn coefficient(&self, name: &str) -> Rational {
        self.coefficients.get(name).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &BTreeMap<String, Rational> {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(Rational::is_zero)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .map(|(v, c)| format!("({c}){v}"))
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn power(letter: &Letter, n: usize) -> Self {
        Word {
            letters: vec![letter.clone(); n],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn then(mut self, letter: &Letter) -> Self {
        self.letters.push(letter.clone());
        self
    }

    pub fn then_power(mut self, letter: &Letter, n: usize) -> Self {
        self.letters.extend(std::iter::repeat_n(letter.clone(), n));
        self
    }
}

/// Which moment-type functional to evaluate on a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    /// ψ: every block weighted by free cumulants.
    Psi,
    /// φ: outer blocks by two-state cumulants, inner blocks by free cumulants.
    Phi,
    /// φ restricted to partitions whose first `k` positions share a block.
    PhiK(usize),
    /// φ restricted to partitions whose first and last positions share a block.
    PhiParallel,
}

/// A family of mutually c-free variables.
#[derive(Clone, Debug)]
pub struct CumulantTable {
    variables: Vec<VariableSpec>,
}

impl CumulantTable {
    pub fn new(variables: Vec<VariableSpec>) -> Result<Self, CumulantError> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(CumulantError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(CumulantTable { variables })
    }

    pub fn single(v: VariableSpec) -> Self {
        CumulantTable { variables: vec![v] }
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn get(&self, name: &str) -> Option<&VariableSpec> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Longest word whose moments the stored cumulants determine.
    pub fn max_word_len(&self) -> usize {
        self.variables
            .iter()
            .map(VariableSpec::order)
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Dense coefficient matrix `coeff[position][variable]`, validating the word.
    pub(crate) fn coefficient_matrix(&self, w: &Word) -> Result<Vec<Vec<Rational>>, CumulantError> {
        let max = self.max_word_len();
        if w.len() > max {
            return Err(CumulantError::WordTooLong { len: w.len(), max });
        }
        w.letters()
            .iter()
            .map(|letter| {
                for name in letter.coefficients().keys() {
                    if self.get(name).is_none() {
                        return Err(CumulantError::UnknownVariable(name.clone()));
                    }
                }
                Ok(self
                    .variables
                    .iter()
                    .map(|v| letter.coefficient(&v.name))
                    .collect())
            })
            .collect()
    }

    fn check_functional(&self, w: &Word, f: Functional) -> Result<(), CumulantError> {
        match f {
            Functional::PhiK(k) if k == 0 || k > w.len() => Err(CumulantError::PartialIndex {
                k,
                len: w.len(),
            }),
            Functional::PhiParallel if w.len() < 2 => {
                Err(CumulantError::ParallelTooShort(w.len()))
            }
            _ => Ok(()),
        }
    }
}

/// ψ of a word.
pub fn psi_moment(w: &Word, t: &CumulantTable) -> Result<Rational, CumulantError> {
    interval::moment(w, t, Functional::Psi)
}

/// φ of a word.
pub fn phi_moment(w: &Word, t: &CumulantTable) -> Result<Rational, CumulantError> {
    interval::moment(w, t, Functional::Phi)
}

/// φ restricted to partitions in which positions `1..=k` share a block.
pub fn phi_k_partial(k: usize, w: &Word, t: &CumulantTable) -> Result<Rational, CumulantError> {
    interval::moment(w, t, Functional::PhiK(k))
}

/// φ restricted to partitions in which the first and last positions share a block.
pub fn phi_parallel(w: &Word, t: &CumulantTable) -> Result<Rational, CumulantError> {
    interval::moment(w, t, Functional::PhiParallel)
}

/// `φ(X^0..=X^order)` for a single variable.
pub fn phi_moments(v: &VariableSpec, order: usize) -> Result<Vec<Rational>, CumulantError> {
    interval::power_moments(v, order, Functional::Phi)
}

/// `ψ(X^0..=X^order)` for a single variable.
pub fn psi_moments(v: &VariableSpec, order: usize) -> Result<Vec<Rational>, CumulantError> {
    interval::power_moments(v, order, Functional::Psi)
}

/// `M_μ(z) = Σ φ(X^i) z^i`.
pub fn phi_moment_series(v: &VariableSpec, order: usize) -> Result<TruncatedSeries, CumulantError> {
    Ok(TruncatedSeries::from_coeffs(phi_moments(v, order)?)?)
}

/// `M_ν(z) = Σ ψ(X^i) z^i`.
pub fn psi_moment_series(v: &VariableSpec, order: usize) -> Result<TruncatedSeries, CumulantError> {
    Ok(TruncatedSeries::from_coeffs(psi_moments(v, order)?)?)
}

/// `C^(k)(z) = Σ_{j >= k} φ_k(X^j) z^j`, from the partition census.
pub fn ck_series(k: usize, v: &VariableSpec, order: usize) -> Result<TruncatedSeries, CumulantError> {
    if k == 0 || k > order {
        return Err(CumulantError::PartialIndex { k, len: order });
    }
    let partials = enumerate::PowerPartials::compute(v, order)?;
    Ok(partials.ck_series(k))
}

/// `C_∥(z) = Σ_{j >= 2} φ_∥(X^j) z^j`, from the partition census.
pub fn cparallel_series(v: &VariableSpec, order: usize) -> Result<TruncatedSeries, CumulantError> {
    if order < 2 {
        return Err(CumulantError::ParallelTooShort(order));
    }
    let partials = enumerate::PowerPartials::compute(v, order)?;
    Ok(partials.parallel_series())
}

/// The tail transform `Σ_{i >= k} R_i z^{i-k}` truncated at `order`.
pub fn tail_r_transform(v: &VariableSpec, k: usize, order: usize) -> TruncatedSeries {
    let coeffs: Vec<Rational> = (0..=order).map(|i| v.big_r(i + k)).collect();
    TruncatedSeries::from_slice(&coeffs, order)
}
