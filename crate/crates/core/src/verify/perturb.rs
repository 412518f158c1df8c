use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cumulants::VariableSpec;
use crate::jacobi::JacobiParams;
use crate::rational::Rational;

use super::VerifyError;

/// Which variable a perturbation applies to, when a check has two.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PerturbationTarget {
    X,
    Y,
}

/// The corrupted quantity. Cumulant indices start at 1, Jacobi levels at 0.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Quantity {
    FreeCumulant(usize),
    TwoStateCumulant(usize),
    JacobiAlpha(usize),
    JacobiBeta(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PerturbationOp {
    Set,
    Add,
}

/// A single corrupted input, written `[X.|Y.]<r|R|alpha|beta><index><=|+=><value>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Perturbation {
    pub target: Option<PerturbationTarget>,
    pub quantity: Quantity,
    pub op: PerturbationOp,
    pub value: Rational,
}

impl Perturbation {
    pub fn set(quantity: Quantity, value: Rational) -> Self {
        Perturbation {
            target: None,
            quantity,
            op: PerturbationOp::Set,
            value,
        }
    }

    pub fn add(quantity: Quantity, value: Rational) -> Self {
        Perturbation {
            target: None,
            quantity,
            op: PerturbationOp::Add,
            value,
        }
    }

    pub fn on(mut self, target: PerturbationTarget) -> Self {
        self.target = Some(target);
        self
    }

    pub fn is_cumulant(&self) -> bool {
        matches!(
            self.quantity,
            Quantity::FreeCumulant(_) | Quantity::TwoStateCumulant(_)
        )
    }

    fn apply(&self, x: &mut Rational) {
        match self.op {
            PerturbationOp::Set => *x = self.value.clone(),
            PerturbationOp::Add => *x += &self.value,
        }
    }

    pub fn apply_to_variable(&self, v: &VariableSpec) -> Result<VariableSpec, VerifyError> {
        let mut v = v.clone();
        let (seq, k) = match self.quantity {
            Quantity::FreeCumulant(k) => (&mut v.free, k),
            Quantity::TwoStateCumulant(k) => (&mut v.two_state, k),
            _ => {
                return Err(VerifyError::Domain(format!(
                    "`{self}` targets Jacobi data, but this check perturbs cumulants"
                )))
            }
        };
        let len = seq.len();
        let slot = k
            .checked_sub(1)
            .and_then(|i| seq.get_mut(i))
            .ok_or_else(|| VerifyError::Domain(format!("`{self}`: cumulant index must be in 1..={len}")))?;
        self.apply(slot);
        Ok(v)
    }

    pub fn apply_to_jacobi(&self, j: &JacobiParams) -> Result<JacobiParams, VerifyError> {
        let mut alpha = j.alphas().to_vec();
        let mut beta = j.betas().to_vec();
        let (seq, i) = match self.quantity {
            Quantity::JacobiAlpha(i) => (&mut alpha, i),
            Quantity::JacobiBeta(i) => (&mut beta, i),
            _ => {
                return Err(VerifyError::Domain(format!(
                    "`{self}` targets cumulants, but this check perturbs Jacobi data"
                )))
            }
        };
        let len = seq.len();
        let slot = seq
            .get_mut(i)
            .ok_or_else(|| VerifyError::Domain(format!("`{self}`: Jacobi level must be below {len}")))?;
        self.apply(slot);
        Ok(JacobiParams::new(alpha, beta)?)
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.target {
            Some(PerturbationTarget::X) => f.write_str("X.")?,
            Some(PerturbationTarget::Y) => f.write_str("Y.")?,
            None => {}
        }
        match self.quantity {
            Quantity::FreeCumulant(k) => write!(f, "r{k}")?,
            Quantity::TwoStateCumulant(k) => write!(f, "R{k}")?,
            Quantity::JacobiAlpha(i) => write!(f, "alpha{i}")?,
            Quantity::JacobiBeta(i) => write!(f, "beta{i}")?,
        }
        let op = match self.op {
            PerturbationOp::Set => "=",
            PerturbationOp::Add => "+=",
        };
        write!(f, "{op}{}", self.value)
    }
}

impl FromStr for Perturbation {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        let bad = || VerifyError::BadPerturbation(s.to_string());
        let (target, rest) = match s.split_once('.') {
            Some(("X", rest)) => (Some(PerturbationTarget::X), rest),
            Some(("Y", rest)) => (Some(PerturbationTarget::Y), rest),
            Some((prefix, _)) if !prefix.contains(['=', '/']) => return Err(bad()),
            _ => (None, s),
        };
        let (lhs, op, value) = if let Some((l, v)) = rest.split_once("+=") {
            (l, PerturbationOp::Add, v)
        } else if let Some((l, v)) = rest.split_once('=') {
            (l, PerturbationOp::Set, v)
        } else {
            return Err(bad());
        };
        let digits = lhs.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let index: usize = lhs[digits..].parse().map_err(|_| bad())?;
        let quantity = match &lhs[..digits] {
            "r" => Quantity::FreeCumulant(index),
            "R" => Quantity::TwoStateCumulant(index),
            "alpha" => Quantity::JacobiAlpha(index),
            "beta" => Quantity::JacobiBeta(index),
            _ => return Err(bad()),
        };
        if matches!(quantity, Quantity::FreeCumulant(0) | Quantity::TwoStateCumulant(0)) {
            return Err(bad());
        }
        let value: Rational = value.trim().parse().map_err(|_| bad())?;
        Ok(Perturbation {
            target,
            quantity,
            op,
            value,
        })
    }
}

impl Serialize for Perturbation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Perturbation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
