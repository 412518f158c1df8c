//! Truncated formal power series with rational coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores exactly `N + 1` coefficients
//! `c_0..=c_N`. Binary operations between series of different orders silently
//! truncate to the smaller order, which is the usual semantics for formal
//! series known only up to some degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    ZeroConstantDenominator,
    #[error("composition requires an inner series with zero constant term, found {0}")]
    NonzeroInnerConstant(Rational),
    #[error("moment sequence must start with 1, found {0}")]
    MomentNormalization(Rational),
    #[error("empty coefficient sequence")]
    Empty,
    #[error("series declares order {order} but carries {len} coefficients")]
    LengthMismatch { order: usize, len: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(Rational::one(), 0, order)
    }

    /// `c * z^k`, truncated (so it is zero when `k > order`).
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `z` at the given order.
    pub fn variable(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// Builds a series from `c_0..=c_N`; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Builds a series of the given order, padding with zeros or dropping
    /// coefficients beyond the order.
    pub fn from_slice(coeffs: &[Rational], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (dst, src) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = src.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^i`; zero beyond the order.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_slice(&self.coeffs, order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for i in k..=n {
            out.coeffs[i] = self.coeffs[i - k].clone();
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `num / den`, defined when `den` has a nonzero constant term.
    pub fn div(&self, den: &TruncatedSeries) -> Result<Self, SeriesError> {
        let d0 = den.coeffs[0]
            .recip()
            .ok_or(SeriesError::ZeroConstantDenominator)?;
        let n = self.order().min(den.order());
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= &den.coeffs[j] * &out[k - j];
            }
            out.push(acc * &d0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        Self::one(self.order()).div(self)
    }

    /// `outer(inner(z))`, requiring `inner(0) = 0`.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroInnerConstant(inner.coeffs[0].clone()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner from the top coefficient; higher powers of `inner` vanish past `n`.
        let mut acc = Self::zero(n);
        for k in (0..=n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Index of the first coefficient where `self` and `other` differ, over
    /// their common order.
    pub fn first_difference(&self, other: &TruncatedSeries) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }
}

/// `Σ m_i z^i` for a moment sequence with `m_0 = 1`.
pub fn moments_to_series(moments: &[Rational]) -> Result<TruncatedSeries, SeriesError> {
    let m0 = moments.first().ok_or(SeriesError::Empty)?;
    if !m0.is_one() {
        return Err(SeriesError::MomentNormalization(m0.clone()));
    }
    TruncatedSeries::from_coeffs(moments.to_vec())
}

/// Cauchy transform coefficients read off a moment series:
/// `G(z) = (1/z) M(1/z) = Σ m_n z^{-(n+1)}`, returned as `(exponent, m_n)`.
pub fn cauchy_coefficients(moment_series: &TruncatedSeries) -> Vec<(i64, Rational)> {
    moment_series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, m)| (-(n as i64) - 1, m.clone()))
        .collect()
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero())
                    .map(|i| &self.coeffs[i] * &rhs.coeffs[k - i])
                    .sum()
            })
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<Rational>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(serde::de::Error::custom(SeriesError::LengthMismatch {
                order: repr.order,
                len: repr.coeffs.len(),
            }));
        }
        Ok(TruncatedSeries {
            coeffs: repr.coeffs,
        })
    }
}
