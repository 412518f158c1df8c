//! Jacobi parameters of a measure and the passage to and from its moments.
//!
//! Level `n` holds `(α_n, β_n)`. `α_n` first influences the moment of order
//! `2n + 1` and `β_n` that of order `2n + 2`, so `⌈N/2⌉` levels determine the
//! moments up to order `N`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobiError {
    #[error("alpha has {alpha} entries but beta has {beta}")]
    LengthMismatch { alpha: usize, beta: usize },
    #[error("order {order} needs {needed} Jacobi levels, only {have} available")]
    InsufficientDepth {
        order: usize,
        needed: usize,
        have: usize,
    },
    #[error("operation needs at least {needed} levels, got {have}")]
    TooShort { needed: usize, have: usize },
    #[error("declared termination {declared:?} does not match the data ({actual:?})")]
    TerminationMismatch {
        declared: Option<usize>,
        actual: Option<usize>,
    },
    #[error("continued fraction and tridiagonal moments disagree at order {0}")]
    RouteDisagreement(usize),
    #[error("moment sequence must start with 1, found {0}")]
    MomentNormalization(Rational),
    #[error("beta_0 must be positive, got {0}")]
    NonPositiveBeta0(Rational),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `(α_0, α_1, ...; β_0, β_1, ...)`.
///
/// Once some `β_i` vanishes the measure is finitely supported and later levels
/// carry no information; they are stored as zero and `terminated = Some(i)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawJacobi")]
pub struct JacobiParams {
    alpha: Vec<Rational>,
    beta: Vec<Rational>,
    terminated: Option<usize>,
}

#[derive(Deserialize)]
struct RawJacobi {
    alpha: Vec<Rational>,
    beta: Vec<Rational>,
    #[serde(default)]
    terminated: Option<usize>,
}

impl TryFrom<RawJacobi> for JacobiParams {
    type Error = JacobiError;

    fn try_from(raw: RawJacobi) -> Result<Self, JacobiError> {
        let j = JacobiParams::new(raw.alpha, raw.beta)?;
        if raw.terminated.is_some() && raw.terminated != j.terminated {
            return Err(JacobiError::TerminationMismatch {
                declared: raw.terminated,
                actual: j.terminated,
            });
        }
        Ok(j)
    }
}

impl JacobiParams {
    pub fn new(mut alpha: Vec<Rational>, mut beta: Vec<Rational>) -> Result<Self, JacobiError> {
        if alpha.len() != beta.len() {
            return Err(JacobiError::LengthMismatch {
                alpha: alpha.len(),
                beta: beta.len(),
            });
        }
        let terminated = beta.iter().position(Rational::is_zero);
        if let Some(i) = terminated {
            for x in alpha.iter_mut().skip(i + 1).chain(beta.iter_mut().skip(i + 1)) {
                *x = Rational::zero();
            }
        }
        Ok(JacobiParams {
            alpha,
            beta,
            terminated,
        })
    }

    /// Given leading entries followed by constant tails, `levels` levels in all.
    pub fn with_tail(
        alpha_head: &[Rational],
        beta_head: &[Rational],
        alpha_tail: &Rational,
        beta_tail: &Rational,
        levels: usize,
    ) -> Self {
        let fill = |head: &[Rational], tail: &Rational| {
            (0..levels)
                .map(|i| head.get(i).unwrap_or(tail).clone())
                .collect()
        };
        Self::new(fill(alpha_head, alpha_tail), fill(beta_head, beta_tail))
            .expect("equal lengths by construction")
    }

    /// `α ≡ alpha`, `β ≡ beta`.
    pub fn constant(alpha: Rational, beta: Rational, levels: usize) -> Self {
        Self::with_tail(&[], &[], &alpha, &beta, levels)
    }

    /// The point mass at `c`.
    pub fn point_mass(c: Rational, levels: usize) -> Self {
        Self::with_tail(&[c], &[Rational::zero()], &Rational::zero(), &Rational::zero(), levels.max(1))
    }

    pub fn levels(&self) -> usize {
        self.alpha.len()
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn betas(&self) -> &[Rational] {
        &self.beta
    }

    pub fn terminated(&self) -> Option<usize> {
        self.terminated
    }

    /// `α_i`, zero past the stored levels.
    pub fn alpha(&self, i: usize) -> Rational {
        self.alpha.get(i).cloned().unwrap_or_default()
    }

    /// `β_i`, zero past the stored levels.
    pub fn beta(&self, i: usize) -> Rational {
        self.beta.get(i).cloned().unwrap_or_default()
    }

    /// First `β_i < 0` before termination, if any.
    pub fn first_negative_beta(&self) -> Option<usize> {
        let end = self.terminated.unwrap_or(self.levels());
        self.beta[..end].iter().position(Rational::is_negative)
    }

    /// Whether the data describes a probability measure on the stored levels.
    pub fn is_measure(&self) -> bool {
        self.first_negative_beta().is_none()
    }

    /// Levels needed for moments up to `order`.
    pub fn required_levels(&self, order: usize) -> usize {
        let needed = order.div_ceil(2);
        match self.terminated {
            Some(i) => needed.min(i + 1),
            None => needed,
        }
    }

    pub fn truncated(&self, levels: usize) -> Self {
        Self::new(
            self.alpha.iter().take(levels).cloned().collect(),
            self.beta.iter().take(levels).cloned().collect(),
        )
        .expect("equal lengths")
    }

    fn check_depth(&self, order: usize) -> Result<(), JacobiError> {
        let needed = self.required_levels(order);
        if self.levels() < needed {
            return Err(JacobiError::InsufficientDepth {
                order,
                needed,
                have: self.levels(),
            });
        }
        Ok(())
    }
}

/// `M(z) = 1 / (1 - α_0 z - β_0 z² / (1 - α_1 z - β_1 z² / ...))`.
pub fn continued_fraction_series(j: &JacobiParams, order: usize) -> Result<TruncatedSeries, JacobiError> {
    j.check_depth(order)?;
    let depth = order.div_ceil(2) + 1;
    let z = TruncatedSeries::variable(order);
    let z2 = z.pow(2);
    let mut tail = TruncatedSeries::one(order);
    for level in (0..depth).rev() {
        let den = TruncatedSeries::one(order) - z.scale(&j.alpha(level)) - (&z2 * &tail).scale(&j.beta(level));
        tail = den.recip()?;
    }
    Ok(tail)
}

/// `(T^n)_{0,0}` for `n = 0..=order`, `T` tridiagonal with `α` on the diagonal.
pub fn tridiagonal_moments(j: &JacobiParams, order: usize) -> Result<Vec<Rational>, JacobiError> {
    j.check_depth(order)?;
    let size = order / 2 + 1;
    let mut v = vec![Rational::zero(); size];
    v[0] = Rational::one();
    let mut moments = vec![Rational::one()];
    for _ in 0..order {
        // (T v)_i = v_{i-1} + α_i v_i + β_i v_{i+1}
        let next: Vec<Rational> = (0..size)
            .map(|i| {
                let mut x = &j.alpha(i) * &v[i];
                if i > 0 {
                    x += &v[i - 1];
                }
                if i + 1 < size {
                    x += &j.beta(i) * &v[i + 1];
                }
                x
            })
            .collect();
        v = next;
        moments.push(v[0].clone());
    }
    Ok(moments)
}

/// Moments `m_0..=m_order`, computed by two routes that must agree.
pub fn moments_from_jacobi(j: &JacobiParams, order: usize) -> Result<Vec<Rational>, JacobiError> {
    let cf = continued_fraction_series(j, order)?;
    let tri = tridiagonal_moments(j, order)?;
    if let Some(n) = cf.coeffs().iter().zip(&tri).position(|(a, b)| a != b) {
        return Err(JacobiError::RouteDisagreement(n));
    }
    Ok(tri)
}

/// Result of inverting a moment sequence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobiFit {
    pub params: JacobiParams,
    /// First level whose Hankel pivot `L(P_n²)` was negative.
    pub negative_pivot: Option<usize>,
}

fn functional(p: &[Rational], m: &[Rational]) -> Rational {
    p.iter().zip(m).map(|(c, x)| c * x).sum()
}

fn poly_mul(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, b) in q.iter().enumerate() {
            out[i + k] += a * b;
        }
    }
    out
}

// x·p - c·p - d·r for monic orthogonal recursions.
fn recurrence_step(p: &[Rational], r: &[Rational], c: &Rational, d: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + 1];
    for (i, x) in p.iter().enumerate() {
        out[i + 1] += x;
        out[i] -= c * x;
    }
    for (i, x) in r.iter().enumerate() {
        out[i] -= d * x;
    }
    out
}

/// Jacobi parameters from `m_0 = 1, m_1, ..., m_N` by the Stieltjes recurrence.
///
/// Returns `⌊N/2⌋` levels: level `n` needs moments up to order `2n + 2`.
pub fn jacobi_from_moments(m: &[Rational]) -> Result<JacobiFit, JacobiError> {
    match m.first() {
        Some(m0) if m0.is_one() => {}
        Some(m0) => return Err(JacobiError::MomentNormalization(m0.clone())),
        None => return Err(JacobiError::MomentNormalization(Rational::zero())),
    }
    let levels = (m.len() - 1) / 2;
    let mut alpha = Vec::with_capacity(levels);
    let mut beta = Vec::with_capacity(levels);
    let mut negative_pivot = None;
    let mut prev: Vec<Rational> = vec![Rational::zero()];
    let mut cur: Vec<Rational> = vec![Rational::one()];
    let mut norm = Rational::one();
    for n in 0..levels {
        let sq = poly_mul(&cur, &cur);
        let mut xsq = vec![Rational::zero()];
        xsq.extend(sq.iter().cloned());
        let a = functional(&xsq, m) / &norm;
        let b_prev = beta.last().cloned().unwrap_or_default();
        let next = recurrence_step(&cur, &prev, &a, &b_prev);
        let next_norm = functional(&poly_mul(&next, &next), m);
        let b = &next_norm / &norm;
        alpha.push(a);
        beta.push(b.clone());
        if next_norm.is_negative() && negative_pivot.is_none() {
            negative_pivot = Some(n + 1);
        }
        if b.is_zero() {
            break;
        }
        prev = cur;
        cur = next;
        norm = next_norm;
    }
    alpha.resize(levels, Rational::zero());
    beta.resize(levels, Rational::zero());
    Ok(JacobiFit {
        params: JacobiParams::new(alpha, beta)?,
        negative_pivot,
    })
}

/// The law of `γX`: `(γα_n; γ²β_n)`.
pub fn scale_jacobi(j: &JacobiParams, gamma: &Rational) -> JacobiParams {
    let g2 = gamma * gamma;
    JacobiParams::new(
        j.alpha.iter().map(|a| a * gamma).collect(),
        j.beta.iter().map(|b| b * &g2).collect(),
    )
    .expect("equal lengths")
}

/// Drops level 0: `(α_1, α_2, ...; β_1, β_2, ...)`.
pub fn shift_jacobi(j: &JacobiParams) -> Result<JacobiParams, JacobiError> {
    if j.levels() < 2 {
        return Err(JacobiError::TooShort {
            needed: 2,
            have: j.levels(),
        });
    }
    JacobiParams::new(j.alpha[1..].to_vec(), j.beta[1..].to_vec())
}

/// Monic `P_0..=P_n` (coefficients low to high) from
/// `x P_k = P_{k+1} + α_k P_k + β_{k-1} P_{k-1}`.
///
/// For terminated data the list stops at `P_{i+1}`, which vanishes on the support.
pub fn orthogonal_polys(j: &JacobiParams, n: usize) -> Result<Vec<Vec<Rational>>, JacobiError> {
    let n = match j.terminated {
        Some(i) => n.min(i + 1),
        None => n,
    };
    if j.levels() < n {
        return Err(JacobiError::TooShort {
            needed: n,
            have: j.levels(),
        });
    }
    let mut polys = vec![vec![Rational::one()]];
    let mut prev = vec![Rational::zero()];
    for k in 0..n {
        let b_prev = if k == 0 { Rational::zero() } else { j.beta(k - 1) };
        let next = recurrence_step(&polys[k], &prev, &j.alpha(k), &b_prev);
        prev = polys[k].clone();
        polys.push(next);
    }
    Ok(polys)
}
