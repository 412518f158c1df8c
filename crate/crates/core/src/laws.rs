//! Two-state laws: a φ-law and a ψ-law held both as Jacobi data and as cumulants.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cumulants::{
    moments_to_free_cumulants, moments_to_twostate_cumulants, phi_moments, psi_moments,
    CumulantError, VariableSpec,
};
use crate::jacobi::{jacobi_from_moments, moments_from_jacobi, JacobiError, JacobiParams};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LawError {
    #[error("{0}")]
    Domain(String),
    #[error("outside the supported scope: {0}")]
    Scope(String),
    #[error("{state}-moments from cumulants and from Jacobi data differ at order {n}")]
    Inconsistent { state: &'static str, n: usize },
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Cumulant(#[from] CumulantError),
}

/// A pair (μ, ν): μ is the law under φ, ν the law under ψ.
///
/// Laws are built at an even order `2L`: `L` Jacobi levels per state and
/// cumulants `R_1..R_2L`, `r_1..r_2L`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoStateLaw {
    pub name: Option<String>,
    mu: JacobiParams,
    nu: JacobiParams,
    cumulants: VariableSpec,
    phi_moments: Vec<Rational>,
    psi_moments: Vec<Rational>,
}

/// On-disk form of a law.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LawFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mu: JacobiParams,
    pub nu: JacobiParams,
}

fn even_order(order: usize) -> usize {
    2 * order.div_ceil(2)
}

impl TwoStateLaw {
    /// From Jacobi data; moments to `order` rounded up to even.
    pub fn from_jacobi(
        name: Option<String>,
        mu: JacobiParams,
        nu: JacobiParams,
        order: usize,
    ) -> Result<Self, LawError> {
        let order = even_order(order);
        let levels = order / 2;
        let mphi = moments_from_jacobi(&mu, order)?;
        let mpsi = moments_from_jacobi(&nu, order)?;
        let (big_r, r) = moments_to_twostate_cumulants(&mphi, &mpsi)?;
        Ok(TwoStateLaw {
            name,
            mu: mu.truncated(levels),
            nu: nu.truncated(levels),
            cumulants: VariableSpec::new("X", r, big_r),
            phi_moments: mphi,
            psi_moments: mpsi,
        })
    }

    /// From cumulants `R_1..R_N`, `r_1..r_N`; an odd `N` drops the last index.
    pub fn from_cumulants(name: Option<String>, v: &VariableSpec) -> Result<Self, LawError> {
        let order = v.order() / 2 * 2;
        let v = v.truncated(order).renamed("X");
        let mphi = phi_moments(&v, order)?;
        let mpsi = psi_moments(&v, order)?;
        let mu = jacobi_from_moments(&mphi)?.params;
        let nu = jacobi_from_moments(&mpsi)?.params;
        Ok(TwoStateLaw {
            name,
            mu,
            nu,
            cumulants: v,
            phi_moments: mphi,
            psi_moments: mpsi,
        })
    }

    pub fn from_file(file: LawFile, order: usize) -> Result<Self, LawError> {
        Self::from_jacobi(file.name, file.mu, file.nu, order)
    }

    pub fn to_file(&self) -> LawFile {
        LawFile {
            name: self.name.clone(),
            mu: self.mu.clone(),
            nu: self.nu.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.phi_moments.len() - 1
    }

    pub fn mu(&self) -> &JacobiParams {
        &self.mu
    }

    pub fn nu(&self) -> &JacobiParams {
        &self.nu
    }

    /// Cumulants as a variable named `X`.
    pub fn cumulants(&self) -> &VariableSpec {
        &self.cumulants
    }

    pub fn variable(&self, name: &str) -> VariableSpec {
        self.cumulants.renamed(name)
    }

    pub fn phi_moments(&self) -> &[Rational] {
        &self.phi_moments
    }

    pub fn psi_moments(&self) -> &[Rational] {
        &self.psi_moments
    }

    /// Recomputes both moment sequences from the cumulants and from the Jacobi
    /// data and compares them.
    pub fn check_consistency(&self) -> Result<(), LawError> {
        let order = self.order();
        let pairs = [
            ("phi", phi_moments(&self.cumulants, order)?, moments_from_jacobi(&self.mu, order)?),
            ("psi", psi_moments(&self.cumulants, order)?, moments_from_jacobi(&self.nu, order)?),
        ];
        for (state, from_cumulants, from_jacobi) in pairs {
            if let Some(n) = from_cumulants.iter().zip(&from_jacobi).position(|(x, y)| x != y) {
                return Err(LawError::Inconsistent { state, n });
            }
        }
        Ok(())
    }

    fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }
}

/// μ with Jacobi data `(a, 0, 0, ...; b, 1, 1, ...)`, ν the standard semicircle.
pub fn two_state_normal(a: Rational, b: Rational, order: usize) -> Result<TwoStateLaw, LawError> {
    if !b.is_positive() {
        return Err(LawError::Domain(format!("two-state normal law needs b > 0, got {b}")));
    }
    let levels = order.div_ceil(2).max(1);
    let zero = Rational::zero();
    let one = Rational::one();
    let mu = JacobiParams::with_tail(&[a], &[b], &zero, &one, levels);
    let nu = JacobiParams::constant(zero, one, levels);
    TwoStateLaw::from_jacobi(None, mu, nu, order)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MeixnerType {
    Wigner,
    FreePoisson,
    FreePascal,
    FreeGamma,
    PureFreeMeixner,
    FreeBinomial,
}

impl MeixnerType {
    pub fn label(self) -> &'static str {
        match self {
            MeixnerType::Wigner => "wigner",
            MeixnerType::FreePoisson => "free-poisson",
            MeixnerType::FreePascal => "free-pascal",
            MeixnerType::FreeGamma => "free-gamma",
            MeixnerType::PureFreeMeixner => "pure-free-meixner",
            MeixnerType::FreeBinomial => "free-binomial",
        }
    }
}

impl fmt::Display for MeixnerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Type of the free Meixner law with Jacobi data `(a, 0, ...; b, 1, ...)`.
pub fn classify_meixner(a: &Rational, b: &Rational) -> Result<MeixnerType, LawError> {
    if !b.is_positive() {
        return Err(LawError::Domain(format!("free Meixner law needs b > 0, got {b}")));
    }
    let one = Rational::one();
    if *b == one {
        return Ok(if a.is_zero() {
            MeixnerType::Wigner
        } else {
            MeixnerType::FreePoisson
        });
    }
    if *b > one {
        return Ok(MeixnerType::FreeBinomial);
    }
    let disc = a * a;
    let bound = Rational::from(4) * (one - b);
    Ok(match disc.cmp(&bound) {
        std::cmp::Ordering::Greater => MeixnerType::FreePascal,
        std::cmp::Ordering::Equal => MeixnerType::FreeGamma,
        std::cmp::Ordering::Less => MeixnerType::PureFreeMeixner,
    })
}

/// Named two-state normal laws, one per Meixner type.
pub const CATALOG: &[(&str, i64, i64, i64, i64)] = &[
    ("wigner", 0, 1, 1, 1),
    ("free-poisson", 1, 1, 1, 1),
    ("free-pascal", 3, 1, 1, 2),
    ("free-gamma", 1, 1, 3, 4),
    ("pure-free-meixner", 0, 1, 1, 2),
    ("free-binomial", 0, 1, 2, 1),
];

/// A catalog law, as a two-state normal pair at the given order.
pub fn catalog_law(name: &str, order: usize) -> Result<TwoStateLaw, LawError> {
    let &(_, an, ad, bn, bd) = CATALOG
        .iter()
        .find(|e| e.0 == name)
        .ok_or_else(|| LawError::UnknownLaw(name.to_string()))?;
    Ok(two_state_normal(Rational::new(an, ad), Rational::new(bn, bd), order)?.with_name(name))
}

fn psi_from_free(r: &[Rational]) -> Result<Vec<Rational>, LawError> {
    let v = VariableSpec::new("X", r.to_vec(), r.to_vec());
    Ok(psi_moments(&v, r.len())?)
}

/// ν1 ⊞ ν2 by adding free cumulants; `⌈order/2⌉` levels.
pub fn free_convolve(
    nu1: &JacobiParams,
    nu2: &JacobiParams,
    order: usize,
) -> Result<JacobiParams, LawError> {
    let order = even_order(order);
    let r1 = moments_to_free_cumulants(&moments_from_jacobi(nu1, order)?)?;
    let r2 = moments_to_free_cumulants(&moments_from_jacobi(nu2, order)?)?;
    let r: Vec<Rational> = r1.iter().zip(&r2).map(|(x, y)| x + y).collect();
    Ok(jacobi_from_moments(&psi_from_free(&r)?)?.params)
}

/// (μ1, ν1) ⊞_c (μ2, ν2): both cumulant sequences add.
pub fn cfree_convolve(l1: &TwoStateLaw, l2: &TwoStateLaw) -> Result<TwoStateLaw, LawError> {
    let order = l1.order().min(l2.order());
    let (v1, v2) = (l1.cumulants.truncated(order), l2.cumulants.truncated(order));
    let add = |x: &[Rational], y: &[Rational]| x.iter().zip(y).map(|(p, q)| p + q).collect();
    let v = VariableSpec::new("X", add(&v1.free, &v2.free), add(&v1.two_state, &v2.two_state));
    TwoStateLaw::from_cumulants(None, &v)
}

/// The c-free convolution power `t ≥ 0` of a law whose cumulants vanish
/// beyond order two.
pub fn cfree_power(l: &TwoStateLaw, t: &Rational) -> Result<TwoStateLaw, LawError> {
    if t.is_negative() {
        return Err(LawError::Domain(format!("convolution power must be >= 0, got {t}")));
    }
    let v = &l.cumulants;
    let higher = (3..=v.order()).find(|&k| !v.r(k).is_zero() || !v.big_r(k).is_zero());
    if let Some(k) = higher {
        return Err(LawError::Scope(format!(
            "convolution powers are supported for laws with cumulants of order <= 2; order {k} is nonzero"
        )));
    }
    TwoStateLaw::from_cumulants(None, &v.scaled_cumulants(t))
}

/// The law with Jacobi data `(γa; γb, γ, γ, ...)` and `(0; γ, γ, ...)`, i.e. the
/// `γ`-th c-free power of the `(a, b)` two-state normal law, built directly.
pub fn normal_power_law(
    a: &Rational,
    b: &Rational,
    gamma: &Rational,
    order: usize,
) -> Result<TwoStateLaw, LawError> {
    let levels = order.div_ceil(2).max(1);
    let zero = Rational::zero();
    let mu = JacobiParams::with_tail(&[a * gamma], &[b * gamma], &zero, gamma, levels);
    let nu = JacobiParams::with_tail(&[], &[], &zero, gamma, levels);
    TwoStateLaw::from_jacobi(None, mu, nu, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn zeros_after(v: &[Rational], k: usize) -> bool {
        v[k..].iter().all(Rational::is_zero)
    }

    #[test]
    fn normal_law_cumulants() {
        let (a, b) = (q(-2, 3), q(5, 4));
        let l = two_state_normal(a.clone(), b.clone(), 10).unwrap();
        let c = l.cumulants();
        assert_eq!(c.big_r(1), a);
        assert_eq!(c.big_r(2), b);
        assert!(zeros_after(&c.two_state, 2));
        assert_eq!(c.r(2), Rational::one());
        assert!(c.r(1).is_zero() && zeros_after(&c.free, 2));
        let m = l.phi_moments();
        assert_eq!(&m[2] - &(&m[1] * &m[1]), b);
        l.check_consistency().unwrap();
        assert!(two_state_normal(q(0, 1), q(0, 1), 4).is_err());
    }

    #[test]
    fn wigner_pair() {
        let l = catalog_law("wigner", 8).unwrap();
        assert_eq!(l.mu(), l.nu());
        assert_eq!(l.phi_moments(), l.psi_moments());
    }

    #[test]
    fn classification() {
        use MeixnerType::*;
        let cases = [
            ((0, 1), (1, 1), Wigner),
            ((1, 1), (1, 1), FreePoisson),
            ((3, 1), (1, 2), FreePascal),
            ((1, 1), (3, 4), FreeGamma),
            ((0, 1), (1, 2), PureFreeMeixner),
            ((-1, 2), (3, 1), FreeBinomial),
        ];
        for ((an, ad), (bn, bd), want) in cases {
            assert_eq!(classify_meixner(&q(an, ad), &q(bn, bd)).unwrap(), want);
        }
        assert!(classify_meixner(&q(2, 1), &q(0, 1)).is_err());
        for &(name, an, ad, bn, bd) in CATALOG {
            assert_eq!(classify_meixner(&q(an, ad), &q(bn, bd)).unwrap().label(), name);
        }
    }

    #[test]
    fn free_convolution() {
        let w = JacobiParams::constant(q(0, 1), q(1, 1), 5);
        assert_eq!(free_convolve(&w, &w, 10).unwrap(), JacobiParams::constant(q(0, 1), q(2, 1), 5));
        let delta0 = JacobiParams::point_mass(q(0, 1), 5);
        let j = JacobiParams::new(
            vec![q(1, 2), q(-1, 3), q(1, 4), q(2, 1), q(0, 1)],
            vec![q(2, 1), q(1, 2), q(3, 1), q(1, 5), q(1, 1)],
        )
        .unwrap();
        assert_eq!(free_convolve(&j, &delta0, 10).unwrap(), j);
        let c = q(3, 1);
        let shifted = free_convolve(&j, &JacobiParams::point_mass(c.clone(), 5), 10).unwrap();
        assert_eq!(shifted.alpha(0), j.alpha(0) + &c);
        assert_eq!(shifted.alpha(1), j.alpha(1) + &c);
        assert_eq!(shifted.betas(), j.betas());
    }

    #[test]
    fn cfree_convolution_of_fragments() {
        let (a, b) = (q(1, 2), q(3, 4));
        let alpha = q(1, 3);
        let beta = Rational::one() - &alpha;
        let x = normal_power_law(&a, &b, &alpha, 10).unwrap();
        let y = normal_power_law(&a, &b, &beta, 10).unwrap();
        let s = cfree_convolve(&x, &y).unwrap();
        let n = two_state_normal(a, b, 10).unwrap();
        assert_eq!(s.mu(), n.mu());
        assert_eq!(s.nu(), n.nu());
        let delta = TwoStateLaw::from_cumulants(None, &VariableSpec::zero("X", 10)).unwrap();
        let same = cfree_convolve(&n, &delta).unwrap();
        assert_eq!(same.mu(), n.mu());
        assert_eq!(same.nu(), n.nu());
    }

    #[test]
    fn powers() {
        let (a, b) = (q(-1, 2), q(7, 3));
        let l = two_state_normal(a.clone(), b.clone(), 10).unwrap();
        for t in [q(0, 1), q(1, 2), q(1, 1), q(2, 1), q(5, 3)] {
            let p = cfree_power(&l, &t).unwrap();
            let direct = normal_power_law(&a, &b, &t, 10).unwrap();
            assert_eq!(p.phi_moments(), direct.phi_moments(), "t = {t}");
            assert_eq!(p.psi_moments(), direct.psi_moments(), "t = {t}");
            if !t.is_zero() {
                assert_eq!(p.mu(), direct.mu());
                assert_eq!(p.nu(), direct.nu());
            }
        }
        let zero = cfree_power(&l, &q(0, 1)).unwrap();
        assert_eq!(zero.mu().terminated(), Some(0));
        assert!(cfree_power(&l, &q(-1, 1)).is_err());
        let (s, t) = (q(1, 3), q(3, 2));
        let lhs = cfree_power(&l, &(&s + &t)).unwrap();
        let rhs = cfree_convolve(&cfree_power(&l, &s).unwrap(), &cfree_power(&l, &t).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let general = TwoStateLaw::from_jacobi(
            None,
            JacobiParams::new(vec![q(1, 1); 5], vec![q(1, 1); 5]).unwrap(),
            JacobiParams::constant(q(0, 1), q(1, 1), 5),
            10,
        )
        .unwrap();
        assert!(matches!(cfree_power(&general, &q(2, 1)), Err(LawError::Scope(_))));
    }

    #[test]
    fn law_file_round_trip() {
        let l = catalog_law("free-gamma", 6).unwrap();
        let s = serde_json::to_string(&l.to_file()).unwrap();
        assert!(s.starts_with(r#"{"name":"free-gamma","mu":{"alpha":["#));
        let f: LawFile = serde_json::from_str(&s).unwrap();
        assert_eq!(TwoStateLaw::from_file(f, 6).unwrap(), l);
    }
}
