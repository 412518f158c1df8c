//! Cumulants from moments.
//!
//! `ψ(X^n)` is `r_n` plus terms in `r_1..r_{n-1}` only, so each cumulant is the
//! moment minus the moment computed with that cumulant set to zero. The same
//! holds for `φ(X^n)` and `R_n` once the `r` sequence is known.

use crate::rational::Rational;

use super::{interval, CumulantError, Functional, VariableSpec};

fn check_normalized(m: &[Rational]) -> Result<(), CumulantError> {
    match m.first() {
        Some(m0) if m0.is_one() => Ok(()),
        Some(m0) => Err(CumulantError::MomentNormalization(m0.clone())),
        None => Err(CumulantError::MomentNormalization(Rational::zero())),
    }
}

fn solve(
    moments: &[Rational],
    v: &mut VariableSpec,
    f: Functional,
) -> Result<(), CumulantError> {
    for n in 1..moments.len() {
        let target = match f {
            Functional::Psi => &mut v.free[n - 1],
            _ => &mut v.two_state[n - 1],
        };
        *target = Rational::zero();
        let without = interval::power_moments(&v.truncated(n), n, f)?.pop().unwrap();
        let value = &moments[n] - &without;
        match f {
            Functional::Psi => v.free[n - 1] = value,
            _ => v.two_state[n - 1] = value,
        }
    }
    Ok(())
}

/// `r_1..r_N` from `m_0 = 1, m_1, ..., m_N`.
pub fn moments_to_free_cumulants(moments: &[Rational]) -> Result<Vec<Rational>, CumulantError> {
    check_normalized(moments)?;
    let order = moments.len() - 1;
    let mut v = VariableSpec::zero("X", order);
    solve(moments, &mut v, Functional::Psi)?;
    Ok(v.free)
}

/// `(R_1..R_N, r_1..r_N)` from the φ and ψ moment sequences.
pub fn moments_to_twostate_cumulants(
    phi_moments: &[Rational],
    psi_moments: &[Rational],
) -> Result<(Vec<Rational>, Vec<Rational>), CumulantError> {
    if phi_moments.len() != psi_moments.len() {
        return Err(CumulantError::LengthMismatch(
            phi_moments.len(),
            psi_moments.len(),
        ));
    }
    check_normalized(phi_moments)?;
    check_normalized(psi_moments)?;
    let order = phi_moments.len() - 1;
    let mut v = VariableSpec::zero("X", order);
    solve(psi_moments, &mut v, Functional::Psi)?;
    solve(phi_moments, &mut v, Functional::Phi)?;
    Ok((v.two_state, v.free))
}
