use crate::cumulants::enumerate::PowerPartials;
use crate::cumulants::interval::IntervalMoments;
use crate::cumulants::{
    ck_series, cparallel_series, moments_to_twostate_cumulants, phi_moment_series, phi_moments,
    psi_moment_series, psi_moments, tail_r_transform, CumulantTable, Letter, VariableSpec, Word,
};
use crate::jacobi::{moments_from_jacobi, scale_jacobi, shift_jacobi, JacobiParams};
use crate::laws::{cfree_convolve, cfree_power, normal_power_law, two_state_normal, TwoStateLaw};
use crate::rational::Rational;
use crate::series::TruncatedSeries;

use super::{CheckRow, Perturbation, PerturbationTarget, Theorem, TheoremCheckSpec, VerifyError};

type Rows = Result<Vec<CheckRow>, VerifyError>;

pub(super) fn rows(spec: &TheoremCheckSpec, p: Option<&Perturbation>) -> Rows {
    match spec.theorem {
        Theorem::Main210 => regression(spec, p, true),
        Theorem::Prop46 => regression(spec, p, false),
        Theorem::Thm45 => quadratic_variance(spec, p),
        Theorem::Prop44 => normal_first_last(spec, p),
        Theorem::Thm42 => shifted_law(spec),
        Theorem::Prop41 => tail_transform(spec),
        Theorem::Lemma35 => partial_series(spec),
        Theorem::Lemma38 => first_last_series(spec),
        Theorem::Lemma32 => partial_recursion(spec),
        Theorem::Lemma36 => first_last_recursion(spec),
        Theorem::Thm312 => powers(spec),
    }
}

fn domain(msg: impl Into<String>) -> VerifyError {
    VerifyError::Domain(msg.into())
}

fn series_rows(rows: &mut Vec<CheckRow>, identity: &str, lhs: &TruncatedSeries, rhs: &TruncatedSeries) {
    let order = lhs.order().min(rhs.order());
    for j in 0..=order {
        rows.push(CheckRow::new(identity, j, lhs.coeff(j), rhs.coeff(j)));
    }
}

/// `c_0 + c_1 z + c_2 z^2` at the given order.
fn quadratic(c0: Rational, c1: Rational, c2: Rational, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_slice(&[c0, c1, c2], order)
}

fn check_b(b: &Rational) -> Result<(), VerifyError> {
    if b.is_positive() {
        Ok(())
    } else {
        Err(domain(format!("b must be positive, got {b}")))
    }
}

fn split_weights(spec: &TheoremCheckSpec) -> Result<(Rational, Rational), VerifyError> {
    let alpha = spec.param("alpha")?;
    if !alpha.is_positive() || alpha >= Rational::one() {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let beta = Rational::one() - &alpha;
    Ok((alpha, beta))
}

/// Cumulants of the single variable a check runs on: an explicit variable, a
/// law, or the `(a, b)` two-state normal law, in that order of preference.
fn single_variable(spec: &TheoremCheckSpec, order: usize) -> Result<VariableSpec, VerifyError> {
    if let Some(v) = &spec.variable {
        if v.order() < order {
            return Err(domain(format!(
                "variable `{}` has cumulants to order {}, {order} needed",
                v.name,
                v.order()
            )));
        }
        return Ok(v.truncated(order).renamed("X"));
    }
    if let Some(law) = &spec.law {
        let l = TwoStateLaw::from_file(law.clone(), order)?;
        return Ok(l.cumulants().truncated(order));
    }
    let (a, b) = (spec.param("a")?, spec.param("b")?);
    check_b(&b)?;
    Ok(two_state_normal(a, b, order)?.cumulants().truncated(order))
}

fn wigner(levels: usize) -> JacobiParams {
    JacobiParams::constant(Rational::zero(), Rational::one(), levels)
}

fn phi_prefixes(w: &Word, t: &CumulantTable) -> Result<IntervalMoments, VerifyError> {
    Ok(IntervalMoments::new(w, t)?)
}

/// X and Y with proportional cumulants, `D = βX - αY` and `S = X + Y`.
struct Regression {
    table: CumulantTable,
    d: Letter,
    s: Letter,
    weight: Rational,
}

impl Regression {
    fn new(x: VariableSpec, y: VariableSpec, alpha: &Rational, beta: &Rational) -> Result<Self, VerifyError> {
        let d = Letter::scaled("X", beta.clone()).plus("Y", -alpha.clone());
        let s = Letter::var("X").plus("Y", Rational::one());
        Ok(Regression {
            table: CumulantTable::new(vec![x, y])?,
            d,
            s,
            weight: alpha * beta,
        })
    }

    /// `φ(D² S^n)` for `n = 0..=max_n`.
    fn square(&self, max_n: usize) -> Result<Vec<Rational>, VerifyError> {
        let w = Word::new(vec![self.d.clone(), self.d.clone()]).then_power(&self.s, max_n);
        let m = phi_prefixes(&w, &self.table)?;
        Ok((0..=max_n).map(|n| m.phi(0, n + 2).clone()).collect())
    }

    /// `φ(D S D S^n)` for `n = 0..=max_n`.
    fn interleaved(&self, max_n: usize) -> Result<Vec<Rational>, VerifyError> {
        let w = Word::new(vec![self.d.clone(), self.s.clone(), self.d.clone()]).then_power(&self.s, max_n);
        let m = phi_prefixes(&w, &self.table)?;
        Ok((0..=max_n).map(|n| m.phi(0, n + 3).clone()).collect())
    }

    /// `φ(D S^n D)` for `n = 0..=max_n`.
    fn sandwich(&self, max_n: usize) -> Result<Vec<Rational>, VerifyError> {
        (0..=max_n)
            .map(|n| {
                let w = Word::new(vec![self.d.clone()]).then_power(&self.s, n).then(&self.d);
                Ok(phi_prefixes(&w, &self.table)?.phi(0, n + 2).clone())
            })
            .collect()
    }

    /// `(φ(S^j), ψ(S^j))` for `j = 0..=len`.
    fn powers(&self, len: usize) -> Result<(Vec<Rational>, Vec<Rational>), VerifyError> {
        let m = phi_prefixes(&Word::power(&self.s, len), &self.table)?;
        Ok((
            (0..=len).map(|j| m.phi(0, j).clone()).collect(),
            (0..=len).map(|j| m.psi(0, j).clone()).collect(),
        ))
    }
}

fn regression(spec: &TheoremCheckSpec, p: Option<&Perturbation>, full: bool) -> Rows {
    let (a, b) = (spec.param("a")?, spec.param("b")?);
    check_b(&b)?;
    let (alpha, beta) = split_weights(spec)?;
    let n_max = spec.max_n;
    let order = n_max + 4;
    let base = two_state_normal(a.clone(), b.clone(), order)?.cumulants().truncated(order);
    let mut x = base.scaled_cumulants(&alpha).renamed("X");
    let mut y = base.scaled_cumulants(&beta).renamed("Y");
    if let Some(p) = p {
        if !p.is_cumulant() {
            return Err(domain(format!("`{p}`: this check perturbs cumulants of X or Y")));
        }
        match p.target {
            Some(PerturbationTarget::Y) => y = p.apply_to_variable(&y)?,
            _ => x = p.apply_to_variable(&x)?,
        }
    }
    let r = Regression::new(x, y, &alpha, &beta)?;
    let square = r.square(n_max)?;
    let interleaved = r.interleaved(n_max)?;
    let sandwich = r.sandwich(n_max)?;
    let (phi_s, psi_s) = r.powers(n_max + 2)?;
    let ab = &r.weight;
    let one = Rational::one();
    let mut rows = Vec::new();
    for n in 0..=n_max {
        rows.push(CheckRow::new(
            "square-regression",
            n,
            square[n].clone(),
            ab * &b * &phi_s[n],
        ));
        if full {
            let quad = (&one - &b) * &phi_s[n + 2]
                + (&a * &b - &a - &a) * &phi_s[n + 1]
                + (&a * &a + &b * &b) * &phi_s[n];
            rows.push(CheckRow::new("sandwich-quadratic", n, sandwich[n].clone(), ab * &quad));
        }
        rows.push(CheckRow::new("sandwich-psi", n, sandwich[n].clone(), ab * &b * &psi_s[n]));
        rows.push(CheckRow::new(
            "interleaved-linear",
            n,
            interleaved[n].clone(),
            ab * &a * &square[n],
        ));
        if full {
            rows.push(CheckRow::new(
                "interleaved-vanishing",
                n,
                interleaved[n].clone(),
                &psi_s[1] * &square[n],
            ));
        }
    }
    Ok(rows)
}

fn quadratic_variance(spec: &TheoremCheckSpec, p: Option<&Perturbation>) -> Rows {
    let (a, b) = (spec.param("a")?, spec.param("b")?);
    check_b(&b)?;
    let (alpha, beta) = split_weights(spec)?;
    let at = spec.param_or("a_tilde", Rational::zero());
    let bt = spec.param_or("b_tilde", Rational::zero());
    let one = Rational::one();
    if bt <= -one.clone() {
        return Err(domain(format!("b_tilde must exceed -1, got {bt}")));
    }
    let order = spec.max_n;
    if order < 2 {
        return Err(domain("order must be at least 2"));
    }
    let nu = match &spec.law {
        Some(l) => l.nu.clone(),
        None => wigner(order.div_ceil(2)),
    };

    // The law of S determined by the first-last relation and ν.
    let m_nu = TruncatedSeries::from_coeffs(moments_from_jacobi(&nu, order)?)?;
    let z = TruncatedSeries::variable(order);
    let bt_plus_zat = quadratic(bt.clone(), at.clone(), Rational::zero(), order);
    let denom = TruncatedSeries::one(order).scale(&(&bt + &one)) - &m_nu * &bt_plus_zat;
    let c_par = (&m_nu * &z.pow(2)).scale(&b).div(&denom)?;
    let m_mu = (TruncatedSeries::one(order) - z.scale(&a) - c_par).recip()?;
    let (big_r, r) = moments_to_twostate_cumulants(m_mu.coeffs(), m_nu.coeffs())?;
    let mut s_var = VariableSpec::new("S", r, big_r);
    if let Some(p) = p {
        if !p.is_cumulant() || p.target == Some(PerturbationTarget::Y) {
            return Err(domain(format!("`{p}`: this check perturbs cumulants of S")));
        }
        s_var = p.apply_to_variable(&s_var)?;
    }

    let reg = Regression::new(
        s_var.scaled_cumulants(&alpha).renamed("X"),
        s_var.scaled_cumulants(&beta).renamed("Y"),
        &alpha,
        &beta,
    )?;
    let n_max = order - 2;
    let square = reg.square(n_max)?;
    let (phi_s, _) = reg.powers(order)?;
    let scale = &reg.weight / &(&bt + &one);
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let rhs = &bt * &phi_s[n + 2] + (&at - &a * &bt) * &phi_s[n + 1] + (&b - &a * &at) * &phi_s[n];
        rows.push(CheckRow::new("quadratic-variance", n, square[n].clone(), &scale * &rhs));
    }

    let mu_s = phi_moment_series(&s_var, order)?;
    let nu_s = psi_moment_series(&s_var, order)?;
    let par = cparallel_series(&s_var, order)?;
    let poly = quadratic(bt.clone(), &at - &a * &bt, &b - &a * &at, order);
    let one_minus_az = quadratic(one.clone(), -a.clone(), Rational::zero(), order);
    let lhs = &mu_s * &(&(&nu_s * &poly) - &one_minus_az.scale(&(&bt + &one)));
    let rhs = &(&nu_s * &bt_plus_zat) - &TruncatedSeries::one(order).scale(&(&bt + &one));
    series_rows(&mut rows, "moment-series-relation", &lhs, &rhs);
    let lhs = &par * &(&TruncatedSeries::one(order).scale(&(&bt + &one)) - &(&nu_s * &bt_plus_zat));
    let rhs = (&nu_s * &z.pow(2)).scale(&b);
    series_rows(&mut rows, "parallel-series-relation", &lhs, &rhs);

    if at.is_zero() && bt.is_zero() && spec.law.is_none() {
        let normal = two_state_normal(a, b, order)?;
        for (n, x) in phi_s.iter().enumerate().take(order + 1) {
            rows.push(CheckRow::new("normal-specialization", n, x.clone(), normal.phi_moments()[n].clone()));
        }
    }
    Ok(rows)
}

/// φ-law from the spec: explicit Jacobi data, a law file, or `(a; b, 1, 1, ...)`.
fn mu_input(spec: &TheoremCheckSpec, levels: usize) -> Result<JacobiParams, VerifyError> {
    if let Some(j) = &spec.jacobi {
        return Ok(j.clone());
    }
    if let Some(l) = &spec.law {
        return Ok(l.mu.clone());
    }
    let (a, b) = (spec.param("a")?, spec.param("b")?);
    check_b(&b)?;
    Ok(JacobiParams::with_tail(&[a], &[b], &Rational::zero(), &Rational::one(), levels))
}

fn nu_input(spec: &TheoremCheckSpec, levels: usize) -> JacobiParams {
    match (&spec.jacobi, &spec.law) {
        (None, Some(l)) => l.nu.clone(),
        _ => wigner(levels),
    }
}

fn normal_first_last(spec: &TheoremCheckSpec, p: Option<&Perturbation>) -> Rows {
    let order = spec.max_n;
    if order < 2 {
        return Err(domain("order must be at least 2"));
    }
    let levels = order.div_ceil(2);
    let mu = mu_input(spec, levels)?;
    let nu = nu_input(spec, levels);
    let m = moments_from_jacobi(&mu, 2)?;
    let (a, b) = match (spec.params.get("a"), spec.params.get("b")) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => (m[1].clone(), &m[2] - &(&m[1] * &m[1])),
    };
    check_b(&b)?;
    if m[1] != a || m[2] != &b + &(&a * &a) {
        return Err(domain(format!(
            "the law must have mean a = {a} and second moment b + a^2 = {}",
            &b + &(&a * &a)
        )));
    }
    let law = match p {
        None => TwoStateLaw::from_jacobi(None, mu, nu, order)?,
        Some(p) if p.is_cumulant() => {
            let clean = TwoStateLaw::from_jacobi(None, mu, nu, order)?;
            TwoStateLaw::from_cumulants(None, &p.apply_to_variable(clean.cumulants())?)?
        }
        Some(p) => TwoStateLaw::from_jacobi(None, p.apply_to_jacobi(&mu)?, nu, order)?,
    };
    let v = law.cumulants().truncated(order);
    let zero = Rational::zero();
    let one = Rational::one();
    let mut rows = Vec::new();
    for i in 0..law.mu().levels() {
        let (ea, eb) = if i == 0 { (a.clone(), b.clone()) } else { (zero.clone(), one.clone()) };
        rows.push(CheckRow::new("jacobi-alpha", i, law.mu().alpha(i), ea));
        rows.push(CheckRow::new("jacobi-beta", i, law.mu().beta(i), eb));
    }
    let par = cparallel_series(&v, order)?;
    let semicircle = moments_from_jacobi(&wigner(levels), order - 2)?;
    for n in 0..=order - 2 {
        rows.push(CheckRow::new("wigner-relation", n, par.coeff(n + 2), &b * &semicircle[n]));
    }
    let b2z2 = TruncatedSeries::monomial(&b * &b, 2, order);
    series_rows(&mut rows, "parallel-quadratic", &(&(&par * &par) - &par.scale(&b)), &b2z2.scale(&-Rational::one()));
    let mu_s = phi_moment_series(&v, order)?;
    let one_minus_az = quadratic(one.clone(), -a.clone(), zero.clone(), order);
    let factor = &(&b2z2 - &one_minus_az.scale(&b)) + &one_minus_az.pow(2);
    let lhs = &(&mu_s * &factor) - &quadratic(&one - &b, -a.clone(), zero, order);
    series_rows(&mut rows, "mu-relation", &lhs, &par);
    Ok(rows)
}

fn shifted_law(spec: &TheoremCheckSpec) -> Rows {
    let order = spec.max_n;
    if order < 2 {
        return Err(domain("order must be at least 2"));
    }
    let levels = order.div_ceil(2);
    let mu = mu_input(spec, levels)?;
    if mu.levels() < 3 {
        return Err(domain(format!("the law needs at least 3 Jacobi levels, got {}", mu.levels())));
    }
    let beta0 = mu.beta(0);
    if !beta0.is_positive() {
        return Err(domain(format!("beta_0 must be positive, got {beta0}")));
    }
    // Levels beyond the supplied ones are zero, as after a termination.
    let mu = if mu.levels() < levels {
        let pad = |s: &[Rational]| {
            let mut v = s.to_vec();
            v.resize(levels, Rational::zero());
            v
        };
        JacobiParams::new(pad(mu.alphas()), pad(mu.betas()))?
    } else {
        mu
    };
    let nu = nu_input(spec, levels);
    let law = TwoStateLaw::from_jacobi(None, mu.clone(), nu, order)?;
    let par = cparallel_series(&law.cumulants().truncated(order), order)?;
    let shifted = moments_from_jacobi(&shift_jacobi(&mu)?, order - 2)?;
    Ok((0..=order - 2)
        .map(|n| CheckRow::new("shift-relation", n, par.coeff(n + 2), &beta0 * &shifted[n]))
        .collect())
}

fn k_values(spec: &TheoremCheckSpec, max: usize) -> Result<Vec<usize>, VerifyError> {
    match spec.params.get("k") {
        None => Ok((1..=max).collect()),
        Some(k) => {
            let ok = k.is_integer() && k.is_positive() && *k <= Rational::from(max as i64);
            if !ok {
                return Err(domain(format!("k must be an integer in 1..={max}, got {k}")));
            }
            Ok(vec![k.to_string().trim_end_matches("/1").parse().expect("integer")])
        }
    }
}

fn tail_transform(spec: &TheoremCheckSpec) -> Rows {
    let order = spec.max_n;
    let v = single_variable(spec, order)?;
    let mu = phi_moment_series(&v, order)?;
    let znu = &psi_moment_series(&v, order)? * &TruncatedSeries::variable(order);
    let mut rows = Vec::new();
    for k in k_values(spec, order.min(5))? {
        let lhs = ck_series(k, &v, order)?;
        let rhs = &tail_r_transform(&v, k, order).compose(&znu)?.shift(k) * &mu;
        series_rows(&mut rows, &format!("tail-transform[k={k}]"), &lhs, &rhs);
    }
    Ok(rows)
}

fn partial_series(spec: &TheoremCheckSpec) -> Rows {
    let order = spec.max_n;
    if order < 2 {
        return Err(domain("order must be at least 2"));
    }
    let v = single_variable(spec, order)?;
    let mu = phi_moment_series(&v, order)?;
    let nu = psi_moment_series(&v, order)?;
    let mut rows = Vec::new();
    series_rows(
        &mut rows,
        "first-partial",
        &ck_series(1, &v, order)?,
        &(&mu - &TruncatedSeries::one(order)),
    );
    for k in 1..order {
        let lhs = ck_series(k, &v, order)?;
        let rhs = &(&nu * &ck_series(k + 1, &v, order)?) + &mu.shift(k).scale(&v.big_r(k));
        series_rows(&mut rows, &format!("partial-series[k={k}]"), &lhs, &rhs);
    }
    Ok(rows)
}

fn first_last_series(spec: &TheoremCheckSpec) -> Rows {
    let order = spec.max_n;
    if order < 2 {
        return Err(domain("order must be at least 2"));
    }
    let v = single_variable(spec, order)?;
    let mu = phi_moment_series(&v, order)?;
    let nu = psi_moment_series(&v, order)?;
    let par = cparallel_series(&v, order)?;
    let mut rows = Vec::new();
    let rhs = &(&mu * &par) + &mu.shift(1).scale(&v.big_r(1));
    series_rows(&mut rows, "first-last-series", &(&mu - &TruncatedSeries::one(order)), &rhs);
    series_rows(&mut rows, "pair-vs-first-last", &(&nu * &ck_series(2, &v, order)?), &(&mu * &par));
    Ok(rows)
}

fn partial_recursion(spec: &TheoremCheckSpec) -> Rows {
    let order = spec.max_n;
    let v = single_variable(spec, order)?;
    let phi = phi_moments(&v, order)?;
    let psi = psi_moments(&v, order)?;
    let direct = PowerPartials::compute(&v, order)?;
    // rec[m][k] = φ_k(X^m), filled for decreasing k.
    let mut rec = vec![vec![Rational::zero(); order + 2]; order + 1];
    let mut rows = Vec::new();
    for m in 1..=order {
        for k in (1..=m).rev() {
            let n = m - k;
            let mut value = v.big_r(k) * &phi[n];
            for j in 1..=n {
                value += &psi[j - 1] * &rec[n + k - j + 1][k + 1];
            }
            rec[m][k] = value;
        }
    }
    for k in 1..=order {
        for n in 0..=order - k {
            rows.push(CheckRow::new(
                format!("partial-recursion[k={k}]"),
                n,
                rec[n + k][k].clone(),
                direct.partial[n + k][k].clone(),
            ));
        }
    }
    Ok(rows)
}

fn first_last_recursion(spec: &TheoremCheckSpec) -> Rows {
    let order = spec.max_n;
    let v = single_variable(spec, order)?;
    let phi = phi_moments(&v, order)?;
    let direct = PowerPartials::compute(&v, order)?;
    Ok((1..=order)
        .map(|n| {
            let mut rhs = v.big_r(1) * &phi[n - 1];
            for j in 2..=n {
                rhs += &direct.parallel[j] * &phi[n - j];
            }
            CheckRow::new("first-last-recursion", n, phi[n].clone(), rhs)
        })
        .collect())
}

fn powers(spec: &TheoremCheckSpec) -> Rows {
    let (a, b, t) = (spec.param("a")?, spec.param("b")?, spec.param("t")?);
    check_b(&b)?;
    if t.is_negative() {
        return Err(domain(format!("t must be non-negative, got {t}")));
    }
    let order = spec.max_n;
    let levels = order.div_ceil(2);
    let zero = Rational::zero();
    let normal = two_state_normal(a.clone(), b.clone(), order)?;
    let power = cfree_power(&normal, &t)?;
    let mu_t = JacobiParams::with_tail(&[&a * &t], &[&b * &t], &zero, &t, levels);
    let nu_t = JacobiParams::with_tail(&[], &[], &zero, &t, levels);
    let mut rows = Vec::new();
    for (label, got, want) in [("power-mu", power.mu(), &mu_t), ("power-nu", power.nu(), &nu_t)] {
        for i in 0..levels {
            rows.push(CheckRow::new(format!("{label}-alpha"), i, got.alpha(i), want.alpha(i)));
            rows.push(CheckRow::new(format!("{label}-beta"), i, got.beta(i), want.beta(i)));
        }
    }
    let m_mu = moments_from_jacobi(&mu_t, order)?;
    let m_nu = moments_from_jacobi(&nu_t, order)?;
    for n in 0..=order {
        rows.push(CheckRow::new("power-mu-moments", n, power.phi_moments()[n].clone(), m_mu[n].clone()));
        rows.push(CheckRow::new("power-nu-moments", n, power.psi_moments()[n].clone(), m_nu[n].clone()));
    }

    let alpha = spec.param_or("alpha", Rational::new(1, 2));
    if !alpha.is_positive() || alpha >= Rational::one() {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let beta = Rational::one() - &alpha;
    let x = normal_power_law(&a, &b, &alpha, order)?;
    let y = normal_power_law(&a, &b, &beta, order)?;
    let sum = cfree_convolve(&x, &y)?;
    for n in 0..=order {
        rows.push(CheckRow::new(
            "fragments-mu-moments",
            n,
            sum.phi_moments()[n].clone(),
            normal.phi_moments()[n].clone(),
        ));
        rows.push(CheckRow::new(
            "fragments-nu-moments",
            n,
            sum.psi_moments()[n].clone(),
            normal.psi_moments()[n].clone(),
        ));
    }

    if let Some(gamma) = spec.params.get("gamma") {
        let scaled = moments_from_jacobi(&scale_jacobi(normal.mu(), gamma), order)?;
        for n in 0..=order {
            rows.push(CheckRow::new(
                "scaling-moments",
                n,
                scaled[n].clone(),
                gamma.pow(n as u32) * &normal.phi_moments()[n],
            ));
        }
    }
    Ok(rows)
}
