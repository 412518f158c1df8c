//! Moments by recursion on the block of the first letter.
//!
//! For a word `L_1 ... L_n`, fix the block `{i = s_1 < ... < s_m}` holding the
//! first letter of an interval. The letters strictly between consecutive
//! `s_t` form gaps; every block inside a gap is inner, so each gap contributes
//! its ψ moment. Everything after `s_m` is an independent subword of the same
//! kind (ψ for ψ, φ for φ). Because mixed cumulants of distinct variables
//! vanish, a block's cumulant is `Σ_v κ^v_m Π_t c^v_{s_t}`, which lets the sum
//! over blocks be carried per variable as a chain recursion.
//!
//! Tables are filled for every interval `[i, j)`, so all prefixes of a word
//! come out of one pass.

use crate::rational::Rational;

use super::{CumulantError, CumulantTable, Functional, VariableSpec, Word};

/// ψ and φ of every subword `[i, j)` of a word.
pub struct IntervalMoments {
    n: usize,
    coeff: Vec<Vec<Rational>>,
    // kappa[v][m]; index 0 unused.
    free: Vec<Vec<Rational>>,
    two_state: Vec<Vec<Rational>>,
    psi: Vec<Vec<Rational>>,
    phi: Vec<Vec<Rational>>,
}

// chain[v][s][m]: sum over blocks starting at the chain origin, ending at s with
// m elements, of the coefficient product times the ψ moments of the gaps.
type Chains = Vec<Vec<Vec<Rational>>>;

impl IntervalMoments {
    pub fn new(w: &Word, t: &CumulantTable) -> Result<Self, CumulantError> {
        let coeff = t.coefficient_matrix(w)?;
        let n = w.len();
        let kappas = |f: fn(&VariableSpec, usize) -> Rational| {
            t.variables()
                .iter()
                .map(|v| (0..=n).map(|m| f(v, m)).collect())
                .collect()
        };
        let mut table = IntervalMoments {
            n,
            coeff,
            free: kappas(VariableSpec::r),
            two_state: kappas(VariableSpec::big_r),
            psi: vec![Vec::new(); n + 1],
            phi: vec![Vec::new(); n + 1],
        };
        table.fill();
        Ok(table)
    }

    fn fill(&mut self) {
        let n = self.n;
        for i in (0..=n).rev() {
            // psi[i][j - i] and phi[i][j - i] for j in i..=n.
            let mut psi_row = vec![Rational::one()];
            let mut phi_row = vec![Rational::one()];
            if i < n {
                let chains = self.chains(i, 1, n);
                for j in i + 1..=n {
                    let mut psi_ij = Rational::zero();
                    let mut phi_ij = Rational::zero();
                    for (v, chain) in chains.iter().enumerate() {
                        for (s, by_len) in chain.iter().enumerate().take(j).skip(i) {
                            let psi_tail = &self.psi[s + 1][j - s - 1];
                            let phi_tail = &self.phi[s + 1][j - s - 1];
                            for (m, c) in by_len.iter().enumerate() {
                                if c.is_zero() {
                                    continue;
                                }
                                if !self.free[v][m].is_zero() && !psi_tail.is_zero() {
                                    psi_ij += c * &self.free[v][m] * psi_tail;
                                }
                                if !self.two_state[v][m].is_zero() && !phi_tail.is_zero() {
                                    phi_ij += c * &self.two_state[v][m] * phi_tail;
                                }
                            }
                        }
                    }
                    psi_row.push(psi_ij);
                    phi_row.push(phi_ij);
                }
            }
            self.psi[i] = psi_row;
            self.phi[i] = phi_row;
        }
    }

    /// Chains from `origin` whose first `prefix` elements are the consecutive
    /// positions `origin..origin + prefix`, restricted to positions `< limit`.
    fn chains(&self, origin: usize, prefix: usize, limit: usize) -> Chains {
        let vars = self.free.len();
        let mut chains: Chains = vec![vec![vec![Rational::zero(); limit + 1]; limit]; vars];
        let first_end = origin + prefix - 1;
        if first_end >= limit {
            return chains;
        }
        for (v, chain) in chains.iter_mut().enumerate() {
            let head: Rational = (origin..=first_end).map(|p| &self.coeff[p][v]).product();
            chain[first_end][prefix] = head;
            for next in first_end + 1..limit {
                let c_next = &self.coeff[next][v];
                if c_next.is_zero() {
                    continue;
                }
                for s in first_end..next {
                    let gap = &self.psi[s + 1][next - s - 1];
                    if gap.is_zero() {
                        continue;
                    }
                    for m in prefix..=s - origin + 1 {
                        if chain[s][m].is_zero() {
                            continue;
                        }
                        let add = &chain[s][m] * gap * c_next;
                        chain[next][m + 1] += add;
                    }
                }
            }
        }
        chains
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// ψ of the subword `[i, j)`.
    pub fn psi(&self, i: usize, j: usize) -> &Rational {
        &self.psi[i][j - i]
    }

    /// φ of the subword `[i, j)`.
    pub fn phi(&self, i: usize, j: usize) -> &Rational {
        &self.phi[i][j - i]
    }

    /// `φ_k` of the prefix `[0, j)`.
    pub fn partial_k(&self, k: usize, j: usize) -> Rational {
        assert!(k >= 1 && k <= j && j <= self.n);
        let chains = self.chains(0, k, j);
        let mut total = Rational::zero();
        for (v, chain) in chains.iter().enumerate() {
            for (s, by_len) in chain.iter().enumerate().take(j).skip(k - 1) {
                let tail = self.phi(s + 1, j);
                if tail.is_zero() {
                    continue;
                }
                for (m, c) in by_len.iter().enumerate() {
                    if !c.is_zero() {
                        total += c * &self.two_state[v][m] * tail;
                    }
                }
            }
        }
        total
    }

    /// `φ_∥` of the prefix `[0, j)`.
    pub fn parallel(&self, j: usize) -> Rational {
        assert!(j >= 2 && j <= self.n);
        let chains = self.chains(0, 1, j);
        let mut total = Rational::zero();
        for (v, chain) in chains.iter().enumerate() {
            for (m, c) in chain[j - 1].iter().enumerate() {
                if !c.is_zero() {
                    total += c * &self.two_state[v][m];
                }
            }
        }
        total
    }
}

pub fn moment(w: &Word, t: &CumulantTable, f: Functional) -> Result<Rational, CumulantError> {
    t.check_functional(w, f)?;
    let table = IntervalMoments::new(w, t)?;
    let n = w.len();
    Ok(match f {
        Functional::Psi => table.psi(0, n).clone(),
        Functional::Phi => table.phi(0, n).clone(),
        Functional::PhiK(k) => table.partial_k(k, n),
        Functional::PhiParallel => table.parallel(n),
    })
}

/// The functional on `X^0..=X^order`.
pub fn power_moments(
    v: &VariableSpec,
    order: usize,
    f: Functional,
) -> Result<Vec<Rational>, CumulantError> {
    let t = CumulantTable::single(v.clone());
    let w = Word::power(&super::Letter::var(v.name.clone()), order);
    let table = IntervalMoments::new(&w, &t)?;
    Ok((0..=order)
        .map(|j| match f {
            Functional::Psi => table.psi(0, j).clone(),
            Functional::Phi => table.phi(0, j).clone(),
            Functional::PhiK(k) => {
                if k >= 1 && k <= j {
                    table.partial_k(k, j)
                } else {
                    Rational::zero()
                }
            }
            Functional::PhiParallel => {
                if j >= 2 {
                    table.parallel(j)
                } else {
                    Rational::zero()
                }
            }
        })
        .collect())
}
