//! Moments by explicit enumeration of non-crossing partitions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::ncpart::{for_each_nc, NcError};
use crate::rational::Rational;
use crate::series::TruncatedSeries;

use super::{CumulantError, CumulantTable, Functional, VariableSpec, Word};

/// Sums the weights of all partitions of `NC(|w|)` admitted by `f`.
pub fn moment(w: &Word, t: &CumulantTable, f: Functional) -> Result<Rational, CumulantError> {
    t.check_functional(w, f)?;
    let coeff = t.coefficient_matrix(w)?;
    let n = w.len();
    let vars = t.variables();
    let mut total = Rational::zero();
    for_each_nc(n, |p| {
        let blocks = p.blocks();
        let admitted = match f {
            Functional::Psi | Functional::Phi => true,
            Functional::PhiK(k) => blocks[0].len() >= k && blocks[0][k - 1] == k,
            Functional::PhiParallel => *blocks[0].last().unwrap() == n,
        };
        if !admitted {
            return;
        }
        let mut weight = Rational::one();
        for (i, block) in blocks.iter().enumerate() {
            let use_free = f == Functional::Psi || p.is_inner(i);
            let mut value = Rational::zero();
            for (vi, v) in vars.iter().enumerate() {
                let kappa = if use_free {
                    v.r(block.len())
                } else {
                    v.big_r(block.len())
                };
                if kappa.is_zero() {
                    continue;
                }
                let mut term = kappa;
                for &pos in block {
                    term *= &coeff[pos - 1][vi];
                }
                value += term;
            }
            if value.is_zero() {
                return;
            }
            weight *= value;
        }
        total += weight;
    })?;
    Ok(total)
}

/// Partitions of `NC(n)` grouped by the sizes of their outer and inner blocks.
///
/// For a single variable the weight of a partition only depends on these
/// sizes, so one enumeration per `n` serves every cumulant sequence.
#[derive(Debug)]
pub struct Census {
    pub n: usize,
    pub entries: Vec<CensusEntry>,
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    /// Sorted outer block sizes.
    pub outer: Vec<u8>,
    /// Sorted inner block sizes.
    pub inner: Vec<u8>,
    pub total: u64,
    /// `run_at_least[k - 1]`: partitions whose first `k` positions share a block.
    pub run_at_least: Vec<u64>,
    /// Partitions whose first and last positions share a block.
    pub first_last: u64,
}

type CensusCache = Mutex<HashMap<usize, Arc<Census>>>;

fn cache() -> &'static CensusCache {
    static CACHE: OnceLock<CensusCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The census of `NC(n)`, computed once per process.
pub fn census(n: usize) -> Result<Arc<Census>, NcError> {
    if let Some(c) = cache().lock().unwrap().get(&n) {
        return Ok(Arc::clone(c));
    }
    // Built outside the lock; a concurrent duplicate build yields the same value.
    let built = Arc::new(build_census(n)?);
    let mut guard = cache().lock().unwrap();
    Ok(Arc::clone(guard.entry(n).or_insert(built)))
}

fn build_census(n: usize) -> Result<Census, NcError> {
    #[derive(Default)]
    struct Acc {
        total: u64,
        by_run: Vec<u64>,
        first_last: u64,
    }
    let mut groups: HashMap<(Vec<u8>, Vec<u8>), Acc> = HashMap::new();
    for_each_nc(n, |p| {
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for (i, block) in p.blocks().iter().enumerate() {
            if p.is_inner(i) {
                inner.push(block.len() as u8);
            } else {
                outer.push(block.len() as u8);
            }
        }
        outer.sort_unstable();
        inner.sort_unstable();
        let acc = groups.entry((outer, inner)).or_default();
        acc.total += 1;
        if n == 0 {
            return;
        }
        let first = &p.blocks()[0];
        let run = first
            .iter()
            .enumerate()
            .take_while(|&(i, &x)| x == i + 1)
            .count();
        if acc.by_run.len() < n + 1 {
            acc.by_run.resize(n + 1, 0);
        }
        acc.by_run[run] += 1;
        if *first.last().unwrap() == n {
            acc.first_last += 1;
        }
    })?;
    let mut entries: Vec<CensusEntry> = groups
        .into_iter()
        .map(|((outer, inner), acc)| {
            let mut run_at_least = vec![0u64; n];
            let mut running = 0u64;
            for k in (1..=n).rev() {
                running += acc.by_run.get(k).copied().unwrap_or(0);
                run_at_least[k - 1] = running;
            }
            CensusEntry {
                outer,
                inner,
                total: acc.total,
                run_at_least,
                first_last: acc.first_last,
            }
        })
        .collect();
    entries.sort_by(|a, b| (&a.outer, &a.inner).cmp(&(&b.outer, &b.inner)));
    Ok(Census { n, entries })
}

/// Every single-variable functional of `X^0..=X^order`, from the census.
#[derive(Debug, Clone)]
pub struct PowerPartials {
    pub order: usize,
    pub phi: Vec<Rational>,
    pub psi: Vec<Rational>,
    /// `partial[n][k] = φ_k(X^n)` for `1 <= k <= n`; index 0 unused.
    pub partial: Vec<Vec<Rational>>,
    /// `parallel[n] = φ_∥(X^n)`, zero for `n < 2`.
    pub parallel: Vec<Rational>,
}

impl PowerPartials {
    pub fn compute(v: &VariableSpec, order: usize) -> Result<Self, CumulantError> {
        if v.order() < order {
            return Err(CumulantError::WordTooLong {
                len: order,
                max: v.order(),
            });
        }
        let mut phi = Vec::with_capacity(order + 1);
        let mut psi = Vec::with_capacity(order + 1);
        let mut partial = Vec::with_capacity(order + 1);
        let mut parallel = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let c = census(n)?;
            let mut phi_n = Rational::zero();
            let mut psi_n = Rational::zero();
            let mut partial_n = vec![Rational::zero(); n + 1];
            let mut parallel_n = Rational::zero();
            for e in &c.entries {
                let inner_w: Rational = e.inner.iter().map(|&s| v.r(s as usize)).product();
                let psi_w: Rational =
                    &inner_w * &e.outer.iter().map(|&s| v.r(s as usize)).product::<Rational>();
                psi_n += psi_w * Rational::from(e.total as i64);
                let w: Rational =
                    inner_w * e.outer.iter().map(|&s| v.big_r(s as usize)).product::<Rational>();
                if w.is_zero() {
                    continue;
                }
                phi_n += &w * &Rational::from(e.total as i64);
                for k in 1..=n {
                    let cnt = e.run_at_least[k - 1];
                    if cnt > 0 {
                        partial_n[k] += &w * &Rational::from(cnt as i64);
                    }
                }
                if n >= 2 && e.first_last > 0 {
                    parallel_n += &w * &Rational::from(e.first_last as i64);
                }
            }
            phi.push(phi_n);
            psi.push(psi_n);
            partial.push(partial_n);
            parallel.push(parallel_n);
        }
        Ok(PowerPartials {
            order,
            phi,
            psi,
            partial,
            parallel,
        })
    }

    /// `Σ_{j >= k} φ_k(X^j) z^j`.
    pub fn ck_series(&self, k: usize) -> TruncatedSeries {
        let coeffs: Vec<Rational> = (0..=self.order)
            .map(|j| {
                if j >= k && k >= 1 {
                    self.partial[j][k].clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        TruncatedSeries::from_slice(&coeffs, self.order)
    }

    /// `Σ_{j >= 2} φ_∥(X^j) z^j`.
    pub fn parallel_series(&self) -> TruncatedSeries {
        TruncatedSeries::from_slice(&self.parallel, self.order)
    }
}
