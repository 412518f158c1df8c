//! Brute-force reference values for the integration tests.
//!
//! Everything here is a direct sum over non-crossing partitions generated in
//! this file, or a path count over Jacobi data. Only `Rational` and the plain
//! data in `VariableSpec` are taken from the library.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use cfree::cumulants::VariableSpec;
use cfree::Rational;
use rand::Rng;

/// A non-crossing partition of `0..n` with the inner flag of each block.
pub struct Nc {
    pub blocks: Vec<Vec<usize>>,
    pub inner: Vec<bool>,
}

fn extend(n: usize, i: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if i == n {
        out.push(blocks.clone());
        return;
    }
    for b in 0..blocks.len() {
        let last = *blocks[b].last().unwrap();
        let crosses = blocks.iter().enumerate().any(|(c, other)| {
            c != b && other.iter().any(|&x| x < last) && other.iter().any(|&y| last < y && y < i)
        });
        if !crosses {
            blocks[b].push(i);
            extend(n, i + 1, blocks, out);
            blocks[b].pop();
        }
    }
    blocks.push(vec![i]);
    extend(n, i + 1, blocks, out);
    blocks.pop();
}

/// All set partitions of `0..n`, crossing or not.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(n: usize, i: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(n, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(n, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

pub fn is_crossing(blocks: &[Vec<usize>]) -> bool {
    for p in blocks {
        for q in blocks {
            for &a in p {
                for &c in p {
                    for &b in q {
                        for &d in q {
                            if !std::ptr::eq(p, q) && a < b && b < c && c < d {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

fn inner_flags(blocks: &[Vec<usize>]) -> Vec<bool> {
    blocks
        .iter()
        .map(|b| {
            let (lo, hi) = (b[0], *b.last().unwrap());
            blocks.iter().any(|c| c[0] < lo && hi < *c.last().unwrap())
        })
        .collect()
}

/// Non-crossing partitions of `0..n`, cached.
pub fn noncrossing(n: usize) -> Arc<Vec<Nc>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Nc>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    let mut raw = Vec::new();
    extend(n, 0, &mut Vec::new(), &mut raw);
    let list: Vec<Nc> = raw
        .into_iter()
        .map(|blocks| Nc {
            inner: inner_flags(&blocks),
            blocks,
        })
        .collect();
    let list = Arc::new(list);
    cache.lock().unwrap().insert(n, list.clone());
    list
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Filter {
    All,
    /// Positions `0..k` share a block.
    FirstK(usize),
    /// The first and last positions share a block.
    FirstLast,
}

impl Filter {
    fn keeps(self, n: usize, nc: &Nc) -> bool {
        let block_of = |x: usize| nc.blocks.iter().position(|b| b.contains(&x));
        match self {
            Filter::All => true,
            Filter::FirstK(k) => k <= n && (0..k).all(|x| block_of(x) == block_of(0)),
            Filter::FirstLast => n >= 1 && block_of(0) == block_of(n - 1),
        }
    }
}

type Shape = (Vec<usize>, Vec<usize>);

/// Counts of the kept partitions of `0..n` by sorted (outer, inner) block sizes.
pub fn census(n: usize, filter: Filter) -> Arc<HashMap<Shape, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Filter), Arc<HashMap<Shape, u64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&(n, filter)) {
        return c.clone();
    }
    let mut counts: HashMap<Shape, u64> = HashMap::new();
    for nc in noncrossing(n).iter().filter(|nc| filter.keeps(n, nc)) {
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for (b, &is_inner) in nc.blocks.iter().zip(&nc.inner) {
            if is_inner { &mut inner } else { &mut outer }.push(b.len());
        }
        outer.sort_unstable();
        inner.sort_unstable();
        *counts.entry((outer, inner)).or_default() += 1;
    }
    let counts = Arc::new(counts);
    cache.lock().unwrap().insert((n, filter), counts.clone());
    counts
}

fn product(seq: &[usize], kappa: impl Fn(usize) -> Rational) -> Rational {
    seq.iter().fold(Rational::one(), |acc, &s| acc * kappa(s))
}

/// `φ(X^n)` restricted by `filter`: outer blocks weigh `R`, inner blocks `r`.
pub fn phi_power(v: &VariableSpec, n: usize, filter: Filter) -> Rational {
    census(n, filter)
        .iter()
        .map(|((outer, inner), &count)| {
            Rational::from_integer(count as i64) * product(outer, |s| v.big_r(s)) * product(inner, |s| v.r(s))
        })
        .sum()
}

/// `ψ(X^n)`: every block weighs `r`.
pub fn psi_power(v: &VariableSpec, n: usize) -> Rational {
    census(n, Filter::All)
        .iter()
        .map(|((outer, inner), &count)| {
            Rational::from_integer(count as i64) * product(outer, |s| v.r(s)) * product(inner, |s| v.r(s))
        })
        .sum()
}

/// A linear combination of the variables, by index.
pub type Letter = Vec<(usize, Rational)>;

fn coefficient(letter: &Letter, var: usize) -> Rational {
    letter
        .iter()
        .filter(|(v, _)| *v == var)
        .map(|(_, c)| c.clone())
        .sum()
}

// c-free block value: mixed cumulants vanish, so only pure terms survive.
fn block_value(word: &[Letter], block: &[usize], vars: &[VariableSpec], two_state: bool) -> Rational {
    (0..vars.len())
        .map(|v| {
            let kappa = if two_state { vars[v].big_r(block.len()) } else { vars[v].r(block.len()) };
            if kappa.is_zero() {
                return Rational::zero();
            }
            block.iter().fold(kappa, |acc, &i| acc * coefficient(&word[i], v))
        })
        .sum()
}

/// `φ` of a word in c-free variables, restricted by `filter`.
pub fn phi_word(word: &[Letter], vars: &[VariableSpec], filter: Filter) -> Rational {
    let n = word.len();
    noncrossing(n)
        .iter()
        .filter(|nc| filter.keeps(n, nc))
        .map(|nc| {
            nc.blocks.iter().zip(&nc.inner).fold(Rational::one(), |acc, (b, &inner)| {
                if acc.is_zero() {
                    acc
                } else {
                    acc * block_value(word, b, vars, !inner)
                }
            })
        })
        .sum()
}

/// `ψ` of a word in c-free variables.
pub fn psi_word(word: &[Letter], vars: &[VariableSpec]) -> Rational {
    noncrossing(word.len())
        .iter()
        .map(|nc| {
            nc.blocks.iter().fold(Rational::one(), |acc, b| {
                if acc.is_zero() {
                    acc
                } else {
                    acc * block_value(word, b, vars, false)
                }
            })
        })
        .sum()
}

/// Moments `m_0..=m_order` of Jacobi data by weighted Motzkin paths; a down
/// step from height `h + 1` weighs `β_h`, a flat step at `h` weighs `α_h`.
pub fn motzkin_moments(alpha: &[Rational], beta: &[Rational], order: usize) -> Vec<Rational> {
    let at = |s: &[Rational], i: usize| s.get(i).cloned().unwrap_or_else(Rational::zero);
    let height = order + 1;
    let mut paths = vec![Rational::zero(); height + 1];
    paths[0] = Rational::one();
    // paths[h]: weight of paths from 0 ending at height h; moments read at h = 0.
    let mut out = vec![Rational::one()];
    for _ in 0..order {
        let mut next = vec![Rational::zero(); height + 1];
        for h in 0..height {
            if paths[h].is_zero() {
                continue;
            }
            next[h] += &paths[h] * &at(alpha, h);
            next[h + 1] += paths[h].clone();
            if h > 0 {
                next[h - 1] += &paths[h] * &at(beta, h - 1);
            }
        }
        paths = next;
        out.push(paths[0].clone());
    }
    out
}

pub fn catalan(n: usize) -> Rational {
    let mut c = Rational::one();
    for i in 0..n {
        c *= Rational::new(2 * (2 * i as i64 + 1), i as i64 + 2);
    }
    c
}

/// A small random rational with numerator in `-6..=6`, denominator in `1..=5`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=5))
}

pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(1..=6), rng.gen_range(1..=5))
}

/// A variable with random cumulants `1..=order`.
pub fn random_variable(rng: &mut impl Rng, name: &str, order: usize) -> VariableSpec {
    VariableSpec::new(
        name,
        (0..order).map(|_| small_rational(rng)).collect(),
        (0..order).map(|_| small_rational(rng)).collect(),
    )
}

/// Truncated power series product, coefficients `0..=order`.
pub fn mul(p: &[Rational], q: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); order + 1];
    for (i, x) in p.iter().enumerate().take(order + 1) {
        for (j, y) in q.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `p(q(z))` for `q(0) = 0`, truncated.
pub fn compose(p: &[Rational], q: &[Rational], order: usize) -> Vec<Rational> {
    assert!(q.first().is_none_or(Rational::is_zero));
    let mut out = vec![Rational::zero(); order + 1];
    for c in p.iter().take(order + 1).rev() {
        out = mul(&out, q, order);
        out[0] += c;
    }
    out
}
