//! Non-crossing partitions and their inner/outer block structure.
//!
//! Elements are 1-based. A [`SetPartition`] is always kept in canonical form:
//! every block sorted ascending and blocks ordered by their minimum. Partitions
//! are generated by the "block of the first element" decomposition: once the
//! block containing the smallest free element is fixed, the gaps between its
//! consecutive elements and the region after its last element are filled
//! independently. Blocks placed inside a gap are inner; blocks in the tail
//! inherit the status of the enclosing region.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest ground set `enumerate_nc` accepts unless told otherwise.
/// `C_14 = 2_674_440`.
pub const DEFAULT_MAX_N: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NcError {
    #[error("invalid partition of {{1..{n}}}: {reason}")]
    Invalid { n: usize, reason: String },
    #[error("partition is crossing")]
    Crossing,
    #[error("n = {n} exceeds the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },
}

/// A partition of `{1..n}` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and canonicalizes `blocks` as a partition of `{1..n}`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, NcError> {
        let invalid = |reason: String| NcError::Invalid { n, reason };
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(invalid("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > n {
                    return Err(invalid(format!("element {x} out of range")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(invalid(format!("element {x} appears twice")));
                }
            }
        }
        if let Some(missing) = (1..=n).find(|&x| !seen[x]) {
            return Err(invalid(format!("element {missing} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Outer,
    Inner,
}

/// A non-crossing partition together with the inner/outer label of each block.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NCPartition {
    partition: SetPartition,
    labels: Vec<BlockKind>,
}

impl NCPartition {
    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        self.partition.blocks()
    }

    pub fn labels(&self) -> &[BlockKind] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.partition.n
    }

    pub fn outer_blocks(&self) -> impl Iterator<Item = &[usize]> {
        self.blocks_of_kind(BlockKind::Outer)
    }

    pub fn inner_blocks(&self) -> impl Iterator<Item = &[usize]> {
        self.blocks_of_kind(BlockKind::Inner)
    }

    fn blocks_of_kind(&self, kind: BlockKind) -> impl Iterator<Item = &[usize]> {
        self.partition
            .blocks
            .iter()
            .zip(&self.labels)
            .filter(move |(_, &k)| k == kind)
            .map(|(b, _)| b.as_slice())
    }
}

#[derive(Serialize, Deserialize)]
struct NcRepr {
    blocks: Vec<Vec<usize>>,
    labels: Vec<BlockKind>,
}

impl Serialize for NCPartition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NcRepr {
            blocks: self.partition.blocks.clone(),
            labels: self.labels.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NCPartition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = NcRepr::deserialize(deserializer)?;
        let n = repr.blocks.iter().map(Vec::len).sum();
        let partition = SetPartition::new(n, repr.blocks).map_err(D::Error::custom)?;
        let nc = classify_blocks(&partition).map_err(D::Error::custom)?;
        if nc.labels != repr.labels {
            return Err(D::Error::custom("block labels disagree with the partition"));
        }
        Ok(nc)
    }
}

/// True iff no `a < b < c < d` has `a, c` in one block and `b, d` in another.
pub fn is_noncrossing(p: &SetPartition) -> bool {
    let owner = owners(p);
    // Two blocks cross iff some pair of consecutive elements of one block
    // separates two elements of the other.
    for block in &p.blocks {
        for w in block.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let me = owner[lo];
            for x in lo + 1..hi {
                let other = owner[x];
                if other == me {
                    continue;
                }
                let escapes = p.blocks[other]
                    .iter()
                    .any(|&y| y < lo || y > hi);
                if escapes {
                    return false;
                }
            }
        }
    }
    true
}

fn owners(p: &SetPartition) -> Vec<usize> {
    let mut owner = vec![usize::MAX; p.n + 1];
    for (i, block) in p.blocks.iter().enumerate() {
        for &x in block {
            owner[x] = i;
        }
    }
    owner
}

/// Labels every block of a non-crossing partition as inner or outer.
///
/// A block is inner when two elements `a < b` of one other block bracket it:
/// `a < x < b` for every `x` in the block.
pub fn classify_blocks(p: &SetPartition) -> Result<NCPartition, NcError> {
    if !is_noncrossing(p) {
        return Err(NcError::Crossing);
    }
    let labels = p
        .blocks
        .iter()
        .enumerate()
        .map(|(i, block)| {
            let (lo, hi) = (block[0], *block.last().unwrap());
            let bracketed = p.blocks.iter().enumerate().any(|(j, other)| {
                j != i && other.iter().any(|&a| a < lo) && other.iter().any(|&b| b > hi)
            });
            if bracketed {
                BlockKind::Inner
            } else {
                BlockKind::Outer
            }
        })
        .collect();
    Ok(NCPartition {
        partition: p.clone(),
        labels,
    })
}

/// All non-crossing partitions of `{1..n}` in lexicographic order of their
/// canonical block lists, rejecting `n > DEFAULT_MAX_N`.
pub fn enumerate_nc(n: usize) -> Result<Vec<NCPartition>, NcError> {
    enumerate_nc_with_limit(n, DEFAULT_MAX_N)
}

pub fn enumerate_nc_with_limit(n: usize, max: usize) -> Result<Vec<NCPartition>, NcError> {
    let mut out = Vec::new();
    for_each_nc_with_limit(n, max, |view| out.push(view.to_partition()))?;
    Ok(out)
}

/// Number of non-crossing partitions of `{1..n}`, by enumeration.
pub fn count_nc(n: usize, max: usize) -> Result<u64, NcError> {
    let mut count = 0u64;
    for_each_nc_with_limit(n, max, |_| count += 1)?;
    Ok(count)
}

/// A borrowed view of one partition during streaming enumeration.
pub struct NcView<'a> {
    n: usize,
    blocks: &'a [Vec<usize>],
    inner: &'a [bool],
}

impl<'a> NcView<'a> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Blocks in canonical order, 1-based elements.
    pub fn blocks(&self) -> &'a [Vec<usize>] {
        self.blocks
    }

    pub fn is_inner(&self, block: usize) -> bool {
        self.inner[block]
    }

    pub fn kind(&self, block: usize) -> BlockKind {
        if self.inner[block] {
            BlockKind::Inner
        } else {
            BlockKind::Outer
        }
    }

    pub fn to_partition(&self) -> NCPartition {
        NCPartition {
            partition: SetPartition {
                n: self.n,
                blocks: self.blocks.to_vec(),
            },
            labels: (0..self.blocks.len()).map(|i| self.kind(i)).collect(),
        }
    }
}

/// Streams every non-crossing partition of `{1..n}` to `visit`, in the same
/// order as [`enumerate_nc`], without materializing the list.
pub fn for_each_nc<F: FnMut(&NcView<'_>)>(n: usize, visit: F) -> Result<(), NcError> {
    for_each_nc_with_limit(n, DEFAULT_MAX_N, visit)
}

pub fn for_each_nc_with_limit<F: FnMut(&NcView<'_>)>(
    n: usize,
    max: usize,
    mut visit: F,
) -> Result<(), NcError> {
    if n > max {
        return Err(NcError::TooLarge { n, max });
    }
    let mut gen = Generator {
        n,
        blocks: Vec::new(),
        inner: Vec::new(),
        pending: vec![Region {
            lo: 1,
            hi: n + 1,
            inner: false,
        }],
    };
    gen.fill(&mut visit);
    Ok(())
}

/// Half-open interval `[lo, hi)` of positions still to be partitioned.
#[derive(Clone, Copy)]
struct Region {
    lo: usize,
    hi: usize,
    inner: bool,
}

struct Generator {
    n: usize,
    blocks: Vec<Vec<usize>>,
    inner: Vec<bool>,
    // Stack; the top is the region holding the smallest unassigned element.
    pending: Vec<Region>,
}

impl Generator {
    fn fill<F: FnMut(&NcView<'_>)>(&mut self, visit: &mut F) {
        match self.pending.pop() {
            None => visit(&NcView {
                n: self.n,
                blocks: &self.blocks,
                inner: &self.inner,
            }),
            Some(region) => {
                if region.lo == region.hi {
                    self.fill(visit);
                } else {
                    let mut block = vec![region.lo];
                    self.extend(region, &mut block, visit);
                }
                self.pending.push(region);
            }
        }
    }

    fn extend<F: FnMut(&NcView<'_>)>(
        &mut self,
        region: Region,
        block: &mut Vec<usize>,
        visit: &mut F,
    ) {
        let last = *block.last().unwrap();
        let mark = self.pending.len();
        self.pending.push(Region {
            lo: last + 1,
            hi: region.hi,
            inner: region.inner,
        });
        for w in block.windows(2).rev() {
            self.pending.push(Region {
                lo: w[0] + 1,
                hi: w[1],
                inner: true,
            });
        }
        self.blocks.push(block.clone());
        self.inner.push(region.inner);
        self.fill(visit);
        self.blocks.pop();
        self.inner.pop();
        self.pending.truncate(mark);

        for next in last + 1..region.hi {
            block.push(next);
            self.extend(region, block, visit);
            block.pop();
        }
    }
}

/// Catalan numbers by the convolution recurrence `C_{n+1} = Σ C_i C_{n-i}`.
pub fn catalan_numbers(up_to: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for m in 0..up_to {
        let next = (0..=m).map(|i| c[i] * c[m - i]).sum();
        c.push(next);
    }
    c
}
