//! Integer partitions: the index set for every symmetric-function basis.
//!
//! Partitions of the same weight are ordered reverse-lexicographically
//! (`[4] > [3,1] > [2,2] > [2,1,1] > [1,1,1,1]`); across weights, lower
//! weight sorts first. [`partitions_of`] enumerates in exactly that order,
//! and the `Ord` impl agrees with it, so a `BTreeMap<Partition, _>` iterates
//! deterministically in listing order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::{Error, Result};

/// A weakly decreasing sequence of positive integers. The empty partition
/// (weight 0) is allowed; it indexes constant terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition, rejecting zero parts and non-decreasing order.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not weakly decreasing in {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts the given parts into a partition, dropping nothing.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn single(part: u32) -> Result<Self> {
        Partition::new(vec![part])
    }

    /// `[1, 1, ..., 1]` with `n` parts.
    pub fn ones(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Multiplicity of `k` as a part.
    pub fn multiplicity(&self, k: u32) -> u32 {
        self.0.iter().filter(|&&p| p == k).count() as u32
    }

    /// Concatenation (disjoint union of parts), re-sorted. This is the index
    /// arithmetic behind multiplying power-sum monomials.
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Removes one occurrence of `part`, if present.
    pub fn remove_one(&self, part: u32) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == part)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Partition(parts))
    }

    /// Conjugate (transposed Young diagram).
    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let cols = self.0[0];
        let parts = (1..=cols)
            .map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32)
            .collect();
        Partition(parts)
    }

    /// Order of the centralizer of a permutation of cycle type `self` in
    /// `S_n`: `z = prod_k k^{m_k} m_k!`. The class size is `n!/z`.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut k = 0u32;
        let mut mult = 0u32;
        for &p in self.0.iter().rev() {
            if p == k {
                mult += 1;
            } else {
                k = p;
                mult = 1;
            }
            z *= BigInt::from(k) * BigInt::from(mult);
        }
        z
    }

    /// Sign of a permutation with this cycle type: `(-1)^(weight - length)`.
    pub fn sign(&self) -> i64 {
        if (self.weight() as usize - self.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        // Weight ascending, then reverse-lexicographic: [4] before [3,1].
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    /// Exponent form used in Schur subscripts: `(2,2,1,1)` prints as
    /// `2^21^2`, `(4)` as `4`. Parts above 9 are comma-separated to stay
    /// unambiguous.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        if self.0[0] > 9 {
            let strs: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
            return write!(f, "{}", strs.join(","));
        }
        let mut i = 0;
        while i < self.0.len() {
            let part = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == part {
                run += 1;
            }
            if run == 1 {
                write!(f, "{part}")?;
            } else {
                write!(f, "{part}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// All partitions of `n` in reverse-lexicographic order, largest part first.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(n, n, &mut current, &mut out);
    out
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    let top = remaining.min(max_part);
    for part in (1..=top).rev() {
        current.push(part);
        descend(remaining - part, part, current, out);
        current.pop();
    }
}
