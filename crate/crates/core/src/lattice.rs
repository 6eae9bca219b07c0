//! Multi-indices, boxes, and the two orders that organize them.
//!
//! A multi-index is a vector of nonnegative integers (i_1, ..., i_l);
//! its rank is l and its weight is i_1 + ... + i_l. Two orders matter:
//!
//! * componentwise: j <= i when j_k <= i_k for every k — the support
//!   order of the triangular transform matrices and the summation range
//!   of every box sum;
//! * lexicographic, leftmost component most significant — a linear
//!   extension of the componentwise order, used for enumeration and
//!   serialization so that triangular data prints triangularly.
//!
//! A box is the set of all multi-indices between zero and an upper
//! corner N; it has prod_k (N_k + 1) points and enumerates in strictly
//! increasing lexicographic order.
//!
//! # Edge cases
//! * rank 0 is rejected at construction — every index has at least one
//!   component;
//! * mixing ranks is a `RankMismatch` error, never a silent truncation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::Result;

// ---------------------------------------------------------------------------
// MultiIndex
// ---------------------------------------------------------------------------

/// Vector of nonnegative integers; row/column label of the transform
/// matrices and argument of every sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    /// Validates rank >= 1 and componentwise nonnegativity.
    pub fn new(components: Vec<i64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::DomainError {
                detail: "multi-index must have rank >= 1".into(),
            });
        }
        if let Some(c) = components.iter().find(|&&c| c < 0) {
            return Err(Error::DomainError {
                detail: format!("multi-index component {c} is negative"),
            });
        }
        Ok(MultiIndex(components))
    }

    /// Internal constructor for values already known valid.
    pub(crate) fn new_unchecked(components: Vec<i64>) -> Self {
        debug_assert!(!components.is_empty() && components.iter().all(|&c| c >= 0));
        MultiIndex(components)
    }

    /// The zero index of the given rank.
    pub fn zeros(rank: usize) -> Result<Self> {
        MultiIndex::new(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Sum of components.
    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Component k (zero-based). Panics on out-of-range k, which is a
    /// programming error, not an input error.
    pub fn get(&self, k: usize) -> i64 {
        self.0[k]
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn check_rank(&self, other: &MultiIndex) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        Ok(())
    }

    /// Componentwise comparison: self <= other in every coordinate.
    pub fn leq(&self, other: &MultiIndex) -> Result<bool> {
        self.check_rank(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// Lexicographic comparison, leftmost component most significant.
    pub fn lex_cmp(&self, other: &MultiIndex) -> Result<Ordering> {
        self.check_rank(other)?;
        Ok(self.0.cmp(&other.0))
    }
}

/// `j <= i` componentwise; errors on unequal ranks.
pub fn leq_componentwise(j: &MultiIndex, i: &MultiIndex) -> Result<bool> {
    j.leq(i)
}

impl fmt::Display for MultiIndex {
    /// Comma-separated components, e.g. "2,0,1".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for part in s.split(',') {
            let ok = !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit());
            if !ok {
                return Err(Error::Parse {
                    detail: format!(
                        "malformed multi-index {s:?} (expected comma-separated nonnegative integers)"
                    ),
                });
            }
            let c: i64 = part.parse().map_err(|_| Error::Parse {
                detail: format!("multi-index component {part:?} out of range"),
            })?;
            components.push(c);
        }
        MultiIndex::new(components)
    }
}

// ---------------------------------------------------------------------------
// IndexBox
// ---------------------------------------------------------------------------

/// All multi-indices y with 0 <= y <= upper componentwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexBox {
    upper: MultiIndex,
}

impl IndexBox {
    pub fn new(upper: MultiIndex) -> Self {
        IndexBox { upper }
    }

    pub fn upper(&self) -> &MultiIndex {
        &self.upper
    }

    pub fn rank(&self) -> usize {
        self.upper.rank()
    }

    /// Number of lattice points, prod_k (N_k + 1).
    pub fn card(&self) -> usize {
        self.upper
            .components()
            .iter()
            .map(|&c| (c + 1) as usize)
            .product()
    }

    pub fn contains(&self, idx: &MultiIndex) -> bool {
        idx.rank() == self.rank() && idx.leq(&self.upper).unwrap_or(false)
    }

    /// Position of idx in the lexicographic enumeration (mixed-radix,
    /// leftmost digit most significant), or None if outside the box.
    pub fn position(&self, idx: &MultiIndex) -> Option<usize> {
        if !self.contains(idx) {
            return None;
        }
        let mut pos = 0usize;
        for (c, n) in idx.components().iter().zip(self.upper.components()) {
            pos = pos * ((n + 1) as usize) + *c as usize;
        }
        Some(pos)
    }

    /// Lexicographically increasing enumeration of the whole box.
    pub fn iter(&self) -> BoxIter {
        box_enumerate(&self.upper)
    }

    /// Whether `inner` fits inside this box (componentwise corner order).
    pub fn encloses(&self, inner: &IndexBox) -> bool {
        inner.upper.leq(&self.upper).unwrap_or(false)
    }
}

impl fmt::Display for IndexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.upper)
    }
}

/// Enumerates 0 <= y <= upper in strictly increasing lexicographic order.
pub fn box_enumerate(upper: &MultiIndex) -> BoxIter {
    let lo = vec![0; upper.rank()];
    BoxIter::new(lo, upper.components().to_vec())
}

/// Enumerates lo <= y <= hi componentwise, lexicographically; empty when
/// some coordinate has lo_k > hi_k. Errors on unequal ranks.
pub fn box_range(lo: &MultiIndex, hi: &MultiIndex) -> Result<BoxIter> {
    if lo.rank() != hi.rank() {
        return Err(Error::RankMismatch {
            left: lo.rank(),
            right: hi.rank(),
        });
    }
    Ok(BoxIter::new(
        lo.components().to_vec(),
        hi.components().to_vec(),
    ))
}

/// Odometer over a coordinate-aligned range of multi-indices; rightmost
/// coordinate ticks fastest, which is exactly lexicographic order with
/// the leftmost component most significant.
pub struct BoxIter {
    lo: Vec<i64>,
    hi: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl BoxIter {
    fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        let nonempty = lo.iter().zip(&hi).all(|(a, b)| a <= b);
        let next = nonempty.then(|| lo.clone());
        BoxIter { lo, hi, next }
    }
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // increment the odometer from the rightmost digit
        let mut k = succ.len();
        loop {
            if k == 0 {
                break; // rolled over every digit: enumeration finished
            }
            k -= 1;
            if succ[k] < self.hi[k] {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = self.lo[k];
        }
        Some(MultiIndex::new_unchecked(current))
    }
}

// ---------------------------------------------------------------------------
