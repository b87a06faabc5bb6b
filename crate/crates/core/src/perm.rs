//! Permutations in one-line notation and the statistics and pattern
//! primitives used throughout the crate.
//!
//! Positions and values are 1-indexed: `σ.value_at(i)` is σ_i for
//! `1 <= i <= n`.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection on `{1..n}` stored in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

/// An occurrence of a pattern: strictly increasing 1-based positions into
/// the host permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub indices: Vec<usize>,
}

impl Permutation {
    /// Validates that `values` is a bijection on `{1..n}`.
    pub fn from_one_line(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::OutOfRange { value: v, n });
            }
            if seen[v] {
                return Err(Error::DuplicateValue(v));
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_one_line(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n).collect(),
        }
    }

    /// `n (n-1) ... 2 1`
    pub fn reversed_identity(n: usize) -> Self {
        Permutation {
            values: (1..=n).rev().collect(),
        }
    }

    /// Rank-normalizes a sequence of distinct integers into the permutation
    /// it is order-isomorphic to.
    pub fn standardize(seq: &[usize]) -> Self {
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.sort_by_key(|&i| seq[i]);
        let mut values = vec![0; seq.len()];
        for (rank, &i) in order.iter().enumerate() {
            values[i] = rank + 1;
        }
        Permutation { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn into_values(self) -> Vec<usize> {
        self.values
    }

    /// σ_i for a 1-based position.
    pub fn value_at(&self, position: usize) -> usize {
        self.values[position - 1]
    }

    /// Positions indexed by value: `inverse()[v - 1]` is the 1-based
    /// position holding `v`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            pos[v - 1] = i + 1;
        }
        pos
    }

    pub fn position_of(&self, value: usize) -> Option<usize> {
        self.values.iter().position(|&v| v == value).map(|i| i + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Positions `i` in `1..n` with σ_i > σ_{i+1}.
    pub fn descents(&self) -> Vec<usize> {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn desc(&self) -> usize {
        self.values.windows(2).filter(|w| w[0] > w[1]).count()
    }

    /// Number of pairs `i < j` with σ_i > σ_j (Fenwick tree count).
    pub fn inversions(&self) -> u64 {
        let n = self.len();
        let mut tree = vec![0u32; n + 1];
        let mut total = 0u64;
        for (seen, &v) in self.values.iter().enumerate() {
            // elements already seen that are <= v
            let mut le = 0u64;
            let mut i = v;
            while i > 0 {
                le += u64::from(tree[i]);
                i &= i - 1;
            }
            total += seen as u64 - le;
            let mut i = v;
            while i <= n {
                tree[i] += 1;
                i += i & i.wrapping_neg();
            }
        }
        total
    }

    pub fn fixpoints(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, &v)| v == i + 1)
            .count()
    }

    /// Maximal increasing substrings, left to right, as 1-based position
    /// ranges. An empty permutation has no runs.
    pub fn ascending_runs(&self) -> Vec<RangeInclusive<usize>> {
        let mut runs = Vec::with_capacity(self.desc() + 1);
        if self.is_empty() {
            return runs;
        }
        let mut start = 1;
        for d in self.descents() {
            runs.push(start..=d);
            start = d + 1;
        }
        runs.push(start..=self.len());
        runs
    }

    /// Removes the entry at `position` and renormalizes the remaining values
    /// to `{1..n-1}`.
    pub fn delete(&self, position: usize) -> Result<Permutation> {
        let n = self.len();
        if position == 0 || position > n {
            return Err(Error::PositionOutOfRange { position, n });
        }
        let removed = self.values[position - 1];
        let values = self
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i + 1 != position)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Ok(Permutation { values })
    }

    /// The pattern formed by the entries at the given positions.
    pub fn pattern_at(&self, positions: &[usize]) -> Permutation {
        let seq: Vec<usize> = positions.iter().map(|&p| self.values[p - 1]).collect();
        Permutation::standardize(&seq)
    }

    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let mut found = false;
        self.search(pattern, &mut |_| {
            found = true;
            false
        });
        found
    }

    pub fn avoids_all<'a, I>(&self, patterns: I) -> bool
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        patterns.into_iter().all(|p| !self.contains_pattern(p))
    }

    /// All occurrences of `pattern`, ordered lexicographically by index tuple.
    pub fn occurrences(&self, pattern: &Permutation) -> Vec<Occurrence> {
        let mut out = Vec::new();
        self.search(pattern, &mut |idx| {
            out.push(Occurrence {
                indices: idx.iter().map(|&i| i + 1).collect(),
            });
            true
        });
        out
    }

    // Backtracking over index tuples; a prefix survives only while it is
    // order-isomorphic to the corresponding prefix of the pattern.
    // `visit` returns false to stop the search.
    fn search(&self, pattern: &Permutation, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let k = pattern.len();
        let n = self.len();
        if k > n {
            return;
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        self.extend(pattern, 0, &mut chosen, visit);
    }

    fn extend(
        &self,
        pattern: &Permutation,
        from: usize,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let t = chosen.len();
        let k = pattern.len();
        if t == k {
            return visit(chosen);
        }
        let remaining = k - t;
        for idx in from..=self.len() - remaining {
            let v = self.values[idx];
            let consistent = chosen.iter().enumerate().all(|(u, &c)| {
                (self.values[c] < v) == (pattern.values[u] < pattern.values[t])
            });
            if !consistent {
                continue;
            }
            chosen.push(idx);
            let go_on = self.extend(pattern, idx + 1, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses comma-separated one-line notation, e.g. `"5,2,4,3,1,6"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::identity(0));
        }
        let values = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<usize>().map_err(|_| Error::Parse(tok.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_one_line(values)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<usize>) -> Result<Self> {
        Permutation::from_one_line(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Lexicographic enumeration of `S_n`.
pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        if next_lexicographic(&mut next) {
            self.current = Some(next);
        }
        Some(Permutation { values: cur })
    }
}

pub fn all_permutations(n: usize) -> Permutations {
    Permutations {
        current: Some((1..=n).collect()),
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
