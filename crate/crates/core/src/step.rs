//! A single tandem duplication - random loss step.
//!
//! Duplicating the window `σ_start .. σ_{start+width-1}` in tandem and then
//! losing one copy of every duplicated element splits the window into two
//! order-preserving subsequences: the elements whose first copy survived,
//! followed by the elements whose second copy survived.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One duplication-loss event. `keep` lists the 1-based offsets inside the
/// window whose first copy is retained; every other offset keeps its second
/// copy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStep")]
pub struct DupLossStep {
    start: usize,
    width: usize,
    keep: Vec<usize>,
}

#[derive(Deserialize)]
struct RawStep {
    start: usize,
    width: usize,
    keep: Vec<usize>,
}

impl TryFrom<RawStep> for DupLossStep {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        DupLossStep::new(raw.start, raw.width, raw.keep)
    }
}

impl DupLossStep {
    /// `keep` may be given in any order; duplicates are rejected.
    pub fn new(start: usize, width: usize, mut keep: Vec<usize>) -> Result<Self> {
        if start == 0 {
            return Err(Error::InvalidStep("start must be >= 1".into()));
        }
        if width == 0 {
            return Err(Error::InvalidStep("width must be >= 1".into()));
        }
        keep.sort_unstable();
        if keep.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidStep("repeated keep offset".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&o| o == 0 || o > width) {
            return Err(Error::InvalidStep(format!(
                "keep offset {bad} outside 1..={width}"
            )));
        }
        Ok(DupLossStep { start, width, keep })
    }

    /// Bit `t` of `mask` set means offset `t + 1` keeps its first copy.
    pub fn from_mask(start: usize, width: usize, mask: u64) -> Self {
        assert!(start >= 1 && (1..=64).contains(&width));
        let keep = (0..width).filter(|t| mask >> t & 1 == 1).map(|t| t + 1).collect();
        DupLossStep { start, width, keep }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    /// Last position covered by the window.
    pub fn end(&self) -> usize {
        self.start + self.width - 1
    }

    pub fn is_noop_mask(&self) -> bool {
        self.keep.is_empty() || self.keep.len() == self.width
    }

    fn check_fits(&self, n: usize) -> Result<()> {
        if self.end() > n {
            return Err(Error::WindowOutOfRange {
                start: self.start,
                width: self.width,
                n,
            });
        }
        Ok(())
    }

    /// Applies the step to a raw one-line slice.
    pub fn apply_in_place(&self, values: &mut [usize]) -> Result<()> {
        self.check_fits(values.len())?;
        self.apply_in_place_window(&mut values[self.start - 1..self.end()]);
        Ok(())
    }

    /// Applies the keep pattern to a slice that is exactly the window.
    pub(crate) fn apply_in_place_window(&self, window: &mut [usize]) {
        debug_assert_eq!(window.len(), self.width);
        let mut kept_first = vec![false; self.width];
        for &o in &self.keep {
            kept_first[o - 1] = true;
        }
        let mut first = Vec::with_capacity(self.keep.len());
        let mut second = Vec::with_capacity(self.width - self.keep.len());
        for (t, &v) in window.iter().enumerate() {
            if kept_first[t] {
                first.push(v);
            } else {
                second.push(v);
            }
        }
        for (slot, v) in window.iter_mut().zip(first.into_iter().chain(second)) {
            *slot = v;
        }
    }
}

pub fn apply_step(perm: &Permutation, step: &DupLossStep) -> Result<Permutation> {
    let mut values = perm.values().to_vec();
    step.apply_in_place(&mut values)?;
    Ok(Permutation::from_vec_unchecked(values))
}

/// Change in inversion count caused by `step`; may be negative.
pub fn inversions_created(perm: &Permutation, step: &DupLossStep) -> Result<i64> {
    let after = apply_step(perm, step)?;
    Ok(after.inversions() as i64 - perm.inversions() as i64)
}

/// Every legal step of width at most `k` on a permutation of size `n`:
/// windows by (start, width) ascending, then masks by binary value
/// ascending.
pub fn all_steps(n: usize, k: usize) -> impl Iterator<Item = DupLossStep> {
    let max_width = k.min(n).min(63);
    (1..=n).flat_map(move |start| {
        (1..=max_width)
            .filter(move |w| start + w - 1 <= n)
            .flat_map(move |w| (0..1u64 << w).map(move |mask| DupLossStep::from_mask(start, w, mask)))
    })
}

/// Distinct outcomes of one step of width at most `k` applied to `perm`.
/// Always contains `perm` itself.
///
/// Only windows of width `min(k, n)` are enumerated: a narrower window is
/// simulated by a full-width one that keeps the extra elements on its left
/// in the first copy and those on its right in the second copy.
pub fn successors(perm: &Permutation, k: usize) -> BTreeSet<Permutation> {
    assert!(k >= 1, "width limit must be positive");
    let n = perm.len();
    let mut out = BTreeSet::new();
    out.insert(perm.clone());
    let w = k.min(n);
    if w < 2 {
        return out;
    }
    let mut buf = perm.values().to_vec();
    for start in 1..=n - w + 1 {
        for mask in 0..1u64 << w {
            buf.copy_from_slice(perm.values());
            DupLossStep::from_mask(start, w, mask)
                .apply_in_place(&mut buf)
                .expect("window fits by construction");
            out.insert(Permutation::from_vec_unchecked(buf.clone()));
        }
    }
    out
}
