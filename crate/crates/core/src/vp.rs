//! Value-position analysis.
//!
//! The vp-vector of a value `i` spans the entries between the position
//! holding `i` and position `i` itself, i.e. the stretch that `i` has to
//! cross to reach its sorted place. It is empty when `i` is a fixpoint. The
//! vp-domain is the set of values covered by at least one vp-vector; every
//! step of a scenario building `σ` must touch all of it.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// The value sits left of its sorted position.
    Right,
    /// The value sits right of its sorted position.
    Left,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VpVector {
    pub value: usize,
    pub from_position: usize,
    pub to_position: usize,
    /// Values at the covered positions, in position order. Empty for a
    /// fixpoint.
    pub covered: Vec<usize>,
}

impl VpVector {
    pub fn is_empty(&self) -> bool {
        self.covered.is_empty()
    }

    pub fn size(&self) -> usize {
        self.covered.len()
    }

    pub fn direction(&self) -> Direction {
        match self.to_position.cmp(&self.from_position) {
            std::cmp::Ordering::Greater => Direction::Right,
            std::cmp::Ordering::Less => Direction::Left,
            std::cmp::Ordering::Equal => Direction::Fixed,
        }
    }

    /// Covered positions, or `None` for a fixpoint.
    pub fn span(&self) -> Option<RangeInclusive<usize>> {
        if self.is_empty() {
            return None;
        }
        let lo = self.from_position.min(self.to_position);
        let hi = self.from_position.max(self.to_position);
        Some(lo..=hi)
    }
}

fn vector_size(position: usize, value: usize) -> usize {
    if position == value {
        0
    } else {
        position.abs_diff(value) + 1
    }
}

pub fn vp_vector(sigma: &Permutation, value: usize) -> Result<VpVector> {
    let n = sigma.len();
    if value == 0 || value > n {
        return Err(Error::ValueOutOfRange { value, n });
    }
    let from = sigma.position_of(value).expect("bijection");
    let covered = if from == value {
        Vec::new()
    } else {
        let (lo, hi) = (from.min(value), from.max(value));
        sigma.values()[lo - 1..hi].to_vec()
    };
    Ok(VpVector {
        value,
        from_position: from,
        to_position: value,
        covered,
    })
}

pub fn vp_vectors(sigma: &Permutation) -> Vec<VpVector> {
    (1..=sigma.len())
        .map(|i| vp_vector(sigma, i).expect("value in range"))
        .collect()
}

/// How many vp-vectors cover each position (index `p - 1`).
pub fn coverage(sigma: &Permutation) -> Vec<usize> {
    let n = sigma.len();
    let mut diff = vec![0isize; n + 1];
    for (i, &pos) in sigma.inverse().iter().enumerate() {
        let value = i + 1;
        if pos != value {
            diff[pos.min(value) - 1] += 1;
            diff[pos.max(value)] -= 1;
        }
    }
    let mut acc = 0isize;
    diff[..n]
        .iter()
        .map(|d| {
            acc += d;
            acc as usize
        })
        .collect()
}

/// Values covered by at least one vp-vector.
pub fn vp_domain(sigma: &Permutation) -> BTreeSet<usize> {
    coverage(sigma)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(p, _)| sigma.values()[p])
        .collect()
}

/// Alternating maximal runs of positions inside and outside the vp-domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeWindowDecomposition {
    pub vp_windows: Vec<RangeInclusive<usize>>,
    pub free_windows: Vec<RangeInclusive<usize>>,
}

impl FreeWindowDecomposition {
    /// All windows left to right; `true` marks a vp-window.
    pub fn windows(&self) -> Vec<(bool, RangeInclusive<usize>)> {
        let mut all: Vec<(bool, RangeInclusive<usize>)> = self
            .vp_windows
            .iter()
            .map(|w| (true, w.clone()))
            .chain(self.free_windows.iter().map(|w| (false, w.clone())))
            .collect();
        all.sort_by_key(|(_, w)| *w.start());
        all
    }
}

pub fn free_window_decomposition(sigma: &Permutation) -> FreeWindowDecomposition {
    let cov = coverage(sigma);
    let mut vp_windows = Vec::new();
    let mut free_windows = Vec::new();
    let mut start = 1;
    for p in 1..=cov.len() {
        let inside = cov[p - 1] > 0;
        let ends = p == cov.len() || (cov[p] > 0) != inside;
        if ends {
            if inside {
                vp_windows.push(start..=p);
            } else {
                free_windows.push(start..=p);
            }
            start = p + 1;
        }
    }
    FreeWindowDecomposition {
        vp_windows,
        free_windows,
    }
}

/// Whether `value` sits immediately left or right of its sorted position.
pub fn is_quasi_diagonal(sigma: &Permutation, value: usize) -> bool {
    let n = sigma.len();
    (value >= 2 && value - 1 <= n && sigma.value_at(value - 1) == value)
        || (value < n && sigma.value_at(value + 1) == value)
}

/// After removing any one entry, every other non-fixpoint either becomes a
/// fixpoint or has its vp-vector size changed by at most one.
pub fn check_removal_lemma(sigma: &Permutation) -> bool {
    let n = sigma.len();
    let pos = sigma.inverse();
    (1..=n).all(|removed_at| {
        let removed = sigma.value_at(removed_at);
        (1..=n).filter(|&i| i != removed && pos[i - 1] != i).all(|i| {
            let before = vector_size(pos[i - 1], i);
            let new_pos = pos[i - 1] - usize::from(removed_at < pos[i - 1]);
            let new_value = i - usize::from(removed < i);
            let after = vector_size(new_pos, new_value);
            after == 0 || after.abs_diff(before) <= 1
        })
    })
}

/// A position whose removal creates at most one new fixpoint.
/// Quasi-diagonal entries are tried first, then the rest, left to right.
pub fn check_one_fixpoint_lemma(sigma: &Permutation) -> Result<usize> {
    let n = sigma.len();
    let allowed = sigma.fixpoints() + 1;
    let (qd, rest): (Vec<usize>, Vec<usize>) =
        (1..=n).partition(|&p| is_quasi_diagonal(sigma, sigma.value_at(p)));
    qd.into_iter()
        .chain(rest)
        .find(|&p| sigma.delete(p).expect("position in range").fixpoints() <= allowed)
        .ok_or(Error::NoWitness)
}

/// Every vp-domain value lies in at least two vp-vectors.
pub fn balance_holds(sigma: &Permutation) -> bool {
    coverage(sigma).iter().all(|&c| c == 0 || c >= 2)
}

/// One line per value: span, direction and covered values, then the domain.
pub fn dump(sigma: &Permutation) -> String {
    let mut out = String::new();
    for v in vp_vectors(sigma) {
        match v.span() {
            None => writeln!(out, "{:>3}  fixpoint", v.value).unwrap(),
            Some(span) => {
                let arrow = match v.direction() {
                    Direction::Right => "->",
                    _ => "<-",
                };
                let covered: Vec<String> = v.covered.iter().map(ToString::to_string).collect();
                writeln!(
                    out,
                    "{:>3}  {}..{} {}  size {}  covers {}",
                    v.value,
                    span.start(),
                    span.end(),
                    arrow,
                    v.size(),
                    covered.join(",")
                )
                .unwrap();
            }
        }
    }
    let domain: Vec<String> = vp_domain(sigma).iter().map(ToString::to_string).collect();
    writeln!(out, "domain {{{}}}", domain.join(",")).unwrap();
    out
}
