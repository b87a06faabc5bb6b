//! Scenarios: ordered lists of duplication-loss steps that turn the identity
//! into a target permutation.
//!
//! Two generators are provided. [`radix_scenario`] is the optimal whole
//! genome procedure on one window (binary labels on maximal increasing
//! runs, one step per label bit). [`bucket_scenario`] handles a bounded
//! width `K`: it first convoys the contents of each `⌊K/2⌋`-wide block into
//! place in increasing order, then finishes every block with the radix
//! procedure.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limit::WidthLimit;
use crate::perm::Permutation;
use crate::step::DupLossStep;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    n: usize,
    width_limit: WidthLimit,
    steps: Vec<DupLossStep>,
}

impl Scenario {
    pub fn new(n: usize, width_limit: WidthLimit) -> Self {
        Scenario {
            n,
            width_limit,
            steps: Vec::new(),
        }
    }

    /// Builds a scenario from existing steps, checking width and window
    /// bounds of each.
    pub fn from_steps(n: usize, width_limit: WidthLimit, steps: Vec<DupLossStep>) -> Result<Self> {
        let mut sc = Scenario::new(n, width_limit);
        for s in steps {
            sc.push(s)?;
        }
        Ok(sc)
    }

    pub fn push(&mut self, step: DupLossStep) -> Result<()> {
        self.check(&step)?;
        self.steps.push(step);
        Ok(())
    }

    fn check(&self, step: &DupLossStep) -> Result<()> {
        if !self.width_limit.allows(step.width()) {
            return Err(Error::WidthExceeded {
                width: step.width(),
                limit: self.width_limit.resolve(usize::MAX),
            });
        }
        if step.end() > self.n {
            return Err(Error::WindowOutOfRange {
                start: step.start(),
                width: step.width(),
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width_limit(&self) -> WidthLimit {
        self.width_limit
    }

    pub fn steps(&self) -> &[DupLossStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Folds the steps over the identity of size `n`.
    pub fn replay(&self) -> Result<Permutation> {
        self.replay_from(&Permutation::identity(self.n))
    }

    pub fn replay_from(&self, start: &Permutation) -> Result<Permutation> {
        let mut values = start.values().to_vec();
        for s in &self.steps {
            self.check(s)?;
            s.apply_in_place(&mut values)?;
        }
        Permutation::from_one_line(values)
    }

    /// Every intermediate permutation, starting with the identity and ending
    /// with the replay result.
    pub fn trace(&self) -> Result<Vec<Permutation>> {
        let mut values: Vec<usize> = (1..=self.n).collect();
        let mut out = vec![Permutation::identity(self.n)];
        for s in &self.steps {
            self.check(s)?;
            s.apply_in_place(&mut values)?;
            out.push(Permutation::from_one_line(values.clone())?);
        }
        Ok(out)
    }

    pub fn to_document(&self) -> Result<ScenarioDocument> {
        Ok(ScenarioDocument {
            n: self.n,
            width_limit: self.width_limit,
            steps: self.steps.clone(),
            final_permutation: self.replay()?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = self.to_document()?;
        Ok(serde_json::to_string_pretty(&doc).expect("scenario documents always serialize"))
    }
}

pub fn replay(sc: &Scenario) -> Result<Permutation> {
    sc.replay()
}

/// JSON form of a scenario: `{"n", "width_limit", "steps", "final"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub n: usize,
    pub width_limit: WidthLimit,
    pub steps: Vec<DupLossStep>,
    #[serde(rename = "final")]
    pub final_permutation: Permutation,
}

impl TryFrom<ScenarioDocument> for Scenario {
    type Error = Error;

    /// Rebuilds the scenario and checks that it replays to the recorded
    /// final permutation.
    fn try_from(doc: ScenarioDocument) -> Result<Self> {
        let sc = Scenario::from_steps(doc.n, doc.width_limit, doc.steps)?;
        let got = sc.replay()?;
        if got != doc.final_permutation {
            return Err(Error::ReplayMismatch {
                expected: doc.final_permutation.to_string(),
                got: got.to_string(),
            });
        }
        Ok(sc)
    }
}

/// A contiguous window whose current (increasing) content must be
/// rearranged into `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubWindowTarget {
    start: usize,
    current: Vec<usize>,
    target: Vec<usize>,
}

impl SubWindowTarget {
    pub fn new(start: usize, current: Vec<usize>, target: Vec<usize>) -> Result<Self> {
        if start == 0 {
            return Err(Error::PositionOutOfRange { position: 0, n: 0 });
        }
        let mut a = current.clone();
        let mut b = target.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b || a.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotARearrangement);
        }
        Ok(SubWindowTarget {
            start,
            current,
            target,
        })
    }

    /// Window over the identity: positions `range` hold their own values.
    pub fn on_identity(range: RangeInclusive<usize>, target: Vec<usize>) -> Result<Self> {
        let start = *range.start();
        SubWindowTarget::new(start, range.collect(), target)
    }

    /// The whole of `sigma`, starting from the identity.
    pub fn whole(sigma: &Permutation) -> Self {
        SubWindowTarget {
            start: 1,
            current: (1..=sigma.len()).collect(),
            target: sigma.values().to_vec(),
        }
    }

    pub fn positions(&self) -> RangeInclusive<usize> {
        self.start..=self.start + self.current.len() - 1
    }

    pub fn width(&self) -> usize {
        self.current.len()
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn current(&self) -> &[usize] {
        &self.current
    }
}

/// `⌈log₂ x⌉` for `x >= 1`.
pub fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Steps taking the increasing window `current` (at `start`) to `target`.
///
/// Elements of the i-th maximal increasing run of `target` (counting from
/// zero) are labelled `i`; pass `j` keeps in the first copy the elements
/// whose label has a 0 in bit `j`. Least significant bit first, so the
/// passes amount to a stable radix sort on the labels.
fn radix_steps(start: usize, current: &[usize], target: &[usize]) -> Vec<DupLossStep> {
    let width = current.len();
    if width == 0 {
        return Vec::new();
    }
    let max_value = *target.iter().max().unwrap();
    let mut label = vec![0usize; max_value + 1];
    let mut run = 0;
    for (t, &v) in target.iter().enumerate() {
        if t > 0 && target[t - 1] > v {
            run += 1;
        }
        label[v] = run;
    }
    let passes = ceil_log2(run + 1);
    let mut arr = current.to_vec();
    let mut steps = Vec::with_capacity(passes);
    for bit in 0..passes {
        let keep: Vec<usize> = arr
            .iter()
            .enumerate()
            .filter(|(_, &v)| label[v] >> bit & 1 == 0)
            .map(|(t, _)| t + 1)
            .collect();
        let step = DupLossStep::new(start, width, keep).expect("offsets lie in the window");
        step.apply_in_place_window(&mut arr);
        steps.push(step);
    }
    debug_assert_eq!(arr, target);
    steps
}

/// Optimal whole genome scenario confined to one window.
///
/// Every step spans exactly the window, and the number of steps is
/// `⌈log₂(desc(target) + 1)⌉`. The returned scenario has width limit equal
/// to the window width.
pub fn radix_scenario(target: &SubWindowTarget, n: usize) -> Result<Scenario> {
    let range = target.positions();
    if *range.end() > n {
        return Err(Error::WindowOutOfRange {
            start: target.start,
            width: target.width(),
            n,
        });
    }
    if target.current.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NotSortedWindow);
    }
    let steps = radix_steps(target.start, &target.current, &target.target);
    Scenario::from_steps(n, WidthLimit::Finite(target.width()), steps)
}

/// Block layout used by [`bucket_scenario`] for size `n` and width `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketLayout {
    /// Right-anchored blocks of width `⌊k/2⌋`, rightmost first.
    pub blocks: Vec<RangeInclusive<usize>>,
    /// Remaining prefix, of width at most `k`. Empty range when `n == 0`.
    pub leftmost: RangeInclusive<usize>,
}

impl BucketLayout {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        let half = k / 2;
        let rounds = if n > k { (n - k).div_ceil(half) } else { 0 };
        let blocks = (1..=rounds)
            .map(|i| n - i * half + 1..=n - (i - 1) * half)
            .collect();
        #[allow(clippy::reversed_empty_ranges)]
        let leftmost = if n == 0 { 1..=0 } else { 1..=n - rounds * half };
        Ok(BucketLayout { blocks, leftmost })
    }
}

/// A bucket scenario along with the permutation reached after the convoy
/// phase.
#[derive(Debug, Clone)]
pub struct BucketRun {
    pub scenario: Scenario,
    pub layout: BucketLayout,
    /// Number of leading steps that belong to the convoy phase.
    pub convoy_steps: usize,
    /// Every block increasing and holding exactly its final content.
    pub intermediate: Permutation,
}

pub fn bucket_scenario(sigma: &Permutation, k: usize) -> Result<Scenario> {
    bucket_run(sigma, k).map(|r| r.scenario)
}

pub fn bucket_run(sigma: &Permutation, k: usize) -> Result<BucketRun> {
    let n = sigma.len();
    let layout = BucketLayout::new(n, k)?;
    let mut state = Tracker::identity(n);
    let mut scenario = Scenario::new(n, WidthLimit::Finite(k));
    let mut in_block = vec![false; n + 1];

    for block in &layout.blocks {
        let members = &sigma.values()[*block.start() - 1..*block.end()];
        for &v in members {
            in_block[v] = true;
        }
        for step in state.convoy(&in_block, block.clone(), k)? {
            scenario.push(step)?;
        }
        for &v in members {
            in_block[v] = false;
        }
    }
    let convoy_steps = scenario.len();
    let intermediate = Permutation::from_one_line(state.values.clone())?;

    for block in layout.blocks.iter().chain(std::iter::once(&layout.leftmost)) {
        if block.is_empty() {
            continue;
        }
        let (lo, hi) = (*block.start(), *block.end());
        let current = &state.values[lo - 1..hi];
        if current.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotSortedWindow);
        }
        let target = &sigma.values()[lo - 1..hi];
        for step in radix_steps(lo, current, target) {
            state.apply(&step);
            scenario.push(step)?;
        }
    }
    debug_assert_eq!(state.values, sigma.values());
    Ok(BucketRun {
        scenario,
        layout,
        convoy_steps,
        intermediate,
    })
}

/// Steps that move `members` into `target` without changing their relative
/// order, nor the relative order of the other elements.
///
/// Each step takes the width-`k` window starting at the leftmost member,
/// keeps the non-members in the first copy and the members in the second,
/// which pushes the members at least `⌈k/2⌉` positions right. When the
/// window would reach the target block, it is aligned to end at the block's
/// right end instead and that step finishes the move.
pub fn phase1_move_block(
    perm: &Permutation,
    members: &BTreeSet<usize>,
    target: RangeInclusive<usize>,
    k: usize,
) -> Result<Vec<DupLossStep>> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let n = perm.len();
    if members.len() > k / 2 {
        return Err(Error::TooManyMembers {
            members: members.len(),
            max: k / 2,
        });
    }
    let capacity = target.clone().count();
    if members.len() != capacity {
        return Err(Error::BlockMismatch {
            members: members.len(),
            capacity,
        });
    }
    if *target.end() > n || *target.start() == 0 {
        return Err(Error::PositionOutOfRange {
            position: *target.end(),
            n,
        });
    }
    let mut in_block = vec![false; n + 1];
    for &v in members {
        if v == 0 || v > n {
            return Err(Error::ValueOutOfRange { value: v, n });
        }
        in_block[v] = true;
    }
    let mut state = Tracker::from_values(perm.values().to_vec());
    state.convoy(&in_block, target, k)
}

/// Working permutation with a value-to-position index.
struct Tracker {
    values: Vec<usize>,
    pos: Vec<usize>,
}

impl Tracker {
    fn identity(n: usize) -> Self {
        Tracker::from_values((1..=n).collect())
    }

    fn from_values(values: Vec<usize>) -> Self {
        let mut pos = vec![0; values.len() + 1];
        for (i, &v) in values.iter().enumerate() {
            pos[v] = i + 1;
        }
        Tracker { values, pos }
    }

    fn apply(&mut self, step: &DupLossStep) {
        step.apply_in_place(&mut self.values)
            .expect("scenario steps fit the permutation");
        for p in step.start()..=step.end() {
            self.pos[self.values[p - 1]] = p;
        }
    }

    fn convoy(
        &mut self,
        in_block: &[bool],
        target: RangeInclusive<usize>,
        k: usize,
    ) -> Result<Vec<DupLossStep>> {
        let (a, b) = (*target.start(), *target.end());
        if let Some(v) = (b + 1..=self.values.len())
            .map(|p| self.values[p - 1])
            .find(|&v| in_block[v])
        {
            return Err(Error::MemberBeyondTarget(v));
        }
        let mut steps = Vec::new();
        let mut scan = 1;
        loop {
            // the leftmost member only moves right
            while scan <= b && !in_block[self.values[scan - 1]] {
                scan += 1;
            }
            if scan >= a {
                break;
            }
            let (lo, hi) = if scan + k > b {
                ((b + 1).saturating_sub(k).max(1), b)
            } else {
                (scan, scan + k - 1)
            };
            let keep = (lo..=hi)
                .filter(|&p| !in_block[self.values[p - 1]])
                .map(|p| p - lo + 1)
                .collect();
            let step = DupLossStep::new(lo, hi - lo + 1, keep)?;
            self.apply(&step);
            steps.push(step);
        }
        Ok(steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use crate::step::apply_step;

    fn d(s: &str) -> Permutation {
        Permutation::from_one_line(s.bytes().map(|b| (b - b'0') as usize).collect()).unwrap()
    }

    #[test]
    fn log2_ceiling() {
        let expected = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)];
        for (x, want) in expected {
            assert_eq!(ceil_log2(x), want, "x={x}");
        }
    }

    #[test]
    fn empty_scenario_replays_identity() {
        let sc = Scenario::new(5, WidthLimit::Finite(3));
        assert_eq!(replay(&sc).unwrap(), Permutation::identity(5));
    }

    #[test]
    fn single_step_scenario() {
        let step = DupLossStep::new(3, 4, vec![2, 3]).unwrap();
        let sc = Scenario::from_steps(7, WidthLimit::Finite(4), vec![step]).unwrap();
        assert_eq!(sc.replay().unwrap(), d("1245367"));
    }

    #[test]
    fn scenario_rejects_bad_steps() {
        let wide = DupLossStep::new(1, 4, vec![1]).unwrap();
        assert_eq!(
            Scenario::from_steps(7, WidthLimit::Finite(3), vec![wide.clone()]),
            Err(Error::WidthExceeded { width: 4, limit: 3 })
        );
        assert!(matches!(
            Scenario::from_steps(3, WidthLimit::Unbounded, vec![wide]),
            Err(Error::WindowOutOfRange { .. })
        ));
    }

    #[test]
    fn radix_identity_target_needs_no_steps() {
        let t = SubWindowTarget::whole(&Permutation::identity(6));
        assert!(radix_scenario(&t, 6).unwrap().is_empty());
    }

    #[test]
    fn radix_on_3142() {
        let t = SubWindowTarget::on_identity(1..=4, vec![3, 1, 4, 2]).unwrap();
        let sc = radix_scenario(&t, 4).unwrap();
        assert_eq!(sc.len(), 2);
        assert_eq!(sc.replay().unwrap(), d("3142"));
        assert!(sc.steps().iter().all(|s| s.start() == 1 && s.width() == 4));
    }

    #[test]
    fn radix_single_descent_is_one_step() {
        for sigma in all_permutations(6).filter(|s| s.desc() == 1) {
            let sc = radix_scenario(&SubWindowTarget::whole(&sigma), 6).unwrap();
            assert_eq!(sc.len(), 1);
            assert_eq!(sc.replay().unwrap(), sigma);
        }
    }

    #[test]
    fn radix_inner_window_leaves_outside_untouched() {
        let t = SubWindowTarget::on_identity(3..=6, vec![6, 4, 5, 3]).unwrap();
        let sc = radix_scenario(&t, 8).unwrap();
        assert_eq!(sc.replay().unwrap().to_string(), "1,2,6,4,5,3,7,8");
        assert_eq!(sc.len(), ceil_log2(d("4231").desc() + 1));
    }

    #[test]
    fn radix_preconditions() {
        let unsorted = SubWindowTarget::new(1, vec![2, 1, 3], vec![1, 2, 3]).unwrap();
        assert_eq!(radix_scenario(&unsorted, 3), Err(Error::NotSortedWindow));
        assert_eq!(
            SubWindowTarget::new(1, vec![1, 2], vec![1, 3]),
            Err(Error::NotARearrangement)
        );
        let t = SubWindowTarget::on_identity(2..=4, vec![4, 3, 2]).unwrap();
        assert!(matches!(radix_scenario(&t, 3), Err(Error::WindowOutOfRange { .. })));
    }

    #[test]
    fn layout_follows_right_anchored_blocks() {
        let l = BucketLayout::new(10, 6).unwrap();
        assert_eq!(l.blocks, vec![8..=10, 5..=7]);
        assert_eq!(l.leftmost, 1..=4);
        let l = BucketLayout::new(4, 4).unwrap();
        assert!(l.blocks.is_empty());
        assert_eq!(l.leftmost, 1..=4);
        for n in 1..40 {
            for k in 2..12 {
                let l = BucketLayout::new(n, k).unwrap();
                let w = l.leftmost.clone().count();
                assert!(w >= 1 && w <= k, "n={n} k={k}");
                let covered: usize = l.blocks.iter().map(|b| b.clone().count()).sum::<usize>() + w;
                assert_eq!(covered, n);
            }
        }
        assert_eq!(BucketLayout::new(5, 1), Err(Error::InvalidK(1)));
    }

    #[test]
    fn bucket_intermediate_example() {
        let sigma: Permutation = "2,10,1,7,6,5,8,9,3,4".parse().unwrap();
        let run = bucket_run(&sigma, 6).unwrap();
        assert_eq!(run.intermediate.to_string(), "1,2,7,10,5,6,8,3,4,9");
        assert_eq!(run.scenario.replay().unwrap(), sigma);
    }

    #[test]
    fn bucket_trivial_cases() {
        assert!(bucket_scenario(&Permutation::identity(20), 4).unwrap().is_empty());
        let sc = bucket_scenario(&d("4321"), 4).unwrap();
        assert_eq!(sc.len(), 2);
        assert_eq!(sc.replay().unwrap(), d("4321"));
        assert_eq!(bucket_scenario(&d("21"), 1), Err(Error::InvalidK(1)));
        assert!(bucket_scenario(&Permutation::identity(0), 3).unwrap().is_empty());
    }

    #[test]
    fn bucket_round_trip_small() {
        for n in 1..=6 {
            for k in 2..=n.max(2) {
                for sigma in all_permutations(n) {
                    let sc = bucket_scenario(&sigma, k).unwrap();
                    assert!(sc.steps().iter().all(|s| s.width() <= k));
                    assert_eq!(sc.replay().unwrap(), sigma);
                }
            }
        }
    }

    #[test]
    fn move_block_examples() {
        let id = Permutation::identity(6);
        let members: BTreeSet<usize> = [5, 6].into();
        assert!(phase1_move_block(&id, &members, 5..=6, 4).unwrap().is_empty());

        let one: BTreeSet<usize> = [3].into();
        let steps = phase1_move_block(&Permutation::identity(4), &one, 4..=4, 2).unwrap();
        assert_eq!(steps.len(), 1);
        let moved = apply_step(&Permutation::identity(4), &steps[0]).unwrap();
        assert_eq!(moved, d("1243"));
    }

    #[test]
    fn move_block_from_far_left() {
        for n in 6..=30 {
            for k in 2..=8 {
                let half = k / 2;
                if half > n {
                    continue;
                }
                let members: BTreeSet<usize> = (1..=half).collect();
                let target = n - half + 1..=n;
                let id = Permutation::identity(n);
                let steps = phase1_move_block(&id, &members, target, k).unwrap();
                let bound = (n - half).div_ceil(k.div_ceil(2)) + 1;
                assert!(steps.len() <= bound, "n={n} k={k}: {} > {bound}", steps.len());
                let mut cur = id;
                for s in &steps {
                    assert!(s.width() <= k);
                    cur = apply_step(&cur, s).unwrap();
                }
                let tail: Vec<usize> = cur.values()[n - half..].to_vec();
                assert_eq!(tail, (1..=half).collect::<Vec<_>>());
                let head: Vec<usize> = cur.values()[..n - half].to_vec();
                assert_eq!(head, (half + 1..=n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn move_block_errors() {
        let id = Permutation::identity(6);
        let too_many: BTreeSet<usize> = [1, 2, 3].into();
        assert_eq!(
            phase1_move_block(&id, &too_many, 4..=6, 4),
            Err(Error::TooManyMembers { members: 3, max: 2 })
        );
        let beyond: BTreeSet<usize> = [6].into();
        assert_eq!(
            phase1_move_block(&id, &beyond, 4..=4, 4),
            Err(Error::MemberBeyondTarget(6))
        );
        let short: BTreeSet<usize> = [1].into();
        assert!(matches!(
            phase1_move_block(&id, &short, 5..=6, 4),
            Err(Error::BlockMismatch { .. })
        ));
    }

    #[test]
    fn scenario_document_round_trip() {
        let sigma: Permutation = "3,1,4,2,6,5".parse().unwrap();
        let sc = bucket_scenario(&sigma, 3).unwrap();
        let json = sc.to_json().unwrap();
        let doc: ScenarioDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(doc.final_permutation, sigma);
        assert_eq!(Scenario::try_from(doc.clone()).unwrap(), sc);
        let mut bad = doc;
        bad.final_permutation = Permutation::identity(6);
        assert!(matches!(Scenario::try_from(bad), Err(Error::ReplayMismatch { .. })));
    }

    #[test]
    fn unbounded_scenario_json() {
        let sc = Scenario::new(3, WidthLimit::Unbounded);
        let v: serde_json::Value = serde_json::from_str(&sc.to_json().unwrap()).unwrap();
        assert_eq!(v["width_limit"], "inf");
        assert_eq!(v["final"], "1,2,3");
        assert_eq!(v["steps"], serde_json::json!([]));
    }
}
