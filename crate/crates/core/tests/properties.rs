use std::collections::BTreeSet;

use proptest::prelude::*;

use duploss::classes::{bfs_min_steps_within, ClassCatalog, ClassSpec};
use duploss::experiments::{certified_lower_bound, random_permutation};
use duploss::perm::all_permutations;
use duploss::scenario::{bucket_run, phase1_move_block};
use duploss::step::{all_steps, inversions_created};
use duploss::vp;
use duploss::{apply_step, bucket_scenario, DupLossStep, Permutation, WidthLimit};

fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_n, any::<u64>()).prop_map(|(n, seed)| random_permutation(n, seed))
}

fn arb_step(n: usize, k: usize) -> impl Strategy<Value = DupLossStep> {
    let w_max = k.min(n).max(1);
    (1..=w_max).prop_flat_map(move |w| {
        (1..=n - w + 1, 0..1u64 << w).prop_map(move |(s, mask)| DupLossStep::from_mask(s, w, mask))
    })
}

#[test]
fn runs_count_descents_plus_one() {
    for n in 1..=8 {
        for s in all_permutations(n) {
            assert_eq!(s.ascending_runs().len(), s.desc() + 1, "{s}");
        }
    }
}

#[test]
fn inversion_extremes() {
    for n in 0..=9usize {
        let max = (n * n.saturating_sub(1) / 2) as u64;
        assert_eq!(Permutation::identity(n).inversions(), 0);
        assert_eq!(Permutation::reversed_identity(n).inversions(), max);
    }
}

#[test]
fn optimal_steps_respect_inversion_bound() {
    let cat = ClassCatalog::with_cap(8);
    for k in 2..=4usize {
        for n in 1..=6 {
            for s in all_permutations(n) {
                let best = cat.bfs_min_steps(&s, WidthLimit::Finite(k)).unwrap();
                assert!(best >= certified_lower_bound(&s, k), "{s} K={k}");
            }
        }
    }
}

#[test]
fn reversed_six_needs_fifteen_adjacent_swaps() {
    let best = ClassCatalog::with_cap(8)
        .bfs_min_steps(&Permutation::reversed_identity(6), WidthLimit::Finite(2))
        .unwrap();
    assert_eq!(best, 15);
}

// A fixed sorted suffix never needs to be touched.
#[test]
fn sorted_suffix_can_be_left_alone() {
    let cat = ClassCatalog::with_cap(8);
    for n in 2..=6 {
        for k in 2..=4usize.min(n) {
            for j in 1..n {
                for head in all_permutations(j) {
                    let mut values = head.into_values();
                    values.extend(j + 1..=n);
                    let s = Permutation::from_one_line(values).unwrap();
                    let free = cat.bfs_min_steps(&s, WidthLimit::Finite(k)).unwrap();
                    let inside = bfs_min_steps_within(&s, k, j).unwrap();
                    assert_eq!(inside, Some(free), "{s} K={k} j={j}");
                }
            }
        }
    }
}

#[test]
fn members_have_small_vp_domain() {
    let cat = ClassCatalog::with_cap(8);
    for (k, p) in [(2, 1), (3, 1), (2, 2)] {
        let spec = ClassSpec::new(k, p).unwrap();
        for n in 1..=7 {
            for s in cat.enumerate_class(spec, n).unwrap() {
                assert!(vp::vp_domain(&s).len() <= k * p, "{s}");
            }
        }
    }
}

#[test]
fn class_grows_with_budget() {
    let cat = ClassCatalog::with_cap(8);
    for n in 0..=6 {
        let one = cat.enumerate_class(ClassSpec::new(3, 1).unwrap(), n).unwrap();
        let two = cat.enumerate_class(ClassSpec::new(3, 2).unwrap(), n).unwrap();
        assert!(one.contains(&Permutation::identity(n)));
        assert!(one.is_subset(&two));
    }
}

#[test]
fn steps_from_identity_make_one_step_class() {
    let cat = ClassCatalog::with_cap(8);
    for n in 1..=6 {
        for k in 2..=4 {
            let id = Permutation::identity(n);
            let direct: BTreeSet<Permutation> = all_steps(n, k)
                .map(|s| apply_step(&id, &s).unwrap())
                .chain(std::iter::once(id.clone()))
                .collect();
            assert_eq!(direct, cat.enumerate_class(ClassSpec::new(k, 1).unwrap(), n).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pattern_containment_is_transitive(a in arb_perm(8), pick1 in any::<u64>(), pick2 in any::<u64>()) {
        // tau is a pattern of a, pi is a pattern of tau, built by deletion
        let mut tau = a.clone();
        let mut r = pick1;
        while !tau.is_empty() && r % 3 != 0 {
            tau = tau.delete((r as usize % tau.len()) + 1).unwrap();
            r /= 3;
        }
        let mut pi = tau.clone();
        let mut r = pick2;
        while !pi.is_empty() && r % 3 != 0 {
            pi = pi.delete((r as usize % pi.len()) + 1).unwrap();
            r /= 3;
        }
        prop_assert!(a.contains_pattern(&tau));
        prop_assert!(tau.contains_pattern(&pi));
        prop_assert!(a.contains_pattern(&pi));
    }

    #[test]
    fn independent_triples_obey_transitivity(a in arb_perm(8), b in arb_perm(5), c in arb_perm(3)) {
        if a.contains_pattern(&b) && b.contains_pattern(&c) {
            prop_assert!(a.contains_pattern(&c));
        }
        prop_assert_eq!(a.contains_pattern(&b), !a.occurrences(&b).is_empty());
    }

    #[test]
    fn deletion_gives_a_pattern(a in arb_perm(10), i in any::<usize>()) {
        prop_assume!(!a.is_empty());
        let d = a.delete(i % a.len() + 1).unwrap();
        prop_assert!(a.contains_pattern(&d));
    }

    #[test]
    fn step_keeps_both_copies_in_order((pi, step) in (2usize..=12).prop_flat_map(|n| {
        (Just(random_permutation(n, n as u64)), arb_step(n, 6))
    })) {
        let out = apply_step(&pi, &step).unwrap();
        let window = &pi.values()[step.start() - 1..step.end()];
        let kept: Vec<usize> = step.keep().iter().map(|&o| window[o - 1]).collect();
        let rest: Vec<usize> = (1..=step.width())
            .filter(|o| !step.keep().contains(o))
            .map(|o| window[o - 1])
            .collect();
        let got = &out.values()[step.start() - 1..step.end()];
        prop_assert_eq!(&got[..kept.len()], &kept[..]);
        prop_assert_eq!(&got[kept.len()..], &rest[..]);
        prop_assert_eq!(&out.values()[..step.start() - 1], &pi.values()[..step.start() - 1]);
        prop_assert_eq!(&out.values()[step.end()..], &pi.values()[step.end()..]);
        prop_assert!(inversions_created(&pi, &step).unwrap() <= (step.width() * step.width() / 4) as i64);
    }

    #[test]
    fn bucket_round_trip(seed in any::<u64>(), n in 0usize..300, k in 2usize..20) {
        let sigma = random_permutation(n, seed);
        let sc = bucket_scenario(&sigma, k).unwrap();
        prop_assert!(sc.steps().iter().all(|s| s.width() <= k));
        prop_assert_eq!(sc.replay().unwrap(), sigma.clone());
        prop_assert!(sc.len() >= certified_lower_bound(&sigma, k));
    }

    #[test]
    fn phase_one_leaves_sorted_blocks(seed in any::<u64>(), n in 1usize..120, k in 2usize..12) {
        let sigma = random_permutation(n, seed);
        let run = bucket_run(&sigma, k).unwrap();
        let mid = run.intermediate.values();
        let mut blocks: Vec<_> = run.layout.blocks.clone();
        blocks.push(run.layout.leftmost.clone());
        for b in blocks {
            let here = &mid[b.start() - 1..*b.end()];
            let want: BTreeSet<usize> = sigma.values()[b.start() - 1..*b.end()].iter().copied().collect();
            prop_assert!(here.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(here.iter().copied().collect::<BTreeSet<_>>(), want);
        }
    }

    #[test]
    fn move_block_delivers_members(seed in any::<u64>(), n in 4usize..60, k in 2usize..10) {
        let h = k / 2;
        let pi = random_permutation(n, seed);
        let target = n - h + 1..=n;
        let members: BTreeSet<usize> = pi.values()[..h].iter().copied().collect();
        let steps = phase1_move_block(&pi, &members, target.clone(), k).unwrap();
        let mut values = pi.values().to_vec();
        for s in &steps {
            prop_assert!(s.width() <= k);
            s.apply_in_place(&mut values).unwrap();
        }
        let moved: Vec<usize> = values[n - h..].to_vec();
        let original: Vec<usize> = pi.values()[..h].to_vec();
        prop_assert_eq!(moved, original);
        prop_assert!(steps.len() <= n.div_ceil(k.div_ceil(2)) + 1);
    }
}
