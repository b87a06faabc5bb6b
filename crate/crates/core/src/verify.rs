//! Exhaustive property suites over small symmetric groups, shared by the
//! `verify` command and the test suites.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::classes::{d_set, theorem_basis_one_step, ClassCatalog, ClassSpec};
use crate::error::{Error, Result};
use crate::limit::WidthLimit;
use crate::par;
use crate::perm::{all_permutations, Permutation};
use crate::scenario::{ceil_log2, radix_scenario, SubWindowTarget};
use crate::vp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Closure,
    Basis,
    WholeGenome,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lemmas, Suite::Closure, Suite::Basis, Suite::WholeGenome];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lemmas => "lemmas",
            Suite::Closure => "closure",
            Suite::Basis => "basis",
            Suite::WholeGenome => "whole-genome",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::Parse(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Class parameters exercised by the lemma and closure suites.
pub const SMALL_SPECS: [(usize, usize); 3] = [(2, 1), (3, 1), (2, 2)];

fn spec(k: usize, p: usize) -> ClassSpec {
    ClassSpec::new(k, p).expect("k >= 2")
}

fn first_failure<'a>(mut items: impl Iterator<Item = &'a Permutation>) -> String {
    items.next().map(|p| format!("counterexample {p}")).unwrap_or_default()
}

fn exhaustive(name: &str, max_size: usize, pred: impl Fn(&Permutation) -> bool + Sync) -> Check {
    let all: Vec<Permutation> = (0..=max_size).flat_map(all_permutations).collect();
    let bad = par::filter(all, |s| !pred(s));
    Check::new(
        format!("{name}, all n <= {max_size}"),
        bad.is_empty(),
        first_failure(bad.iter()),
    )
}

pub fn run_suite(suite: Suite, max_size: usize, catalog: &ClassCatalog) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Lemmas => lemmas(max_size, catalog)?,
        Suite::Closure => closure(max_size, catalog)?,
        Suite::Basis => basis(max_size, catalog)?,
        Suite::WholeGenome => whole_genome(max_size, catalog)?,
    };
    Ok(SuiteReport { suite, checks })
}

fn lemmas(max_size: usize, catalog: &ClassCatalog) -> Result<Vec<Check>> {
    let mut checks = vec![
        exhaustive("vp-vector sizes change by at most one on removal", max_size, |s| {
            s.len() < 2 || vp::check_removal_lemma(s)
        }),
        exhaustive("some removal adds at most one fixpoint", max_size, |s| {
            s.len() < 2 || vp::check_one_fixpoint_lemma(s).is_ok()
        }),
        exhaustive("vp-domain elements lie in two vp-vectors", max_size, vp::balance_holds),
    ];
    for (k, p) in SMALL_SPECS {
        let bound = k * p;
        let mut bad = Vec::new();
        for n in 1..=max_size {
            for s in catalog.enumerate_class(spec(k, p), n)? {
                if vp::vp_domain(&s).len() > bound {
                    bad.push(s);
                }
            }
        }
        checks.push(Check::new(
            format!("members of C({k},{p}) have vp-domain <= {bound}, n <= {max_size}"),
            bad.is_empty(),
            first_failure(bad.iter()),
        ));

        let basis = catalog.minimal_forbidden_basis(spec(k, p), max_size)?;
        let dom_bound = 2 * k * p + 2;
        let size_bound = (k * p + 2).pow(2) - 2;
        let bad: Vec<&Permutation> = basis
            .patterns
            .iter()
            .filter(|b| vp::vp_domain(b).len() > dom_bound || b.len() > size_bound)
            .collect();
        checks.push(Check::new(
            format!(
                "minimal excluded patterns of C({k},{p}) up to size {max_size}: vp-domain <= {dom_bound}, size <= {size_bound}"
            ),
            bad.is_empty(),
            format!("{} patterns checked {}", basis.len(), first_failure(bad.into_iter())),
        ));
    }
    Ok(checks)
}

fn closure(max_size: usize, catalog: &ClassCatalog) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (k, p) in SMALL_SPECS {
        let mut bad = Vec::new();
        for n in 2..=max_size {
            let smaller = catalog.enumerate_class(spec(k, p), n - 1)?;
            for s in catalog.enumerate_class(spec(k, p), n)? {
                if (1..=n).any(|i| !smaller.contains(&s.delete(i).expect("in range"))) {
                    bad.push(s);
                }
            }
        }
        checks.push(Check::new(
            format!("C({k},{p}) closed under deletion, n <= {max_size}"),
            bad.is_empty(),
            first_failure(bad.iter()),
        ));
    }
    let mut ok = true;
    for n in 1..=max_size {
        for k in 2..=3 {
            for p in 0..=2 {
                let base = catalog.enumerate_class(spec(k, p), n)?;
                ok &= base.is_subset(&catalog.enumerate_class(spec(k, p + 1), n)?);
                ok &= base.is_subset(&catalog.enumerate_class(spec(k + 1, p), n)?);
            }
        }
    }
    checks.push(Check::new(
        format!("C(K,p) grows with K and p (K in 2..=3, p in 0..=2), n <= {max_size}"),
        ok,
        "",
    ));
    Ok(checks)
}

fn basis(max_size: usize, catalog: &ClassCatalog) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let counts_ok = (2..=7).all(|k| {
        theorem_basis_one_step(k).map(|b| b.len()).ok() == Some(3 + (1 << (k - 1)))
            && d_set(k).map(|d| d.len()).ok() == Some(1 << (k - 1))
    });
    checks.push(Check::new("|D(K)| = 2^(K-1) and |B| = 3 + 2^(K-1), K in 2..=7", counts_ok, ""));

    for k in 2..=4 {
        let theorem = theorem_basis_one_step(k)?;
        let mut mismatch = None;
        for n in 1..=max_size {
            if theorem.avoiders(n) != catalog.enumerate_class(spec(k, 1), n)? {
                mismatch = Some(n);
                break;
            }
        }
        checks.push(Check::new(
            format!("avoiders of the one-step basis equal C({k},1), n <= {max_size}"),
            mismatch.is_none(),
            mismatch.map(|n| format!("differs at n = {n}")).unwrap_or_default(),
        ));

        if k < max_size {
            let class = catalog.enumerate_class(spec(k, 1), k + 1)?;
            let outside: BTreeSet<Permutation> = all_permutations(k + 1)
                .filter(|s| s.desc() == 1 && !class.contains(s))
                .collect();
            checks.push(Check::new(
                format!("one-descent permutations of size {} outside C({k},1) are D({k})", k + 1),
                outside == d_set(k)?,
                "",
            ));
        }
    }

    if max_size >= 5 {
        let brute = catalog.minimal_forbidden_basis(spec(4, 1), 5)?;
        let theorem = theorem_basis_one_step(4)?;
        checks.push(Check::new(
            "minimal excluded patterns of C(4,1) up to size 5 match the one-step basis",
            brute.as_set() == theorem.as_set(),
            format!("{} patterns", brute.len()),
        ));
    }
    Ok(checks)
}

fn whole_genome(max_size: usize, catalog: &ClassCatalog) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut bad = Vec::new();
    for n in 1..=max_size {
        for s in all_permutations(n) {
            let want = ceil_log2(s.desc() + 1);
            let bfs = catalog.bfs_min_steps(&s, WidthLimit::Unbounded)?;
            let sc = radix_scenario(&SubWindowTarget::whole(&s), n)?;
            if bfs != want || sc.len() != want || sc.replay()? != s {
                bad.push(s);
            }
        }
    }
    checks.push(Check::new(
        format!("optimal whole genome steps = ceil(log2(desc+1)), radix attains it, n <= {max_size}"),
        bad.is_empty(),
        first_failure(bad.iter()),
    ));
    for p in 1..=2 {
        let mut ok = true;
        for n in 1..=max_size {
            let class = catalog.enumerate_class(ClassSpec::new(WidthLimit::Unbounded, p)?, n)?;
            let by_descents: BTreeSet<Permutation> =
                all_permutations(n).filter(|s| s.desc() < 1 << p).collect();
            ok &= class == by_descents;
        }
        checks.push(Check::new(
            format!("C(inf,{p}) = {{desc <= {}}}, n <= {max_size}", (1 << p) - 1),
            ok,
            "",
        ));
    }
    Ok(checks)
}
