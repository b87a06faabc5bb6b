//! End-to-end acceptance checks. Runs without the libtest harness and
//! prints one PASS/FAIL line per criterion; exits nonzero if any fail.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::Instant;

use duploss::classes::{d_set, theorem_basis_one_step, ClassCatalog, ClassSpec};
use duploss::experiments::{
    certified_lower_bound, max_inversions_per_step, random_permutation, run_benchmark, scaling_ratios,
    BenchConfig, WidthPolicy, ALGO_RANDOM, ALGO_REVERSED,
};
use duploss::perm::all_permutations;
use duploss::scenario::ceil_log2;
use duploss::step::{all_steps, inversions_created};
use duploss::verify::{run_suite, Suite};
use duploss::{apply_step, bucket_scenario, radix_scenario, DupLossStep, Permutation, SubWindowTarget, WidthLimit};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn ensure(ok: bool, detail: impl Into<String>) -> Outcome {
    let detail = detail.into();
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spec(k: impl Into<WidthLimit>, p: usize) -> ClassSpec {
    ClassSpec::new(k, p).unwrap()
}

fn golden_step() -> Outcome {
    let step = DupLossStep::new(3, 4, vec![2, 3]).map_err(|e| e.to_string())?;
    let got = apply_step(&perm("1,2,3,4,5,6,7"), &step).map_err(|e| e.to_string())?;
    ensure(got == perm("1,2,4,5,3,6,7"), format!("got {got}"))
}

fn one_step_basis(cat: &ClassCatalog) -> Outcome {
    let brute = cat.minimal_forbidden_basis(spec(4, 1), 5).map_err(|e| e.to_string())?;
    let mut expected: BTreeSet<Permutation> =
        ["3,2,1", "3,1,4,2", "2,1,4,3"].into_iter().map(perm).collect();
    expected.extend(
        ["23451", "23514", "24513", "34512", "25134", "35124", "45123", "51234"]
            .into_iter()
            .map(|s| Permutation::from_one_line(s.bytes().map(|b| (b - b'0') as usize).collect()).unwrap()),
    );
    if brute.as_set() != expected {
        return Err(format!("brute-force basis has {} patterns", brute.len()));
    }
    for k in 2..=7usize {
        let b = theorem_basis_one_step(k).map_err(|e| e.to_string())?.len();
        let d = d_set(k).map_err(|e| e.to_string())?.len();
        if b != 3 + (1 << (k - 1)) || d != 1 << (k - 1) {
            return Err(format!("K = {k}: |B| = {b}, |D| = {d}"));
        }
    }
    Ok("11 patterns at K = 4; counts hold for K in 2..=7".into())
}

fn duality(cat: &ClassCatalog) -> Outcome {
    for k in 2..=4usize {
        let basis = theorem_basis_one_step(k).map_err(|e| e.to_string())?;
        for n in 0..=8 {
            let class = cat.enumerate_class(spec(k, 1), n).map_err(|e| e.to_string())?;
            if basis.avoiders(n) != class {
                return Err(format!("K = {k}, n = {n}"));
            }
        }
    }
    Ok("K in 2..=4, n <= 8".into())
}

fn whole_genome(cat: &ClassCatalog) -> Outcome {
    let mut count = 0;
    for n in 0..=7 {
        for s in all_permutations(n) {
            let want = ceil_log2(s.desc() + 1);
            let bfs = cat.bfs_min_steps(&s, WidthLimit::Finite(n.max(2))).map_err(|e| e.to_string())?;
            let sc = radix_scenario(&SubWindowTarget::whole(&s), n).map_err(|e| e.to_string())?;
            let replayed = sc.replay().map_err(|e| e.to_string())?;
            if bfs != want || sc.len() != want || replayed != s {
                return Err(format!("{s}: bfs {bfs}, radix {}, formula {want}", sc.len()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} permutations"))
}

fn descent_characterization(cat: &ClassCatalog) -> Outcome {
    for p in 1..=2usize {
        for n in 1..=7 {
            let class = cat.enumerate_class(spec(n.max(2), p), n).map_err(|e| e.to_string())?;
            let by_desc: BTreeSet<Permutation> = all_permutations(n).filter(|s| s.desc() < 1 << p).collect();
            if class != by_desc {
                return Err(format!("p = {p}, n = {n}"));
            }
        }
    }
    Ok("p in {1,2}, n <= 7".into())
}

fn bucket_ok(s: &Permutation, k: usize) -> Result<(), String> {
    let sc = bucket_scenario(s, k).map_err(|e| format!("{s}, K = {k}: {e}"))?;
    let replayed = sc.replay().map_err(|e| e.to_string())?;
    if replayed != *s || sc.steps().iter().any(|st| st.width() > k) {
        return Err(format!("{s}, K = {k}"));
    }
    Ok(())
}

fn bucket_correctness() -> Outcome {
    let mut count = 0;
    for n in 0..=7 {
        for s in all_permutations(n) {
            for k in 2..=7 {
                bucket_ok(&s, k)?;
                count += 1;
            }
        }
    }
    for (n, k) in [(50, 5), (100, 10), (200, 8)] {
        for seed in 0..1000 {
            bucket_ok(&random_permutation(n, seed), k)?;
            count += 1;
        }
    }
    Ok(format!("{count} scenarios replayed"))
}

fn lower_bounds() -> Outcome {
    let policies = [
        WidthPolicy::Constant(2),
        WidthPolicy::Constant(5),
        WidthPolicy::Constant(8),
        WidthPolicy::Sqrt,
        WidthPolicy::NOverLog,
        WidthPolicy::Full,
    ];
    let mut count = 0;
    for policy in policies {
        let rows = run_benchmark(&BenchConfig {
            policy,
            sizes: vec![2, 7, 16, 50, 128],
            samples: 40,
            seed: 17,
            timing: false,
        })
        .map_err(|e| e.to_string())?;
        for r in rows {
            let sigma = if r.algorithm == ALGO_REVERSED {
                Permutation::reversed_identity(r.n)
            } else {
                random_permutation(r.n, r.seed)
            };
            let lb = certified_lower_bound(&sigma, r.k);
            if r.steps < lb {
                return Err(format!("{policy} n = {} seed = {}: {} < {lb}", r.n, r.seed, r.steps));
            }
            count += 1;
        }
    }
    Ok(format!("{count} rows"))
}

fn inversion_bound() -> Outcome {
    for k in 2..=6usize {
        let id = Permutation::identity(k);
        let max = all_steps(k, k)
            .map(|s| inversions_created(&id, &s).unwrap())
            .max()
            .unwrap_or(0);
        if max != max_inversions_per_step(k) as i64 {
            return Err(format!("K = {k}: max {max}"));
        }
    }
    Ok("K in 2..=6".into())
}

fn lemma_suite(cat: &ClassCatalog) -> Outcome {
    // n <= 7 is required; the report runs one size further
    let report = run_suite(Suite::Lemmas, 8, cat).map_err(|e| e.to_string())?;
    match report.checks.iter().find(|c| !c.passed) {
        Some(c) => Err(c.to_string()),
        None => Ok(format!("{} checks, n <= 8", report.checks.len())),
    }
}

const SCALING_SIZES: [usize; 5] = [64, 128, 256, 512, 1024];
const SCALING_BAND: f64 = 2.5;

fn band(ratios: &[(usize, f64)]) -> f64 {
    let max = ratios.iter().map(|r| r.1).fold(f64::MIN, f64::max);
    let min = ratios.iter().map(|r| r.1).fold(f64::MAX, f64::min);
    max / min
}

fn scaling() -> Outcome {
    let rows = run_benchmark(&BenchConfig {
        policy: WidthPolicy::Constant(8),
        sizes: SCALING_SIZES.to_vec(),
        samples: 200,
        seed: 2024,
        timing: false,
    })
    .map_err(|e| e.to_string())?;
    let worst = scaling_ratios(&rows, ALGO_REVERSED);
    let mean = scaling_ratios(&rows, ALGO_RANDOM);
    let detail = format!(
        "reversed max/min {:.3}, mean max/min {:.3}",
        band(&worst),
        band(&mean)
    );
    ensure(
        worst.len() == 5 && mean.len() == 5 && band(&worst) <= SCALING_BAND && band(&mean) <= SCALING_BAND,
        detail,
    )
}

fn worst_case(n: usize) -> Outcome {
    let mut detail = Vec::new();
    for k in [2, 4] {
        let reversed = bucket_scenario(&Permutation::reversed_identity(n), k)
            .map_err(|e| e.to_string())?
            .len();
        let mut max = (0, Permutation::identity(n));
        for s in all_permutations(n) {
            let steps = bucket_scenario(&s, k).map_err(|e| e.to_string())?.len();
            if steps > max.0 {
                max = (steps, s);
            }
        }
        if max.0 > reversed {
            return Err(format!(
                "K = {k}: reversed identity takes {reversed} steps, {} takes {}",
                max.1, max.0
            ));
        }
        detail.push(format!("K = {k}: {reversed} steps"));
    }
    Ok(detail.join(", "))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("duploss-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("run{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_duploss"))
            .args(["bench", "--policy", "const:6", "--sizes", "20,40,80", "--samples", "25", "--seed", "99"])
            .arg("--csv")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("bench exited with {status}"));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(
        outputs[0] == outputs[1] && !outputs[0].is_empty(),
        format!("{} bytes", outputs[0].len()),
    )
}

fn main() -> ExitCode {
    let cat = ClassCatalog::new();
    let criteria: Vec<Criterion> = vec![
        ("01 step semantics on 1234567", Box::new(golden_step)),
        ("02 one-step basis and its counts", Box::new(|| one_step_basis(&cat))),
        ("03 one-step class equals basis avoiders", Box::new(|| duality(&cat))),
        ("04 whole genome optimum and radix scenario", Box::new(|| whole_genome(&cat))),
        ("05 unbounded classes by descent count", Box::new(|| descent_characterization(&cat))),
        ("06 bucket scenarios replay", Box::new(bucket_correctness)),
        ("07 step counts respect lower bounds", Box::new(lower_bounds)),
        ("08 inversions created by one step", Box::new(inversion_bound)),
        ("09 vp lemmas and basis bounds", Box::new(|| lemma_suite(&cat))),
        ("10 quadratic scaling at K = 8", Box::new(scaling)),
        ("11 reversed identity is the worst case at n = 8", Box::new(|| worst_case(8))),
        ("12 bench output is reproducible", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({detail}) [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({detail}) [{secs:.1}s]");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
