//! Seeded sampling and step-count benchmarks for the bucket scenario.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::perm::Permutation;
use crate::scenario::{bucket_scenario, ceil_log2};

/// First line of every benchmark CSV.
pub const CSV_VERSION_LINE: &str = "# duploss-bench v1";
pub const CSV_COLUMNS: [&str; 8] = [
    "n",
    "K",
    "algorithm",
    "seed",
    "steps",
    "inversions",
    "descents",
    "wall_time_ms",
];

/// How the width limit depends on the size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthPolicy {
    Constant(usize),
    Full,
    /// `⌈n / log₂ n⌉`
    NOverLog,
    /// `⌈√n⌉`
    Sqrt,
}

impl WidthPolicy {
    /// Policy value clamped to `[2, n]` (to 2 when `n < 2`).
    pub fn evaluate(self, n: usize) -> usize {
        let raw = match self {
            WidthPolicy::Constant(c) => c,
            WidthPolicy::Full => n,
            WidthPolicy::NOverLog => {
                if n < 2 {
                    n
                } else {
                    (n as f64 / (n as f64).log2()).ceil() as usize
                }
            }
            WidthPolicy::Sqrt => (n as f64).sqrt().ceil() as usize,
        };
        raw.min(n).max(2)
    }
}

impl fmt::Display for WidthPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WidthPolicy::Constant(c) => write!(f, "const:{c}"),
            WidthPolicy::Full => f.write_str("full"),
            WidthPolicy::NOverLog => f.write_str("n-over-log"),
            WidthPolicy::Sqrt => f.write_str("sqrt"),
        }
    }
}

impl FromStr for WidthPolicy {
    type Err = Error;

    /// `const:<c>`, `full`, `n-over-log` or `sqrt`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "full" => Ok(WidthPolicy::Full),
            "n-over-log" | "n_over_log" => Ok(WidthPolicy::NOverLog),
            "sqrt" => Ok(WidthPolicy::Sqrt),
            _ => s
                .strip_prefix("const:")
                .and_then(|c| c.parse().ok())
                .filter(|&c| c >= 2)
                .map(WidthPolicy::Constant)
                .ok_or_else(|| Error::InvalidPolicy(s.to_string())),
        }
    }
}

/// Uniform permutation of size `n`, deterministic in `(n, seed)`.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<usize> = (1..=n).collect();
    values.shuffle(&mut rng);
    Permutation::from_one_line(values).expect("shuffle of the identity")
}

/// `⌊k²/4⌋`: the most inversions one width-`k` step can create.
pub fn max_inversions_per_step(k: usize) -> u64 {
    (k * k / 4) as u64
}

/// Worst-case lower bound on the steps needed for some permutation of
/// `S_n`: the larger of `⌈log₂ n⌉` (descent argument on the reversed
/// identity) and `⌈(n(n-1)/2) / ⌊K²/4⌋⌉` (inversion argument).
pub fn lower_bound_steps(n: usize, k: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    let inversions = (n * (n - 1) / 2) as u64;
    let per_step = max_inversions_per_step(k.min(n));
    ceil_log2(n).max(inversions.div_ceil(per_step) as usize)
}

/// Lower bound on the steps needed for this particular permutation.
pub fn certified_lower_bound(sigma: &Permutation, k: usize) -> usize {
    let by_descents = ceil_log2(sigma.desc() + 1);
    let per_step = max_inversions_per_step(k.min(sigma.len()).max(2));
    let by_inversions = sigma.inversions().div_ceil(per_step) as usize;
    by_descents.max(by_inversions)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub algorithm: String,
    pub seed: u64,
    pub steps: usize,
    pub inversions: u64,
    pub descents: usize,
    /// Only filled when timing is requested, so default output stays
    /// reproducible byte for byte.
    pub wall_time_ms: Option<f64>,
}

/// Tag of rows built from a seeded random permutation.
pub const ALGO_RANDOM: &str = "bucket";
/// Tag of the reversed-identity row emitted for every size.
pub const ALGO_REVERSED: &str = "bucket-reversed";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub policy: WidthPolicy,
    pub sizes: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub timing: bool,
}

fn measure(sigma: &Permutation, n: usize, k: usize, tag: &str, seed: u64, timing: bool) -> Result<BenchRow> {
    let started = Instant::now();
    let sc = bucket_scenario(sigma, k)?;
    let elapsed = started.elapsed();
    let got = sc.replay()?;
    if &got != sigma {
        return Err(Error::ReplayMismatch {
            expected: sigma.to_string(),
            got: got.to_string(),
        });
    }
    Ok(BenchRow {
        n,
        k,
        algorithm: tag.to_string(),
        seed,
        steps: sc.len(),
        inversions: sigma.inversions(),
        descents: sigma.desc(),
        wall_time_ms: timing.then_some(elapsed.as_secs_f64() * 1e3),
    })
}

/// For each size: `samples` seeded random permutations (row seed
/// `seed + index`) followed by the reversed identity. Every scenario is
/// replayed before its row is emitted. Rows come out in `(n, index)` order.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let k = cfg.policy.evaluate(n);
        let indices: Vec<u64> = (0..cfg.samples as u64).collect();
        let sampled = par::map(indices, |i| {
            let seed = cfg.seed.wrapping_add(i);
            let sigma = random_permutation(n, seed);
            measure(&sigma, n, k, ALGO_RANDOM, seed, cfg.timing)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        rows.extend(sampled);
        let worst = Permutation::reversed_identity(n);
        rows.push(measure(&worst, n, k, ALGO_REVERSED, cfg.seed, cfg.timing)?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.algorithm.clone(),
            r.seed.to_string(),
            r.steps.to_string(),
            r.inversions.to_string(),
            r.descents.to_string(),
            r.wall_time_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])?;
    }
    w.flush()
}

pub fn to_csv_string(rows: &[BenchRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Mean of `steps·K²/n²` over rows matching `tag`, per size.
pub fn scaling_ratios(rows: &[BenchRow], tag: &str) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    let mut sizes: Vec<usize> = rows.iter().filter(|r| r.algorithm == tag).map(|r| r.n).collect();
    sizes.dedup();
    for n in sizes {
        let sel: Vec<&BenchRow> = rows.iter().filter(|r| r.algorithm == tag && r.n == n).collect();
        let mean = sel
            .iter()
            .map(|r| r.steps as f64 * (r.k * r.k) as f64 / (r.n * r.n) as f64)
            .sum::<f64>()
            / sel.len() as f64;
        out.push((n, mean));
    }
    out
}
