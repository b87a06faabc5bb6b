//! The classes `C(K, p)` of permutations reachable from the identity in at
//! most `p` steps of width at most `K`, computed exactly by breadth-first
//! search over `S_n`, together with their forbidden-pattern bases.
//!
//! Reachability tables are kept per `(n, min(K, n))` and grown one BFS
//! layer at a time, so every query after the first reuses earlier work.
//! States are packed into a `u64`, four bits per entry, which bounds the
//! enumerable size at 16.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limit::WidthLimit;
use crate::par;
use crate::perm::{all_permutations, Permutation};

/// Default largest size the catalog will enumerate.
pub const DEFAULT_ENUM_CAP: usize = 10;
/// Hard limit imposed by the packed state encoding.
pub const MAX_ENUM_CAP: usize = 16;
/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "DUPLOSS_ENUM_CAP";

/// Parameters of a class: width limit `K >= 2` and step budget `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassSpec {
    #[serde(rename = "K")]
    k: WidthLimit,
    p: usize,
}

impl ClassSpec {
    pub fn new(k: impl Into<WidthLimit>, p: usize) -> Result<Self> {
        let k = k.into();
        if let WidthLimit::Finite(w) = k {
            if w < 2 {
                return Err(Error::InvalidK(w));
            }
        }
        Ok(ClassSpec { k, p })
    }

    pub fn width(&self) -> WidthLimit {
        self.k
    }

    pub fn steps(&self) -> usize {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "theorem")]
    TheoremConstructed,
    #[serde(rename = "brute-force")]
    BruteForce,
}

/// A set of forbidden patterns, sorted by size then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternBasis {
    pub patterns: Vec<Permutation>,
    /// No pattern of the set contains another one.
    pub antichain: bool,
    pub provenance: Provenance,
}

impl PatternBasis {
    pub fn new(patterns: impl IntoIterator<Item = Permutation>, provenance: Provenance) -> Self {
        let mut patterns: Vec<Permutation> = patterns.into_iter().collect();
        patterns.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        patterns.dedup();
        let antichain = is_antichain(&patterns);
        PatternBasis {
            patterns,
            antichain,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn as_set(&self) -> BTreeSet<Permutation> {
        self.patterns.iter().cloned().collect()
    }

    pub fn avoided_by(&self, sigma: &Permutation) -> bool {
        sigma.avoids_all(&self.patterns)
    }

    /// Elements of `S_n` avoiding every pattern.
    pub fn avoiders(&self, n: usize) -> BTreeSet<Permutation> {
        par::filter(all_permutations(n).collect(), |s| self.avoided_by(s))
            .into_iter()
            .collect()
    }

    pub fn max_pattern_size(&self) -> usize {
        self.patterns.iter().map(Permutation::len).max().unwrap_or(0)
    }

    pub fn to_document(&self, spec: ClassSpec, max_size: Option<usize>) -> BasisDocument {
        BasisDocument {
            k: spec.k,
            p: spec.p,
            max_size,
            antichain: self.antichain,
            provenance: self.provenance,
            patterns: self.patterns.clone(),
        }
    }
}

/// JSON form of a basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDocument {
    #[serde(rename = "K")]
    pub k: WidthLimit,
    pub p: usize,
    pub max_size: Option<usize>,
    pub antichain: bool,
    pub provenance: Provenance,
    pub patterns: Vec<Permutation>,
}

pub fn is_antichain(patterns: &[Permutation]) -> bool {
    patterns.iter().enumerate().all(|(i, a)| {
        patterns
            .iter()
            .enumerate()
            .all(|(j, b)| i == j || a.len() > b.len() || !b.contains_pattern(a))
    })
}

fn finite_k(k: WidthLimit) -> Result<usize> {
    match k {
        WidthLimit::Unbounded => Err(Error::InfiniteK),
        WidthLimit::Finite(k) if k < 2 => Err(Error::InvalidK(k)),
        WidthLimit::Finite(k) => Ok(k),
    }
}

/// Permutations of `S_{K+1}` with exactly one descent that neither start
/// with 1 nor end with `K+1`.
pub fn d_set(k: impl Into<WidthLimit>) -> Result<BTreeSet<Permutation>> {
    let k = finite_k(k.into())?;
    let n = k + 1;
    // A one-descent permutation is an increasing run followed by another;
    // each is fixed by the value set of its first run.
    let mut out = BTreeSet::new();
    for mask in 1u64..(1 << n) - 1 {
        let first: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        let second: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 0).collect();
        if first.last() < second.first() {
            continue;
        }
        let values: Vec<usize> = first.into_iter().chain(second).collect();
        if values[0] != 1 && values[n - 1] != n {
            out.insert(Permutation::from_vec_unchecked(values));
        }
    }
    Ok(out)
}

/// The basis `{321, 3142, 2143} ∪ D(K)` of the one-step class.
pub fn theorem_basis_one_step(k: impl Into<WidthLimit>) -> Result<PatternBasis> {
    let d = d_set(k)?;
    let fixed = [vec![3, 2, 1], vec![3, 1, 4, 2], vec![2, 1, 4, 3]]
        .into_iter()
        .map(Permutation::from_vec_unchecked);
    Ok(PatternBasis::new(
        fixed.chain(d),
        Provenance::TheoremConstructed,
    ))
}

// Packed states: entry i occupies bits 4i..4i+4 and stores σ_{i+1} - 1.

fn encode(values: &[usize]) -> u64 {
    values
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &v)| acc | ((v as u64 - 1) << (4 * i)))
}

fn decode(code: u64, n: usize) -> [u8; MAX_ENUM_CAP] {
    let mut out = [0u8; MAX_ENUM_CAP];
    for (i, slot) in out.iter_mut().enumerate().take(n) {
        *slot = (code >> (4 * i) & 0xf) as u8;
    }
    out
}

fn identity_code(n: usize) -> u64 {
    encode(&(1..=n).collect::<Vec<_>>())
}

/// Distinct non-trivial rearrangements of a width-`w` window produced by
/// one step: offset orders "kept-first then kept-second" for every mask,
/// identity excluded.
fn window_shuffles(w: usize) -> Vec<Vec<u8>> {
    let mut seen = BTreeSet::new();
    for mask in 0u64..1 << w {
        let order: Vec<u8> = (0..w as u8)
            .filter(|t| mask >> t & 1 == 1)
            .chain((0..w as u8).filter(|t| mask >> t & 1 == 0))
            .collect();
        if order.iter().enumerate().any(|(i, &t)| t as usize != i) {
            seen.insert(order);
        }
    }
    seen.into_iter().collect()
}

/// Successor generator for fixed `n`, width and allowed window range.
struct Expander {
    n: usize,
    width: usize,
    /// windows must end at or before this position
    limit: usize,
    shuffles: Vec<Vec<u8>>,
}

impl Expander {
    fn new(n: usize, width: usize, limit: usize) -> Self {
        let width = width.min(limit);
        Expander {
            n,
            width,
            limit,
            shuffles: if width >= 2 { window_shuffles(width) } else { Vec::new() },
        }
    }

    fn for_each(&self, code: u64, mut f: impl FnMut(u64)) {
        if self.width < 2 {
            return;
        }
        let vals = decode(code, self.n);
        for start in 0..=self.limit - self.width {
            let shift = 4 * start;
            let window_mask = if self.width == 16 {
                u64::MAX
            } else {
                ((1u64 << (4 * self.width)) - 1) << shift
            };
            let outside = code & !window_mask;
            for order in &self.shuffles {
                let mut c = outside;
                for (i, &t) in order.iter().enumerate() {
                    c |= u64::from(vals[start + t as usize]) << (shift + 4 * i);
                }
                f(c);
            }
        }
    }
}

/// BFS layers from the identity, grown on demand.
struct Reachability {
    expander: Expander,
    dist: HashMap<u64, u8>,
    frontier: Vec<u64>,
    depth: usize,
    complete: bool,
}

impl Reachability {
    fn new(n: usize, width: usize, limit: usize) -> Self {
        let start = identity_code(n);
        let mut dist = HashMap::new();
        dist.insert(start, 0);
        Reachability {
            expander: Expander::new(n, width, limit),
            dist,
            frontier: vec![start],
            depth: 0,
            complete: false,
        }
    }

    fn covers(&self, p: usize) -> bool {
        self.complete || self.depth >= p
    }

    fn grow(&mut self) {
        if self.complete {
            return;
        }
        let expander = &self.expander;
        let frontier = std::mem::take(&mut self.frontier);
        let candidates = par::map(frontier, |code| {
            let mut out = Vec::new();
            expander.for_each(code, |c| out.push(c));
            out
        });
        let next_depth = (self.depth + 1) as u8;
        let mut next = Vec::new();
        for c in candidates.into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(e) = self.dist.entry(c) {
                e.insert(next_depth);
                next.push(c);
            }
        }
        self.depth += 1;
        self.complete = next.is_empty();
        self.frontier = next;
    }

    fn grow_to(&mut self, p: usize) {
        while !self.covers(p) {
            self.grow();
        }
    }

    fn distance(&self, code: u64) -> Option<usize> {
        self.dist.get(&code).map(|&d| d as usize)
    }

    fn within(&self, code: u64, p: usize) -> bool {
        self.distance(code).is_some_and(|d| d <= p)
    }
}

type Table = Arc<RwLock<Reachability>>;

/// Memoized reachability tables keyed by `(n, min(K, n))`.
pub struct ClassCatalog {
    cap: usize,
    tables: Mutex<HashMap<(usize, usize), Table>>,
}

impl Default for ClassCatalog {
    fn default() -> Self {
        ClassCatalog::new()
    }
}

impl ClassCatalog {
    /// Cap taken from `DUPLOSS_ENUM_CAP` when set, else 10.
    pub fn new() -> Self {
        let cap = std::env::var(ENUM_CAP_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_ENUM_CAP);
        ClassCatalog::with_cap(cap)
    }

    pub fn with_cap(cap: usize) -> Self {
        ClassCatalog {
            cap: cap.min(MAX_ENUM_CAP),
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::BudgetExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    fn table(&self, n: usize, k: WidthLimit) -> Result<Table> {
        self.check_size(n)?;
        let width = k.resolve(n);
        let mut tables = self.tables.lock().unwrap();
        Ok(tables
            .entry((n, width))
            .or_insert_with(|| Arc::new(RwLock::new(Reachability::new(n, width, n))))
            .clone())
    }

    fn ensured(&self, n: usize, k: WidthLimit, p: usize) -> Result<Table> {
        let table = self.table(n, k)?;
        if !table.read().unwrap().covers(p) {
            table.write().unwrap().grow_to(p);
        }
        Ok(table)
    }

    /// `C(K, p) ∩ S_n`.
    pub fn enumerate_class(&self, spec: ClassSpec, n: usize) -> Result<BTreeSet<Permutation>> {
        let table = self.ensured(n, spec.k, spec.p)?;
        let t = table.read().unwrap();
        let out = t
            .dist
            .iter()
            .filter(|&(_, &d)| d as usize <= spec.p)
            .map(|(&c, _)| {
                let vals = decode(c, n);
                Permutation::from_vec_unchecked(vals[..n].iter().map(|&v| v as usize + 1).collect())
            })
            .collect();
        Ok(out)
    }

    pub fn is_member(&self, sigma: &Permutation, spec: ClassSpec) -> Result<bool> {
        let n = sigma.len();
        let table = self.ensured(n, spec.k, spec.p)?;
        let within = table.read().unwrap().within(encode(sigma.values()), spec.p);
        Ok(within)
    }

    /// Smallest `p` with `sigma ∈ C(K, p)`.
    pub fn bfs_min_steps(&self, sigma: &Permutation, k: WidthLimit) -> Result<usize> {
        if let WidthLimit::Finite(w) = k {
            if w < 2 {
                return Err(Error::InvalidK(w));
            }
        }
        let n = sigma.len();
        let table = self.table(n, k)?;
        let code = encode(sigma.values());
        loop {
            {
                let t = table.read().unwrap();
                if let Some(d) = t.distance(code) {
                    return Ok(d);
                }
                assert!(!t.complete, "adjacent swaps generate S_n");
            }
            let mut t = table.write().unwrap();
            if t.distance(code).is_none() {
                t.grow();
            }
        }
    }

    /// Minimal permutations of size at most `max_size` outside the class:
    /// non-members all of whose one-element deletions are members.
    pub fn minimal_forbidden_basis(&self, spec: ClassSpec, max_size: usize) -> Result<PatternBasis> {
        self.check_size(max_size)?;
        let mut found = Vec::new();
        for m in 1..=max_size {
            let upper = self.ensured(m, spec.k, spec.p)?;
            let lower = self.ensured(m - 1, spec.k, spec.p)?;
            let upper = upper.read().unwrap();
            let lower = lower.read().unwrap();
            let (upper, lower) = (&*upper, &*lower);
            let minimal = par::filter(all_permutations(m).collect(), |s| {
                !upper.within(encode(s.values()), spec.p)
                    && (1..=m).all(|i| {
                        let t = s.delete(i).expect("position in range");
                        lower.within(encode(t.values()), spec.p)
                    })
            });
            found.extend(minimal);
        }
        // one-element-deletion minimality implies pattern minimality, since
        // the class is closed under taking patterns
        Ok(PatternBasis {
            antichain: true,
            ..PatternBasis::new(found, Provenance::BruteForce)
        })
    }
}

fn catalog() -> &'static ClassCatalog {
    static CATALOG: OnceLock<ClassCatalog> = OnceLock::new();
    CATALOG.get_or_init(ClassCatalog::new)
}

/// `C(K, p) ∩ S_n`, memoized in a process-wide catalog.
pub fn enumerate_class(spec: ClassSpec, n: usize) -> Result<BTreeSet<Permutation>> {
    catalog().enumerate_class(spec, n)
}

pub fn is_member(sigma: &Permutation, spec: ClassSpec) -> Result<bool> {
    catalog().is_member(sigma, spec)
}

pub fn bfs_min_steps(sigma: &Permutation, k: impl Into<WidthLimit>) -> Result<usize> {
    catalog().bfs_min_steps(sigma, k.into())
}

pub fn minimal_forbidden_basis(spec: ClassSpec, max_size: usize) -> Result<PatternBasis> {
    catalog().minimal_forbidden_basis(spec, max_size)
}

/// Like [`bfs_min_steps`] but every step window must lie inside positions
/// `1..=limit`. Not memoized.
pub fn bfs_min_steps_within(sigma: &Permutation, k: usize, limit: usize) -> Result<Option<usize>> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let n = sigma.len();
    if n > MAX_ENUM_CAP {
        return Err(Error::BudgetExceeded { n, cap: MAX_ENUM_CAP });
    }
    let limit = limit.min(n);
    let mut reach = Reachability::new(n, k.min(n), limit);
    let code = encode(sigma.values());
    loop {
        if let Some(d) = reach.distance(code) {
            return Ok(Some(d));
        }
        if reach.complete {
            return Ok(None);
        }
        reach.grow();
    }
}
