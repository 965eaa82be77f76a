//! Searching for orbit-code generators with a given best friend and distance.
//!
//! Every orbit has a member containing 1, so only subspaces through
//! `phi(1) = e_0` are examined. Their RREF bases are `e_0` stacked on an RREF
//! basis of a `(k-1)`-subspace of the remaining `n-1` coordinates.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::gaussian_binomial;
use crate::distance::{distance_multiset, subfield_coset_upper_bound, DistanceReport};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldSpec};
use crate::linalg::Matrix;
use crate::orbit::best_friend_degree;
use crate::subspace::Subspace;

/// Default cap on the number of candidates an exhaustive search may visit.
pub const DEFAULT_SEARCH_CAP: u128 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchSpec {
    pub field: FieldSpec,
    pub k: usize,
    /// Required best-friend degree.
    pub r: usize,
    pub target_distance: usize,
    pub mode: SearchMode,
    /// Random mode only.
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub cap: u128,
    /// Skip the multiset computation when a subfield coset already caps the
    /// distance below the target.
    pub prune: bool,
}

impl SearchSpec {
    pub fn new(field: FieldSpec, k: usize, r: usize, target_distance: usize, mode: SearchMode) -> SearchSpec {
        SearchSpec {
            field,
            k,
            r,
            target_distance,
            mode,
            trials: 0,
            seed: 0,
            jobs: None,
            cap: DEFAULT_SEARCH_CAP,
            prune: true,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.field.n;
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidInput(format!("k = {} outside 1..={n}", self.k)));
        }
        if self.r == 0 || !self.k.is_multiple_of(self.r) || !n.is_multiple_of(self.r) {
            return Err(Error::InvalidInput(format!(
                "r = {} must divide both k = {} and n = {n}",
                self.r, self.k
            )));
        }
        let d = self.target_distance;
        if !d.is_multiple_of(2) || d < 2 * self.r || d > 2 * self.k {
            return Err(Error::InvalidInput(format!(
                "target distance {d} must be even and in [{}, {}]",
                2 * self.r,
                2 * self.k
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Found {
    pub subspace: Subspace,
    pub distance: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SearchResult {
    pub best_found: Option<Found>,
    /// Candidates drawn or enumerated, including rejected ones.
    pub candidates_examined: u64,
    /// Rank-deficient random draws.
    pub rank_deficient: u64,
    /// Candidates whose best friend differs from the required one.
    pub wrong_best_friend: u64,
    /// Candidates discarded by the subfield-coset bound.
    pub pruned: u64,
    /// Distance → number of fully evaluated candidates.
    pub histogram: BTreeMap<usize, u64>,
    pub exhaustive_complete: bool,
    pub target_met: bool,
}

impl SearchResult {
    /// Exhaustive, complete and below target: no code exists in the class.
    pub fn certifies_nonexistence(&self) -> bool {
        self.exhaustive_complete && !self.target_met
    }

    fn record(&mut self, outcome: Outcome) {
        self.candidates_examined += 1;
        match outcome {
            Outcome::RankDeficient => self.rank_deficient += 1,
            Outcome::WrongBestFriend => self.wrong_best_friend += 1,
            Outcome::Pruned => self.pruned += 1,
            Outcome::Evaluated(u, d) => {
                *self.histogram.entry(d).or_default() += 1;
                self.offer(Found { subspace: u, distance: d });
            }
        }
    }

    fn offer(&mut self, cand: Found) {
        let better = match &self.best_found {
            None => true,
            Some(b) => {
                cand.distance > b.distance
                    || (cand.distance == b.distance
                        && cand.subspace.basis().as_bytes() < b.subspace.basis().as_bytes())
            }
        };
        if better {
            self.best_found = Some(cand);
        }
    }

    /// Order-independent merge.
    fn merge(mut self, other: SearchResult) -> SearchResult {
        self.candidates_examined += other.candidates_examined;
        self.rank_deficient += other.rank_deficient;
        self.wrong_best_friend += other.wrong_best_friend;
        self.pruned += other.pruned;
        for (d, c) in other.histogram {
            *self.histogram.entry(d).or_default() += c;
        }
        if let Some(f) = other.best_found {
            self.offer(f);
        }
        self
    }
}

enum Outcome {
    RankDeficient,
    WrongBestFriend,
    Pruned,
    Evaluated(Subspace, usize),
}

fn evaluate(u: Subspace, spec: &SearchSpec) -> Result<Outcome> {
    if u.dim() != spec.k {
        return Ok(Outcome::RankDeficient);
    }
    if best_friend_degree(&u)? != spec.r {
        return Ok(Outcome::WrongBestFriend);
    }
    if spec.prune && spec.r < spec.k {
        if 2 * (spec.k - spec.r) < spec.target_distance {
            return Ok(Outcome::Pruned);
        }
        if let Some(c) = subfield_coset_upper_bound(&u)? {
            if c.bound < spec.target_distance {
                return Ok(Outcome::Pruned);
            }
        }
    }
    let d = distance_multiset(&u, false)?.d;
    Ok(Outcome::Evaluated(u, d))
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Number of `k`-subspaces of F_q^n that contain a fixed nonzero vector.
pub fn search_space_size(q: u32, n: usize, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::from(0u32);
    }
    gaussian_binomial(n as u32 - 1, k as u32 - 1, q as u64)
}

/// All `size`-subsets of `0..m`, ascending.
fn combinations(m: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn go(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..=m - (size - cur.len()) {
            cur.push(i);
            go(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    if size <= m {
        go(0, m, size, &mut cur, &mut out);
    }
    out
}

/// Visits every subspace through `e_0` whose other pivots are `pivots`
/// (columns of the full length-`n` vector, all ≥ 1).
fn scan_pivot_class(
    field: &Arc<Field>,
    pivots: &[usize],
    spec: &SearchSpec,
) -> Result<SearchResult> {
    let n = field.n();
    let q = field.q() as u8;
    // free positions (row, col) right of each pivot and off the pivot set
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| {
            (p + 1..n)
                .filter(|c| !pivots.contains(c))
                .map(move |c| (i + 1, c))
        })
        .collect();
    let mut m = Matrix::zeros(field.q(), pivots.len() + 1, n);
    m.set(0, 0, 1);
    for (i, &p) in pivots.iter().enumerate() {
        m.set(i + 1, p, 1);
    }
    let mut digits = vec![0u8; free.len()];
    let mut res = SearchResult::default();
    loop {
        for (&(r, c), &v) in free.iter().zip(&digits) {
            m.set(r, c, v);
        }
        let u = Subspace::from_matrix(field, &m)?;
        res.record(evaluate(u, spec)?);
        // odometer increment
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(res);
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Enumerates every k-subspace through 1 and keeps the best distance.
pub fn exhaustive_search(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let field = Arc::new(Field::new(spec.field.clone())?);
    if !field.is_primitive() {
        return Err(Error::NonPrimitiveField);
    }
    let count = search_space_size(field.q(), field.n(), spec.k);
    let count_u128 = count.to_u128().unwrap_or(u128::MAX);
    if count_u128 > spec.cap {
        return Err(Error::SearchSpaceTooLarge {
            count: count_u128,
            cap: spec.cap,
        });
    }
    let classes: Vec<Vec<usize>> = combinations(field.n() - 1, spec.k - 1)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + 1).collect())
        .collect();
    let shards: Vec<Result<SearchResult>> = in_pool(spec.jobs, || {
        classes
            .par_iter()
            .map(|p| scan_pivot_class(&field, p, spec))
            .collect()
    })?;
    let mut total = SearchResult::default();
    for s in shards {
        total = total.merge(s?);
    }
    if total.candidates_examined as u128 != count_u128 {
        return Err(Error::InternalInconsistency(format!(
            "visited {} subspaces, expected {count}",
            total.candidates_examined
        )));
    }
    total.exhaustive_complete = true;
    total.target_met = total
        .best_found
        .as_ref()
        .is_some_and(|b| b.distance >= spec.target_distance);
    Ok(total)
}

/// Candidate `index` of the stream for `seed`: `e_0` plus `k-1` uniform
/// vectors from a ChaCha8 stream selected by the index.
fn random_candidate(field: &Arc<Field>, k: usize, seed: u64, index: u64) -> Result<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = field.n();
    let q = field.q();
    let mut m = Matrix::zeros(q, k, n);
    m.set(0, 0, 1);
    for r in 1..k {
        for c in 0..n {
            m.set(r, c, rng.random_range(0..q) as u8);
        }
    }
    Subspace::from_matrix(field, &m)
}

/// Samples `trials` uniform k-subspaces through 1. Deterministic in
/// `(seed, trials)` regardless of `jobs`.
pub fn random_search(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let field = Arc::new(Field::new(spec.field.clone())?);
    if !field.is_primitive() {
        return Err(Error::NonPrimitiveField);
    }
    const CHUNK: u64 = 256;
    let chunks: Vec<(u64, u64)> = (0..spec.trials)
        .step_by(CHUNK as usize)
        .map(|s| (s, (s + CHUNK).min(spec.trials)))
        .collect();
    let shards: Vec<Result<SearchResult>> = in_pool(spec.jobs, || {
        chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut res = SearchResult::default();
                for i in lo..hi {
                    let u = random_candidate(&field, spec.k, spec.seed, i)?;
                    res.record(evaluate(u, spec)?);
                }
                Ok(res)
            })
            .collect()
    })?;
    let mut total = SearchResult::default();
    for s in shards {
        total = total.merge(s?);
    }
    total.target_met = total
        .best_found
        .as_ref()
        .is_some_and(|b| b.distance >= spec.target_distance);
    Ok(total)
}

/// `span{1, α², α³}`, checked to have best friend F_q and full orbit length,
/// with its multiset distance.
pub fn k3sb_family(field: &Arc<Field>) -> Result<(Subspace, DistanceReport)> {
    if field.n() < 6 {
        return Err(Error::InvalidInput("needs n >= 6".into()));
    }
    let gens: Vec<FieldElement> = [0, 2, 3].iter().map(|&e| field.alpha_pow(e)).collect();
    let u = Subspace::from_generators(field, &gens)?;
    let report = distance_multiset(&u, false)?;
    let full = field.group_order() / (field.q() as u64 - 1);
    if u.dim() != 3 || report.r != 1 || report.orbit_size != full {
        return Err(Error::InternalInconsistency(format!(
            "span{{1, a^2, a^3}}: k = {}, r = {}, N = {}",
            u.dim(),
            report.r,
            report.orbit_size
        )));
    }
    Ok((u, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn spec(q: u32, n: usize, k: usize, r: usize, d: usize, mode: SearchMode) -> SearchSpec {
        let f = make_field(q, n, None).unwrap();
        SearchSpec::new(f.spec().clone(), k, r, d, mode)
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn exhaustive_visits_gaussian_binomial_many() {
        let s = spec(2, 5, 3, 1, 2, SearchMode::Exhaustive);
        let res = exhaustive_search(&s).unwrap();
        assert_eq!(res.candidates_examined, 35);
        assert!(res.exhaustive_complete);
    }

    #[test]
    fn f16_lines_only_spread_reaches_four() {
        let s = spec(2, 4, 2, 2, 4, SearchMode::Exhaustive);
        let res = exhaustive_search(&s).unwrap();
        let best = res.best_found.unwrap();
        assert_eq!(best.distance, 4);
        assert_eq!(res.histogram, BTreeMap::from([(4, 1)]));
        assert_eq!(best.subspace, Subspace::subfield(best.subspace.field(), 2).unwrap());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(exhaustive_search(&spec(2, 6, 3, 2, 4, SearchMode::Exhaustive)).is_err());
        assert!(exhaustive_search(&spec(2, 6, 3, 1, 5, SearchMode::Exhaustive)).is_err());
        let mut s = spec(2, 8, 4, 1, 6, SearchMode::Exhaustive);
        s.cap = 100;
        assert!(matches!(
            exhaustive_search(&s),
            Err(Error::SearchSpaceTooLarge { count: 11811, cap: 100 })
        ));
    }

    #[test]
    fn random_is_deterministic_and_job_independent() {
        let mut s = spec(2, 8, 3, 1, 6, SearchMode::Random);
        s.trials = 300;
        s.seed = 7;
        let a = random_search(&s).unwrap();
        s.jobs = Some(1);
        let b = random_search(&s).unwrap();
        assert_eq!(a.histogram, b.histogram);
        assert_eq!(a.candidates_examined, 300);
        assert_eq!(
            a.best_found.as_ref().map(|f| f.subspace.clone()),
            b.best_found.as_ref().map(|f| f.subspace.clone())
        );
        s.trials = 0;
        assert!(random_search(&s).unwrap().best_found.is_none());
    }

    #[test]
    fn k3sb_small() {
        let f = Arc::new(make_field(2, 6, Some(&[1, 1, 0, 0, 0, 0, 1])).unwrap());
        let (_, rep) = k3sb_family(&f).unwrap();
        assert_eq!((rep.d, rep.orbit_size), (4, 63));
    }
}
