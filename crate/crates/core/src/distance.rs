//! Minimum subspace distance of cyclic orbit codes.
//!
//! Two independent routes are provided: a brute-force scan over
//! `d(U, Uβ^j)` for every `j`, and the difference-multiset method, which
//! works only with the discrete logarithms of the points of `U` and the
//! orbit length `N = (q^n-1)/(q^r-1)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::exact_log;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Echelon;
use crate::orbit::{best_friend_degree, stabilizer_order};
use crate::subspace::Subspace;

const DENSE_LIMIT: u64 = 1 << 22;
const BRUTE_CHUNK: u64 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Multiset,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Multiset => "multiset",
        })
    }
}

/// Minimum distance of an orbit code together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Minimum subspace distance.
    pub d: usize,
    /// `max_j dim_{F_{q^r}}(U ∩ Uβ^j)`.
    pub s: usize,
    pub r: usize,
    pub k: usize,
    /// Orbit length.
    #[serde(rename = "N")]
    pub orbit_size: u64,
    pub method: Method,
    /// Distance → number of unordered member pairs at that distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<BTreeMap<usize, u64>>,
}

/// Differences `b_l - b_m mod N` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffMultiset {
    Dense(Vec<u32>),
    Sparse(BTreeMap<u64, u32>),
}

impl DiffMultiset {
    pub fn multiplicity(&self, j: u64) -> u32 {
        match self {
            DiffMultiset::Dense(v) => v.get(j as usize).copied().unwrap_or(0),
            DiffMultiset::Sparse(m) => m.get(&j).copied().unwrap_or(0),
        }
    }

    /// Nonzero `(J, m(J))` pairs in increasing `J`.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (u64, u32)> + '_> {
        match self {
            DiffMultiset::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(j, &c)| (j as u64, c)),
            ),
            DiffMultiset::Sparse(m) => Box::new(m.iter().map(|(&j, &c)| (j, c))),
        }
    }

    pub fn total(&self) -> u64 {
        self.iter().map(|(_, c)| c as u64).sum()
    }
}

/// Orbit representatives `b_1 < ... < b_S` of `U \ {0}` under `F_{q^r}^*`
/// and the derived difference multiset.
#[derive(Clone, Debug)]
pub struct RepProfile {
    pub q: u32,
    pub k: usize,
    pub r: usize,
    /// Orbit length `N`.
    pub orbit_size: u64,
    pub reps: Vec<u64>,
    pub diffs: DiffMultiset,
    /// Maximum multiplicity (0 when there is a single representative).
    pub max_multiplicity: u32,
    /// `log_q(M(q^r-1)+1)`.
    pub max_intersection_dim: usize,
}

impl RepProfile {
    /// `|reps| = (q^k-1)/(q^r-1)`.
    pub fn s_count(&self) -> usize {
        self.reps.len()
    }

    fn point_count(&self, m: u32) -> u64 {
        m as u64 * ((self.q as u64).pow(self.r as u32) - 1) + 1
    }

    /// `dim(U ∩ Uα^J) = log_q(m(J)(q^r-1)+1)`.
    pub fn intersection_dim(&self, j: u64) -> Result<usize> {
        let c = self.point_count(self.diffs.multiplicity(j % self.orbit_size));
        exact_log(c, self.q as u64).map(|e| e as usize).ok_or_else(|| {
            Error::InternalInconsistency(format!("{c} points in an intersection is not a power of q"))
        })
    }

    /// `2(k - L)`.
    pub fn distance(&self) -> usize {
        2 * (self.k - self.max_intersection_dim)
    }
}

/// The sorted distinct values `log(u) mod N` over nonzero `u ∈ U`.
pub fn orbit_representatives(u: &Subspace) -> Result<(Vec<u64>, u64, usize)> {
    let field = u.field();
    if !field.is_primitive() {
        return Err(Error::NonPrimitiveField);
    }
    if u.dim() == 0 {
        return Err(Error::ZeroSpace);
    }
    if !u.contains_element(FieldElement::ONE) {
        return Err(Error::NotNormalized);
    }
    let r = best_friend_degree(u)?;
    let q = field.q() as u64;
    let unit = q.pow(r as u32) - 1;
    let orbit_size = field.group_order() / unit;
    let mut hits: HashMap<u64, u64> = HashMap::new();
    for e in u.elements().into_iter().skip(1) {
        *hits.entry(field.discrete_log(e)? % orbit_size).or_default() += 1;
    }
    if let Some((b, c)) = hits.iter().find(|(_, &c)| c != unit) {
        return Err(Error::InternalInconsistency(format!(
            "representative {b} hit {c} times, expected {unit}"
        )));
    }
    let mut reps: Vec<u64> = hits.into_keys().collect();
    reps.sort_unstable();
    let expected = (q.pow(u.dim() as u32) - 1) / unit;
    if reps.len() as u64 != expected {
        return Err(Error::InternalInconsistency(format!(
            "{} representatives, expected {expected}",
            reps.len()
        )));
    }
    Ok((reps, orbit_size, r))
}

/// Builds the representative profile and difference multiset.
pub fn rep_profile(u: &Subspace) -> Result<RepProfile> {
    let (reps, orbit_size, r) = orbit_representatives(u)?;
    let mut diffs = if orbit_size <= DENSE_LIMIT {
        DiffMultiset::Dense(vec![0; orbit_size as usize])
    } else {
        DiffMultiset::Sparse(BTreeMap::new())
    };
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = (a + orbit_size - b) % orbit_size;
            match &mut diffs {
                DiffMultiset::Dense(v) => v[d as usize] += 1,
                DiffMultiset::Sparse(m) => *m.entry(d).or_default() += 1,
            }
        }
    }
    let max_multiplicity = diffs.iter().map(|(_, c)| c).max().unwrap_or(0);
    let mut profile = RepProfile {
        q: u.field().q(),
        k: u.dim(),
        r,
        orbit_size,
        reps,
        diffs,
        max_multiplicity,
        max_intersection_dim: 0,
    };
    for (j, _) in profile.diffs.iter() {
        profile.intersection_dim(j)?;
    }
    let c = profile.point_count(max_multiplicity);
    profile.max_intersection_dim = exact_log(c, profile.q as u64).ok_or_else(|| {
        Error::InternalInconsistency(format!("M(q^r-1)+1 = {c} is not a power of q"))
    })? as usize;
    Ok(profile)
}

/// Distance of `orb(U)` under a primitive α via the difference multiset.
pub fn distance_multiset(u: &Subspace, distribution: bool) -> Result<DistanceReport> {
    let p = rep_profile(u)?;
    let distribution = if distribution {
        let mut dist: BTreeMap<usize, u64> = BTreeMap::new();
        for j in 1..p.orbit_size {
            let d = 2 * (p.k - p.intersection_dim(j)?);
            *dist.entry(d).or_default() += 1;
        }
        Some(scale_distribution(dist, p.orbit_size))
    } else {
        None
    };
    Ok(DistanceReport {
        d: p.distance(),
        s: p.max_intersection_dim / p.r,
        r: p.r,
        k: p.k,
        orbit_size: p.orbit_size,
        method: Method::Multiset,
        distribution,
    })
}

/// Per-shift counts over `j ∈ [1, N)` become unordered pair counts.
fn scale_distribution(per_shift: BTreeMap<usize, u64>, orbit_size: u64) -> BTreeMap<usize, u64> {
    per_shift
        .into_iter()
        .map(|(d, c)| (d, c * orbit_size / 2))
        .collect()
}

/// `dim(U ∩ V)` if it exceeds `floor`, otherwise `None`; stops eliminating
/// once enough independent rows show the intersection cannot beat `floor`.
fn intersection_dim_above(u: &Echelon, k: usize, v: &Subspace, floor: Option<usize>) -> Option<usize> {
    let mut e = u.clone();
    let mut fresh = 0;
    let cap = floor.map(|f| k - f);
    for row in v.basis().row_iter() {
        if e.insert(row) {
            fresh += 1;
            if cap.is_some_and(|c| fresh >= c) {
                return None;
            }
        }
    }
    Some(v.dim() - fresh)
}

/// Exact minimum of `d(U, Uβ^j)` over `1 ≤ j < N`; valid for any β.
pub fn distance_bruteforce(u: &Subspace, beta_log: u64, distribution: bool) -> Result<DistanceReport> {
    if u.dim() == 0 {
        return Err(Error::ZeroSpace);
    }
    let field = u.field();
    let k = u.dim();
    let r = best_friend_degree(u)?;
    let (orbit_size, _) = stabilizer_order(u, beta_log);
    let base = u.row_space().echelon();
    let m = field.group_order() as u128;
    let shift = |j: u64| field.alpha_pow((beta_log as u128 * j as u128 % m) as u64);

    let chunks: Vec<(u64, u64)> = (1..orbit_size)
        .step_by(BRUTE_CHUNK as usize)
        .map(|s| (s, (s + BRUTE_CHUNK).min(orbit_size)))
        .collect();

    let (max_dim, dist) = if distribution {
        let per_chunk: Vec<BTreeMap<usize, u64>> = chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut local = BTreeMap::new();
                for j in lo..hi {
                    let v = u.scale_unchecked(shift(j));
                    let dim = intersection_dim_above(&base, k, &v, None).unwrap();
                    *local.entry(2 * (k - dim)).or_default() += 1;
                }
                local
            })
            .collect();
        let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
        for c in per_chunk {
            for (d, n) in c {
                *merged.entry(d).or_default() += n;
            }
        }
        let max_dim = merged.keys().next().map(|&d| k - d / 2).unwrap_or(0);
        (max_dim, Some(scale_distribution(merged, orbit_size)))
    } else {
        let max_dim = chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut best: Option<usize> = None;
                for j in lo..hi {
                    let v = u.scale_unchecked(shift(j));
                    if let Some(d) = intersection_dim_above(&base, k, &v, best) {
                        best = Some(d);
                        if d + r >= k {
                            // largest possible for distinct members
                            break;
                        }
                    }
                }
                best.unwrap_or(0)
            })
            .max()
            .unwrap_or(0);
        (max_dim, None)
    };
    if max_dim % r != 0 {
        return Err(Error::InternalInconsistency(format!(
            "intersection dimension {max_dim} not a multiple of r = {r}"
        )));
    }
    Ok(DistanceReport {
        d: 2 * (k - max_dim),
        s: max_dim / r,
        r,
        k,
        orbit_size,
        method: Method::Brute,
        distribution: dist,
    })
}

/// Cheap bounds from `k` and the best friend alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBounds {
    pub lower: usize,
    pub upper: usize,
    /// `2(k - r)`, the best a non-spread orbit code can do (needs `t ≥ 2`).
    pub non_spread_upper: Option<usize>,
    /// `r = k`, i.e. `U = F_{q^k}` and the orbit is a spread.
    pub spread: bool,
}

pub fn distance_bounds(u: &Subspace) -> Result<DistanceBounds> {
    let r = best_friend_degree(u)?;
    let k = u.dim();
    Ok(DistanceBounds {
        lower: 2 * r,
        upper: 2 * k,
        non_spread_upper: (k / r >= 2).then_some(2 * (k - r)),
        spread: r == k,
    })
}

/// Structure of `U = ⊕_{i<t} α^{il} F_{q^r}`.
#[derive(Clone, Debug)]
pub struct DirectSumClassification {
    pub subspace: Subspace,
    pub r: usize,
    pub l: u64,
    pub t: usize,
    pub mipo_degree: usize,
    pub mipo_degree_is_t: bool,
    pub closed_under_alpha_l: bool,
    pub best_friend_degree: usize,
    pub best_friend_is_r: bool,
    pub is_field: bool,
    /// `2r` whenever F_{q^r} is the best friend.
    pub predicted_distance: Option<usize>,
}

impl DirectSumClassification {
    /// The four characterizations of `U` being the field F_{q^{rt}} agree.
    pub fn equivalences_hold(&self) -> bool {
        self.is_field == self.mipo_degree_is_t
            && self.is_field == self.closed_under_alpha_l
            && self.is_field == !self.best_friend_is_r
    }
}

pub fn classify_direct_sum(
    field: &std::sync::Arc<Field>,
    r: usize,
    l: u64,
    t: usize,
) -> Result<DirectSumClassification> {
    if t < 2 {
        return Err(Error::InvalidInput("direct sum needs t >= 2".into()));
    }
    let fr = Subspace::subfield(field, r)?;
    let step = field.alpha_pow(l);
    let mut gens = Vec::with_capacity(r * t);
    let mut scale = FieldElement::ONE;
    for _ in 0..t {
        for b in fr.basis_elements() {
            gens.push(field.mul(b, scale));
        }
        scale = field.mul(scale, step);
    }
    let u = Subspace::from_generators(field, &gens)?;
    if u.dim() != r * t {
        return Err(Error::NonDirect { r, t });
    }
    let mipo_degree = field.minimal_polynomial(step, r)?.len() - 1;
    let closed = u.scale_unchecked(step) == u;
    let bf = best_friend_degree(&u)?;
    let is_field = field.n().is_multiple_of(r * t) && u == Subspace::subfield(field, r * t)?;
    Ok(DirectSumClassification {
        subspace: u,
        r,
        l,
        t,
        mipo_degree,
        mipo_degree_is_t: mipo_degree == t,
        closed_under_alpha_l: closed,
        best_friend_degree: bf,
        best_friend_is_r: bf == r,
        is_field,
        predicted_distance: (bf == r).then_some(2 * r),
    })
}

/// A coset `γ·F_{q^{r'}} ⊆ U` with `r'` larger than the best-friend degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetBound {
    pub r_prime: usize,
    pub gamma: FieldElement,
    /// `2(k - r')`.
    pub bound: usize,
}

/// Searches for the largest `r' > r` (`r' | n`, `r' ≤ k`) such that some
/// coset `γ·F_{q^{r'}}` with `γ ∈ U` lies inside `U`; such a coset certifies
/// `d(orb(U)) ≤ 2(k - r')`. Finding nothing proves nothing.
pub fn subfield_coset_upper_bound(u: &Subspace) -> Result<Option<CosetBound>> {
    let r = best_friend_degree(u)?;
    let k = u.dim();
    let field = u.field();
    let candidates: Vec<usize> = field
        .subfield_degrees()
        .into_iter()
        .filter(|&d| d > r && d <= k)
        .rev()
        .collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    let elements = u.elements();
    let echelon = u.row_space().echelon();
    for rp in candidates {
        let sub_basis = Subspace::subfield(field, rp)?.basis_elements();
        for &gamma in elements.iter().skip(1) {
            let inside = sub_basis
                .iter()
                .all(|&b| echelon.contains(&field.phi(field.mul(b, gamma))));
            if inside {
                return Ok(Some(CosetBound {
                    r_prime: rp,
                    gamma,
                    bound: 2 * (k - rp),
                }));
            }
        }
    }
    Ok(None)
}

/// Pairwise distance distribution of an arbitrary code (unordered pairs).
pub fn pairwise_distribution(code: &[Subspace]) -> BTreeMap<usize, u64> {
    let per_row: Vec<BTreeMap<usize, u64>> = (0..code.len())
        .into_par_iter()
        .map(|i| {
            let mut local = BTreeMap::new();
            for b in &code[i + 1..] {
                *local
                    .entry(code[i].row_space().distance(b.row_space()))
                    .or_default() += 1;
            }
            local
        })
        .collect();
    let mut out = BTreeMap::new();
    for m in per_row {
        for (d, c) in m {
            *out.entry(d).or_default() += c;
        }
    }
    out
}

/// Minimum pairwise distance of an arbitrary code; `None` for fewer than two members.
pub fn code_distance(code: &[Subspace]) -> Option<usize> {
    pairwise_distribution(code).keys().next().copied()
}
