//! Linkage: building longer constant-dimension codes by concatenating the
//! member matrices of shorter ones blockwise.
//!
//! Members are never stored for the linked code. A member is addressed by a
//! tuple of constituent indices (index 0 is the zero block) and materialized
//! on request. Constituent members are raw matrices, since concatenations
//! depend on the chosen representative and not just its row space.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::linalg::{Matrix, MatrixJson, RowSpace};
use crate::orbit::{best_friend_degree, is_primitive_beta, OrbitCode};
use crate::subspace::Subspace;

/// Default cap on members materialized at once.
pub const DEFAULT_MEMBER_CAP: u64 = 1_000_000;

#[derive(Clone, Debug)]
enum Exponents {
    /// `0..N`.
    Range(u64),
    List(Vec<u64>),
}

impl Exponents {
    fn len(&self) -> u64 {
        match self {
            Exponents::Range(n) => *n,
            Exponents::List(v) => v.len() as u64,
        }
    }

    fn get(&self, i: u64) -> u64 {
        match self {
            Exponents::Range(_) => i,
            Exponents::List(v) => v[i as usize],
        }
    }
}

#[derive(Clone, Debug)]
enum Members {
    Explicit(Vec<Matrix>),
    Orbit {
        field: Arc<Field>,
        generator: Matrix,
        beta_log: u64,
        exponents: Exponents,
    },
}

/// Multiplies every row (read as a field element) by `α^e`.
fn shift_rows(field: &Field, m: &Matrix, e: u64) -> Matrix {
    let x = field.alpha_pow(e);
    let mut out = Matrix::zeros(m.q(), 0, m.cols());
    for row in m.row_iter() {
        let a = field.phi_inv(row).expect("row length equals n");
        out.push_row(&field.phi(field.mul(a, x)));
    }
    out
}

/// A constituent code `C_i`: `N_i` rank-`k` matrices with `n_i` columns.
#[derive(Clone, Debug)]
pub struct ConstituentCode {
    q: u32,
    k: usize,
    len: usize,
    members: Members,
    distance: Option<usize>,
    best_friend_degree: Option<usize>,
}

impl ConstituentCode {
    fn check_rank(m: &Matrix, k: usize) -> Result<()> {
        let rank = m.rank();
        if rank != k || m.rows() != k {
            return Err(Error::RankLoss { rank, k });
        }
        Ok(())
    }

    /// Members given as explicit matrices, all `k × n_i` of rank `k`.
    pub fn explicit(members: Vec<Matrix>, distance: Option<usize>) -> Result<ConstituentCode> {
        let first = members.first().ok_or(Error::EmptyGenerators)?;
        let (q, k, len) = (first.q(), first.rows(), first.cols());
        for m in &members {
            if m.q() != q || m.cols() != len {
                return Err(Error::DimensionMismatch(format!(
                    "member is {}x{} over F_{}, expected {k}x{len} over F_{q}",
                    m.rows(),
                    m.cols(),
                    m.q()
                )));
            }
            Self::check_rank(m, k)?;
        }
        Ok(ConstituentCode {
            q,
            k,
            len,
            members: Members::Explicit(members),
            distance,
            best_friend_degree: None,
        })
    }

    /// All members of an orbit code, as `U·β^i` with `U` the generator's RREF basis.
    pub fn from_orbit(code: &OrbitCode, distance: Option<usize>) -> Result<ConstituentCode> {
        let g = code.generator();
        let full = is_primitive_beta(code.field(), code.beta_log());
        Self::orbit_subset(
            code.field(),
            g.basis().clone(),
            code.beta_log(),
            None,
            code.len(),
            distance,
        )
        .map(|mut c| {
            if full {
                c.best_friend_degree = best_friend_degree(g).ok();
            }
            c
        })
    }

    /// Members `G·M^{e·j}` for `j` in `exponents` (or `0..n_members` when absent),
    /// where `M` is the companion matrix and `β = α^e`.
    pub fn orbit_subset(
        field: &Arc<Field>,
        generator: Matrix,
        beta_log: u64,
        exponents: Option<Vec<u64>>,
        n_members: u64,
        distance: Option<usize>,
    ) -> Result<ConstituentCode> {
        if generator.cols() != field.n() || generator.q() != field.q() {
            return Err(Error::DimensionMismatch(format!(
                "generator has {} columns, field degree is {}",
                generator.cols(),
                field.n()
            )));
        }
        let k = generator.rows();
        Self::check_rank(&generator, k)?;
        let exponents = match exponents {
            Some(v) => {
                if v.is_empty() {
                    return Err(Error::EmptyGenerators);
                }
                Exponents::List(v)
            }
            None => Exponents::Range(n_members),
        };
        Ok(ConstituentCode {
            q: field.q(),
            k,
            len: field.n(),
            members: Members::Orbit {
                field: Arc::clone(field),
                generator,
                beta_log,
                exponents,
            },
            distance,
            best_friend_degree: None,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Length `n_i`.
    pub fn n(&self) -> usize {
        self.len
    }

    /// Cardinality `N_i`.
    pub fn size(&self) -> u64 {
        match &self.members {
            Members::Explicit(v) => v.len() as u64,
            Members::Orbit { exponents, .. } => exponents.len(),
        }
    }

    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    pub fn best_friend_degree(&self) -> Option<usize> {
        self.best_friend_degree
    }

    pub fn set_best_friend_degree(&mut self, r: usize) {
        self.best_friend_degree = Some(r);
    }

    /// Member `i` (0-based) as its raw matrix.
    pub fn member(&self, i: u64) -> Matrix {
        match &self.members {
            Members::Explicit(v) => v[i as usize].clone(),
            Members::Orbit {
                field,
                generator,
                beta_log,
                exponents,
            } => {
                let m = field.group_order() as u128;
                let e = (*beta_log as u128 * exponents.get(i) as u128 % m) as u64;
                shift_rows(field, generator, e)
            }
        }
    }

    /// Exhaustive pairwise distance; stores and returns it.
    pub fn verify_distance(&mut self) -> Result<usize> {
        let spaces: Vec<RowSpace> = (0..self.size()).map(|i| RowSpace::new(&self.member(i))).collect();
        let d = min_pairwise_distance(&spaces).unwrap_or(2 * self.k);
        if d == 0 {
            return Err(Error::InvalidInput("constituent has repeated members".into()));
        }
        self.distance = Some(d);
        Ok(d)
    }

    fn to_json(&self) -> ConstituentJson {
        let kind = match &self.members {
            Members::Explicit(v) => ConstituentKind::Explicit {
                members: v.iter().map(|m| m.to_rows()).collect(),
            },
            Members::Orbit {
                field,
                generator,
                beta_log,
                exponents,
            } => ConstituentKind::Orbit {
                field: field.spec().clone(),
                generator: MatrixJson {
                    q: generator.q(),
                    rows: generator.to_rows(),
                },
                beta_log: *beta_log,
                exponents: match exponents {
                    Exponents::Range(_) => None,
                    Exponents::List(v) => Some(v.clone()),
                },
            },
        };
        ConstituentJson {
            n: self.len,
            size: self.size(),
            distance: self.distance,
            best_friend_degree: self.best_friend_degree,
            kind,
        }
    }
}

/// Minimum pairwise subspace distance, `None` for fewer than two members.
pub fn min_pairwise_distance(spaces: &[RowSpace]) -> Option<usize> {
    (0..spaces.len())
        .into_par_iter()
        .filter_map(|i| {
            spaces[i + 1..]
                .iter()
                .map(|b| spaces[i].distance(b))
                .min()
        })
        .min()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// `C_1 ⊛ ... ⊛ C_t`, all block tuples except all-zero.
    Product,
    /// Two codes with the second block running over every power of the
    /// companion matrix.
    Cyclic,
}

/// A linked code, held symbolically.
#[derive(Clone, Debug)]
pub struct LinkedCode {
    construction: Construction,
    constituents: Vec<ConstituentCode>,
    /// Cyclic only: raw `U_2` and the field providing `M`.
    cyclic_tail: Option<(Arc<Field>, Matrix)>,
    k: usize,
    q: u32,
}

/// How a member of a linked code is assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberIndex {
    /// Product: one index per constituent, 0 meaning the zero block and
    /// `j ≥ 1` meaning member `j-1`.
    Tuple(Vec<u64>),
    /// Cyclic, first code padded with zeros.
    First(u64),
    /// Cyclic, second code behind a zero block.
    Second(u64),
    /// Cyclic, `[U_{1,l} | U_2 M^m]`.
    Mixed { l: u64, m: u64 },
}

fn same_k_and_q(cs: &[&ConstituentCode]) -> Result<(usize, u32)> {
    let first = cs.first().ok_or(Error::EmptyGenerators)?;
    for c in cs {
        if c.k != first.k || c.q != first.q {
            return Err(Error::DimensionMismatch(format!(
                "constituents have (k, q) = ({}, {}) and ({}, {})",
                first.k, first.q, c.k, c.q
            )));
        }
    }
    Ok((first.k, first.q))
}

/// `C_1 ⊛ C_2`: cardinality `N_1 + N_2 + N_1 N_2`, distance `min{d_1, d_2}`.
pub fn link_two(c1: &ConstituentCode, c2: &ConstituentCode) -> Result<LinkedCode> {
    link_many(&[c1.clone(), c2.clone()])
}

/// `C_1 ⊛ ... ⊛ C_t`: cardinality `∏(N_i + 1) - 1`, distance `min d_i`.
pub fn link_many(constituents: &[ConstituentCode]) -> Result<LinkedCode> {
    let refs: Vec<&ConstituentCode> = constituents.iter().collect();
    let (k, q) = same_k_and_q(&refs)?;
    Ok(LinkedCode {
        construction: Construction::Product,
        constituents: constituents.to_vec(),
        cyclic_tail: None,
        k,
        q,
    })
}

/// `C_1` linked with `C_2 = {im(U_2 M^j) : j ∈ exponents}` where `M` is the
/// companion matrix of `field2`'s primitive modulus. The mixed part uses
/// every `m ∈ [0, q^{n_2} - 1)`, so the cardinality is
/// `N_1 + N_2 + (q^{n_2} - 1) N_1`.
pub fn link_cyclic(
    c1: &ConstituentCode,
    field2: &Arc<Field>,
    u2: &Matrix,
    exponents: &[u64],
    d2: Option<usize>,
) -> Result<LinkedCode> {
    if !field2.is_primitive() {
        return Err(Error::NonPrimitiveField);
    }
    if u2.rows() != c1.k {
        return Err(Error::DimensionMismatch(format!(
            "U_2 has {} rows, first code has k = {}",
            u2.rows(),
            c1.k
        )));
    }
    if let Some(&e) = exponents.iter().find(|&&e| e >= field2.group_order()) {
        return Err(Error::InvalidInput(format!(
            "exponent {e} outside [0, {})",
            field2.group_order()
        )));
    }
    let c2 = ConstituentCode::orbit_subset(field2, u2.clone(), 1, Some(exponents.to_vec()), 0, d2)?;
    same_k_and_q(&[c1, &c2])?;
    Ok(LinkedCode {
        construction: Construction::Cyclic,
        constituents: vec![c1.clone(), c2],
        cyclic_tail: Some((Arc::clone(field2), u2.clone())),
        k: c1.k,
        q: c1.q,
    })
}

impl LinkedCode {
    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn constituents(&self) -> &[ConstituentCode] {
        &self.constituents
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Total length `Σ n_i`.
    pub fn n(&self) -> usize {
        self.constituents.iter().map(|c| c.len).sum()
    }

    /// Cardinality from the construction's formula.
    pub fn size(&self) -> BigUint {
        match self.construction {
            Construction::Product => {
                let prod = self
                    .constituents
                    .iter()
                    .fold(BigUint::one(), |acc, c| acc * (c.size() + 1));
                prod - 1u32
            }
            Construction::Cyclic => {
                let (n1, n2) = (self.constituents[0].size(), self.constituents[1].size());
                let period = self.cyclic_period();
                BigUint::from(n1) + n2 + BigUint::from(period) * n1
            }
        }
    }

    fn cyclic_period(&self) -> u64 {
        self.cyclic_tail
            .as_ref()
            .map(|(f, _)| f.group_order())
            .unwrap_or(0)
    }

    /// `min d_i` when every constituent distance is known.
    pub fn distance(&self) -> Option<usize> {
        self.constituents
            .iter()
            .map(|c| c.distance)
            .collect::<Option<Vec<_>>>()
            .and_then(|v| v.into_iter().min())
    }

    /// Decodes a flat index in `[0, N)`.
    pub fn index(&self, i: &BigUint) -> Result<MemberIndex> {
        if *i >= self.size() {
            return Err(Error::InvalidInput(format!("member index {i} out of range")));
        }
        match self.construction {
            Construction::Product => {
                // mixed radix over (N_i + 1), skipping the all-zero tuple
                let mut x = i + 1u32;
                let mut tuple = Vec::with_capacity(self.constituents.len());
                for c in &self.constituents {
                    let radix = BigUint::from(c.size() + 1);
                    tuple.push((&x % &radix).to_u64().unwrap());
                    x /= radix;
                }
                Ok(MemberIndex::Tuple(tuple))
            }
            Construction::Cyclic => {
                let i = i.to_u64().ok_or_else(|| Error::TooLarge("member index".into()))?;
                let (n1, n2) = (self.constituents[0].size(), self.constituents[1].size());
                Ok(if i < n1 {
                    MemberIndex::First(i)
                } else if i < n1 + n2 {
                    MemberIndex::Second(i - n1)
                } else {
                    let j = i - n1 - n2;
                    let p = self.cyclic_period();
                    MemberIndex::Mixed { l: j / p, m: j % p }
                })
            }
        }
    }

    fn zero_block(&self, cols: usize) -> Matrix {
        Matrix::zeros(self.q, self.k, cols)
    }

    /// The `k × n` member matrix for an index.
    pub fn member_matrix(&self, idx: &MemberIndex) -> Result<Matrix> {
        let cs = &self.constituents;
        let m = match (self.construction, idx) {
            (Construction::Product, MemberIndex::Tuple(t)) => {
                if t.len() != cs.len() || t.iter().all(|&x| x == 0) {
                    return Err(Error::InvalidInput(format!("bad index tuple {t:?}")));
                }
                let mut out = Matrix::zeros(self.q, self.k, 0);
                for (c, &l) in cs.iter().zip(t) {
                    if l > c.size() {
                        return Err(Error::InvalidInput(format!("tuple entry {l} > {}", c.size())));
                    }
                    let block = if l == 0 { self.zero_block(c.len) } else { c.member(l - 1) };
                    out = out.hstack(&block);
                }
                out
            }
            (Construction::Cyclic, MemberIndex::First(l)) => {
                cs[0].member(*l).hstack(&self.zero_block(cs[1].len))
            }
            (Construction::Cyclic, MemberIndex::Second(j)) => {
                self.zero_block(cs[0].len).hstack(&cs[1].member(*j))
            }
            (Construction::Cyclic, MemberIndex::Mixed { l, m }) => {
                let (f2, u2) = self.cyclic_tail.as_ref().unwrap();
                cs[0].member(*l).hstack(&shift_rows(f2, u2, *m))
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "index {idx:?} does not fit a {:?} code",
                    self.construction
                )))
            }
        };
        Ok(m)
    }

    pub fn member(&self, i: &BigUint) -> Result<Matrix> {
        self.member_matrix(&self.index(i)?)
    }

    /// A uniformly random member index.
    pub fn random_index<R: Rng>(&self, rng: &mut R) -> MemberIndex {
        match self.construction {
            Construction::Product => loop {
                let t: Vec<u64> = self
                    .constituents
                    .iter()
                    .map(|c| rng.random_range(0..=c.size()))
                    .collect();
                if t.iter().any(|&x| x != 0) {
                    return MemberIndex::Tuple(t);
                }
            },
            Construction::Cyclic => {
                let total = self.size().to_u64().expect("cyclic linkage fits in u64");
                self.index(&BigUint::from(rng.random_range(0..total))).unwrap()
            }
        }
    }

    /// All member matrices, refused above `cap`.
    pub fn materialize(&self, cap: u64) -> Result<Vec<Matrix>> {
        let n = self.size();
        let count = n.to_u64().filter(|&c| c <= cap).ok_or_else(|| {
            Error::TooLarge(format!("{n} members exceed the materialization cap {cap}"))
        })?;
        (0..count)
            .into_par_iter()
            .map(|i| self.member(&BigUint::from(i)))
            .collect()
    }

    /// Canonical row spaces of every member.
    pub fn subspaces(&self, cap: u64) -> Result<Vec<RowSpace>> {
        let ms = self.materialize(cap)?;
        let spaces: Vec<RowSpace> = ms.par_iter().map(RowSpace::new).collect();
        if let Some(s) = spaces.iter().find(|s| s.dim() != self.k) {
            return Err(Error::RankLoss { rank: s.dim(), k: self.k });
        }
        Ok(spaces)
    }

    /// Exhaustive pairwise distance over all members.
    pub fn verify_distance(&self, cap: u64) -> Result<usize> {
        let spaces = self.subspaces(cap)?;
        Ok(min_pairwise_distance(&spaces).unwrap_or(2 * self.k))
    }

    /// Distances of `pairs` random distinct member pairs.
    pub fn spot_check<R: Rng>(&self, rng: &mut R, pairs: usize) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(pairs);
        while out.len() < pairs {
            let (a, b) = (self.random_index(rng), self.random_index(rng));
            if a == b {
                continue;
            }
            let va = RowSpace::new(&self.member_matrix(&a)?);
            let vb = RowSpace::new(&self.member_matrix(&b)?);
            if va.dim() != self.k || vb.dim() != self.k {
                return Err(Error::RankLoss { rank: va.dim().min(vb.dim()), k: self.k });
            }
            out.push(va.distance(&vb));
        }
        Ok(out)
    }

    /// Re-wraps a small linked code as a constituent with explicit members.
    pub fn to_constituent(&self, cap: u64) -> Result<ConstituentCode> {
        ConstituentCode::explicit(self.materialize(cap)?, self.distance())
    }

    pub fn to_json(&self, member_cap: Option<u64>) -> Result<LinkedCodeJson> {
        let members = match member_cap {
            Some(cap) => Some(
                self.subspaces(cap)?
                    .into_iter()
                    .map(|s| s.basis().to_rows())
                    .collect(),
            ),
            None => None,
        };
        Ok(LinkedCodeJson {
            construction: self.construction,
            q: self.q,
            n: self.n(),
            k: self.k,
            size: self.size().to_string(),
            distance: self.distance(),
            constituents: self.constituents.iter().map(|c| c.to_json()).collect(),
            index_algebra: match self.construction {
                Construction::Product => {
                    "tuples (l_1..l_t), 0 <= l_i <= N_i, not all zero; l_i = 0 is the zero block".into()
                }
                Construction::Cyclic => {
                    "[C1 | 0], [0 | C2], and [U_{1,l} | U_2 M^m] for all l < N_1, m < q^{n_2} - 1".into()
                }
            },
            members,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConstituentKind {
    Explicit {
        members: Vec<Vec<Vec<u8>>>,
    },
    Orbit {
        field: FieldSpec,
        generator: MatrixJson,
        beta_log: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponents: Option<Vec<u64>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstituentJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub size: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_friend_degree: Option<usize>,
    #[serde(flatten)]
    pub kind: ConstituentKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkedCodeJson {
    pub construction: Construction,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    /// Decimal string; may exceed 64 bits.
    #[serde(rename = "N")]
    pub size: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    pub constituents: Vec<ConstituentJson>,
    pub index_algebra: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<Vec<u8>>>>,
}

/// Result of checking the orbit structure of a product linkage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionOfOrbits {
    /// Member set is closed under `diag(M_1, ..., M_t)`.
    pub closed: bool,
    /// Order of the cyclic group generated by `diag(M_1, ..., M_t)`.
    pub group_order: u64,
    pub orbit_count: usize,
    /// Orbit sizes in first-seen order.
    pub orbit_sizes: Vec<u64>,
}

/// For binary product linkages of full primitive orbit codes with coprime
/// lengths, checks that the member set is a union of orbits under the
/// block-diagonal companion matrix and counts the orbits.
pub fn verify_union_of_orbits(code: &LinkedCode, fields: &[Arc<Field>], cap: u64) -> Result<UnionOfOrbits> {
    use num_integer::Integer;
    if code.construction != Construction::Product {
        return Err(Error::UnsupportedParameters("only product linkages are unions of orbits".into()));
    }
    if code.q != 2 {
        return Err(Error::UnsupportedParameters(format!("needs q = 2, got q = {}", code.q)));
    }
    let cs = code.constituents();
    if fields.len() != cs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} fields for {} constituents",
            fields.len(),
            cs.len()
        )));
    }
    let g = cs.iter().fold(0usize, |g, c| g.gcd(&c.len));
    if g != 1 {
        return Err(Error::UnsupportedParameters(format!(
            "gcd of the lengths is {g}; the block-diagonal group is not cyclic"
        )));
    }
    for (c, f) in cs.iter().zip(fields) {
        if f.n() != c.len || !f.is_primitive() {
            return Err(Error::UnsupportedParameters(format!(
                "field F_{}^{} does not match a length-{} constituent",
                f.q(),
                f.n(),
                c.len
            )));
        }
        let full = c
            .best_friend_degree
            .map(|r| f.group_order() / ((1u64 << r) - 1));
        if full != Some(c.size()) {
            return Err(Error::UnsupportedParameters(
                "constituents must be full primitive orbit codes".into(),
            ));
        }
    }
    let spaces = code.subspaces(cap)?;
    let lookup: HashMap<&RowSpace, usize> = spaces.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let act = |s: &RowSpace| -> RowSpace {
        let mut out = Matrix::zeros(2, s.dim(), 0);
        let mut col = 0;
        for (c, f) in cs.iter().zip(fields) {
            let mut block = Matrix::zeros(2, s.dim(), c.len);
            for r in 0..s.dim() {
                block.row_mut(r).copy_from_slice(&s.basis().row(r)[col..col + c.len]);
            }
            out = out.hstack(&shift_rows(f, &block, 1));
            col += c.len;
        }
        RowSpace::new(&out)
    };
    let group_order = fields
        .iter()
        .fold(1u64, |acc, f| acc.lcm(&f.group_order()));
    let mut seen = vec![false; spaces.len()];
    let mut closed = true;
    let mut orbit_sizes = Vec::new();
    for start in 0..spaces.len() {
        if seen[start] {
            continue;
        }
        let mut size = 0u64;
        let mut cur = start;
        loop {
            seen[cur] = true;
            size += 1;
            let next = act(&spaces[cur]);
            match lookup.get(&next) {
                Some(&j) if j == start => break,
                Some(&j) if !seen[j] => cur = j,
                Some(_) => {
                    closed = false;
                    break;
                }
                None => {
                    closed = false;
                    break;
                }
            }
        }
        orbit_sizes.push(size);
    }
    Ok(UnionOfOrbits {
        closed,
        group_order,
        orbit_count: orbit_sizes.len(),
        orbit_sizes,
    })
}

/// Comparison of a product linkage of full orbit codes with `(q^n-1)/(q-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityCheck {
    pub size: BigUint,
    pub bound: BigUint,
    pub holds: bool,
    pub equality: bool,
    pub slack: BigUint,
    /// `q = 2` and every constituent has best friend F_2.
    pub equality_predicted: bool,
}

pub fn check_cardinality_bound(code: &LinkedCode) -> Result<CardinalityCheck> {
    if code.construction != Construction::Product {
        return Err(Error::UnsupportedParameters("bound applies to product linkages".into()));
    }
    let degrees: Vec<usize> = code
        .constituents
        .iter()
        .map(|c| c.best_friend_degree)
        .collect::<Option<_>>()
        .ok_or_else(|| Error::UnsupportedParameters("constituent best friend unknown".into()))?;
    let q = BigUint::from(code.q);
    let bound = (q.pow(code.n() as u32) - 1u32) / (q - 1u32);
    let size = code.size();
    let holds = size <= bound;
    let slack = if holds { &bound - &size } else { BigUint::zero() };
    Ok(CardinalityCheck {
        equality: size == bound,
        holds,
        slack,
        size,
        bound,
        equality_predicted: code.q == 2 && degrees.iter().all(|&r| r == 1),
    })
}

/// Selects a partial spread from an orbit: exactly `accept_list` when given
/// (validated), otherwise a greedy scan over ascending exponents.
pub fn greedy_partial_spread(code: &OrbitCode, accept_list: Option<&[u64]>) -> Result<ConstituentCode> {
    let mut chosen: Vec<(u64, Subspace)> = Vec::new();
    match accept_list {
        Some(list) => {
            for &j in list {
                let s = code.member(j);
                if let Some((i, _)) = chosen
                    .iter()
                    .find(|(_, t)| t.row_space().intersection_dim(s.row_space()) != 0)
                {
                    return Err(Error::NotPartialSpread(*i, j));
                }
                chosen.push((j, s));
            }
        }
        None => {
            for j in 0..code.len() {
                let s = code.member(j);
                if chosen
                    .iter()
                    .all(|(_, t)| t.row_space().intersection_dim(s.row_space()) == 0)
                {
                    chosen.push((j, s));
                }
            }
        }
    }
    let k = code.generator().dim();
    ConstituentCode::orbit_subset(
        code.field(),
        code.generator().basis().clone(),
        code.beta_log(),
        Some(chosen.into_iter().map(|(j, _)| j).collect()),
        0,
        Some(2 * k),
    )
}

/// Member counts per distance over all unordered pairs of a small linked code.
pub fn linked_distance_distribution(code: &LinkedCode, cap: u64) -> Result<BTreeMap<usize, u64>> {
    let spaces = code.subspaces(cap)?;
    let per: Vec<BTreeMap<usize, u64>> = (0..spaces.len())
        .into_par_iter()
        .map(|i| {
            let mut m = BTreeMap::new();
            for b in &spaces[i + 1..] {
                *m.entry(spaces[i].distance(b)).or_default() += 1;
            }
            m
        })
        .collect();
    let mut out = BTreeMap::new();
    for m in per {
        for (d, c) in m {
            *out.entry(d).or_default() += c;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::orbit::spread_code;
    use std::collections::HashSet;

    fn f64() -> Arc<Field> {
        Arc::new(make_field(2, 6, Some(&[1, 1, 0, 0, 0, 0, 1])).unwrap())
    }

    fn spread6() -> ConstituentCode {
        let code = spread_code(&f64(), 3, 1).unwrap();
        ConstituentCode::from_orbit(&code, Some(6)).unwrap()
    }

    fn small(n: usize) -> ConstituentCode {
        let f = Arc::new(make_field(2, n, None).unwrap());
        let u = Subspace::from_generators(&f, &[f.alpha_pow(0)]).unwrap();
        ConstituentCode::from_orbit(&OrbitCode::new(&u, 1).unwrap(), Some(2)).unwrap()
    }

    #[test]
    fn two_spreads() {
        let s = spread6();
        assert_eq!(s.size(), 9);
        let l = link_two(&s, &s).unwrap();
        assert_eq!(l.size(), BigUint::from(99u32));
        assert_eq!(l.n(), 12);
        assert_eq!(l.distance(), Some(6));
        assert_eq!(l.verify_distance(1000).unwrap(), 6);
    }

    #[test]
    fn three_spreads() {
        let s = spread6();
        let l = link_many(&[s.clone(), s.clone(), s]).unwrap();
        assert_eq!(l.size(), BigUint::from(999u32));
    }

    #[test]
    fn associativity_on_small_codes() {
        let (a, b, c) = (small(2), small(3), small(2));
        let ab = link_two(&a, &b).unwrap().to_constituent(1000).unwrap();
        let left: HashSet<RowSpace> = link_two(&ab, &c).unwrap().subspaces(1000).unwrap().into_iter().collect();
        let flat: HashSet<RowSpace> = link_many(&[a, b, c]).unwrap().subspaces(1000).unwrap().into_iter().collect();
        assert_eq!(left.len(), 4 * 8 * 4 - 1);
        assert_eq!(left, flat);
    }

    #[test]
    fn mismatched_k_rejected() {
        let r = link_two(&spread6(), &small(3));
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn union_of_orbits_lengths_two_and_three() {
        let (a, b) = (small(2), small(3));
        let fa = Arc::new(make_field(2, 2, None).unwrap());
        let fb = Arc::new(make_field(2, 3, None).unwrap());
        let l = link_two(&a, &b).unwrap();
        let u = verify_union_of_orbits(&l, &[fa, fb], 1000).unwrap();
        assert!(u.closed);
        assert_eq!(u.group_order, 21);
        assert_eq!(u.orbit_count, 3);
        let check = check_cardinality_bound(&l).unwrap();
        assert!(check.equality && check.equality_predicted);
    }

    #[test]
    fn union_of_orbits_needs_coprime_lengths() {
        let (a, b) = (small(2), small(4));
        let fa = Arc::new(make_field(2, 2, None).unwrap());
        let fb = Arc::new(make_field(2, 4, None).unwrap());
        let l = link_two(&a, &b).unwrap();
        assert!(matches!(
            verify_union_of_orbits(&l, &[fa, fb], 1000),
            Err(Error::UnsupportedParameters(_))
        ));
    }

    #[test]
    fn cyclic_with_single_exponent() {
        let s = spread6();
        let f7 = Arc::new(make_field(2, 7, None).unwrap());
        let u = Subspace::from_generators(&f7, &[f7.alpha_pow(0), f7.alpha_pow(1), f7.alpha_pow(3)]).unwrap();
        let l = link_cyclic(&s, &f7, u.basis(), &[0], Some(6)).unwrap();
        assert_eq!(l.size(), BigUint::from(9u32 + 1 + 127 * 9));
        let m = l.member(&BigUint::from(10u32)).unwrap();
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn accept_list_collision_reported() {
        let f = f64();
        let u = Subspace::from_generators(&f, &[f.alpha_pow(0), f.alpha_pow(1), f.alpha_pow(4)]).unwrap();
        let code = OrbitCode::new(&u, 1).unwrap();
        assert!(greedy_partial_spread(&code, Some(&[0])).is_ok());
        assert!(matches!(
            greedy_partial_spread(&code, Some(&[0, 1])),
            Err(Error::NotPartialSpread(0, 1))
        ));
        let g = greedy_partial_spread(&code, None).unwrap();
        assert!(g.size() >= 1);
    }
}
