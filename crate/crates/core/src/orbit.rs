//! Cyclic orbit codes `orb_β(U) = {Uβ^i}` and their stabilizer structure.
//!
//! Throughout, `β = α^e` is given by its exponent `e` (`beta_log`) with
//! respect to the field's designated element α.

use std::collections::HashSet;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::subspace::{Subspace, SubspaceJson};

/// `|β|` for `β = α^e`.
pub fn beta_order(field: &Field, beta_log: u64) -> u64 {
    field.order_of_power(beta_log)
}

/// True when `β = α^e` generates the whole multiplicative group.
pub fn is_primitive_beta(field: &Field, beta_log: u64) -> bool {
    field.is_primitive() && beta_order(field, beta_log) == field.group_order()
}

/// Orbit length `N` and stabilizer order `|β|/N`. `N` is the least divisor
/// `d` of `|β|` with `Uβ^d = U`.
pub fn stabilizer_order(u: &Subspace, beta_log: u64) -> (u64, u64) {
    let field = u.field();
    let order = beta_order(field, beta_log);
    let m = field.group_order();
    for d in divisors(order) {
        let gamma = field.alpha_pow(((beta_log % m) as u128 * d as u128 % m as u128) as u64);
        if u.scale_unchecked(gamma) == *u {
            return (d, order / d);
        }
    }
    unreachable!("β^|β| = 1 stabilizes every subspace")
}

/// Degree `r` of the best friend F_{q^r}: the largest subfield over which
/// `U` is a vector space.
pub fn best_friend_degree(u: &Subspace) -> Result<usize> {
    if u.dim() == 0 {
        return Err(Error::ZeroSpace);
    }
    let k = u.dim();
    let field = u.field();
    let mut r = 1;
    for d in field.subfield_degrees().into_iter().rev() {
        if k.is_multiple_of(d) && u.is_space_over(d)? {
            r = d;
            break;
        }
    }
    debug_assert_eq!(
        stabilizer_order(u, 1).1,
        (field.q() as u64).pow(r as u32) - 1,
        "best friend disagrees with the stabilizer of α"
    );
    Ok(r)
}

/// All friend degrees, ascending. For `1 ∈ U` these are the divisors of
/// the best-friend degree.
pub fn friends(u: &Subspace) -> Result<Vec<usize>> {
    if u.dim() == 0 {
        return Err(Error::ZeroSpace);
    }
    let mut out = Vec::new();
    for d in u.field().subfield_degrees() {
        if u.dim().is_multiple_of(d) && u.is_space_over(d)? {
            out.push(d);
        }
    }
    Ok(out)
}

/// Degree over F_q of `Stab⁺_β(U) = F_q[β^N]`.
pub fn stab_plus_beta_degree(u: &Subspace, beta_log: u64) -> usize {
    let (n_orbit, _) = stabilizer_order(u, beta_log);
    let field = u.field();
    let m = field.group_order() as u128;
    let gamma = field.alpha_pow((beta_log as u128 * n_orbit as u128 % m) as u64);
    field.degree_of(gamma)
}

/// `|orb_β(U)|`. For primitive β this is `(q^n-1)/(q^r-1)` from the best
/// friend; otherwise the stabilizer is searched over divisors of `|β|`.
pub fn orbit_cardinality(u: &Subspace, beta_log: u64) -> Result<u64> {
    if u.dim() == 0 {
        return Ok(1);
    }
    let field = u.field();
    if is_primitive_beta(field, beta_log) {
        let r = best_friend_degree(u)?;
        return Ok(field.group_order() / ((field.q() as u64).pow(r as u32) - 1));
    }
    Ok(stabilizer_order(u, beta_log).0)
}

/// Summary of the stabilizer structure of a subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitAnalysis {
    pub k: usize,
    pub r: usize,
    pub t: usize,
    pub stab_order: u64,
    pub orbit_size: u64,
    pub friends: Vec<usize>,
    pub stab_beta_plus_degree: usize,
}

pub fn analyze(u: &Subspace, beta_log: u64) -> Result<OrbitAnalysis> {
    let r = best_friend_degree(u)?;
    let (orbit_size, stab_order) = stabilizer_order(u, beta_log);
    Ok(OrbitAnalysis {
        k: u.dim(),
        r,
        t: u.dim() / r,
        stab_order,
        orbit_size,
        friends: friends(u)?,
        stab_beta_plus_degree: stab_plus_beta_degree(u, beta_log),
    })
}

/// The cyclic orbit code generated by a subspace under `⟨β⟩`.
#[derive(Clone, Debug)]
pub struct OrbitCode {
    field: Arc<Field>,
    beta_log: u64,
    generator: Subspace,
    size: u64,
}

impl OrbitCode {
    /// Builds `orb_β(U)`. The generator is rescaled to contain 1 when the
    /// rescaling element lies in `⟨β⟩`, which leaves the member set unchanged.
    pub fn new(generator: &Subspace, beta_log: u64) -> Result<OrbitCode> {
        let field = Arc::clone(generator.field());
        let m = field.group_order();
        let mut gen = generator.clone();
        if gen.dim() > 0 && field.is_primitive() {
            let (normalized, scale) = gen.normalize_contains_one()?;
            let step = (beta_log % m).gcd(&m);
            if field.discrete_log(scale)? % step == 0 {
                gen = normalized;
            }
        }
        let size = orbit_cardinality(&gen, beta_log)?;
        Ok(OrbitCode {
            field,
            beta_log: beta_log % m.max(1),
            generator: gen,
            size,
        })
    }

    /// Keeps the generator exactly as given; member `i` is `Uβ^i`.
    pub fn with_fixed_generator(generator: &Subspace, beta_log: u64) -> Result<OrbitCode> {
        let field = Arc::clone(generator.field());
        let size = orbit_cardinality(generator, beta_log)?;
        Ok(OrbitCode {
            beta_log: beta_log % field.group_order().max(1),
            field,
            generator: generator.clone(),
            size,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn beta_log(&self) -> u64 {
        self.beta_log
    }

    pub fn generator(&self) -> &Subspace {
        &self.generator
    }

    /// Number of distinct members `N`.
    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive_beta(&self.field, self.beta_log)
    }

    /// `β^i`.
    pub fn beta_power(&self, i: u64) -> FieldElement {
        let m = self.field.group_order() as u128;
        self.field
            .alpha_pow((self.beta_log as u128 * i as u128 % m) as u64)
    }

    /// Member `Uβ^i`.
    pub fn member(&self, i: u64) -> Subspace {
        self.generator.scale_unchecked(self.beta_power(i))
    }

    /// Lazily enumerates `Uβ^0, ..., Uβ^{N-1}`.
    pub fn members(&self) -> impl Iterator<Item = Subspace> + '_ {
        (0..self.size).map(move |i| self.member(i))
    }

    pub fn descriptor(&self, distance: Option<usize>) -> Result<CodeDescriptor> {
        let spec = self.field.spec();
        Ok(CodeDescriptor {
            q: spec.q,
            n: spec.n,
            modulus: spec.modulus.clone(),
            beta_log: self.beta_log,
            generator: self.generator.to_json(),
            size: self.size,
            best_friend_degree: best_friend_degree(&self.generator)?,
            distance,
        })
    }
}

/// Enumerates the orbit of `U` under `⟨β⟩`, in exponent order.
pub fn enumerate_orbit(u: &Subspace, beta_log: u64) -> Result<Vec<Subspace>> {
    let code = OrbitCode::with_fixed_generator(u, beta_log)?;
    Ok(code.members().collect())
}

/// Orbit of the subfield F_{q^r}: a spread for primitive β, a partial
/// spread otherwise.
pub fn spread_code(field: &Arc<Field>, r: usize, beta_log: u64) -> Result<OrbitCode> {
    let fr = Subspace::subfield(field, r)?;
    OrbitCode::with_fixed_generator(&fr, beta_log)
}

/// Pairwise trivial intersection.
pub fn is_partial_spread(code: &[Subspace]) -> bool {
    code.iter().enumerate().all(|(i, a)| {
        code[i + 1..]
            .iter()
            .all(|b| a.row_space().intersection_dim(b.row_space()) == 0)
    })
}

/// True when the members are pairwise trivially intersecting and cover
/// every nonzero vector.
pub fn is_spread(code: &[Subspace]) -> bool {
    let Some(first) = code.first() else {
        return false;
    };
    let field = first.field();
    let mut seen = HashSet::new();
    for s in code {
        for e in s.elements().into_iter().skip(1) {
            if !seen.insert(e) {
                return false;
            }
        }
    }
    seen.len() as u64 == field.group_order()
}

/// JSON descriptor of an orbit code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub q: u32,
    pub n: usize,
    pub modulus: Vec<u32>,
    pub beta_log: u64,
    pub generator: SubspaceJson,
    #[serde(rename = "N")]
    pub size: u64,
    pub best_friend_degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
}
