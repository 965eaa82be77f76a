//! F_q-subspaces of F_{q^n}, identified with row spaces in F_q^n through the
//! coordinate map φ.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, RowSpace};

/// A subspace of F_{q^n} in canonical (RREF) form.
#[derive(Clone)]
pub struct Subspace {
    field: Arc<Field>,
    space: RowSpace,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && *self.field == *other.field
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.space.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .space
            .basis()
            .row_iter()
            .map(|r| r.iter().map(|d| d.to_string()).collect())
            .collect();
        write!(f, "Subspace(k={}, [{}])", self.dim(), rows.join(" "))
    }
}

impl Subspace {
    /// Span of `φ(g)` over the generators; the zero space if all are zero.
    pub fn from_generators(field: &Arc<Field>, gens: &[FieldElement]) -> Result<Subspace> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut m = Matrix::zeros(field.q(), 0, field.n());
        for &g in gens {
            m.push_row(&field.phi(g));
        }
        Ok(Subspace::from_row_space(field, RowSpace::new(&m)))
    }

    pub fn from_matrix(field: &Arc<Field>, m: &Matrix) -> Result<Subspace> {
        if m.cols() != field.n() {
            return Err(Error::WrongLength {
                expected: field.n(),
                found: m.cols(),
            });
        }
        if m.q() != field.q() {
            return Err(Error::FieldMismatch);
        }
        Ok(Subspace::from_row_space(field, RowSpace::new(m)))
    }

    pub fn from_rows<R: AsRef<[u8]>>(field: &Arc<Field>, rows: &[R]) -> Result<Subspace> {
        let m = Matrix::from_rows(field.q(), field.n(), rows)?;
        Subspace::from_matrix(field, &m)
    }

    pub(crate) fn from_row_space(field: &Arc<Field>, space: RowSpace) -> Subspace {
        Subspace {
            field: Arc::clone(field),
            space,
        }
    }

    pub fn zero(field: &Arc<Field>) -> Subspace {
        Subspace::from_row_space(field, RowSpace::zero(field.q(), field.n()))
    }

    pub fn whole(field: &Arc<Field>) -> Subspace {
        Subspace::from_row_space(field, RowSpace::full(field.q(), field.n()))
    }

    /// The subfield F_{q^r}, spanned by `1, g, ..., g^{r-1}` for a generator
    /// `g` of its multiplicative group.
    pub fn subfield(field: &Arc<Field>, r: usize) -> Result<Subspace> {
        let g = field.subfield_generator(r)?;
        let mut gens = Vec::with_capacity(r);
        let mut x = FieldElement::ONE;
        for _ in 0..r {
            gens.push(x);
            x = field.mul(x, g);
        }
        let s = Subspace::from_generators(field, &gens)?;
        debug_assert_eq!(s.dim(), r);
        Ok(s)
    }

    /// `Σ α^{e_i} F_{q^{r_i}}` for terms `(e_i, r_i)`. The sum need not be direct.
    pub fn sum_of_cosets(field: &Arc<Field>, terms: &[(u64, usize)]) -> Result<Subspace> {
        if terms.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut gens = Vec::new();
        for &(e, r) in terms {
            let shift = field.alpha_pow(e);
            for b in Subspace::subfield(field, r)?.basis_elements() {
                gens.push(field.mul(b, shift));
            }
        }
        Subspace::from_generators(field, &gens)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn row_space(&self) -> &RowSpace {
        &self.space
    }

    pub fn basis(&self) -> &Matrix {
        self.space.basis()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The basis rows as field elements.
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        self.basis()
            .row_iter()
            .map(|r| self.field.phi_inv(r).expect("basis row has length n"))
            .collect()
    }

    /// Every element of the subspace, zero first.
    pub fn elements(&self) -> Vec<FieldElement> {
        let basis = self.basis_elements();
        let q = self.field.q() as usize;
        let mut out = vec![FieldElement::ZERO];
        for b in basis {
            let len = out.len();
            for c in 1..q {
                let cb = self.field.scale(b, c as u32);
                for i in 0..len {
                    let v = self.field.add(out[i], cb);
                    out.push(v);
                }
            }
        }
        out
    }

    fn check_same_field(&self, other: &Subspace) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_field(other)?;
        Ok(Subspace::from_row_space(
            &self.field,
            self.space.intersection(&other.space),
        ))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_field(other)?;
        Ok(Subspace::from_row_space(&self.field, self.space.sum(&other.space)))
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_same_field(other)?;
        Ok(self.space.intersection_dim(&other.space))
    }

    pub fn contains_element(&self, a: FieldElement) -> bool {
        self.space.contains_vector(&self.field.phi(a))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_same_field(other)?;
        Ok(self.space.contains(&other.space))
    }

    /// `dim V + dim W - 2 dim(V ∩ W)`.
    pub fn distance(&self, other: &Subspace) -> Result<usize> {
        self.check_same_field(other)?;
        Ok(self.space.distance(&other.space))
    }

    /// Orthogonal complement of φ(V) under the standard dot product.
    pub fn dual(&self) -> Subspace {
        Subspace::from_row_space(&self.field, self.space.dual())
    }

    /// `Vγ = {vγ : v ∈ V}`.
    pub fn scalar_multiply(&self, gamma: FieldElement) -> Result<Subspace> {
        if gamma.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(self.scale_unchecked(gamma))
    }

    pub(crate) fn scale_unchecked(&self, gamma: FieldElement) -> Subspace {
        if gamma == FieldElement::ONE {
            return self.clone();
        }
        let f = &self.field;
        let mut m = Matrix::zeros(f.q(), 0, f.n());
        for b in self.basis_elements() {
            m.push_row(&f.phi(f.mul(b, gamma)));
        }
        Subspace::from_row_space(f, RowSpace::new(&m))
    }

    /// Rescales V so that it contains 1. Returns `(V·u⁻¹, u⁻¹)` where `u` is
    /// the nonzero element with lexicographically smallest coordinate vector,
    /// or `(V, 1)` if `1 ∈ V` already.
    pub fn normalize_contains_one(&self) -> Result<(Subspace, FieldElement)> {
        if self.dim() == 0 {
            return Err(Error::ZeroSpace);
        }
        if self.contains_element(FieldElement::ONE) {
            return Ok((self.clone(), FieldElement::ONE));
        }
        // The smallest nonzero vector has its leading entry as far right as
        // possible: it is the last RREF row (its pivot entry is 1).
        let last = self.basis().row(self.dim() - 1);
        let u = self.field.phi_inv(last)?;
        let u_inv = self.field.inv(u)?;
        Ok((self.scale_unchecked(u_inv), u_inv))
    }

    /// True iff V is a vector space over the subfield F_{q^r}.
    pub fn is_space_over(&self, r: usize) -> Result<bool> {
        let g = self.field.subfield_generator(r)?;
        Ok(self.scale_unchecked(g) == *self)
    }

    pub fn to_json(&self) -> SubspaceJson {
        let gen_logs = if self.field.is_primitive() {
            self.basis_elements()
                .into_iter()
                .map(|e| self.field.discrete_log(e))
                .collect::<Result<Vec<_>>>()
                .ok()
        } else {
            None
        };
        SubspaceJson {
            k: self.dim(),
            rows: self.basis().to_rows(),
            gen_logs,
        }
    }

    pub fn from_json(field: &Arc<Field>, json: &SubspaceJson) -> Result<Subspace> {
        let s = if json.rows.is_empty() {
            match &json.gen_logs {
                Some(logs) if !logs.is_empty() => {
                    let gens: Vec<_> = logs.iter().map(|&e| field.alpha_pow(e)).collect();
                    Subspace::from_generators(field, &gens)?
                }
                _ => Subspace::zero(field),
            }
        } else {
            Subspace::from_rows(field, &json.rows)?
        };
        if s.dim() != json.k {
            return Err(Error::InvalidInput(format!(
                "declared k = {} but rows span dimension {}",
                json.k,
                s.dim()
            )));
        }
        Ok(s)
    }
}

/// Serialized form: `{"k", "rows", "gen_logs"?}` with `rows` in RREF.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub k: usize,
    pub rows: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_logs: Option<Vec<u64>>,
}
