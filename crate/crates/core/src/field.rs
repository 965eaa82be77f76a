//! Arithmetic in the extension field F_{q^n} for prime `q`.
//!
//! Elements are stored packed: the coefficient vector `(a_0, ..., a_{n-1})`
//! of `Σ a_i α^i` becomes the integer `Σ a_i q^i`. For q = 2 this is simply
//! a bit mask. When `q^n` is at most the table threshold, multiplication and
//! discrete logarithms go through log/antilog tables; larger fields fall
//! back to polynomial arithmetic and baby-step/giant-step logarithms.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, prime_factors};
use crate::error::{Error, Result};
use crate::linalg::{is_prime, Matrix, MAX_PRIME};

/// Default upper bound on `q^n` for building log/antilog tables.
pub const DEFAULT_TABLE_THRESHOLD: u64 = 1 << 22;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 40;

/// Parameters of an extension field: base size, degree and the monic
/// modulus (coefficients low-degree-first, length `n + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub q: u32,
    pub n: usize,
    pub modulus: Vec<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub non_primitive_allowed: bool,
}

impl FieldSpec {
    pub fn new(q: u32, n: usize, modulus: Vec<u32>) -> FieldSpec {
        FieldSpec {
            q,
            n,
            modulus,
            non_primitive_allowed: false,
        }
    }

    /// Parses the inline form `"q,n,c0,c1,...,cn"`.
    pub fn parse_inline(s: &str) -> Result<FieldSpec> {
        let nums: Vec<u64> = s
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidInput(format!("field spec {s:?}: {e}")))?;
        if nums.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "field spec {s:?}: expected q,n,c0,...,cn"
            )));
        }
        let (q, n) = (nums[0] as u32, nums[1] as usize);
        let modulus: Vec<u32> = nums[2..].iter().map(|&c| c as u32).collect();
        Ok(FieldSpec::new(q, n, modulus))
    }

    pub fn to_inline(&self) -> String {
        let mut parts = vec![self.q.to_string(), self.n.to_string()];
        parts.extend(self.modulus.iter().map(|c| c.to_string()));
        parts.join(",")
    }
}

/// An element of F_{q^n}, packed as `Σ a_i q^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub(crate) u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed index `Σ a_i q^i`.
    pub fn index(self) -> u64 {
        self.0
    }
}

struct Tables {
    log: Vec<u32>,
    antilog: Vec<u32>,
}

struct BabySteps {
    step: u64,
    baby: HashMap<u64, u64>,
    giant: FieldElement,
}

/// Knobs for [`Field::with_options`].
#[derive(Clone, Copy, Debug)]
pub struct FieldOptions {
    pub table_threshold: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            table_threshold: DEFAULT_TABLE_THRESHOLD,
        }
    }
}

/// The field F_{q^n} = F_q[x]/(f) with designated element α = x mod f.
pub struct Field {
    spec: FieldSpec,
    size: u64,
    qpow: Vec<u64>,
    primitive: bool,
    /// packed `-t·(f_0,...,f_{n-1})` for each top digit t, used by `mul_alpha`
    fold: Vec<u64>,
    tables: Option<Tables>,
    bsgs: OnceLock<BabySteps>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.spec.q)
            .field("n", &self.spec.n)
            .field("modulus", &self.spec.modulus)
            .field("primitive", &self.primitive)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec.q == other.spec.q
            && self.spec.n == other.spec.n
            && self.spec.modulus == other.spec.modulus
    }
}

impl Eq for Field {}

/// Builds F_{q^n}; without a modulus, the lexicographically smallest
/// primitive polynomial (compared from the constant term upward) is used.
pub fn make_field(q: u32, n: usize, modulus: Option<&[u32]>) -> Result<Field> {
    let modulus = match modulus {
        Some(m) => m.to_vec(),
        None => smallest_primitive_polynomial(q, n)?,
    };
    Field::new(FieldSpec::new(q, n, modulus))
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        Field::with_options(spec, FieldOptions::default())
    }

    pub fn with_options(spec: FieldSpec, opts: FieldOptions) -> Result<Field> {
        let (q, n) = (spec.q, spec.n);
        if !is_prime(q as u64) {
            return Err(Error::NonPrime(q as u64));
        }
        if q > MAX_PRIME {
            return Err(Error::InvalidInput(format!(
                "base field size {q} above supported maximum {MAX_PRIME}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidModulus("extension degree must be >= 1".into()));
        }
        let size = (q as u64)
            .checked_pow(n as u32)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or(Error::FieldTooLarge { q, n })?;
        if spec.modulus.len() != n + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, found {}",
                n + 1,
                spec.modulus.len()
            )));
        }
        if spec.modulus[n] != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if spec.modulus.iter().any(|&c| c >= q) {
            return Err(Error::InvalidModulus(format!(
                "coefficient out of range for q = {q}"
            )));
        }
        if !poly::is_irreducible(&spec.modulus, q) {
            return Err(Error::Reducible(spec.modulus.clone()));
        }
        let primitive = poly::is_primitive(&spec.modulus, q, size);
        if !primitive && !spec.non_primitive_allowed {
            return Err(Error::NotPrimitive(spec.modulus.clone()));
        }

        let qpow: Vec<u64> = (0..=n as u32).map(|i| (q as u64).pow(i)).collect();
        let mut field = Field {
            spec,
            size,
            qpow,
            primitive,
            fold: Vec::new(),
            tables: None,
            bsgs: OnceLock::new(),
        };
        field.fold = (0..q)
            .map(|t| {
                let digits: Vec<u8> = field.spec.modulus[..n]
                    .iter()
                    .map(|&f| ((q - (t * f) % q) % q) as u8)
                    .collect();
                field.pack(&digits)
            })
            .collect();
        if primitive && size <= opts.table_threshold {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let m = (self.size - 1) as usize;
        let mut log = vec![0u32; self.size as usize];
        let mut antilog = vec![0u32; m];
        let mut x = FieldElement::ONE;
        for (i, slot) in antilog.iter_mut().enumerate() {
            *slot = x.0 as u32;
            log[x.0 as usize] = i as u32;
            x = self.mul_alpha(x);
        }
        debug_assert_eq!(x, FieldElement::ONE);
        Tables { log, antilog }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u32 {
        self.spec.q
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Number of elements `q^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Order of the multiplicative group, `q^n - 1`.
    pub fn group_order(&self) -> u64 {
        self.size - 1
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    // --- representation ---------------------------------------------------

    pub(crate) fn pack(&self, digits: &[u8]) -> u64 {
        digits
            .iter()
            .zip(&self.qpow)
            .map(|(&d, &p)| d as u64 * p)
            .sum()
    }

    #[inline]
    fn digit(&self, a: u64, i: usize) -> u64 {
        (a / self.qpow[i]) % self.spec.q as u64
    }

    pub fn element_from_index(&self, index: u64) -> Result<FieldElement> {
        if index >= self.size {
            return Err(Error::InvalidInput(format!(
                "element index {index} out of range for field of size {}",
                self.size
            )));
        }
        Ok(FieldElement(index))
    }

    /// Builds `Σ c_i α^i` from coefficients (low-degree-first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.n() {
            return Err(Error::WrongLength {
                expected: self.n(),
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|&c| c >= self.q()) {
            return Err(Error::InvalidInput(format!(
                "coefficient out of range for q = {}",
                self.q()
            )));
        }
        let digits: Vec<u8> = coeffs.iter().map(|&c| c as u8).collect();
        Ok(FieldElement(self.pack(&digits)))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        (0..self.n()).map(|i| self.digit(a.0, i) as u32).collect()
    }

    /// Coordinate vector `(a_0, ..., a_{n-1})` with respect to `1, α, ..., α^{n-1}`.
    pub fn phi(&self, a: FieldElement) -> Vec<u8> {
        if self.q() == 2 {
            return (0..self.n()).map(|i| ((a.0 >> i) & 1) as u8).collect();
        }
        (0..self.n()).map(|i| self.digit(a.0, i) as u8).collect()
    }

    pub fn phi_inv(&self, v: &[u8]) -> Result<FieldElement> {
        if v.len() != self.n() {
            return Err(Error::WrongLength {
                expected: self.n(),
                found: v.len(),
            });
        }
        if v.iter().any(|&d| d as u32 >= self.q()) {
            return Err(Error::InvalidInput("digit out of range".into()));
        }
        Ok(FieldElement(self.pack(v)))
    }

    /// Embeds a base-field scalar `c ∈ F_q`.
    pub fn scalar(&self, c: u32) -> FieldElement {
        FieldElement((c % self.q()) as u64)
    }

    /// The residue class of the indeterminate.
    pub fn alpha(&self) -> FieldElement {
        if self.n() == 1 {
            // x ≡ -c0 mod (x + c0)
            let q = self.q();
            return FieldElement(((q - self.spec.modulus[0]) % q) as u64);
        }
        FieldElement(self.spec.q as u64)
    }

    /// `α^e` with `e` taken modulo the group order.
    pub fn alpha_pow(&self, e: u64) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.antilog[(e % self.group_order()) as usize] as u64),
            None => self.pow(self.alpha(), e),
        }
    }

    // --- arithmetic -------------------------------------------------------

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.spec.q == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let q = self.spec.q as u64;
        let (mut x, mut y, mut out) = (a.0, b.0, 0u64);
        for &p in &self.qpow[..self.n()] {
            let d = (x % q + y % q) % q;
            out += d * p;
            x /= q;
            y /= q;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.spec.q == 2 {
            return a;
        }
        let q = self.spec.q as u64;
        let (mut x, mut out) = (a.0, 0u64);
        for &p in &self.qpow[..self.n()] {
            out += ((q - x % q) % q) * p;
            x /= q;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, a: FieldElement, c: u32) -> FieldElement {
        let q = self.spec.q as u64;
        let c = c as u64 % q;
        match c {
            0 => FieldElement::ZERO,
            1 => a,
            _ => {
                let (mut x, mut out) = (a.0, 0u64);
                for &p in &self.qpow[..self.n()] {
                    out += ((x % q) * c % q) * p;
                    x /= q;
                }
                FieldElement(out)
            }
        }
    }

    /// `a·α` by shifting the coefficient vector and folding the top digit.
    pub fn mul_alpha(&self, a: FieldElement) -> FieldElement {
        let n = self.n();
        if n == 1 {
            return self.mul_poly(a, self.alpha());
        }
        let top_w = self.qpow[n - 1];
        let top = a.0 / top_w;
        let shifted = FieldElement((a.0 % top_w) * self.spec.q as u64);
        if top == 0 {
            shifted
        } else {
            self.add(shifted, FieldElement(self.fold[top as usize]))
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let m = self.group_order();
                let e = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % m;
                FieldElement(t.antilog[e as usize] as u64)
            }
            None => self.mul_poly(a, b),
        }
    }

    /// Table-free multiplication; always available.
    pub fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.n();
        if self.spec.q == 2 && n > 1 {
            // carry-less product, then reduce the high bits
            let (x, y) = (a.0 as u128, b.0);
            let mut prod = 0u128;
            for i in 0..n {
                if (y >> i) & 1 == 1 {
                    prod ^= x << i;
                }
            }
            let fmask: u128 = self
                .spec
                .modulus
                .iter()
                .enumerate()
                .map(|(i, &c)| (c as u128) << i)
                .sum();
            for i in (n..2 * n - 1).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= fmask << (i - n);
                }
            }
            return FieldElement(prod as u64);
        }
        if n == 1 {
            let q = self.spec.q as u64;
            return FieldElement(a.0 * b.0 % q);
        }
        // Horner over the digits of b
        let mut acc = FieldElement::ZERO;
        for i in (0..n).rev() {
            acc = self.mul_alpha(acc);
            let d = self.digit(b.0, i) as u32;
            if d != 0 {
                acc = self.add(acc, self.scale(a, d));
            }
        }
        acc
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let m = self.group_order() as u128;
            let le = (t.log[a.0 as usize] as u128 * e as u128) % m;
            return FieldElement(t.antilog[le as usize] as u64);
        }
        let mut base = a;
        let mut e = e;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let m = self.group_order();
            let e = (m - t.log[a.0 as usize] as u64) % m;
            return Ok(FieldElement(t.antilog[e as usize] as u64));
        }
        Ok(self.pow(a, self.size - 2))
    }

    /// The Frobenius image `a^q`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.spec.q as u64)
    }

    // --- logarithms and orders -------------------------------------------

    /// Exponent `e ∈ [0, q^n - 1)` with `α^e = a`.
    pub fn discrete_log(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::LogOfZero);
        }
        if !self.primitive {
            return Err(Error::NonPrimitiveField);
        }
        if let Some(t) = &self.tables {
            return Ok(t.log[a.0 as usize] as u64);
        }
        let bs = self.bsgs.get_or_init(|| self.baby_steps());
        let mut gamma = a;
        for i in 0..=bs.step {
            if let Some(&j) = bs.baby.get(&gamma.0) {
                return Ok((i * bs.step + j) % self.group_order());
            }
            gamma = self.mul_poly(gamma, bs.giant);
        }
        Err(Error::InternalInconsistency(
            "baby-step/giant-step found no logarithm".into(),
        ))
    }

    fn baby_steps(&self) -> BabySteps {
        let m = self.group_order();
        let step = (m as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut x = FieldElement::ONE;
        for j in 0..step {
            baby.entry(x.0).or_insert(j);
            x = self.mul_alpha(x);
        }
        // giant step α^{-step}
        let giant = self.pow(self.alpha(), m - step % m);
        BabySteps { step, baby, giant }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::OrderOfZero);
        }
        let m = self.group_order();
        if self.tables.is_some() {
            return Ok(m / self.discrete_log(a)?.gcd(&m));
        }
        let mut order = m;
        for p in prime_factors(m) {
            while order.is_multiple_of(p) && self.pow(a, order / p) == FieldElement::ONE {
                order /= p;
            }
        }
        Ok(order)
    }

    /// Order of `α^e`, i.e. `(q^n - 1) / gcd(e, q^n - 1)`.
    pub fn order_of_power(&self, e: u64) -> u64 {
        let m = self.group_order();
        m / (e % m).gcd(&m)
    }

    // --- subfields ---------------------------------------------------------

    fn check_subfield_degree(&self, r: usize) -> Result<()> {
        if r == 0 || !self.n().is_multiple_of(r) {
            return Err(Error::InvalidSubfieldDegree { r, n: self.n() });
        }
        Ok(())
    }

    /// Degrees of all subfields, ascending (the divisors of n).
    pub fn subfield_degrees(&self) -> Vec<usize> {
        divisors(self.n() as u64)
            .into_iter()
            .map(|d| d as usize)
            .collect()
    }

    /// `α^{(q^n-1)/(q^r-1)}`, a generator of `F_{q^r}^*`.
    pub fn subfield_generator(&self, r: usize) -> Result<FieldElement> {
        self.check_subfield_degree(r)?;
        if !self.primitive {
            return Err(Error::NonPrimitiveField);
        }
        Ok(self.alpha_pow(self.subfield_exponent(r)))
    }

    /// Exponent `(q^n-1)/(q^r-1)`; assumes `r | n`.
    pub fn subfield_exponent(&self, r: usize) -> u64 {
        self.group_order() / ((self.spec.q as u64).pow(r as u32) - 1)
    }

    /// True iff `a^{q^r} = a`, i.e. `a ∈ F_{q^r}`.
    pub fn in_subfield(&self, a: FieldElement, r: usize) -> bool {
        let mut x = a;
        for _ in 0..r {
            x = self.frobenius(x);
        }
        x == a
    }

    /// `∏ (x - c)` over the distinct conjugates `c = a^{q^{ri}}`, as
    /// coefficients in F_{q^n} (low-degree-first, monic). Every coefficient
    /// is checked to lie in F_{q^r}.
    pub fn minimal_polynomial(&self, a: FieldElement, r: usize) -> Result<Vec<FieldElement>> {
        self.check_subfield_degree(r)?;
        let mut conjugates = vec![a];
        let mut c = a;
        loop {
            for _ in 0..r {
                c = self.frobenius(c);
            }
            if c == a {
                break;
            }
            conjugates.push(c);
        }
        let mut poly = vec![FieldElement::ONE];
        for &c in &conjugates {
            // poly *= (x - c)
            let mut next = vec![FieldElement::ZERO; poly.len() + 1];
            for (i, &p) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], p);
                next[i] = self.sub(next[i], self.mul(p, c));
            }
            poly = next;
        }
        if let Some(bad) = poly.iter().find(|&&p| !self.in_subfield(p, r)) {
            return Err(Error::InternalInconsistency(format!(
                "minimal polynomial coefficient {bad:?} outside F_(q^{r})"
            )));
        }
        Ok(poly)
    }

    /// Minimal polynomial over the prime field as plain integer coefficients.
    pub fn minimal_polynomial_base(&self, a: FieldElement) -> Result<Vec<u32>> {
        Ok(self
            .minimal_polynomial(a, 1)?
            .into_iter()
            .map(|c| c.0 as u32)
            .collect())
    }

    /// Degree of `F_q[a]` over F_q.
    pub fn degree_of(&self, a: FieldElement) -> usize {
        let mut c = a;
        for d in 1..=self.n() {
            c = self.frobenius(c);
            if c == a {
                return d;
            }
        }
        unreachable!("Frobenius has order n")
    }

    /// Companion matrix of the modulus in row-vector convention.
    pub fn companion_matrix(&self) -> Matrix {
        companion_matrix(&self.spec)
    }

    /// Iterator over all nonzero elements in packed order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.size).map(FieldElement)
    }
}

/// Ones on the superdiagonal, last row `(-f_0, ..., -f_{n-1})`; this is the
/// transpose of the textbook companion matrix so that `φ(aα) = φ(a)·M`.
pub fn companion_matrix(spec: &FieldSpec) -> Matrix {
    let (q, n) = (spec.q, spec.n);
    let mut m = Matrix::zeros(q, n, n);
    for i in 0..n.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    for j in 0..n {
        m.set(n - 1, j, ((q - spec.modulus[j] % q) % q) as u8);
    }
    m
}

/// Lexicographically smallest primitive monic polynomial of degree `n`,
/// comparing coefficient sequences from the constant term upward.
pub fn smallest_primitive_polynomial(q: u32, n: usize) -> Result<Vec<u32>> {
    if !is_prime(q as u64) {
        return Err(Error::NonPrime(q as u64));
    }
    if n == 0 {
        return Err(Error::InvalidModulus("extension degree must be >= 1".into()));
    }
    let size = (q as u64)
        .checked_pow(n as u32)
        .filter(|&s| s <= MAX_FIELD_SIZE)
        .ok_or(Error::FieldTooLarge { q, n })?;
    // odometer with c_{n-1} varying fastest
    let mut coeffs = vec![0u32; n];
    loop {
        // the roots multiply to (-1)^n c_0, which must generate F_q^*
        let norm = if n.is_multiple_of(2) { coeffs[0] } else { (q - coeffs[0]) % q };
        if coeffs[0] != 0 && is_primitive_root_mod(norm, q) {
            let mut f = coeffs.clone();
            f.push(1);
            let root_free = n == 1 || (0..q).all(|a| poly::eval(&f, a, q) != 0);
            if root_free && poly::is_irreducible(&f, q) && poly::is_primitive(&f, q, size) {
                return Ok(f);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Err(Error::NoPrimitivePolynomial { q, n });
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

fn is_primitive_root_mod(c: u32, q: u32) -> bool {
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= q as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % q as u64;
            }
            b = b * b % q as u64;
            e >>= 1;
        }
        acc
    };
    !c.is_multiple_of(q)
        && prime_factors(q as u64 - 1)
            .into_iter()
            .all(|p| pow(c as u64, (q as u64 - 1) / p) != 1)
}

/// Dense polynomial arithmetic over F_q, coefficients low-degree-first.
pub(crate) mod poly {
    use super::prime_factors;
    use crate::linalg::inv_mod;

    pub type Poly = Vec<u32>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn deg(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn rem(a: &[u32], f: &[u32], q: u32) -> Poly {
        let mut r = trim(a.to_vec());
        let df = deg(f).expect("division by zero polynomial");
        let lead_inv = inv_mod(f[df], q);
        while let Some(dr) = deg(&r) {
            if dr < df {
                break;
            }
            let c = r[dr] * lead_inv % q;
            let shift = dr - df;
            for (i, &fc) in f.iter().enumerate().take(df + 1) {
                r[i + shift] = (r[i + shift] + q - (c * fc) % q) % q;
            }
            r = trim(r);
        }
        r
    }

    /// Horner evaluation at `x ∈ F_q`.
    pub fn eval(f: &[u32], x: u32, q: u32) -> u32 {
        f.iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % q as u64) as u32
    }

    pub fn mul(a: &[u32], b: &[u32], q: u32) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % q;
            }
        }
        trim(out)
    }

    pub fn mulmod(a: &[u32], b: &[u32], f: &[u32], q: u32) -> Poly {
        rem(&mul(a, b, q), f, q)
    }

    pub fn powmod(base: &[u32], mut e: u128, f: &[u32], q: u32) -> Poly {
        let mut acc = rem(&[1], f, q);
        let mut b = rem(base, f, q);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, f, q);
            }
            b = mulmod(&b, &b, f, q);
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u32], b: &[u32], q: u32) -> Poly {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + q - y) % q
            })
            .collect();
        trim(out)
    }

    pub fn gcd(a: &[u32], b: &[u32], q: u32) -> Poly {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, q);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's test: `x^{q^n} ≡ x` and `gcd(x^{q^{n/p}} - x, f) = 1` for every
    /// prime `p | n`.
    pub fn is_irreducible(f: &[u32], q: u32) -> bool {
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        // frob[i] = x^{q^i} mod f
        let mut frob = vec![rem(&x, f, q)];
        for i in 1..=n {
            let next = powmod(&frob[i - 1], q as u128, f, q);
            frob.push(next);
        }
        if trim(frob[n].clone()) != trim(x.clone()) {
            return false;
        }
        for p in prime_factors(n as u64) {
            let h = sub(&frob[n / p as usize], &x, q);
            let g = gcd(&h, f, q);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    /// Assumes `f` irreducible: x has order `size - 1` modulo `f`.
    pub fn is_primitive(f: &[u32], q: u32, size: u64) -> bool {
        let m = size - 1;
        let x = vec![0, 1];
        let one = vec![1u32];
        if powmod(&x, m as u128, f, q) != one {
            return false;
        }
        prime_factors(m)
            .into_iter()
            .all(|p| powmod(&x, (m / p) as u128, f, q) != one)
    }
}
