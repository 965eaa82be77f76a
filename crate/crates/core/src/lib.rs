// Subspace hashes its canonical rows only; the lazily built BSGS table inside Field never affects it.
#![allow(clippy::mutable_key_type)]

pub mod arith;
pub mod distance;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod input;
pub mod linalg;
pub mod linkage;
pub mod orbit;
pub mod search;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{make_field, Field, FieldElement, FieldSpec};
pub use linalg::{Matrix, RowSpace};
pub use orbit::OrbitCode;
pub use subspace::Subspace;
