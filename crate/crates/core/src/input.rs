//! Textual generator descriptions.
//!
//! Three forms are accepted:
//! - `logs:0,1,4` spans `α^0, α^1, α^4`;
//! - `F(2)+a^1*F(2)+a^3*F(2)` is a sum of subfield cosets (`a` alone means
//!   `a^1`, and a bare `a^e` means `a^e*F(1)`);
//! - `rows:100000;010000` lists coordinate rows, either as digit strings or
//!   comma-separated digits (`rows:1,0,2;0,1,1`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::subspace::Subspace;

/// Serialized as its textual form, so catalogs can be written by hand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GeneratorSpec {
    Logs(Vec<u64>),
    /// `(e, r)` terms of `Σ α^e F_{q^r}`.
    Cosets(Vec<(u64, usize)>),
    Rows(Vec<Vec<u8>>),
}

fn bad(s: &str, why: &str) -> Error {
    Error::InvalidInput(format!("generator '{s}': {why}"))
}

fn parse_num<T: std::str::FromStr>(s: &str, whole: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| bad(whole, &format!("'{s}' is not a number")))
}

fn parse_power(t: &str, whole: &str) -> Result<u64> {
    match t.trim() {
        "1" => Ok(0),
        "a" => Ok(1),
        p => match p.strip_prefix("a^") {
            Some(e) => parse_num(e, whole),
            None => Err(bad(whole, &format!("expected a^e, found '{p}'"))),
        },
    }
}

fn parse_coset(term: &str, whole: &str) -> Result<(u64, usize)> {
    let term = term.trim();
    let (scale, sub) = match term.split_once('*') {
        Some((s, f)) => (Some(s), Some(f)),
        None if term.starts_with('F') => (None, Some(term)),
        None => (Some(term), None),
    };
    let e = match scale {
        Some(s) => parse_power(s, whole)?,
        None => 0,
    };
    let r = match sub {
        Some(f) => {
            let inner = f
                .trim()
                .strip_prefix("F(")
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| bad(whole, &format!("expected F(r), found '{f}'")))?;
            parse_num(inner, whole)?
        }
        None => 1,
    };
    Ok((e, r))
}

impl std::str::FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GeneratorSpec> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("logs:") {
            let logs = rest
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| parse_num(x, s))
                .collect::<Result<Vec<u64>>>()?;
            if logs.is_empty() {
                return Err(Error::EmptyGenerators);
            }
            return Ok(GeneratorSpec::Logs(logs));
        }
        if let Some(rest) = t.strip_prefix("rows:") {
            let rows = rest
                .split(';')
                .filter(|x| !x.trim().is_empty())
                .map(|row| {
                    let row = row.trim();
                    if row.contains(',') {
                        row.split(',').map(|d| parse_num::<u8>(d, s)).collect()
                    } else {
                        row.chars()
                            .map(|c| {
                                c.to_digit(10)
                                    .map(|d| d as u8)
                                    .ok_or_else(|| bad(s, &format!("'{c}' is not a digit")))
                            })
                            .collect()
                    }
                })
                .collect::<Result<Vec<Vec<u8>>>>()?;
            if rows.is_empty() {
                return Err(Error::EmptyGenerators);
            }
            return Ok(GeneratorSpec::Rows(rows));
        }
        if t.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let terms = t
            .split('+')
            .map(|term| parse_coset(term, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSpec::Cosets(terms))
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Logs(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "logs:{}", parts.join(","))
            }
            GeneratorSpec::Cosets(v) => {
                let parts: Vec<String> = v
                    .iter()
                    .map(|&(e, r)| match e {
                        0 => format!("F({r})"),
                        _ => format!("a^{e}*F({r})"),
                    })
                    .collect();
                f.write_str(&parts.join("+"))
            }
            GeneratorSpec::Rows(rows) => {
                let wide = rows.iter().flatten().any(|&d| d > 9);
                let parts: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        let ds: Vec<String> = r.iter().map(|d| d.to_string()).collect();
                        ds.join(if wide { "," } else { "" })
                    })
                    .collect();
                write!(f, "rows:{}", parts.join(";"))
            }
        }
    }
}

impl TryFrom<String> for GeneratorSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<GeneratorSpec> {
        s.parse()
    }
}

impl From<GeneratorSpec> for String {
    fn from(g: GeneratorSpec) -> String {
        g.to_string()
    }
}

impl GeneratorSpec {
    pub fn build(&self, field: &Arc<Field>) -> Result<Subspace> {
        match self {
            GeneratorSpec::Logs(v) => {
                let gens: Vec<_> = v.iter().map(|&e| field.alpha_pow(e)).collect();
                Subspace::from_generators(field, &gens)
            }
            GeneratorSpec::Cosets(terms) => Subspace::sum_of_cosets(field, terms),
            GeneratorSpec::Rows(rows) => Subspace::from_rows(field, rows),
        }
    }
}
