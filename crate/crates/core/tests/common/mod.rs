//! Invariant checks shared by the property suite and the acceptance runner.
//! Each returns `Ok(true)` when checked, `Ok(false)` when the input does not
//! apply, and `Err` on a violation.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use orbitcodes::distance::{
    classify_direct_sum, distance_bruteforce, distance_multiset, pairwise_distribution,
};
use orbitcodes::orbit::{
    best_friend_degree, beta_order, enumerate_orbit, orbit_cardinality, stab_plus_beta_degree,
    stabilizer_order,
};
use orbitcodes::{make_field, Error, Field, Subspace};

pub type Check = Result<bool, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

type FieldCache = Mutex<HashMap<(u32, usize), Arc<Field>>>;

pub fn field(q: u32, n: usize) -> Arc<Field> {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry((q, n))
        .or_insert_with(|| Arc::new(make_field(q, n, None).unwrap()))
        .clone()
}

/// Span of `α^e` over the given exponents, rescaled to contain 1.
pub fn normalized_span(f: &Arc<Field>, logs: &[u64]) -> Subspace {
    let gens: Vec<_> = logs.iter().map(|&e| f.alpha_pow(e)).collect();
    Subspace::from_generators(f, &gens).unwrap().normalize_contains_one().unwrap().0
}

/// `d ≡ 0 mod 2r`, `2r ≤ d ≤ min(2k, 2(n-k))`, `d = 2r(t-s)`, and both
/// distance methods agree.
pub fn distance_invariants(q: u32, n: usize, logs: &[u64]) -> Check {
    let f = field(q, n);
    let u = normalized_span(&f, logs);
    let k = u.dim();
    if k == n {
        return Ok(false);
    }
    let rep = distance_multiset(&u, false).map_err(|e| e.to_string())?;
    let brute = distance_bruteforce(&u, 1, false).map_err(|e| e.to_string())?;
    let r = rep.r;
    let ctx = format!("q={q} n={n} logs={logs:?}");
    ensure!(rep.d == brute.d, "{ctx}: multiset {} vs brute {}", rep.d, brute.d);
    ensure!(r == best_friend_degree(&u).unwrap(), "{ctx}: r mismatch");
    ensure!(rep.d % (2 * r) == 0, "{ctx}: d = {} not a multiple of 2r = {}", rep.d, 2 * r);
    ensure!(2 * r <= rep.d && rep.d <= 2 * k, "{ctx}: d = {} outside [2r, 2k]", rep.d);
    ensure!(rep.d <= 2 * (n - k), "{ctx}: d = {} above 2(n-k)", rep.d);
    ensure!(rep.d == 2 * r * (k / r - rep.s), "{ctx}: d != 2r(t-s)");
    Ok(true)
}

/// The orthogonal complements of an orbit have the orbit's distance distribution.
pub fn dual_invariance(q: u32, n: usize, logs: &[u64]) -> Check {
    let f = field(q, n);
    let u = normalized_span(&f, logs);
    if u.dim() == n {
        return Ok(false);
    }
    let orbit = enumerate_orbit(&u, 1).map_err(|e| e.to_string())?;
    let duals: Vec<Subspace> = orbit.iter().map(|v| v.dual()).collect();
    ensure!(duals.iter().all(|v| v.dim() == n - u.dim()), "dual dimension wrong");
    let (a, b) = (pairwise_distribution(&orbit), pairwise_distribution(&duals));
    ensure!(a == b, "q={q} n={n} logs={logs:?}: {a:?} vs {b:?}");
    Ok(true)
}

/// For prime `n`, a proper subspace containing 1 has the full orbit.
pub fn prime_degree_orbit(q: u32, n: usize, logs: &[u64]) -> Check {
    let f = field(q, n);
    let u = normalized_span(&f, logs);
    if u.dim() == n {
        return Ok(false);
    }
    let expected = f.group_order() / (q as u64 - 1);
    let got = orbit_cardinality(&u, 1).map_err(|e| e.to_string())?;
    ensure!(got == expected, "q={q} n={n} logs={logs:?}: N = {got}, expected {expected}");
    ensure!(stabilizer_order(&u, 1).0 == expected, "stabilizer search disagrees");
    Ok(true)
}

/// For `β` of degree `n` that is not primitive, `|β|/gcd(|β|, q^k-1)`
/// divides the orbit size, which also matches enumeration.
pub fn beta_divisibility(q: u32, n: usize, logs: &[u64], beta_log: u64) -> Check {
    let f = field(q, n);
    if beta_log.is_multiple_of(f.group_order())
        || beta_log.gcd(&f.group_order()) == 1
        || f.degree_of(f.alpha_pow(beta_log)) != n
    {
        return Ok(false);
    }
    let u = normalized_span(&f, logs);
    if u.dim() == n {
        return Ok(false);
    }
    let size = orbit_cardinality(&u, beta_log).map_err(|e| e.to_string())?;
    let listed = enumerate_orbit(&u, beta_log).map_err(|e| e.to_string())?.len() as u64;
    let ctx = format!("q={q} n={n} logs={logs:?} beta=a^{beta_log}");
    ensure!(size == listed, "{ctx}: N = {size} but {listed} members enumerated");
    let order = beta_order(&f, beta_log);
    let qk1 = (q as u64).pow(u.dim() as u32) - 1;
    let div = order / order.gcd(&qk1);
    ensure!(size % div == 0, "{ctx}: {div} does not divide N = {size}");
    ensure!(
        stab_plus_beta_degree(&u, beta_log) <= best_friend_degree(&u).unwrap(),
        "{ctx}: Stab+ degree above best friend"
    );
    Ok(true)
}

/// `stab·N = q^n - 1`, `stab = q^r - 1`, and every member shares the best friend.
pub fn stabilizer_structure(q: u32, n: usize, logs: &[u64]) -> Check {
    let f = field(q, n);
    let u = normalized_span(&f, logs);
    let (size, stab) = stabilizer_order(&u, 1);
    let r = best_friend_degree(&u).unwrap();
    let ctx = format!("q={q} n={n} logs={logs:?}");
    ensure!(size * stab == f.group_order(), "{ctx}: stab*N != q^n-1");
    ensure!(stab == (q as u64).pow(r as u32) - 1, "{ctx}: stab != q^r-1");
    ensure!(stab_plus_beta_degree(&u, 1) <= r, "{ctx}: Stab+ degree above r");
    for v in enumerate_orbit(&u, 1).unwrap().iter().take(8) {
        ensure!(best_friend_degree(v).unwrap() == r, "{ctx}: member with another best friend");
    }
    Ok(true)
}

pub struct DirectSumSummary {
    pub checked: usize,
    pub fields: usize,
    pub predictions: usize,
}

/// Direct sums `⊕ α^{il} F_{q^r}` scanned deterministically (small `l`
/// plus exponents landing in a larger subfield) until `want` are found.
/// Checks the field characterizations and, whenever F_{q^r} is the best
/// friend and `l` is below the orbit size, the predicted distance `2r`.
pub fn direct_sums(want: usize) -> Result<DirectSumSummary, String> {
    let shapes: [(u32, usize, usize, usize); 8] = [
        (2, 6, 1, 2),
        (2, 6, 1, 3),
        (2, 6, 2, 2),
        (2, 8, 2, 2),
        (2, 8, 1, 4),
        (2, 12, 2, 3),
        (3, 4, 1, 2),
        (3, 6, 2, 3),
    ];
    let mut s = DirectSumSummary {
        checked: 0,
        fields: 0,
        predictions: 0,
    };
    for (q, n, r, t) in shapes {
        let f = field(q, n);
        let coset_count = f.group_order() / ((q as u64).pow(r as u32) - 1);
        let mut ls: Vec<u64> = (1..6).collect();
        for d in f.subfield_degrees() {
            if d > r && d % r == 0 {
                ls.push(f.group_order() / ((q as u64).pow(d as u32) - 1));
            }
        }
        for l in ls {
            let c = match classify_direct_sum(&f, r, l, t) {
                Ok(c) => c,
                Err(Error::NonDirect { .. }) => continue,
                Err(e) => return Err(e.to_string()),
            };
            let ctx = format!("q={q} n={n} r={r} l={l} t={t}");
            ensure!(c.mipo_degree >= t, "{ctx}: minimal polynomial degree below t");
            ensure!(c.equivalences_hold(), "{ctx}: characterizations disagree: {c:?}");
            s.fields += c.is_field as usize;
            if let Some(pred) = c.predicted_distance {
                if l < coset_count {
                    let measured = distance_bruteforce(&c.subspace, 1, false).map_err(|e| e.to_string())?.d;
                    ensure!(measured == pred, "{ctx}: predicted {pred}, measured {measured}");
                    s.predictions += 1;
                }
            }
            s.checked += 1;
            if s.checked == want {
                return Ok(s);
            }
        }
    }
    Err(format!("only {} direct sums found", s.checked))
}
