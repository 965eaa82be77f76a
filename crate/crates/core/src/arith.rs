//! Integer helpers: factorization, divisors, Gaussian binomials.

use num_bigint::BigUint;

/// Distinct prime factors of `m`, ascending. Trial division; fine for the
/// field sizes this crate supports.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// All positive divisors of `m`, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn ipow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("integer overflow in ipow")
}

/// `log_q(x)` when `x` is an exact power of `q`.
pub fn exact_log(x: u64, q: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut e = 0;
    let mut v = x;
    while v.is_multiple_of(q) {
        v /= q;
        e += 1;
    }
    (v == 1).then_some(e)
}

/// Gaussian binomial coefficient `[n choose k]_q`, the number of
/// k-dimensional subspaces of F_q^n.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_and_divisors() {
        assert_eq!(prime_factors(63), vec![3, 7]);
        assert_eq!(prime_factors(4095), vec![3, 5, 7, 13]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn gaussian_binomial_values() {
        // [7 choose 3]_2 counts 4-subspaces of F_2^8 through a fixed point
        assert_eq!(gaussian_binomial(7, 3, 2), BigUint::from(11811u32));
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(5, 0, 3), BigUint::from(1u32));
    }

    #[test]
    fn exact_logs() {
        assert_eq!(exact_log(8, 2), Some(3));
        assert_eq!(exact_log(1, 3), Some(0));
        assert_eq!(exact_log(6, 2), None);
    }
}
