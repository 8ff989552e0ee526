//! Integer helpers: p-adic valuations, factorization, extended gcd, and
//! multiplicative independence tests.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Power of `p` dividing `x`. Panics if `x == 0` or `p < 2`.
pub fn valuation_i64(x: i64, p: u64) -> u32 {
    assert!(x != 0, "valuation of 0 is undefined");
    assert!(p >= 2);
    let mut n = x.unsigned_abs();
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Power of `p` dividing `x`, arbitrary precision.
pub fn valuation_big(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of 0 is undefined");
    let p = BigInt::from(p);
    let mut n = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::div_rem(n.clone(), p.clone());
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The prime-to-`s` part of `x`, retaining the sign: `x` with every power of
/// a prime in `s` divided out.
pub fn prime_to_s_part(x: i64, s: &[u64]) -> i64 {
    assert!(x != 0);
    let mut n = x;
    for &p in s {
        let p = p as i64;
        while n % p == 0 {
            n /= p;
        }
    }
    n
}

/// Trial-division factorization of `n >= 1` as `(prime, exponent)` pairs in
/// increasing prime order; `1` factors into the empty product.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Extended gcd: returns `(g, a, b)` with `a*x + b*y == g = gcd(x, y) >= 0`.
pub fn egcd(x: i64, y: i64) -> (i64, i64, i64) {
    if y == 0 {
        if x < 0 {
            return (-x, -1, 0);
        }
        return (x, 1, 0);
    }
    let (g, a, b) = egcd(y, x.rem_euclid(y));
    // g = a*y + b*(x - floor(x/y)*y)
    (g, b, a - x.div_euclid(y) * b)
}

/// `p^a == q^b` only for `a == b == 0`. Equivalent to the valuation vectors
/// of `p` and `q` not being proportional.
pub fn multiplicatively_independent(p: u64, q: u64) -> bool {
    if p < 2 || q < 2 {
        return false;
    }
    let fp = factorize(p);
    let fq = factorize(q);
    if fp.iter().map(|(pr, _)| pr).ne(fq.iter().map(|(pr, _)| pr)) {
        return true;
    }
    // Same prime support: dependent iff exponent vectors are proportional.
    let (_, e0) = fp[0];
    let (_, f0) = fq[0];
    !fp.iter()
        .zip(fq.iter())
        .all(|(&(_, e), &(_, f))| (e as u64) * (f0 as u64) == (f as u64) * (e0 as u64))
}

/// Smallest checked power `base^k` as BigInt, `k >= 0`.
pub fn big_pow(base: u64, k: u32) -> BigInt {
    BigInt::from(base).pow(k)
}

/// Solves `base^k == num/den` for integer `k` (any sign), where `num/den` is
/// a reduced positive rational. Returns `None` when no integer power matches.
pub fn power_exponent(num: &BigInt, den: &BigInt, base: u64) -> Option<i64> {
    assert!(base >= 2);
    if num.is_negative() || den.is_negative() || num.is_zero() {
        return None;
    }
    let one = BigInt::from(1);
    if num == &one && den == &one {
        return Some(0);
    }
    let b = BigInt::from(base);
    if den == &one {
        // positive exponent
        let mut k = 0i64;
        let mut acc = num.clone();
        loop {
            let (q, r) = num_integer::div_rem(acc, b.clone());
            if !r.is_zero() {
                return None;
            }
            k += 1;
            if q == one {
                return Some(k);
            }
            acc = q;
        }
    } else if num == &one {
        power_exponent(den, &one, base).map(|k| -k)
    } else {
        None
    }
}

/// Checks `s` is a non-empty set of primes, pairwise disjoint from `t`.
pub fn check_prime_sets(s: &[u64], t: &[u64]) -> Result<()> {
    fn is_prime(n: u64) -> bool {
        n >= 2 && factorize(n) == vec![(n, 1)]
    }
    if s.is_empty() || t.is_empty() {
        return Err(Error::invalid_input("prime sets S and T must be non-empty"));
    }
    for &p in s.iter().chain(t.iter()) {
        if !is_prime(p) {
            return Err(Error::invalid_input(format!("{p} is not prime")));
        }
    }
    if s.iter().any(|p| t.contains(p)) {
        return Err(Error::invalid_input("prime sets S and T must be disjoint"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation_i64(12, 2), 2);
        assert_eq!(valuation_i64(-12, 2), 2);
        assert_eq!(valuation_i64(12, 5), 0);
        assert_eq!(valuation_big(&BigInt::from(7 * 7 * 7 * 5 * 4 * 3), 7), 3);
    }

    #[test]
    fn prime_to_s() {
        assert_eq!(prime_to_s_part(12, &[5]), 12);
        assert_eq!(prime_to_s_part(15, &[5]), 3);
        assert_eq!(prime_to_s_part(-40, &[2, 5]), -1);
    }

    #[test]
    fn egcd_bezout() {
        for (x, y) in [(2, 3), (4, 3), (12, 18), (-5, 7), (0, 4), (9, 0)] {
            let (g, a, b) = egcd(x, y);
            assert_eq!(a * x + b * y, g);
            assert!(g >= 0);
            if x != 0 || y != 0 {
                assert_eq!(g, num_integer::gcd(x, y).abs());
            }
        }
    }

    #[test]
    fn mult_independence() {
        assert!(multiplicatively_independent(2, 3));
        assert!(multiplicatively_independent(6, 10));
        assert!(!multiplicatively_independent(4, 8));
        assert!(!multiplicatively_independent(2, 2));
        assert!(multiplicatively_independent(12, 18));
    }

    #[test]
    fn power_exponents() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(power_exponent(&b(8), &b(1), 2), Some(3));
        assert_eq!(power_exponent(&b(1), &b(9), 3), Some(-2));
        assert_eq!(power_exponent(&b(1), &b(1), 5), Some(0));
        assert_eq!(power_exponent(&b(6), &b(1), 2), None);
        assert_eq!(power_exponent(&b(3), &b(2), 2), None);
    }
}
