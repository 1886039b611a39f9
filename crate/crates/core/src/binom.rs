//! Exact binomial arithmetic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // Each partial product C(n - k + i, i) is an integer, so the division is exact.
    for i in 1..=k {
        acc *= BigUint::from(n - k + i);
        acc /= BigUint::from(i);
    }
    acc
}

/// `C(n, k)` when it fits in a `u64`.
pub fn binomial_u64(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 - k as u128 + i) / i;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

pub fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
    }

    #[test]
    fn matches_factorial_formula() {
        for n in 0..=40 {
            for k in 0..=n {
                let expected = factorial(n) / (factorial(k) * factorial(n - k));
                assert_eq!(binomial(n, k), expected, "C({n},{k})");
                assert_eq!(binomial_u64(n, k).map(BigUint::from), Some(expected));
            }
        }
        assert_eq!(binomial(3, 4), BigUint::zero());
    }

    #[test]
    fn large_values() {
        let c = binomial(256, 128);
        assert_eq!(c, factorial(256) / (factorial(128) * factorial(128)));
        assert_eq!(binomial_u64(256, 128), None);
        assert_eq!(binomial_u64(67, 33), Some(14226520737620288370));
    }

    #[test]
    fn rounding_up() {
        assert_eq!(ceil_div(&BigUint::from(91u32), &BigUint::from(3u32)), BigUint::from(31u32));
        assert_eq!(ceil_div(&BigUint::from(90u32), &BigUint::from(3u32)), BigUint::from(30u32));
    }
}
