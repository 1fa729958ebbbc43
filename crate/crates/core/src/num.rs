//! Small integer helpers shared by the checkers.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

/// Exact integer square root, `None` unless `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_square_free(n: u64) -> bool {
    n > 0 && prime_factors(n).iter().all(|&(_, e)| e == 1)
}

/// Returns `Some(p)` when `n = p^2` for a prime `p`.
pub fn prime_square_root(n: u64) -> Option<u64> {
    exact_sqrt(n).filter(|&p| is_prime(p))
}

/// Trial over the first component up to `floor(sqrt(n))`.
pub fn is_sum_of_two_squares(n: u64) -> bool {
    let mut x = 0u64;
    while x * x <= n {
        if exact_sqrt(n - x * x).is_some() {
            return true;
        }
        x += 1;
    }
    false
}

/// gcd of a sequence; zero for an empty or all-zero input.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(values: I) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g.abs()
}

/// Largest `e` with `2^e | n`; `n` must be nonzero.
pub fn two_adic_valuation(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

pub fn pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_and_primes() {
        assert_eq!(exact_sqrt(49), Some(7));
        assert_eq!(exact_sqrt(17), None);
        assert!(is_prime(13) && !is_prime(1) && !is_prime(25));
        assert_eq!(prime_square_root(25), Some(5));
        assert_eq!(prime_square_root(65), None);
        assert!(is_square_free(65) && !is_square_free(25));
        assert_eq!(prime_factors(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn two_squares() {
        // 2n - 2 for n = 6, 14, 22
        assert!(is_sum_of_two_squares(10));
        assert!(is_sum_of_two_squares(26));
        assert!(!is_sum_of_two_squares(42));
        assert!(is_sum_of_two_squares(0));
    }

    #[test]
    fn gcd_of_values() {
        let v: Vec<BigInt> = [12, -18, 30].into_iter().map(BigInt::from).collect();
        assert_eq!(gcd_all(&v), BigInt::from(6));
        assert_eq!(gcd_all(&[]), BigInt::zero());
        assert_eq!(two_adic_valuation(&BigInt::from(96)), 5);
    }
}
