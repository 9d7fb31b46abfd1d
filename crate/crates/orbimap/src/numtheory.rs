//! Exact integer number theory used by the epimorphism formulas.
//!
//! Inputs stay well below `10^6`, so trial division is all we need.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

/// Count of integers in `1..=n` coprime to `n`.
pub fn euler_phi(n: u64) -> BigUint {
    assert!(n >= 1, "euler_phi needs n >= 1");
    let mut result = n;
    for (p, _) in factorize(n) {
        result = result / p * (p - 1);
    }
    BigUint::from(result)
}

/// The Möbius function.
pub fn moebius_mu(n: u64) -> i8 {
    assert!(n >= 1, "moebius_mu needs n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Jordan's totient `J_k(n) = sum_{d | n} mu(n/d) d^k`.
///
/// With `k = 0` this is `[n = 1]`, which is what the epimorphism closed forms
/// rely on when their exponent vanishes.
pub fn jordan_totient(k: u32, n: u64) -> BigUint {
    assert!(n >= 1, "jordan_totient needs n >= 1");
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        let mu = moebius_mu(n / d);
        if mu == 0 {
            continue;
        }
        let term = BigInt::from(d).pow(k);
        if mu > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("Jordan totient is nonnegative")
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors needs n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Least common multiple of a list; `1` for the empty list.
pub fn lcm_list(values: &[u64]) -> u64 {
    values.iter().fold(1u64, |acc, &v| acc.lcm(&v))
}

/// Prime factorization as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exact division of a signed big integer, or `None` if there is a remainder.
pub fn exact_div(num: &BigInt, den: u64) -> Option<BigInt> {
    let den = BigInt::from(den);
    let (q, r) = num.div_rem(&den);
    r.is_zero().then_some(q)
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    falling_factorial(n, k) / factorial(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1), BigUint::from(1u32));
        assert_eq!(euler_phi(2), BigUint::from(1u32));
        let direct = (1..=12).filter(|&i| gcd(i, 12) == 1).count();
        assert_eq!(euler_phi(12), BigUint::from(direct));
        assert_eq!(direct, 4);
    }

    #[test]
    fn mu_examples() {
        assert_eq!(moebius_mu(1), 1);
        assert_eq!(moebius_mu(4), 0);
        assert_eq!(moebius_mu(6), 1);
        assert_eq!(moebius_mu(30), -1);
    }

    #[test]
    fn jordan_examples() {
        for n in 1..=100 {
            assert_eq!(jordan_totient(1, n), euler_phi(n));
        }
        assert_eq!(jordan_totient(0, 1), BigUint::from(1u32));
        assert_eq!(jordan_totient(0, 7), BigUint::zero());
        assert_eq!(jordan_totient(2, 4), BigUint::from(12u32));
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        let by_scan: Vec<u64> = (1..=360).filter(|d| 360 % d == 0).collect();
        assert_eq!(divisors(360), by_scan);
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_list(&[]), 1);
        assert_eq!(lcm_list(&[2, 4, 4]), 4);
        assert_eq!(lcm_list(&[2, 3]), 6);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(2, 5), BigUint::zero());
        assert_eq!(falling_factorial(5, 0), BigUint::one());
    }
}
