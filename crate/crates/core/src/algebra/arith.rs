//! Small integer number theory used by field and group construction.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut k = 0;
    let mut v = q;
    while v > 1 {
        v /= p;
        k += 1;
    }
    Some((p, k))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Inverse of `a` modulo `m` (m >= 1); `None` when not coprime.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = num_integer::Integer::extended_gcd(&(a as i128 % m as i128), &(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// `base^exp` as u128, saturating.
pub fn pow_u128(base: u64, exp: u32) -> u128 {
    (base as u128).saturating_pow(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(7919));
        assert!(!is_prime(1) && !is_prime(9));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(2, 5), Some(3));
        assert_eq!(mod_inverse(4, 6), None);
        assert_eq!(mod_inverse(5, 3), Some(2));
    }
}
