//! Small integer helpers shared across the crate.

/// Greatest common divisor.
pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Least common multiple.
pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// `base^exp mod m` with 128-bit intermediates.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m > 0);
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut b: u128 = (base % m) as u128;
    let m128 = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative inverse of `a` modulo `m`, when it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Trial-division primality test; the crate only ever needs small primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler phi of a prime power `p^a`.
pub fn phi_prime_power(p: u64, a: u32) -> u64 {
    p.pow(a - 1) * (p - 1)
}

/// Legendre symbol `(a/p)` for an odd prime `p`: `+1` for nonzero squares,
/// `-1` for nonsquares, `0` when `p | a`.
pub fn legendre(a: i64, p: u64) -> i8 {
    debug_assert!(p > 2 && is_prime(p));
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Least primitive root modulo an odd prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    debug_assert!(is_prime(p) && p > 2);
    let factors: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_pow_small() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow(3, 0, 7), 1);
        assert_eq!(mod_pow(5, 3, 1), 0);
    }

    #[test]
    fn mod_inv_basic() {
        assert_eq!(mod_inv(3, 8), Some(3));
        assert_eq!(mod_inv(4, 8), None);
        assert_eq!(mod_inv(7, 31), Some(9));
    }

    #[test]
    fn factorize_and_phi() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(phi_prime_power(2, 3), 4);
        assert_eq!(phi_prime_power(3, 1), 2);
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(2, 3), -1);
        assert_eq!(legendre(-1, 5), 1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(10, 5), 0);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(41), 6);
    }
}
