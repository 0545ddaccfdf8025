//! Small-integer number theory helpers.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(q, _)| q).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut hi: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&e| e * e != n).collect();
    out.append(&mut hi);
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn mod_inv(a: u64, modulus: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(modulus as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(modulus as i128) as u64)
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn mult_order(a: u64, m: u64) -> u64 {
    let phi = euler_phi(m);
    let mut best = phi;
    for d in divisors(phi) {
        if mod_pow(a, d, m) == 1 % m {
            best = d;
            break;
        }
    }
    best
}

/// Smallest primitive root modulo an odd prime power (or 2, 4).
pub fn primitive_root(m: u64) -> Option<u64> {
    let phi = euler_phi(m);
    (1..m.max(2)).find(|&g| g.gcd(&m) == 1 && mult_order(g, m) == phi)
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_prime(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(factorize(189), vec![(3, 3), (7, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
        assert_eq!(euler_phi(63), 36);
        assert_eq!(euler_phi(189), 108);
        assert_eq!(mod_inv(2, 9), Some(5));
        assert_eq!(mod_inv(3, 9), None);
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(27), Some(2));
        assert_eq!(mod_pow(5, 0, 1), 0);
    }
}
