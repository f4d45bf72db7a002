//! Small-integer number theory used throughout: factorization, totients,
//! modular powers and orders.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
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

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| is_prime(m)).collect()
}

pub fn odd_primes_up_to(n: u64) -> Vec<u64> {
    (3..=n).filter(|&m| is_prime(m)).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: u64) -> Option<u64> {
    let m_i = m as i128;
    let a = (a as i128).rem_euclid(m_i);
    let (mut r0, mut r1) = (a, m_i);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m_i) as u64)
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    debug_assert_eq!(gcd(a % m, m), 1);
    let mut ord = euler_phi(m);
    for (q, _) in factorize(ord) {
        while ord.is_multiple_of(q) && mod_pow(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Exponent of `p` in `n` (`n != 0`).
pub fn val_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Chinese remainder: the residue mod `m1*m2` congruent to `r1` mod `m1`
/// and `r2` mod `m2` (coprime moduli).
pub fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    let inv = mod_inv(m1 as i64, m2).expect("crt moduli must be coprime");
    let m = (m1 as u128) * (m2 as u128);
    let diff = ((r2 as i128 - r1 as i128).rem_euclid(m2 as i128)) as u128;
    let t = diff * inv as u128 % m2 as u128;
    ((r1 as u128 + m1 as u128 * t) % m) as u64
}
