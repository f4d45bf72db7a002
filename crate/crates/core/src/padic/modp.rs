//! Dense polynomials over `F_p` (small `p`), just enough to factor
//! cyclotomic polynomials: gcd, modular powers, equal-degree splitting.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::nt::mod_inv;
use crate::arith::IntPoly;

/// Coefficients lowest degree first, trailing zeros stripped.
pub type FpPoly = Vec<u64>;

pub fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn from_int_poly(f: &IntPoly, p: u64) -> FpPoly {
    let pb = num_bigint::BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = ((c % &pb) + &pb) % &pb;
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect(),
    )
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// `(q, r)` with `a = q·b + r`, `deg r < deg b`.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let lead_inv = mod_inv(*b.last().unwrap() as i64, p).expect("p is prime");
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            let idx = shift + j;
            r[idx] = (r[idx] + p - mulmod(c, bj, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> FpPoly {
    let a = trim(a.to_vec());
    match a.last() {
        None => a,
        Some(&l) => {
            let inv = mod_inv(l as i64, p).expect("p is prime");
            a.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` monic.
pub fn xgcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let lead = *r0.last().expect("gcd of zero polynomials");
    let inv = mod_inv(lead as i64, p).unwrap();
    let scale = |v: &[u64]| trim(v.iter().map(|&c| mulmod(c, inv, p)).collect());
    (scale(&r0), scale(&s0), scale(&t0))
}

/// `base^exp mod modulus`.
pub fn powmod(base: &[u64], exp: &BigUint, modulus: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&[1], modulus, p);
    let b = rem(base, modulus, p);
    for i in (0..exp.bits()).rev() {
        acc = rem(&mul(&acc, &acc, p), modulus, p);
        if exp.bit(i) {
            acc = rem(&mul(&acc, &b, p), modulus, p);
        }
    }
    acc
}

pub fn powmod_u64(base: &[u64], exp: u64, modulus: &[u64], p: u64) -> FpPoly {
    powmod(base, &BigUint::from(exp), modulus, p)
}

/// Split a squarefree monic `h` whose irreducible factors all have degree
/// `d` (Cantor-Zassenhaus, odd `p`). The randomness only affects how the
/// work is split, not the resulting set of factors.
pub fn equal_degree_factor(h: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let h = monic(h, p);
    let n = h.len() - 1;
    assert!(n.is_multiple_of(d), "degree {n} is not a multiple of {d}");
    if n == d {
        return vec![h];
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: FpPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() <= 1 {
            continue;
        }
        let mut g = gcd(&a, &h, p);
        if g.len() == 1 {
            let b = powmod(&a, &exp, &h, p);
            g = gcd(&sub(&b, &[1], p), &h, p);
        }
        if g.len() > 1 && g.len() < h.len() {
            let (q, r) = divrem(&h, &g, p);
            debug_assert!(r.is_empty());
            let mut out = equal_degree_factor(&g, d, p, rng);
            out.extend(equal_degree_factor(&q, d, p, rng));
            return out;
        }
    }
}

/// Sort key of a monic factor: its elementary symmetric functions
/// `(e_1, …, e_d)` of the roots, as least nonnegative residues. For a
/// linear factor `x - r` this is just `r`.
pub fn factor_order_key(g: &[u64], p: u64) -> Vec<u64> {
    let d = g.len() - 1;
    (1..=d)
        .map(|i| {
            let c = g[d - i];
            if i % 2 == 1 {
                (p - c) % p
            } else {
                c
            }
        })
        .collect()
}

/// Irreducible factors of `poly` mod `p`, all of degree `d`, sorted by
/// [`factor_order_key`].
pub fn factor_equal_degree_sorted(poly: &IntPoly, d: usize, p: u64, seed: u64) -> Vec<FpPoly> {
    let h = from_int_poly(poly, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = equal_degree_factor(&h, d, p, &mut rng);
    factors.sort_by_key(|g| factor_order_key(g, p));
    factors
}
