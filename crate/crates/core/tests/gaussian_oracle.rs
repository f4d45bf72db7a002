//! Valuations at k = 4 against factorization in Z[i]: for p ≡ 1 mod 4 the
//! chosen prime is (p, i - r) with r the image of i mod p, generated by a
//! Gaussian prime c + di with c + dr ≡ 0 mod p.

use lzero_core::padic::{PadicTower, Valuation};
use lzero_core::{BigRat, CycloElt};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gaussian_prime(p: i64, r: i64) -> (i64, i64) {
    for c in -p..=p {
        for d in 1..=p {
            if c * c + d * d == p && (c + d * r).rem_euclid(p) == 0 {
                return (c, d);
            }
        }
    }
    panic!("no Gaussian prime over {p} for root {r}");
}

/// Exponent of π = c + di in a + bi ≠ 0.
fn pi_adic_valuation(mut a: i128, mut b: i128, c: i128, d: i128, p: i128) -> i64 {
    let mut v = 0;
    loop {
        // (a + bi)/(c + di) = (a + bi)(c - di)/p
        let re = a * c + b * d;
        let im = b * c - a * d;
        if re % p != 0 || im % p != 0 {
            return v;
        }
        a = re / p;
        b = im / p;
        v += 1;
    }
}

fn int_valuation(mut n: i128, p: i128) -> i64 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[test]
fn gaussian_valuations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for p in [5i64, 13, 17, 29, 37, 41] {
        let tower = PadicTower::build(p as u64, 4, 48).unwrap();
        let factor = tower.residue_factor();
        assert_eq!(factor.len(), 2);
        let r = (p - factor[0] as i64).rem_euclid(p);
        assert_eq!((r * r + 1) % p, 0);
        let (c, d) = gaussian_prime(p, r);
        for _ in 0..200 {
            let scale = [1i64, p, p * p, 7, p * 3][rng.gen_range(0..5)];
            let mut a: i64 = rng.gen_range(-200..=200);
            let mut b: i64 = rng.gen_range(-200..=200);
            if rng.gen_bool(0.4) {
                // plant a factor of π or its conjugate
                let (x, y) = if rng.gen_bool(0.5) { (c, d) } else { (c, -d) };
                (a, b) = (a * x - b * y, a * y + b * x);
            }
            if a == 0 && b == 0 {
                continue;
            }
            let den = if rng.gen_bool(0.5) { scale } else { 1 };
            let z = (&CycloElt::from_int(4, a) + &CycloElt::zeta_pow(4, 1).scale(&BigRat::from_integer(BigInt::from(b))))
                .scale(&BigRat::new(BigInt::from(1), BigInt::from(den)));
            let expected = pi_adic_valuation(a as i128, b as i128, c as i128, d as i128, p as i128)
                - int_valuation(den as i128, p as i128);
            let got = tower.embed(&z).unwrap().valuation();
            assert_eq!(got, Valuation::finite(expected, 1), "p = {p}, z = ({a} + {b}i)/{den}");
        }
    }
}

#[test]
fn chosen_root_of_i_at_five_is_two() {
    let tower = PadicTower::build(5, 4, 8).unwrap();
    assert_eq!(tower.residue_factor(), &[3, 1]);
    assert_eq!(gaussian_prime(5, 2), (-2, 1));
}
