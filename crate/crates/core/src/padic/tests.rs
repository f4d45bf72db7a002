use super::*;
use crate::arith::BigRat;
use crate::dirichlet::{enumerate_characters, ParityFilter};

fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

fn v(num: i64, den: i64) -> Valuation {
    Valuation::finite(num, den)
}

#[test]
fn gaussian_tower_at_five_sends_i_to_two() {
    let t = PadicTower::build(5, 4, 8).unwrap();
    assert_eq!((t.e_ram(), t.f_res()), (1, 1));
    assert_eq!(t.residue_factor(), &[3, 1]); // x - 2
    let i = t.zeta_pow(1);
    assert_eq!(to_fp(i.coeff(0, 0), 5), 2);
    // the lifted root squares to -1 modulo 5^8
    assert!((&(&i * &i) + &t.one()).is_zero_at_precision());
}

#[test]
fn cube_roots_at_three_are_totally_ramified() {
    let t = PadicTower::build(3, 3, 10).unwrap();
    assert_eq!((t.k_tame(), t.wild_exp(), t.e_ram(), t.f_res()), (1, 1, 2, 1));
    let z = &CycloElt::zeta_pow(3, 1) - &CycloElt::one(3);
    assert_eq!(t.embed(&z).unwrap().valuation(), v(1, 2));
    assert_eq!(t.uniformizer().valuation(), v(1, 2));
}

#[test]
fn four_is_inert_at_seven() {
    let t = PadicTower::build(7, 4, 4).unwrap();
    assert_eq!((t.e_ram(), t.f_res()), (1, 2));
    assert_eq!(t.residue_factor(), &[1, 0, 1]);
}

#[test]
fn embedding_examples() {
    let t = PadicTower::build(5, 4, 16).unwrap();
    assert_eq!(t.embed(&CycloElt::from_int(4, 5)).unwrap().valuation(), v(1, 1));
    assert_eq!(t.embed(&CycloElt::from_int(1, 10)).unwrap().valuation(), v(1, 1));
    let z = (&CycloElt::from_int(4, 3) - &CycloElt::zeta_pow(4, 1)).scale(&rat(1, 5));
    assert_eq!(t.embed(&z).unwrap().valuation(), v(-1, 1));
    let w = (&CycloElt::from_int(4, 3) + &CycloElt::zeta_pow(4, 1)).scale(&rat(1, 5));
    assert_eq!(t.embed(&w).unwrap().valuation(), v(0, 1));
    let t5 = PadicTower::build(5, 5, 16).unwrap();
    let u = &CycloElt::one(5) - &CycloElt::zeta_pow(5, 1);
    assert_eq!(t5.embed(&u).unwrap().valuation(), v(1, 4));
    assert_eq!(t.embed(&CycloElt::zero(4)).unwrap().valuation(), Valuation::AbovePrecision);
}

#[test]
fn denominators_beyond_precision_are_rejected() {
    let t = PadicTower::build(5, 4, 2).unwrap();
    let z = CycloElt::from_rational(4, rat(1, 125));
    assert!(matches!(t.embed(&z), Err(Error::PrecisionExhausted { .. })));
    let (val, n) = valuation_with_escalation(&z, 5, 4, 2).unwrap();
    assert_eq!(val, Ratio::from_integer(-3));
    assert_eq!(n, 4);
}

#[test]
fn order_must_divide_tower_order() {
    let t = PadicTower::build(5, 4, 4).unwrap();
    assert!(matches!(
        t.embed(&CycloElt::zeta_pow(3, 1)),
        Err(Error::IncompatibleOrders { from: 3, to: 4 })
    ));
}

#[test]
fn eisenstein_polynomial_for_nine() {
    let t = PadicTower::build(3, 9, 20).unwrap();
    // Φ_9(1 + π) = π^6 + 6π^5 + 15π^4 + 21π^3 + 18π^2 + 9π + 3
    let expected: Vec<BigInt> = [3, 9, 18, 21, 15, 6, 1].iter().map(|&c| BigInt::from(c)).collect();
    assert_eq!(t.eisenstein_poly(), expected.as_slice());
    assert_eq!(t.e_ram(), 6);
    let u = &CycloElt::one(9) - &CycloElt::zeta_pow(9, 1);
    assert_eq!(t.embed(&u).unwrap().valuation(), v(1, 6));
    let u3 = &CycloElt::one(3) - &CycloElt::zeta_pow(3, 1);
    assert_eq!(t.embed(&u3).unwrap().valuation(), v(1, 2));
}

#[test]
fn zeta_images_have_the_right_order() {
    for (p, k) in [(5u64, 20u64), (3, 36), (7, 28), (11, 10), (3, 8)] {
        let t = PadicTower::build(p, k, 12).unwrap();
        let z = t.zeta_pow(1);
        let mut acc = t.one();
        for j in 1..=k {
            acc = &acc * &z;
            let is_one = (&acc - &t.one()).is_zero_at_precision();
            assert_eq!(is_one, j == k, "p = {p}, k = {k}, j = {j}");
        }
        // Φ_k(ζ) = 0 in the model
        let phi = crate::arith::cyclotomic_poly(k);
        let mut sum = t.zero();
        for (j, c) in phi.coeffs().iter().enumerate() {
            sum = &sum + &(&t.from_integer(c) * &t.zeta_pow(j as i64));
        }
        assert!(sum.is_zero_at_precision());
    }
}

#[test]
fn valuation_examples() {
    let t = PadicTower::build(3, 3, 8).unwrap();
    assert_eq!(t.zero().valuation(), Valuation::AbovePrecision);
    let p_elt = t.from_integer(&BigInt::from(3));
    assert_eq!(p_elt.valuation(), v(1, 1));
    assert_eq!(Valuation::finite(-1, 6).to_exact_string(), "-1/6");
    assert_eq!(Valuation::finite(-2, 2).to_exact_string(), "-1/1");
    assert_eq!(Valuation::parse("-1/6").unwrap(), v(-1, 6));
    assert!(Valuation::parse("0.5").is_err());
}

#[test]
fn teichmuller_examples() {
    assert_eq!(teichmuller(1, 5, 6).unwrap(), BigInt::from(1));
    assert_eq!(teichmuller(-1, 7, 3).unwrap(), BigInt::from(343 - 1));
    assert_eq!(teichmuller(2, 5, 2).unwrap(), BigInt::from(7));
    assert!(teichmuller(10, 5, 2).is_err());
    for p in [3u64, 5, 7, 13, 97] {
        let m = BigInt::from(p).pow(20);
        for a in 1..p as i64 {
            let w = teichmuller(a, p, 20).unwrap();
            assert_eq!(w.modpow(&BigInt::from(p - 1), &m), BigInt::one());
            assert_eq!(w.mod_floor(&BigInt::from(p)), BigInt::from(a));
        }
    }
}

#[test]
fn omega_power_examples() {
    let q3 = &enumerate_characters(3, true, ParityFilter::Odd)[0];
    assert!(char_is_omega_power_mod_p(q3, 3, -1).unwrap());
    assert!(char_is_omega_power_mod_p(q3, 3, 1).unwrap());
    let chi = DirichletChar::new(5, vec![3]).unwrap(); // χ(2) = -ζ_4
    assert!(char_is_omega_power_mod_p(&chi, 5, -1).unwrap());
    assert!(!char_is_omega_power_mod_p(&chi, 5, 1).unwrap());
    let chi_conj = DirichletChar::new(5, vec![1]).unwrap(); // χ(2) = ζ_4
    assert!(char_is_omega_power_mod_p(&chi_conj, 5, 1).unwrap());
    let q7 = DirichletChar::new(7, vec![3]).unwrap();
    assert!(!char_is_omega_power_mod_p(&q7, 5, -1).unwrap());
}

#[test]
fn exactly_one_character_mod_p_is_each_omega_power() {
    for p in [3u64, 5, 7, 11, 13, 29, 37] {
        let chars = enumerate_characters(p, false, ParityFilter::All);
        for t in 0..(p as i64 - 1) {
            let hits = chars
                .iter()
                .filter(|c| char_is_omega_power_mod_p(c, p, t).unwrap())
                .count();
            assert_eq!(hits, 1, "p = {p}, t = {t}");
        }
    }
}

#[test]
fn towers_are_deterministic() {
    for (p, k) in [(5u64, 4u64), (3, 9), (7, 4), (5, 20), (13, 12), (3, 56)] {
        let a = PadicTower::build_uncached(p, k, 12).unwrap();
        let b = PadicTower::build_uncached(p, k, 12).unwrap();
        assert_eq!(a.descriptor(), b.descriptor());
        assert_eq!(a.lifted_poly(), b.lifted_poly());
        assert_eq!(a.zeta_images, b.zeta_images);
    }
}

#[test]
fn lifted_factor_divides_phi_modulo_p_n() {
    for (p, k, n) in [(5u64, 4u64, 30u32), (13, 12, 10), (3, 56, 8), (29, 7, 5)] {
        let t = PadicTower::build(p, k, n).unwrap();
        let k_tame = t.k_tame();
        let phi = crate::arith::cyclotomic_poly(k_tame);
        let phi_mod: Vec<BigInt> = phi.coeffs().iter().map(|c| c.mod_floor(t.modulus())).collect();
        let g = t.lifted_poly();
        // long division of Φ by the monic g modulo p^N leaves no remainder
        let mut r = phi_mod.clone();
        let d = g.len() - 1;
        for i in (d..r.len()).rev() {
            let c = r[i].clone();
            for (j, gj) in g.iter().enumerate() {
                r[i - d + j] = (&r[i - d + j] - &c * gj).mod_floor(t.modulus());
            }
        }
        assert!(r.iter().all(|c| c.is_zero()), "p = {p}, k = {k}");
        let low: Vec<u64> = g.iter().map(|c| to_fp(c, p)).collect();
        assert_eq!(low, t.residue_factor());
    }
}

#[test]
fn valuations_do_not_move_with_precision() {
    for chi in enumerate_characters(25, true, ParityFilter::Odd) {
        let l = crate::bernoulli::l_value_at_zero(&chi).unwrap().l0;
        let k = chi.value_order();
        let lo = PadicTower::build(5, k, 8).unwrap().embed(&l).unwrap().valuation();
        let hi = PadicTower::build(5, k, 32).unwrap().embed(&l).unwrap().valuation();
        assert_eq!(lo, hi, "{chi:?}");
    }
}
