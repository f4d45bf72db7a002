use lzero_core::arith::nt::gcd;
use lzero_core::bernoulli::{generalized_b1, l_value_at_zero};
use lzero_core::dirichlet::{primitive_characters_up_to, ParityFilter};

#[test]
fn b1_commutes_with_galois_action() {
    let chars = primitive_characters_up_to(40, ParityFilter::All);
    assert!(chars.len() > 200);
    for chi in &chars {
        let k = chi.value_order();
        let b1 = generalized_b1(chi);
        for j in 1..k.max(2) {
            if gcd(j, k) != 1 {
                continue;
            }
            let conj = chi.pow(j as i64);
            assert_eq!(
                generalized_b1(&conj),
                b1.galois_conj(j as i64).unwrap(),
                "{} under ζ ↦ ζ^{j}",
                chi.key()
            );
        }
    }
}

#[test]
fn complex_conjugate_character_gives_conjugate_value() {
    for chi in primitive_characters_up_to(40, ParityFilter::Odd) {
        let l = l_value_at_zero(&chi).unwrap().l0;
        let lbar = l_value_at_zero(&chi.conj()).unwrap().l0;
        assert_eq!(lbar, l.galois_conj(-1).unwrap());
        // L(0, χ)·L(0, χ̄) is a nonzero norm-like rational-field element
        assert!(!(&l * &lbar).is_zero());
    }
}

#[test]
fn even_characters_vanish_and_odd_ones_do_not() {
    for chi in primitive_characters_up_to(40, ParityFilter::All) {
        if chi.is_trivial() {
            continue;
        }
        let l = l_value_at_zero(&chi).unwrap().l0;
        assert_eq!(l.is_zero(), !chi.is_odd(), "{}", chi.key());
    }
}
