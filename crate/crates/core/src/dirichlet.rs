//! Dirichlet characters with exact cyclotomic values.
//!
//! A character modulo `f` is stored as one exponent per generator of a fixed
//! basis of `(Z/f)^×`: if `g_i` has order `o_i` then `χ(g_i) = ζ_{o_i}^{e_i}`.
//! The basis is canonical (smallest primitive root at odd prime powers,
//! `{-1, 5}` at `2^a` with `a ≥ 3`, CRT-lifted to be `1` in the other
//! components), so exponent vectors give every character a stable name and
//! a total order.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::nt::{
    crt_pair, euler_phi, factorize, gcd, is_prime, lcm, multiplicative_order, val_u64,
};
use crate::arith::CycloElt;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub residue: u64,
    pub order: u64,
}

/// One prime-power factor `q^e` of the modulus and the generators living on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub prime: u64,
    pub exponent: u32,
    pub generators: std::ops::Range<usize>,
}

#[derive(Debug)]
pub struct UnitGroupBasis {
    modulus: u64,
    generators: Vec<Generator>,
    components: Vec<Component>,
    /// Mixed-radix index of the exponent vector of each residue; `u32::MAX`
    /// for non-units.
    dlog: Vec<u32>,
}

const NOT_A_UNIT: u32 = u32::MAX;

fn smallest_primitive_root(q: u64, e: u32) -> u64 {
    let m = q.pow(e);
    let phi = euler_phi(m);
    (2..m)
        .find(|&g| gcd(g, m) == 1 && multiplicative_order(g, m) == phi)
        .expect("odd prime powers have primitive roots")
}

fn basis_cache() -> &'static Mutex<HashMap<u64, Arc<UnitGroupBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UnitGroupBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl UnitGroupBasis {
    /// Canonical basis of `(Z/f)^×`, shared per modulus.
    pub fn get(f: u64) -> Arc<UnitGroupBasis> {
        assert!(f >= 1, "modulus must be positive");
        if let Some(b) = basis_cache().lock().unwrap().get(&f) {
            return b.clone();
        }
        let built = Arc::new(Self::build(f));
        basis_cache()
            .lock()
            .unwrap()
            .entry(f)
            .or_insert(built)
            .clone()
    }

    fn build(f: u64) -> Self {
        let mut generators = Vec::new();
        let mut components = Vec::new();
        for (q, e) in factorize(f) {
            let qe = q.pow(e);
            let rest = f / qe;
            let lift = |r: u64| if rest == 1 { r % qe } else { crt_pair(r % qe, qe, 1, rest) };
            let start = generators.len();
            if q == 2 {
                match e {
                    1 => {}
                    2 => generators.push(Generator { residue: lift(3), order: 2 }),
                    _ => {
                        generators.push(Generator { residue: lift(qe - 1), order: 2 });
                        generators.push(Generator { residue: lift(5), order: qe / 4 });
                    }
                }
            } else {
                let g = smallest_primitive_root(q, e);
                generators.push(Generator { residue: lift(g), order: euler_phi(qe) });
            }
            components.push(Component {
                prime: q,
                exponent: e,
                generators: start..generators.len(),
            });
        }
        let dlog = Self::build_dlog(f, &generators);
        UnitGroupBasis { modulus: f, generators, components, dlog }
    }

    fn build_dlog(f: u64, gens: &[Generator]) -> Vec<u32> {
        let mut table = vec![NOT_A_UNIT; f as usize];
        let total: u64 = gens.iter().map(|g| g.order).product();
        assert!(total < NOT_A_UNIT as u64, "unit group too large for the log table");
        // odometer over exponent vectors, last generator fastest
        let mut exps = vec![0u64; gens.len()];
        let mut value = 1 % f;
        for idx in 0..total {
            table[value as usize] = idx as u32;
            let mut i = gens.len();
            while i > 0 {
                i -= 1;
                exps[i] += 1;
                value = ((value as u128 * gens[i].residue as u128) % f as u128) as u64;
                if exps[i] < gens[i].order {
                    break;
                }
                exps[i] = 0; // g_i^{o_i} = 1, value already wrapped back
            }
        }
        table
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Exponents `n_i` with `a ≡ ∏ g_i^{n_i}`, or `None` if `gcd(a, f) > 1`.
    pub fn discrete_log(&self, a: i64) -> Option<Vec<u64>> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        let mut idx = self.dlog[r];
        if idx == NOT_A_UNIT {
            return None;
        }
        let mut out = vec![0u64; self.generators.len()];
        for (slot, g) in out.iter_mut().zip(&self.generators).rev() {
            *slot = idx as u64 % g.order;
            idx /= g.order as u32;
        }
        Some(out)
    }

    pub fn group_order(&self) -> u64 {
        self.generators.iter().map(|g| g.order).product()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Parity filter for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityFilter {
    All,
    Odd,
    Even,
}

/// Serializable character name: modulus and exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharKey {
    pub f: u64,
    pub chi: Vec<u64>,
}

impl fmt::Display for CharKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chi.iter().map(|e| e.to_string()).collect();
        write!(f, "{}:[{}]", self.f, parts.join(","))
    }
}

#[derive(Clone)]
pub struct DirichletChar {
    basis: Arc<UnitGroupBasis>,
    exponents: Vec<u64>,
    value_order: u64,
    /// `χ(g_i) = ζ_k^{weights[i]}` with `k = value_order`.
    weights: Vec<u64>,
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletChar({})", self.key())
    }
}

impl PartialEq for DirichletChar {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletChar {}

impl DirichletChar {
    pub fn new(f: u64, exponents: Vec<u64>) -> Result<Self> {
        let basis = UnitGroupBasis::get(f);
        if exponents.len() != basis.generators.len() {
            return Err(Error::InvalidArgument(format!(
                "modulus {f} has {} generators, got {} exponents",
                basis.generators.len(),
                exponents.len()
            )));
        }
        if let Some((e, g)) = exponents
            .iter()
            .zip(&basis.generators)
            .find(|(e, g)| **e >= g.order)
        {
            return Err(Error::InvalidArgument(format!(
                "exponent {e} out of range for generator {} of order {}",
                g.residue, g.order
            )));
        }
        Ok(Self::from_parts(basis, exponents))
    }

    fn from_parts(basis: Arc<UnitGroupBasis>, exponents: Vec<u64>) -> Self {
        let value_order = exponents
            .iter()
            .zip(&basis.generators)
            .fold(1u64, |acc, (&e, g)| lcm(acc, g.order / gcd(e, g.order)));
        let weights = exponents
            .iter()
            .zip(&basis.generators)
            .map(|(&e, g)| (e * value_order / g.order) % value_order)
            .collect();
        DirichletChar { basis, exponents, value_order, weights }
    }

    pub fn from_key(key: &CharKey) -> Result<Self> {
        Self::new(key.f, key.chi.clone())
    }

    pub fn trivial(f: u64) -> Self {
        let basis = UnitGroupBasis::get(f);
        let n = basis.generators.len();
        Self::from_parts(basis, vec![0; n])
    }

    /// Character determined by its generator values `χ(g) = ζ_k^{value(g)}`.
    /// Each value must be compatible with the generator's order.
    pub fn from_generator_values(f: u64, k: u64, value: impl Fn(u64) -> u64) -> Self {
        let basis = UnitGroupBasis::get(f);
        let exponents = basis
            .generators
            .iter()
            .map(|g| {
                let j = value(g.residue) % k;
                let scaled = j * g.order;
                assert_eq!(scaled % k, 0, "value ζ_{k}^{j} has order not dividing {}", g.order);
                scaled / k
            })
            .collect();
        Self::from_parts(basis, exponents)
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn basis(&self) -> &UnitGroupBasis {
        &self.basis
    }

    /// Exact order `k` of the character; values lie in `μ_k`.
    pub fn value_order(&self) -> u64 {
        self.value_order
    }

    pub fn key(&self) -> CharKey {
        CharKey { f: self.modulus(), chi: self.exponents.clone() }
    }

    pub fn is_trivial(&self) -> bool {
        self.value_order == 1
    }

    /// `j` with `χ(a) = ζ_k^j`, or `None` when `gcd(a, f) > 1`.
    pub fn exponent_at(&self, a: i64) -> Option<u64> {
        let b = &self.basis;
        let mut idx = b.dlog[a.rem_euclid(b.modulus as i64) as usize];
        if idx == NOT_A_UNIT {
            return None;
        }
        let k = self.value_order;
        let mut acc = 0u64;
        for (g, &w) in b.generators.iter().zip(&self.weights).rev() {
            let n = idx as u64 % g.order;
            idx /= g.order as u32;
            acc = (acc + n * w) % k;
        }
        Some(acc)
    }

    /// Exponents `χ(a)` for every residue `0 ≤ a < f` at once.
    pub fn exponent_table(&self) -> Vec<Option<u64>> {
        (0..self.modulus() as i64).map(|a| self.exponent_at(a)).collect()
    }

    /// `χ(a)` as an element of `Q(ζ_k)`, `k` the value order.
    pub fn eval(&self, a: i64) -> CycloElt {
        match self.exponent_at(a) {
            Some(j) => CycloElt::zeta_pow(self.value_order, j as i64),
            None => CycloElt::zero(self.value_order),
        }
    }

    pub fn parity(&self) -> Parity {
        match self.exponent_at(-1) {
            Some(0) | None => Parity::Even,
            Some(_) => Parity::Odd,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    pub fn conductor(&self) -> u64 {
        let mut cond = 1u64;
        for comp in &self.basis.components {
            let gens = &self.basis.generators[comp.generators.clone()];
            let exps = &self.exponents[comp.generators.clone()];
            let ord = |i: usize| gens[i].order / gcd(exps[i], gens[i].order);
            let q = comp.prime;
            let c = if q == 2 {
                match comp.exponent {
                    1 => 0,
                    2 => {
                        if ord(0) == 1 {
                            0
                        } else {
                            2
                        }
                    }
                    _ => {
                        let on_five = ord(1);
                        if on_five > 1 {
                            val_u64(on_five, 2) + 2
                        } else if ord(0) > 1 {
                            2
                        } else {
                            0
                        }
                    }
                }
            } else {
                let o = ord(0);
                if o == 1 {
                    0
                } else {
                    1 + val_u64(o, q)
                }
            };
            cond *= q.pow(c);
        }
        cond
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// The character mod `d` (`d | f`) inducing `self`. The caller must know
    /// that `self` is trivial on units `≡ 1 mod d`.
    pub fn descend(&self, d: u64) -> Self {
        let f = self.modulus();
        assert_eq!(f % d, 0, "descend target must divide the modulus");
        let k = self.value_order;
        DirichletChar::from_generator_values(d, k, |g| {
            let mut a = g;
            while gcd(a, f) != 1 {
                a += d;
            }
            self.exponent_at(a as i64).expect("lift is a unit")
        })
    }

    /// `(conductor, primitive character inducing self)`.
    pub fn primitivize(&self) -> (u64, Self) {
        let c = self.conductor();
        if c == self.modulus() {
            return (c, self.clone());
        }
        (c, self.descend(c))
    }

    /// The character mod `m` (a multiple of `f`) induced by `self`.
    pub fn lift(&self, m: u64) -> Result<Self> {
        let f = self.modulus();
        if !m.is_multiple_of(f) {
            return Err(Error::InvalidArgument(format!("{m} is not a multiple of {f}")));
        }
        let k = self.value_order;
        Ok(DirichletChar::from_generator_values(m, k, |g| {
            self.exponent_at(g as i64).expect("unit mod m is a unit mod f")
        }))
    }

    /// Pointwise product, on the lcm of the two moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.modulus(), other.modulus());
        let a = self.lift(m).unwrap();
        let b = other.lift(m).unwrap();
        let exps = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(&a.basis.generators)
            .map(|((x, y), g)| (x + y) % g.order)
            .collect();
        Self::from_parts(a.basis.clone(), exps)
    }

    /// `χ^n`; with `n` coprime to the order this is a Galois conjugate.
    pub fn pow(&self, n: i64) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(&self.basis.generators)
            .map(|(&e, g)| ((e as i128 * n as i128).rem_euclid(g.order as i128)) as u64)
            .collect();
        Self::from_parts(self.basis.clone(), exps)
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }
}

/// Every character mod `f`, in lexicographic order of exponent vectors,
/// filtered by primitivity and parity.
pub fn enumerate_characters(f: u64, primitive_only: bool, parity: ParityFilter) -> Vec<DirichletChar> {
    let basis = UnitGroupBasis::get(f);
    let orders: Vec<u64> = basis.generators.iter().map(|g| g.order).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u64; orders.len()];
    loop {
        let chi = DirichletChar::from_parts(basis.clone(), exps.clone());
        let parity_ok = match parity {
            ParityFilter::All => true,
            ParityFilter::Odd => chi.is_odd(),
            ParityFilter::Even => !chi.is_odd(),
        };
        if parity_ok && (!primitive_only || chi.is_primitive()) {
            out.push(chi);
        }
        let mut i = orders.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// Primitive characters with conductor at most `hi`, ordered by conductor
/// then exponent vector.
pub fn primitive_characters_up_to(hi: u64, parity: ParityFilter) -> Vec<DirichletChar> {
    (1..=hi)
        .flat_map(|f| enumerate_characters(f, true, parity))
        .collect()
}

/// Result of splitting a character mod `p^n` along
/// `(Z/p^n)^× = μ_{p-1} × (1 + pZ)`.
#[derive(Clone, Debug)]
pub struct TameWild {
    /// Character mod `p` of order dividing `p - 1`.
    pub tame: DirichletChar,
    /// Character mod `p^n` of `p`-power order, trivial on `μ_{p-1}`.
    pub wild: DirichletChar,
}

pub fn tame_wild_decomposition(chi: &DirichletChar, p: u64) -> Result<TameWild> {
    let f = chi.modulus();
    let not_pp = || Error::NotPrimePower { modulus: f, p };
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let n = val_u64(f, p);
    if n == 0 || p.pow(n) != f {
        return Err(not_pp());
    }
    let order = chi.basis.generators[0].order; // (p-1) p^{n-1}
    let wild_size = order / (p - 1);
    let e = chi.exponents[0];
    // e1 ≡ e mod (p-1), e1 ≡ 0 mod p^{n-1}
    let e1 = if wild_size == 1 {
        e % (p - 1)
    } else {
        crt_pair(e % (p - 1), p - 1, 0, wild_size)
    };
    let e2 = (e + order - e1) % order;
    let tame_full = DirichletChar::from_parts(chi.basis.clone(), vec![e1]);
    let wild = DirichletChar::from_parts(chi.basis.clone(), vec![e2]);
    Ok(TameWild { tame: tame_full.descend(p), wild })
}

/// Is `n` a power `p^d` with `d ≥ 1`?
pub fn prime_power_exponent(n: u64, p: u64) -> Option<u32> {
    let d = val_u64(n, p);
    (d >= 1 && p.pow(d) == n).then_some(d)
}

/// Exact sum `Σ_{a=1}^{f} a·χ(a)` as integer counts per power of `ζ_k`.
pub(crate) fn weighted_exponent_counts(chi: &DirichletChar) -> Vec<BigInt> {
    let k = chi.value_order() as usize;
    let mut counts = vec![0i128; k];
    let f = chi.modulus();
    for a in 1..=f {
        if let Some(j) = chi.exponent_at(a as i64) {
            counts[j as usize] += a as i128;
        }
    }
    counts.into_iter().map(BigInt::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nt::{divisors, mod_pow};

    fn gens(f: u64) -> Vec<(u64, u64)> {
        UnitGroupBasis::get(f)
            .generators()
            .iter()
            .map(|g| (g.residue, g.order))
            .collect()
    }

    #[test]
    fn canonical_bases() {
        assert_eq!(gens(7), vec![(3, 6)]);
        assert_eq!(gens(8), vec![(7, 2), (5, 2)]);
        assert_eq!(gens(15), vec![(11, 2), (7, 4)]);
        assert_eq!(gens(4), vec![(3, 2)]);
        assert!(gens(2).is_empty() && gens(1).is_empty());
        assert_eq!(gens(9), vec![(2, 6)]);
        assert_eq!(gens(16), vec![(15, 2), (5, 4)]);
    }

    #[test]
    fn bases_generate_the_unit_group() {
        for f in 1..=200u64 {
            let b = UnitGroupBasis::get(f);
            assert_eq!(b.group_order(), euler_phi(f), "f = {f}");
            for a in 0..f {
                let unit = gcd(a, f) == 1;
                let log = b.discrete_log(a as i64);
                assert_eq!(log.is_some(), unit, "f = {f}, a = {a}");
                if let Some(log) = log {
                    let back = log
                        .iter()
                        .zip(b.generators())
                        .fold(1 % f, |acc, (&n, g)| acc * mod_pow(g.residue, n, f) % f);
                    assert_eq!(back, a % f);
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let odd3 = enumerate_characters(3, true, ParityFilter::Odd);
        assert_eq!(odd3.len(), 1);
        assert_eq!(odd3[0].value_order(), 2);
        let odd5 = enumerate_characters(5, true, ParityFilter::Odd);
        assert_eq!(odd5.len(), 2);
        assert!(odd5.iter().all(|c| c.value_order() == 4));
        assert!(enumerate_characters(12, true, ParityFilter::Odd).is_empty());
        assert_eq!(enumerate_characters(12, true, ParityFilter::All).len(), 1);
    }

    fn brute_conductor(chi: &DirichletChar) -> u64 {
        let f = chi.modulus();
        divisors(f)
            .into_iter()
            .find(|&c| {
                (1..=f).filter(|&a| gcd(a, f) == 1 && a % c == 1 % c).all(|a| chi.exponent_at(a as i64) == Some(0))
            })
            .unwrap()
    }

    fn mobius(n: u64) -> i64 {
        let fs = factorize(n);
        if fs.iter().any(|&(_, e)| e > 1) {
            0
        } else if fs.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn counts_and_conductors_match_definitions() {
        for f in 1..=80u64 {
            let all = enumerate_characters(f, false, ParityFilter::All);
            assert_eq!(all.len() as u64, euler_phi(f));
            // number of primitive characters mod f = Σ_{d|f} μ(f/d) φ(d)
            let expected: i64 = divisors(f)
                .into_iter()
                .map(|d| mobius(f / d) * euler_phi(d) as i64)
                .sum();
            let prim = all.iter().filter(|c| c.is_primitive()).count() as i64;
            assert_eq!(prim, expected, "f = {f}");
            for chi in &all {
                assert_eq!(chi.conductor(), brute_conductor(chi), "{chi:?}");
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let q3 = &enumerate_characters(3, true, ParityFilter::Odd)[0];
        assert_eq!(q3.eval(2), CycloElt::from_int(1, -1));
        let chi5 = DirichletChar::new(5, vec![1]).unwrap();
        assert_eq!(chi5.eval(2), CycloElt::zeta_pow(4, 1));
        assert_eq!(chi5.eval(3), -&CycloElt::zeta_pow(4, 1));
        for chi in enumerate_characters(15, false, ParityFilter::All) {
            assert!(chi.eval(6).is_zero());
        }
    }

    #[test]
    fn multiplicativity_and_parity() {
        for f in [7u64, 12, 15, 16, 40, 63] {
            let chars = enumerate_characters(f, false, ParityFilter::All);
            for chi in &chars {
                for a in 0..f as i64 {
                    for b in 0..f as i64 {
                        assert_eq!(chi.eval(a * b), &chi.eval(a) * &chi.eval(b));
                    }
                }
                let m1 = chi.eval(-1);
                assert!(m1 == CycloElt::from_int(1, 1) || m1 == CycloElt::from_int(1, -1));
            }
            for a in &chars {
                for b in &chars {
                    let same = a.parity() == b.parity();
                    assert_eq!(a.mul(b).parity() == Parity::Even, same);
                }
            }
        }
    }

    #[test]
    fn conjugate_characters_have_conjugate_values() {
        for chi in enumerate_characters(35, false, ParityFilter::All) {
            let k = chi.value_order();
            for s in CycloElt::galois_exponents(k) {
                let cs = chi.pow(s as i64);
                for a in 0..35 {
                    assert_eq!(cs.eval(a), chi.eval(a).galois_conj(s as i64).unwrap());
                }
            }
        }
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(DirichletChar::trivial(12).primitivize().0, 1);
        let q3 = &enumerate_characters(3, true, ParityFilter::Odd)[0];
        let induced = q3.lift(15).unwrap();
        let (c, prim) = induced.primitivize();
        assert_eq!(c, 3);
        assert_eq!(&prim, q3);
        let chi5 = DirichletChar::new(5, vec![1]).unwrap();
        assert_eq!(chi5.primitivize(), (5, chi5.clone()));
    }

    #[test]
    fn induction_then_primitivization_is_identity() {
        for f in 1..=30u64 {
            for chi in enumerate_characters(f, true, ParityFilter::All) {
                for m in [2u64, 3, 5, 7] {
                    let (c, back) = chi.lift(f * m).unwrap().primitivize();
                    assert_eq!(c, f);
                    assert_eq!(back, chi);
                }
            }
        }
    }

    #[test]
    fn tame_wild_examples() {
        for chi in enumerate_characters(7, true, ParityFilter::All) {
            let tw = tame_wild_decomposition(&chi, 7).unwrap();
            assert!(tw.wild.is_trivial());
            assert_eq!(tw.tame, chi);
        }
        let six_mod_9: Vec<_> = enumerate_characters(9, false, ParityFilter::All)
            .into_iter()
            .filter(|c| c.value_order() == 6)
            .collect();
        assert_eq!(six_mod_9.len(), 2);
        for chi in six_mod_9 {
            let tw = tame_wild_decomposition(&chi, 3).unwrap();
            assert_eq!((tw.tame.value_order(), tw.wild.value_order()), (2, 3));
        }
        let twenty_mod_25: Vec<_> = enumerate_characters(25, false, ParityFilter::All)
            .into_iter()
            .filter(|c| c.value_order() == 20)
            .collect();
        assert!(!twenty_mod_25.is_empty());
        for chi in twenty_mod_25 {
            let tw = tame_wild_decomposition(&chi, 5).unwrap();
            assert_eq!((tw.tame.value_order(), tw.wild.value_order()), (4, 5));
        }
        let chi15 = DirichletChar::trivial(15);
        assert!(matches!(
            tame_wild_decomposition(&chi15, 3),
            Err(Error::NotPrimePower { modulus: 15, p: 3 })
        ));
    }

    #[test]
    fn tame_wild_recomposes() {
        for (p, n) in [(3u64, 3u32), (5, 2), (7, 2), (11, 1)] {
            let f = p.pow(n);
            for chi in enumerate_characters(f, false, ParityFilter::All) {
                let tw = tame_wild_decomposition(&chi, p).unwrap();
                assert!((p - 1) % tw.tame.value_order() == 0);
                assert_eq!(f % tw.wild.value_order(), 0);
                assert_eq!(gcd(tw.wild.value_order(), p - 1), 1);
                assert_eq!(tw.wild.is_trivial(), chi.conductor() <= p);
                for a in 1..f as i64 {
                    if a % p as i64 == 0 {
                        continue;
                    }
                    assert_eq!(chi.eval(a), &tw.tame.eval(a) * &tw.wild.eval(a));
                }
            }
        }
    }
}
