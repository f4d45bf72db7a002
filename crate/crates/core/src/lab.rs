//! Composite checks and scans over odd Dirichlet characters: `p`-adic
//! integrality verdicts for `L(0, χ)`, pole orders, the Kummer congruence,
//! the minus class number product, roots-of-unity multiples and
//! congruences between `L`-values of characters with the same reduction.
//!
//! Checks of proven statements fail with an error; checks of conjectural
//! statements return their findings as data.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::nt::{crt_pair, euler_phi, factorize, gcd, is_prime, lcm, mod_inv, odd_primes_up_to};
use crate::arith::{BigRat, CycloElt};
use crate::bernoulli::{bernoulli_number, l_value_cached, minus_class_number_cached, B1Cache};
use crate::dirichlet::{
    enumerate_characters, prime_power_exponent, primitive_characters_up_to, tame_wild_decomposition, CharKey,
    DirichletChar, ParityFilter,
};
use crate::padic::modp::{self, FpPoly};
use crate::padic::{
    char_is_omega_power_mod_p, teichmuller, valuation_with_escalation, PadicElt, PadicTower, TowerDescriptor,
    Valuation, DEFAULT_PRECISION, PRECISION_CAP,
};
use crate::{Error, Result};

/// Largest conductor `p^r` accepted by [`remark2_check`].
pub const REMARK2_CONDUCTOR_BUDGET: u64 = 1000;

/// Shared knobs for the scans.
#[derive(Clone, Copy)]
pub struct ScanOptions<'a> {
    /// Starting `p`-adic precision; doubled on demand up to the cap.
    pub precision: u32,
    /// Worker threads; `0` or `1` runs on the calling thread.
    pub jobs: usize,
    pub cache: Option<&'a B1Cache>,
}

impl Default for ScanOptions<'_> {
    fn default() -> Self {
        ScanOptions { precision: DEFAULT_PRECISION, jobs: 1, cache: None }
    }
}

fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs <= 1 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn require_primitive_odd(chi: &DirichletChar) -> Result<()> {
    let c = chi.conductor();
    if c != chi.modulus() {
        return Err(Error::ImprimitiveInput { modulus: chi.modulus(), conductor: c });
    }
    if !chi.is_odd() {
        return Err(Error::InvalidArgument(format!("{} is not odd", chi.key())));
    }
    Ok(())
}

/// Integrality of `L(0, χ)` at the canonical prime `𝔭` above `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub character: CharKey,
    /// Order of the values of `χ`; the tower is built for this order.
    pub order: u64,
    pub p: u64,
    pub tower: TowerDescriptor,
    pub valuation: Valuation,
    /// `v_𝔭(L(0, χ)) ≥ 0`.
    pub p_integral: bool,
    /// `L(0, χ)` is an algebraic integer.
    pub global_integral: bool,
    /// `χ ≡ ω^{-1} (mod 𝔭)`.
    pub omega_inverse: bool,
    /// The conductor is a power of `p`.
    pub prime_power_conductor: bool,
    /// `valuation < 0` exactly when the conductor is a power of `p` and
    /// `χ ≡ ω^{-1}`.
    pub classification_consistent: bool,
    /// Predicted pole valuation when the conductor is `p^d` and
    /// `χ ≡ ω^{-1}`: `-1` for `d = 1`, else `-1/φ(p^{d-1})`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_valuation: Option<Valuation>,
    /// `global_integral` agrees with the prediction from the conductor:
    /// always integral for conductors with two or more prime factors; for
    /// an odd prime power `q^d`, non-integral exactly when the tame part
    /// has order `q - 1`. Conductors `2^d` carry no prediction.
    pub global_consistent: bool,
    /// For conductors `p^d·m` with `m > 1` and `χ ≡ ω^{-1}`: whether
    /// `L(0, χ) ≡ 0 (mod 𝔭)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_zero_mod_p: Option<bool>,
    pub notes: String,
}

impl VerdictRecord {
    fn pole_order_consistent(&self) -> bool {
        match &self.expected_valuation {
            Some(e) if self.valuation.is_negative() => *e == self.valuation,
            _ => true,
        }
    }

    /// Every proven statement checked by the record holds.
    pub fn is_consistent(&self) -> bool {
        self.classification_consistent && self.pole_order_consistent() && self.global_consistent
    }
}

/// `-1` for `d = 1`, `-1/φ(p^{d-1})` for `d ≥ 2`.
pub fn expected_pole_valuation(p: u64, d: u32) -> Valuation {
    if d <= 1 {
        Valuation::finite(-1, 1)
    } else {
        Valuation::finite(-1, euler_phi(p.pow(d - 1)) as i64)
    }
}

/// Predicted global integrality of `L(0, χ)` for primitive odd `χ`, or
/// `None` when the conductor is a power of 2.
pub fn expected_global_integrality(chi: &DirichletChar) -> Option<bool> {
    let primes = factorize(chi.modulus());
    if primes.len() != 1 {
        return Some(true);
    }
    let q = primes[0].0;
    if q == 2 {
        return None;
    }
    let tw = tame_wild_decomposition(chi, q).ok()?;
    Some(tw.tame.value_order() != q - 1)
}

fn verdict_from_l_value(chi: &DirichletChar, l: &CycloElt, p: u64, precision: u32) -> Result<VerdictRecord> {
    let k = chi.value_order();
    let (v, n) = valuation_with_escalation(l, p, k, precision)?;
    let tower = PadicTower::build(p, k, n)?.descriptor();
    let omega_inverse = char_is_omega_power_mod_p(chi, p, -1)?;
    let d = prime_power_exponent(chi.modulus(), p);
    let negative = v < Ratio::zero();
    let classification_consistent = negative == (d.is_some() && omega_inverse);
    let expected_valuation = d.filter(|_| omega_inverse).map(|d| expected_pole_valuation(p, d));
    let global_integral = l.is_algebraic_integer();
    let global_consistent = expected_global_integrality(chi).is_none_or(|e| e == global_integral);
    let l_zero_mod_p = (omega_inverse && d.is_none()).then(|| v > Ratio::zero());

    let valuation = Valuation::Finite(v);
    let mut notes = Vec::new();
    if negative {
        notes.push(format!("pole at p = {p}"));
    }
    if !classification_consistent {
        notes.push("integrality disagrees with the conductor and residue test".to_string());
    }
    if let Some(e) = &expected_valuation {
        if negative && *e != valuation {
            notes.push(format!("pole valuation differs from {e}"));
        }
    }
    if !global_consistent {
        notes.push("global integrality disagrees with the conductor prediction".to_string());
    }
    match l_zero_mod_p {
        Some(true) => notes.push("L(0,chi) vanishes mod p".to_string()),
        Some(false) => notes.push("L(0,chi) is a unit mod p".to_string()),
        None => {}
    }
    Ok(VerdictRecord {
        character: chi.key(),
        order: k,
        p,
        tower,
        valuation,
        p_integral: !negative,
        global_integral,
        omega_inverse,
        prime_power_conductor: d.is_some(),
        classification_consistent,
        expected_valuation,
        global_consistent,
        l_zero_mod_p,
        notes: notes.join("; "),
    })
}

/// Valuation of `L(0, χ)` at the canonical prime above `p`, with the
/// `ω^{-1}` flag and the consistency checks filled in.
pub fn integrality_verdict(chi: &DirichletChar, p: u64, opts: &ScanOptions) -> Result<VerdictRecord> {
    require_odd_prime(p)?;
    require_primitive_odd(chi)?;
    let l = l_value_cached(chi, opts.cache)?.l0;
    verdict_from_l_value(chi, &l, p, opts.precision)
}

fn validate(record: &VerdictRecord) -> Result<()> {
    if !record.classification_consistent || !record.pole_order_consistent() {
        return Err(Error::ClassificationViolation(Box::new(record.clone())));
    }
    if !record.global_consistent {
        return Err(Error::IntegralityViolation(format!(
            "L(0, {}) global integrality is {}",
            record.character, record.global_integral
        )));
    }
    Ok(())
}

fn l_values(chars: &[DirichletChar], opts: &ScanOptions) -> Result<Vec<CycloElt>> {
    par_map(opts.jobs, chars, |c| l_value_cached(c, opts.cache).map(|r| r.l0))
        .into_iter()
        .collect()
}

/// A character and prime at which `L(0, χ)` fails to be integral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Locus {
    pub f: u64,
    pub p: u64,
    pub character: CharKey,
    pub valuation: Valuation,
}

/// Observed and predicted number of non-integral characters of
/// conductor `p^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub p: u64,
    pub d: u32,
    pub conductor: u64,
    pub observed: usize,
    pub expected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Summary {
    pub characters: usize,
    pub primes: Vec<u64>,
    pub records: usize,
    pub non_integral: usize,
    pub loci: Vec<Locus>,
    pub level_counts: Vec<LevelCount>,
    /// Records with conductor `p^d·m`, `m > 1`, and `χ ≡ ω^{-1}`.
    pub vanishing_probed: usize,
    /// Of those, how many have `L(0, χ) ≡ 0 (mod 𝔭)`.
    pub vanishing_zero: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub records: Vec<VerdictRecord>,
    pub summary: Prop1Summary,
}

/// Verdicts for every primitive odd character of conductor `≤ f_max` at
/// every odd prime `≤ p_max`, sorted by character then prime. Fails on
/// the first inconsistent record or on a count mismatch.
pub fn prop1_scan(f_max: u64, p_max: u64, opts: &ScanOptions) -> Result<Prop1Report> {
    if f_max < 3 || p_max < 3 {
        return Err(Error::InvalidArgument(format!(
            "prop1 needs fmax >= 3 and pmax >= 3 (got {f_max}, {p_max})"
        )));
    }
    let chars = primitive_characters_up_to(f_max, ParityFilter::Odd);
    let primes = odd_primes_up_to(p_max);
    let lvals = l_values(&chars, opts)?;
    let pairs: Vec<(usize, u64)> = (0..chars.len())
        .flat_map(|i| primes.iter().map(move |&p| (i, p)))
        .collect();
    let mut records: Vec<VerdictRecord> = par_map(opts.jobs, &pairs, |&(i, p)| {
        verdict_from_l_value(&chars[i], &lvals[i], p, opts.precision)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    records.sort_by(|a, b| (&a.character, a.p).cmp(&(&b.character, b.p)));
    for r in &records {
        validate(r)?;
    }

    let loci: Vec<Locus> = records
        .iter()
        .filter(|r| r.valuation.is_negative())
        .map(|r| Locus { f: r.character.f, p: r.p, character: r.character.clone(), valuation: r.valuation })
        .collect();
    let mut level_counts = Vec::new();
    for &p in &primes {
        let mut d = 1u32;
        while let Some(f) = p.checked_pow(d).filter(|&f| f <= f_max) {
            let observed = loci.iter().filter(|l| l.p == p && l.f == f).count();
            let expected = if d == 1 { 1 } else { euler_phi(p.pow(d - 1)) };
            if observed as u64 != expected {
                return Err(Error::CountLawViolation { p, d, observed, expected });
            }
            level_counts.push(LevelCount { p, d, conductor: f, observed, expected });
            d += 1;
        }
    }
    let probed: Vec<&VerdictRecord> = records.iter().filter(|r| r.l_zero_mod_p.is_some()).collect();
    let summary = Prop1Summary {
        characters: chars.len(),
        primes,
        records: records.len(),
        non_integral: loci.len(),
        loci,
        level_counts,
        vanishing_probed: probed.len(),
        vanishing_zero: probed.iter().filter(|r| r.l_zero_mod_p == Some(true)).count(),
    };
    Ok(Prop1Report { records, summary })
}

/// Outcome of the roots-of-unity integrality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeligneRibetRow {
    pub character: CharKey,
    /// Number of roots of unity in the field cut out by `χ`.
    pub w: u64,
    /// Power-basis coordinates of `w·L(0, χ)` in `Q(ζ_order)`.
    pub w_l: Vec<String>,
    pub integral: bool,
}

/// Number of roots of unity in the field cut out by `χ`: the largest
/// `n | lcm(2, f)` such that every `a` with `χ(a) = 1` is `1 mod n`.
pub fn roots_of_unity_count(chi: &DirichletChar) -> u64 {
    let f = chi.modulus();
    let m = lcm(2, f);
    let mut w = m;
    for a in 2..m {
        if gcd(a, m) == 1 && chi.exponent_at((a % f) as i64) == Some(0) {
            w = gcd(w, a - 1);
        }
    }
    w
}

fn deligne_ribet_from_l_value(chi: &DirichletChar, l: &CycloElt) -> Result<DeligneRibetRow> {
    let w = roots_of_unity_count(chi);
    let wl = l.scale(&BigRat::from_integer(BigInt::from(w)));
    let integral = wl.is_algebraic_integer();
    if !integral {
        return Err(Error::IntegralityViolation(format!("{w}·L(0, {}) = {wl}", chi.key())));
    }
    Ok(DeligneRibetRow { character: chi.key(), w, w_l: wl.to_coord_strings(), integral })
}

/// `w·L(0, χ)` is an algebraic integer.
pub fn deligne_ribet_check(chi: &DirichletChar, cache: Option<&B1Cache>) -> Result<DeligneRibetRow> {
    require_primitive_odd(chi)?;
    let l = l_value_cached(chi, cache)?.l0;
    deligne_ribet_from_l_value(chi, &l)
}

/// [`deligne_ribet_check`] over every primitive odd character of conductor
/// `≤ f_max`, in canonical order.
pub fn deligne_ribet_scan(f_max: u64, opts: &ScanOptions) -> Result<Vec<DeligneRibetRow>> {
    let chars = primitive_characters_up_to(f_max, ParityFilter::Odd);
    par_map(opts.jobs, &chars, |c| {
        let l = l_value_cached(c, opts.cache)?.l0;
        deligne_ribet_from_l_value(c, &l)
    })
    .into_iter()
    .collect()
}

/// One admissible exponent of the Kummer congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerRow {
    pub p: u64,
    pub n: u64,
    /// `B_{1,ω^n} mod p`.
    pub lhs: u64,
    /// `B_{n+1}/(n+1) mod p`.
    pub rhs: u64,
    pub equal: bool,
}

/// `r mod p` for a `p`-integral rational `r`.
pub fn rational_mod_p(r: &BigRat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = r.numer().mod_floor_u64(&pb);
    let den = r.denom().mod_floor_u64(&pb);
    let inv = mod_inv(den as i64, p)?;
    Some(((num as u128 * inv as u128) % p as u128) as u64)
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: &BigInt) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: &BigInt) -> u64 {
        let r = ((self % m) + m) % m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// `B_{1,ω^n} ≡ B_{n+1}/(n+1) (mod p)` for every odd `n` in `1..=p-4`,
/// with `ω` computed from Teichmüller lifts modulo `p^2`.
pub fn kummer_check(p: u64) -> Result<Vec<KummerRow>> {
    require_odd_prime(p)?;
    let p2 = (p as u128) * (p as u128);
    let omega: Vec<u128> = (1..p)
        .map(|a| teichmuller(a as i64, p, 2).map(|w| w.to_u128().expect("fits")))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut n = 1u64;
    while n + 4 <= p {
        let mut s: u128 = 0;
        for a in 1..p {
            let mut w = 1u128;
            for _ in 0..n {
                w = w * omega[(a - 1) as usize] % p2;
            }
            s = (s + a as u128 * w) % p2;
        }
        if !s.is_multiple_of(p as u128) {
            return Err(Error::IntegralityViolation(format!(
                "Σ a·ω(a)^{n} = {s} is not divisible by {p}"
            )));
        }
        let lhs = ((s / p as u128) % p as u128) as u64;
        let ratio = bernoulli_number((n + 1) as usize) / BigRat::from_integer(BigInt::from(n + 1));
        let rhs = rational_mod_p(&ratio, p)
            .ok_or_else(|| Error::IntegralityViolation(format!("B_{}/{} is not {p}-integral", n + 1, n + 1)))?;
        if lhs != rhs {
            return Err(Error::CongruenceViolation { p, n, lhs, rhs });
        }
        rows.push(KummerRow { p, n, lhs, rhs, equal: true });
        n += 2;
    }
    Ok(rows)
}

/// Predicted against computed pole valuation for one character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Remark2Row {
    pub character: CharKey,
    pub r: u32,
    pub expected: Valuation,
    pub computed: Valuation,
    pub equal: bool,
    pub tower: TowerDescriptor,
}

/// For every primitive character mod `p^r` (`1 ≤ r ≤ r_max`) congruent to
/// `ω^{-1}`, the valuation of `L(0, χ)` is the predicted pole order.
pub fn remark2_check(p: u64, r_max: u32, opts: &ScanOptions) -> Result<Vec<Remark2Row>> {
    require_odd_prime(p)?;
    let too_big = || {
        Error::InvalidArgument(format!(
            "{p}^{r_max} exceeds the conductor budget {REMARK2_CONDUCTOR_BUDGET}"
        ))
    };
    if r_max == 0 {
        return Err(Error::InvalidArgument("rmax must be at least 1".into()));
    }
    let top = p.checked_pow(r_max).ok_or_else(too_big)?;
    if top > REMARK2_CONDUCTOR_BUDGET {
        return Err(too_big());
    }
    let mut chars = Vec::new();
    for r in 1..=r_max {
        for chi in enumerate_characters(p.pow(r), true, ParityFilter::Odd) {
            if char_is_omega_power_mod_p(&chi, p, -1)? {
                chars.push((r, chi));
            }
        }
    }
    let rows: Vec<Remark2Row> = par_map(opts.jobs, &chars, |(r, chi)| {
        let rec = integrality_verdict(chi, p, opts)?;
        let expected = expected_pole_valuation(p, *r);
        let equal = rec.valuation == expected;
        if !equal {
            return Err(Error::ClassificationViolation(Box::new(rec)));
        }
        Ok(Remark2Row {
            character: rec.character,
            r: *r,
            expected,
            computed: rec.valuation,
            equal,
            tower: rec.tower,
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(rows)
}

mod bigint_as_number {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match n.to_u64() {
            Some(v) => v.serialize(s),
            None => n.to_string().serialize(s),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Per-factor valuations of the odd `L`-values mod `p` and the resulting
/// minus class number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub p: u64,
    pub factors: Vec<VerdictRecord>,
    #[serde(with = "bigint_as_number")]
    pub h_minus: BigInt,
    pub product_identity: bool,
    pub unique_pole: bool,
}

/// Exactly one odd character mod `p` has a pole (of valuation `-1`, at
/// `ω^{-1}`), and `p·2^{-(p-3)/2}·∏ L(0, χ)` is a positive integer.
pub fn equation_star_check(p: u64, opts: &ScanOptions) -> Result<StarReport> {
    require_odd_prime(p)?;
    let chars = enumerate_characters(p, true, ParityFilter::Odd);
    let factors: Vec<VerdictRecord> = par_map(opts.jobs, &chars, |c| integrality_verdict(c, p, opts))
        .into_iter()
        .collect::<Result<_>>()?;
    for r in &factors {
        validate(r)?;
    }
    let poles: Vec<&VerdictRecord> = factors.iter().filter(|r| r.valuation.is_negative()).collect();
    let unique_pole =
        poles.len() == 1 && poles[0].omega_inverse && poles[0].valuation == Valuation::finite(-1, 1);
    if !unique_pole {
        let offender = poles
            .iter()
            .find(|r| !r.omega_inverse || r.valuation != Valuation::finite(-1, 1))
            .or(poles.get(1))
            .copied()
            .or_else(|| factors.iter().find(|r| r.omega_inverse))
            .unwrap_or(&factors[0]);
        return Err(Error::ClassificationViolation(Box::new(offender.clone())));
    }
    let h_minus = minus_class_number_cached(p, opts.cache)?;
    Ok(StarReport { p, factors, product_identity: h_minus.is_positive(), h_minus, unique_pole })
}

/// A reduction class of characters and the tower its `L`-values were
/// reduced in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClass {
    /// Primitive character giving the prime-to-`p` part of every member.
    pub class: CharKey,
    pub members: Vec<CharKey>,
    pub excluded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerDescriptor>,
}

/// Comparison of the reductions of two `L`-values in one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRow {
    pub class: CharKey,
    pub chi1: CharKey,
    pub chi2: CharKey,
    /// Primes dividing `lcm(f1, f2)` whose Euler factors are removed.
    pub euler_primes: Vec<u64>,
    /// Residue-field images of `L(0, χ_i)`, coefficients of powers of the
    /// residue of the tower's tame root, lowest first.
    pub l1_mod_p: FpPoly,
    pub l2_mod_p: FpPoly,
    /// Residue-field images of `L(0, χ_i)·∏ (1 - χ_i(ℓ))` over
    /// `ℓ` in `euler_primes`.
    pub l1_adjusted_mod_p: FpPoly,
    pub l2_adjusted_mod_p: FpPoly,
    /// The primitive values agree mod `𝔭`.
    pub primitive_equal: bool,
    /// The Euler-adjusted values agree mod `𝔭`.
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub p: u64,
    pub f_max: u64,
    pub classes: Vec<CongruenceClass>,
    pub rows: Vec<CongruenceRow>,
    /// Members of non-excluded classes whose `L`-value is not integral.
    pub non_integral: Vec<CharKey>,
    /// Rows whose primitive values differ mod `𝔭`.
    pub primitive_differences: usize,
    /// Rows whose Euler-adjusted values differ, plus non-integral members.
    pub anomalies: usize,
}

/// Primitive character inducing the prime-to-`p`-order part of `χ`; two
/// characters have the same reduction mod `𝔭` exactly when these agree.
pub fn reduction_class(chi: &DirichletChar, p: u64) -> CharKey {
    let k = chi.value_order();
    let mut wild = 1u64;
    while (k / wild).is_multiple_of(p) {
        wild *= p;
    }
    let tame = k / wild;
    let e = if wild == 1 { 1 } else { crt_pair(1 % tame, tame, 0, wild) };
    chi.pow(e as i64).primitivize().1.key()
}

fn embed_with_escalation(z: &CycloElt, p: u64, k: u64, start: u32) -> Result<PadicElt> {
    let mut n = start.max(1);
    loop {
        match PadicTower::build(p, k, n)?.embed(z) {
            Err(Error::PrecisionExhausted { .. }) if n < PRECISION_CAP => n = (n * 2).min(PRECISION_CAP),
            other => return other,
        }
    }
}

/// Residue of `L(0, χ)·∏_{ℓ} (1 - χ(ℓ))` in the residue field of `tower`.
fn euler_adjusted_residue(l: &FpPoly, chi: &DirichletChar, primes: &[u64], tower: &PadicTower) -> FpPoly {
    let p = tower.p();
    let g = tower.residue_factor();
    let scale = tower.k() / chi.value_order();
    primes.iter().fold(l.clone(), |acc, &ell| match chi.exponent_at(ell as i64) {
        None => acc,
        Some(j) => {
            let factor = modp::sub(&[1], &tower.residue_of_zeta_pow(j * scale), p);
            modp::rem(&modp::mul(&acc, &factor, p), g, p)
        }
    })
}

/// Groups primitive odd characters of conductor `≤ f_max` by reduction
/// mod `𝔭`, skips classes congruent to `ω^{-1}`, and compares the
/// reductions of the `L`-values within each class, both as they are and
/// with the Euler factors at primes dividing either conductor removed.
/// Findings are reported, never raised.
pub fn congruence_scan(f_max: u64, p: u64, opts: &ScanOptions) -> Result<CongruenceReport> {
    require_odd_prime(p)?;
    let chars = primitive_characters_up_to(f_max, ParityFilter::Odd);
    let mut groups: BTreeMap<CharKey, Vec<usize>> = BTreeMap::new();
    for (i, c) in chars.iter().enumerate() {
        groups.entry(reduction_class(c, p)).or_default().push(i);
    }
    let lvals = l_values(&chars, opts)?;
    let groups: Vec<(CharKey, Vec<usize>)> = groups.into_iter().collect();

    type ClassResult = (CongruenceClass, Vec<CongruenceRow>, Vec<CharKey>);
    let results: Vec<ClassResult> = par_map(opts.jobs, &groups, |(class, idx)| -> Result<ClassResult> {
        let members: Vec<CharKey> = idx.iter().map(|&i| chars[i].key()).collect();
        let class_char = DirichletChar::from_key(class)?;
        if char_is_omega_power_mod_p(&class_char, p, -1)? {
            let cc = CongruenceClass { class: class.clone(), members, excluded: true, tower: None };
            return Ok((cc, Vec::new(), Vec::new()));
        }
        let k = idx.iter().fold(1u64, |acc, &i| lcm(acc, chars[i].value_order()));
        let elts: Vec<PadicElt> = idx
            .iter()
            .map(|&i| embed_with_escalation(&lvals[i], p, k, opts.precision))
            .collect::<Result<_>>()?;
        let n = elts.iter().map(|e| e.tower().precision()).max().unwrap_or(opts.precision);
        let tower = PadicTower::build(p, k, n)?;
        let residues: Vec<Option<FpPoly>> = elts.iter().map(|e| e.residue()).collect();
        let non_integral: Vec<CharKey> = members
            .iter()
            .zip(&residues)
            .filter(|(_, r)| r.is_none())
            .map(|(m, _)| m.clone())
            .collect();
        let mut rows = Vec::new();
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                let (Some(ra), Some(rb)) = (&residues[a], &residues[b]) else {
                    continue;
                };
                let (ca, cb) = (&chars[idx[a]], &chars[idx[b]]);
                let primes: Vec<u64> = factorize(lcm(ca.modulus(), cb.modulus())).iter().map(|&(q, _)| q).collect();
                let adj_a = euler_adjusted_residue(ra, ca, &primes, &tower);
                let adj_b = euler_adjusted_residue(rb, cb, &primes, &tower);
                rows.push(CongruenceRow {
                    class: class.clone(),
                    chi1: members[a].clone(),
                    chi2: members[b].clone(),
                    euler_primes: primes,
                    l1_mod_p: ra.clone(),
                    l2_mod_p: rb.clone(),
                    primitive_equal: ra == rb,
                    equal: adj_a == adj_b,
                    l1_adjusted_mod_p: adj_a,
                    l2_adjusted_mod_p: adj_b,
                });
            }
        }
        let cc = CongruenceClass { class: class.clone(), members, excluded: false, tower: Some(tower.descriptor()) };
        Ok((cc, rows, non_integral))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let mut classes = Vec::new();
    let mut rows = Vec::new();
    let mut non_integral = Vec::new();
    for (c, r, ni) in results {
        classes.push(c);
        rows.extend(r);
        non_integral.extend(ni);
    }
    let primitive_differences = rows.iter().filter(|r| !r.primitive_equal).count();
    let anomalies = rows.iter().filter(|r| !r.equal).count() + non_integral.len();
    Ok(CongruenceReport { p, f_max, classes, rows, non_integral, primitive_differences, anomalies })
}

/// `ω^{-1}` mod `p` (non-integral `L`-value) and its twist by a character
/// of order `p` mod `q` (integral `L`-value).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corollary1Witness {
    pub p: u64,
    pub q: u64,
    pub chi2: CharKey,
    pub omega_inverse: VerdictRecord,
    pub twisted: VerdictRecord,
    pub verified: bool,
}

/// The character mod `p` congruent to `ω^{-1}`.
pub fn omega_inverse_character(p: u64) -> Result<DirichletChar> {
    require_odd_prime(p)?;
    for chi in enumerate_characters(p, true, ParityFilter::Odd) {
        if char_is_omega_power_mod_p(&chi, p, -1)? {
            return Ok(chi);
        }
    }
    Err(Error::InvalidArgument(format!("no character mod {p} is congruent to ω^-1")))
}

pub fn corollary1_witness(p: u64, q: u64, opts: &ScanOptions) -> Result<Corollary1Witness> {
    require_odd_prime(p)?;
    if q < 2 || !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    if !(q - 1).is_multiple_of(p) {
        return Err(Error::NoOrderPCharacter { p, q });
    }
    let omega_inv = omega_inverse_character(p)?;
    let chi2 = enumerate_characters(q, false, ParityFilter::All)
        .into_iter()
        .find(|c| c.value_order() == p)
        .ok_or(Error::NoOrderPCharacter { p, q })?;
    let twisted = omega_inv.mul(&chi2);
    let r1 = integrality_verdict(&omega_inv, p, opts)?;
    let r2 = integrality_verdict(&twisted, p, opts)?;
    validate(&r1)?;
    validate(&r2)?;
    if r1.valuation != Valuation::finite(-1, 1) {
        return Err(Error::ClassificationViolation(Box::new(r1)));
    }
    if r2.valuation.is_negative() {
        return Err(Error::ClassificationViolation(Box::new(r2)));
    }
    Ok(Corollary1Witness { p, q, chi2: chi2.key(), omega_inverse: r1, twisted: r2, verified: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> ScanOptions<'static> {
        ScanOptions::default()
    }

    fn key(f: u64, chi: &[u64]) -> CharKey {
        CharKey { f, chi: chi.to_vec() }
    }

    fn quad3() -> DirichletChar {
        DirichletChar::new(3, vec![1]).unwrap()
    }

    #[test]
    fn verdict_examples() {
        let r = integrality_verdict(&quad3(), 3, &opts()).unwrap();
        assert_eq!(r.valuation, Valuation::finite(-1, 1));
        assert!(r.omega_inverse && !r.p_integral && !r.global_integral && r.is_consistent());

        // χ(2) = -ζ_4
        let chi = DirichletChar::new(5, vec![3]).unwrap();
        let r = integrality_verdict(&chi, 5, &opts()).unwrap();
        assert_eq!(r.valuation, Valuation::finite(-1, 1));
        assert_eq!(r.tower.factor, vec![3, 1]);

        let r = integrality_verdict(&quad3(), 7, &opts()).unwrap();
        assert_eq!(r.valuation, Valuation::finite(0, 1));
        assert!(r.p_integral && !r.omega_inverse && r.is_consistent());
    }

    #[test]
    fn verdict_rejects_bad_input() {
        let even = DirichletChar::new(5, vec![2]).unwrap();
        assert!(matches!(integrality_verdict(&even, 5, &opts()), Err(Error::InvalidArgument(_))));
        let imprimitive = quad3().lift(6).unwrap();
        assert!(matches!(
            integrality_verdict(&imprimitive, 3, &opts()),
            Err(Error::ImprimitiveInput { .. })
        ));
        assert!(integrality_verdict(&quad3(), 9, &opts()).is_err());
    }

    #[test]
    fn prop1_small_ranges() {
        let rep = prop1_scan(10, 7, &opts()).unwrap();
        let loci: Vec<(u64, u64)> = rep.summary.loci.iter().map(|l| (l.f, l.p)).collect();
        assert_eq!(loci, vec![(3, 3), (5, 5), (7, 7), (9, 3), (9, 3)]);
        assert!(rep.summary.loci.iter().all(|l| {
            let expected = if l.f == 9 { Valuation::finite(-1, 2) } else { Valuation::finite(-1, 1) };
            l.valuation == expected
        }));
        assert_eq!(rep.summary.primes, vec![3, 5, 7]);
        assert_eq!(rep.records.len(), rep.summary.characters * 3);

        let rep = prop1_scan(4, 3, &opts()).unwrap();
        assert_eq!(rep.summary.non_integral, 1);
        assert_eq!(rep.summary.loci[0].character, key(3, &[1]));
        assert!(matches!(prop1_scan(2, 7, &opts()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn prop1_is_independent_of_jobs_and_precision() {
        let a = prop1_scan(30, 11, &opts()).unwrap();
        let b = prop1_scan(30, 11, &ScanOptions { jobs: 4, ..opts() }).unwrap();
        assert_eq!(a, b);
        let c = prop1_scan(30, 11, &ScanOptions { precision: 32, ..opts() }).unwrap();
        let strip = |r: &Prop1Report| -> Vec<(CharKey, u64, Valuation, bool)> {
            r.records.iter().map(|x| (x.character.clone(), x.p, x.valuation, x.omega_inverse)).collect()
        };
        assert_eq!(strip(&a), strip(&c));
    }

    #[test]
    fn vanishing_probe_is_filled_for_composite_conductors() {
        let rep = prop1_scan(21, 3, &opts()).unwrap();
        let probed: Vec<&VerdictRecord> = rep.records.iter().filter(|r| r.l_zero_mod_p.is_some()).collect();
        assert_eq!(probed.len(), rep.summary.vanishing_probed);
        assert!(probed.iter().all(|r| r.omega_inverse && !r.prime_power_conductor && r.p_integral));
        assert!(probed.iter().any(|r| r.character.f == 21));
    }

    #[test]
    fn roots_of_unity_examples() {
        let cases = [
            (DirichletChar::new(3, vec![1]).unwrap(), 6, CycloElt::from_int(2, 2)),
            (DirichletChar::new(4, vec![1]).unwrap(), 4, CycloElt::from_int(2, 2)),
        ];
        for (chi, w, wl) in cases {
            let row = deligne_ribet_check(&chi, None).unwrap();
            assert_eq!(row.w, w);
            assert_eq!(CycloElt::from_coord_strings(chi.value_order(), &row.w_l).unwrap(), wl);
        }
        let chi = DirichletChar::new(5, vec![1]).unwrap();
        let row = deligne_ribet_check(&chi, None).unwrap();
        assert_eq!(row.w, 10);
        let expected = (&CycloElt::from_int(4, 3) + &CycloElt::zeta_pow(4, 1)).scale(&BigRat::from_integer(2.into()));
        assert_eq!(CycloElt::from_coord_strings(4, &row.w_l).unwrap(), expected);
        // the field of a character of conductor 7 and order 6 is Q(ζ_7)
        let chi = DirichletChar::new(7, vec![1]).unwrap();
        assert_eq!(roots_of_unity_count(&chi), 14);
        // order 2 mod 7: Q(√-7) has only ±1
        let chi = DirichletChar::new(7, vec![3]).unwrap();
        assert_eq!(roots_of_unity_count(&chi), 2);
    }

    #[test]
    fn kummer_examples() {
        let rows = kummer_check(5).unwrap();
        assert_eq!(rows, vec![KummerRow { p: 5, n: 1, lhs: 3, rhs: 3, equal: true }]);
        let rows = kummer_check(7).unwrap();
        assert_eq!(rows[0], KummerRow { p: 7, n: 1, lhs: 3, rhs: 3, equal: true });
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![1, 3]);
        assert!(kummer_check(3).unwrap().is_empty());
        assert!(kummer_check(9).is_err());
    }

    #[test]
    fn kummer_sees_irregularity_of_37() {
        let rows = kummer_check(37).unwrap();
        let zero: Vec<u64> = rows.iter().filter(|r| r.lhs == 0).map(|r| r.n).collect();
        assert_eq!(zero, vec![31]);
    }

    #[test]
    fn remark2_examples() {
        let rows = remark2_check(5, 1, &opts()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].computed, Valuation::finite(-1, 1));
        let rows = remark2_check(3, 3, &opts()).unwrap();
        let by_r = |r: u32| rows.iter().filter(|x| x.r == r).map(|x| x.computed).collect::<Vec<_>>();
        assert_eq!(by_r(1), vec![Valuation::finite(-1, 1)]);
        assert_eq!(by_r(2), vec![Valuation::finite(-1, 2); 2]);
        assert_eq!(by_r(3), vec![Valuation::finite(-1, 6); 6]);
        assert!(remark2_check(11, 3, &opts()).is_err());
    }

    #[test]
    fn star_examples() {
        let r3 = equation_star_check(3, &opts()).unwrap();
        assert_eq!(r3.h_minus, BigInt::from(1));
        assert!(r3.unique_pole && r3.product_identity);
        let r5 = equation_star_check(5, &opts()).unwrap();
        let mut vals: Vec<Valuation> = r5.factors.iter().map(|f| f.valuation).collect();
        vals.sort_by_key(|v| v.value());
        assert_eq!(vals, vec![Valuation::finite(-1, 1), Valuation::finite(0, 1)]);
        assert_eq!(r5.h_minus, BigInt::from(1));
        let r23 = equation_star_check(23, &opts()).unwrap();
        assert_eq!(r23.h_minus, BigInt::from(3));
        let json = serde_json::to_string(&r23).unwrap();
        assert!(json.contains("\"h_minus\":3"));
        assert_eq!(serde_json::from_str::<StarReport>(&json).unwrap(), r23);
    }

    #[test]
    fn reduction_class_drops_p_power_order() {
        // quadratic mod 3 times a character of order 5 mod 11, at p = 5
        let quint = enumerate_characters(11, false, ParityFilter::All)
            .into_iter()
            .find(|c| c.value_order() == 5)
            .unwrap();
        let chi = quad3().mul(&quint);
        assert_eq!(chi.conductor(), 33);
        assert_eq!(reduction_class(&chi, 5), key(3, &[1]));
        assert_eq!(reduction_class(&quad3(), 5), key(3, &[1]));
        assert_eq!(reduction_class(&chi, 3), chi.key());
    }

    #[test]
    fn congruence_examples() {
        let rep = congruence_scan(33, 5, &opts()).unwrap();
        let class = rep.classes.iter().find(|c| c.class == key(3, &[1])).unwrap();
        assert!(!class.excluded);
        assert!(class.members.iter().any(|m| m.f == 33));
        let row = rep
            .rows
            .iter()
            .find(|r| r.chi1 == key(3, &[1]) && r.chi2.f == 33)
            .unwrap();
        assert!(row.equal, "{row:?}");
        assert_eq!(row.euler_primes, vec![3, 11]);
        // L(0, χ_3) = 1/3 ≡ 2, and the conductor-33 value picks up 1 - χ_3(11) = 2
        assert_eq!((row.l1_mod_p.clone(), row.l2_mod_p.clone()), (vec![2], vec![4]));
        assert!(!row.primitive_equal);
        assert_eq!(rep.anomalies, 0);

        let rep = congruence_scan(21, 3, &opts()).unwrap();
        let class = rep.classes.iter().find(|c| c.class == key(3, &[1])).unwrap();
        assert!(class.excluded);
        assert!(class.members.iter().any(|m| m.f == 21));
        assert!(rep.rows.iter().all(|r| r.class != key(3, &[1])));
        assert_eq!(rep.anomalies, 0);
    }

    #[test]
    fn corollary1_examples() {
        for (p, q) in [(3, 7), (5, 11)] {
            let w = corollary1_witness(p, q, &opts()).unwrap();
            assert!(w.verified);
            assert_eq!(w.twisted.character.f, p * q);
            assert_eq!(w.omega_inverse.valuation, Valuation::finite(-1, 1));
            assert!(!w.twisted.valuation.is_negative());
        }
        assert!(matches!(
            corollary1_witness(5, 7, &opts()),
            Err(Error::NoOrderPCharacter { p: 5, q: 7 })
        ));
    }

    #[test]
    fn rational_reduction() {
        let r = BigRat::new(1.into(), 12.into());
        assert_eq!(rational_mod_p(&r, 7), Some(3));
        assert_eq!(rational_mod_p(&r, 3), None);
        assert_eq!(rational_mod_p(&BigRat::new((-1).into(), 2.into()), 5), Some(2));
    }

    #[test]
    fn verdict_records_round_trip_through_json() {
        let rep = prop1_scan(12, 5, &opts()).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        let back: Prop1Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
        assert!(json.contains("\"valuation\":\"-1/1\""));
    }
}
