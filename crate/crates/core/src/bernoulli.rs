//! Bernoulli numbers, generalized Bernoulli numbers `B_{1,χ}` and the
//! L-values `L(0, χ) = -B_{1,χ}` they determine.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::nt::{is_prime, odd_primes_up_to};
use crate::arith::{BigRat, CycloElt};
use crate::dirichlet::{
    enumerate_characters, weighted_exponent_counts, CharKey, DirichletChar, ParityFilter,
};
use crate::{Error, Result};

fn bernoulli_memo() -> &'static Mutex<Vec<BigRat>> {
    static MEMO: OnceLock<Mutex<Vec<BigRat>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(vec![BigRat::one()]))
}

/// `B_n` with `B_1 = -1/2`, from `Σ_{k≤n} C(n+1, k) B_k = 0`. Memoized.
pub fn bernoulli_number(n: usize) -> BigRat {
    let mut memo = bernoulli_memo().lock().unwrap();
    while memo.len() <= n {
        let m = memo.len();
        // binomials C(m+1, k) built incrementally
        let mut binom = BigInt::one();
        let mut acc = BigRat::zero();
        for (k, bk) in memo.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRat::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom is now C(m+1, m) = m+1
        memo.push(-acc / BigRat::from_integer(binom));
    }
    memo[n].clone()
}

/// `B_n` by the Akiyama-Tanigawa triangle; independent of the memoized
/// recurrence and used to cross-check it.
pub fn bernoulli_akiyama_tanigawa(n: usize) -> BigRat {
    let mut row: Vec<BigRat> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(BigRat::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            row[j - 1] = BigRat::from_integer(BigInt::from(j)) * (&row[j - 1] - &row[j]);
        }
    }
    // row[0] is B_n with the B_1 = +1/2 convention
    let b = row[0].clone();
    if n == 1 {
        -b
    } else {
        b
    }
}

/// Denominator of `B_n` predicted by von Staudt-Clausen: `∏_{(p-1) | n} p`
/// for even `n ≥ 2`.
pub fn von_staudt_clausen_denominator(n: usize) -> BigInt {
    assert!(n >= 2 && n.is_multiple_of(2));
    (2..=n as u64 + 1)
        .filter(|&p| is_prime(p) && (n as u64).is_multiple_of(p - 1))
        .fold(BigInt::one(), |acc, p| acc * BigInt::from(p))
}

/// Irregular pairs `(p, k)`: `k` even, `2 ≤ k ≤ p - 3`, `p | numer(B_k)`,
/// over odd primes `p ≤ p_max`.
pub fn irregular_pairs(p_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in odd_primes_up_to(p_max) {
        let pb = BigInt::from(p);
        for k in (2..=p.saturating_sub(3)).step_by(2) {
            if bernoulli_number(k as usize).numer().is_multiple_of(&pb) {
                out.push((p, k));
            }
        }
    }
    out
}

/// Verify every `B_n` (`2 ≤ n ≤ n_max`, even) against von Staudt-Clausen;
/// returns the first failing index.
pub fn check_von_staudt_clausen(n_max: usize) -> std::result::Result<(), usize> {
    for n in (2..=n_max).step_by(2) {
        if bernoulli_number(n).denom() != &von_staudt_clausen_denominator(n) {
            return Err(n);
        }
    }
    Ok(())
}

/// `B_{1,χ} = (1/f) Σ_{a=1}^{f} a·χ(a)` for any character mod `f`
/// (primitive or not); exact in `Q(ζ_k)`.
pub fn generalized_b1(chi: &DirichletChar) -> CycloElt {
    let f = chi.modulus();
    let counts = weighted_exponent_counts(chi);
    CycloElt::from_exponent_counts(chi.value_order(), counts)
        .scale(&BigRat::new(BigInt::one(), BigInt::from(f)))
}

#[derive(Clone, Debug)]
pub struct LValueRecord {
    pub character: DirichletChar,
    pub b1chi: CycloElt,
    pub l0: CycloElt,
}

impl LValueRecord {
    fn from_b1(chi: &DirichletChar, b1: CycloElt) -> Self {
        let l0 = -&b1;
        LValueRecord { character: chi.clone(), b1chi: b1, l0 }
    }
}

fn check_l_value_input(chi: &DirichletChar) -> Result<()> {
    let c = chi.conductor();
    if c != chi.modulus() {
        return Err(Error::ImprimitiveInput { modulus: chi.modulus(), conductor: c });
    }
    if chi.is_trivial() {
        return Err(Error::InvalidArgument(
            "L(0, χ) is only computed for nontrivial characters".into(),
        ));
    }
    Ok(())
}

fn compute_record(chi: &DirichletChar) -> LValueRecord {
    let b1 = if chi.is_odd() {
        generalized_b1(chi)
    } else {
        CycloElt::zero(chi.value_order())
    };
    if chi.is_odd() {
        assert!(!b1.is_zero(), "B_1,χ vanished for odd {chi:?}");
    }
    LValueRecord::from_b1(chi, b1)
}

/// `L(0, χ) = -B_{1,χ}` for a nontrivial primitive character. Even
/// characters give `0`.
pub fn l_value_at_zero(chi: &DirichletChar) -> Result<LValueRecord> {
    check_l_value_input(chi)?;
    Ok(compute_record(chi))
}

/// Same as [`l_value_at_zero`], reading and filling `cache` when given.
pub fn l_value_cached(chi: &DirichletChar, cache: Option<&B1Cache>) -> Result<LValueRecord> {
    check_l_value_input(chi)?;
    let Some(cache) = cache else {
        return Ok(compute_record(chi));
    };
    let key = chi.key();
    if let Some(b1) = cache.get(&key) {
        return Ok(LValueRecord::from_b1(chi, b1));
    }
    let rec = compute_record(chi);
    cache.insert(&key, &rec.b1chi)?;
    Ok(rec)
}

/// `∏_{χ odd mod p} L(0, χ)`, exact.
pub fn odd_l_value_product(p: u64, cache: Option<&B1Cache>) -> Result<CycloElt> {
    let mut acc = CycloElt::one(p - 1);
    for chi in enumerate_characters(p, true, ParityFilter::Odd) {
        acc = &acc * &l_value_cached(&chi, cache)?.l0;
    }
    Ok(acc)
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn positive_integer(r: &BigRat, what: &str) -> Result<BigInt> {
    if !r.is_integer() || !r.is_positive() {
        return Err(Error::NonIntegralResult(format!("{what} = {r}")));
    }
    Ok(r.to_integer())
}

/// `h⁻(p) = p · 2^{-(p-3)/2} · ∏_{χ odd mod p} L(0, χ)`.
pub fn minus_class_number(p: u64) -> Result<BigInt> {
    minus_class_number_cached(p, None)
}

pub fn minus_class_number_cached(p: u64, cache: Option<&B1Cache>) -> Result<BigInt> {
    require_odd_prime(p)?;
    let prod = odd_l_value_product(p, cache)?;
    let prod = prod.as_rational().ok_or_else(|| {
        Error::NonIntegralResult(format!("product of odd L-values mod {p} is not rational"))
    })?;
    let scale = BigRat::new(BigInt::from(p), BigInt::from(2).pow(((p - 3) / 2) as u32));
    positive_integer(&(prod * scale), &format!("h-({p})"))
}

/// `h⁻(p) = 2p · ∏_{χ odd} (-B_{1,χ}/2)`, the same quantity written with
/// generalized Bernoulli numbers.
pub fn minus_class_number_bernoulli_form(p: u64) -> Result<BigInt> {
    require_odd_prime(p)?;
    let half = BigRat::new(BigInt::from(-1), BigInt::from(2));
    let mut acc = CycloElt::from_int(p - 1, 2 * p as i64);
    for chi in enumerate_characters(p, true, ParityFilter::Odd) {
        acc = &acc * &generalized_b1(&chi).scale(&half);
    }
    let r = acc
        .as_rational()
        .ok_or_else(|| Error::NonIntegralResult("Bernoulli product is not rational".into()))?;
    positive_integer(&r, &format!("h-({p})"))
}

/// One line of the JSONL cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub f: u64,
    pub chi: Vec<u64>,
    pub k: u64,
    pub b1: Vec<String>,
}

impl CacheEntry {
    pub fn new(key: &CharKey, b1: &CycloElt) -> Self {
        CacheEntry {
            f: key.f,
            chi: key.chi.clone(),
            k: b1.order(),
            b1: b1.to_coord_strings(),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("cache entries serialize")
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Cache(format!("{e}: {line}")))
    }

    pub fn value(&self) -> Result<CycloElt> {
        CycloElt::from_coord_strings(self.k, &self.b1)
    }
}

/// Persistent memo of `B_{1,χ}` keyed by `(f, exponents)`, stored as JSON
/// lines in `<dir>/b1chi.jsonl`. Entries are idempotent, so concurrent
/// writers racing on the same key are harmless.
pub struct B1Cache {
    path: PathBuf,
    entries: Mutex<HashMap<CharKey, CycloElt>>,
    writer: Mutex<File>,
}

pub const CACHE_FILE_NAME: &str = "b1chi.jsonl";

impl B1Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
        let path = dir.join(CACHE_FILE_NAME);
        let mut entries = HashMap::new();
        if path.exists() {
            let file = File::open(&path).map_err(|e| Error::Cache(e.to_string()))?;
            for line in BufReader::new(file).lines() {
                let line = line.map_err(|e| Error::Cache(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry = CacheEntry::parse_line(&line)?;
                let key = CharKey { f: entry.f, chi: entry.chi.clone() };
                let value = entry.value()?;
                if let Some(old) = entries.get(&key) {
                    if old != &value {
                        return Err(Error::Cache(format!("conflicting entries for {key}")));
                    }
                }
                entries.insert(key, value);
            }
        }
        let writer = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::Cache(e.to_string()))?;
        Ok(B1Cache { path, entries: Mutex::new(entries), writer: Mutex::new(writer) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &CharKey) -> Option<CycloElt> {
        self.entries.lock().unwrap().get(key).cloned()
    }

    pub fn insert(&self, key: &CharKey, b1: &CycloElt) -> Result<()> {
        {
            let mut entries = self.entries.lock().unwrap();
            if entries.contains_key(key) {
                return Ok(());
            }
            entries.insert(key.clone(), b1.clone());
        }
        let line = CacheEntry::new(key, b1).to_line();
        let mut w = self.writer.lock().unwrap();
        writeln!(w, "{line}")
            .and_then(|_| w.flush())
            .map_err(|e| Error::Cache(e.to_string()))
    }
}
