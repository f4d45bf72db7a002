//! A fixed model of the completion of `Q(ζ_k)` at one prime `𝔭` above `p`.
//!
//! Write `k = p^a·k'` with `p ∤ k'`. The unramified part is
//! `W = Z_p[x]/(g(x))`, where `g` is the Hensel lift of one irreducible factor
//! of `Φ_{k'}` mod `p`; the ramified part adjoins `π` with
//! `Φ_{p^a}(1 + π) = 0`, an Eisenstein polynomial of degree `e = φ(p^a)`.
//! Elements are `Σ_{j<e} Σ_{i<f} c[j][i]·π^j·x^i` with `c[j][i] ∈ Z/p^N`,
//! and `ζ_k ↦ (1 + π)·x`.
//!
//! The choice of factor fixes `𝔭`. Factors are ordered by the elementary
//! symmetric functions of their roots (see [`modp::factor_order_key`]) and
//! the first one is taken; for `k' = 4, p = 5` this sends `ζ_4 ↦ 2`.
//! Verdicts for individual characters depend on this rule: conjugate
//! characters swap verdicts when the rule changes.

pub mod modp;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::nt::{is_prime, lcm, mod_inv, mod_pow, multiplicative_order, val_u64};
use crate::arith::{cyclotomic_poly, CycloElt};
use crate::dirichlet::DirichletChar;
use crate::{Error, Result};

use modp::FpPoly;

/// Starting working precision of the escalation policy.
pub const DEFAULT_PRECISION: u32 = 16;
/// Escalation stops here with [`Error::PrecisionExhausted`].
pub const PRECISION_CAP: u32 = 512;

/// `v_𝔭` normalized so that `v(p) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Ratio<i64>),
    /// The element vanishes modulo `p^N`; undecidable at this precision.
    AbovePrecision,
}

impl Valuation {
    pub fn finite(num: i64, den: i64) -> Self {
        Valuation::Finite(Ratio::new(num, den))
    }

    pub fn value(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::AbovePrecision => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Valuation::Finite(v) if v.is_negative())
    }

    /// Exact `"a/b"` rendering (the denominator is always written).
    pub fn to_exact_string(&self) -> String {
        match self {
            Valuation::Finite(v) => format!("{}/{}", v.numer(), v.denom()),
            Valuation::AbovePrecision => "above_precision".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "above_precision" {
            return Ok(Valuation::AbovePrecision);
        }
        let bad = || Error::InvalidArgument(format!("malformed valuation {s:?}"));
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d <= 0 {
            return Err(bad());
        }
        Ok(Valuation::finite(n, d))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_exact_string())
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Valuation::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Everything needed to rebuild a tower and re-verify a verdict.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub p: u64,
    pub k: u64,
    pub precision: u32,
    pub k_tame: u64,
    pub wild_exp: u32,
    pub e_ram: usize,
    pub f_res: usize,
    /// Chosen factor of `Φ_{k'}` mod `p`, coefficients lowest degree first.
    pub factor: Vec<u64>,
}

pub struct PadicTower {
    p: u64,
    k: u64,
    precision: u32,
    k_tame: u64,
    wild_exp: u32,
    residue_factor: FpPoly,
    lifted_poly: Vec<BigInt>,
    eisenstein: Vec<BigInt>,
    e_ram: usize,
    f_res: usize,
    modulus: BigInt,
    /// Images of `ζ_k^j`, `0 ≤ j < k`.
    zeta_images: Vec<Vec<BigInt>>,
}

impl fmt::Debug for PadicTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicTower({:?})", self.descriptor())
    }
}

type TowerCache = Mutex<HashMap<(u64, u64, u32), Arc<PadicTower>>>;

fn tower_cache() -> &'static TowerCache {
    static CACHE: OnceLock<TowerCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn residue_factor_cache() -> &'static Mutex<HashMap<(u64, u64), FpPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), FpPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// The selected irreducible factor of `Φ_{k'}` mod `p` (`p ∤ k'`).
pub fn chosen_residue_factor(p: u64, k_tame: u64) -> FpPoly {
    if let Some(g) = residue_factor_cache().lock().unwrap().get(&(p, k_tame)) {
        return g.clone();
    }
    let d = multiplicative_order(p % k_tame, k_tame) as usize;
    let seed = p.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k_tame;
    let factors = modp::factor_equal_degree_sorted(&cyclotomic_poly(k_tame), d, p, seed);
    let g = factors.into_iter().next().expect("Φ_k' has a factor");
    residue_factor_cache()
        .lock()
        .unwrap()
        .insert((p, k_tame), g.clone());
    g
}

fn to_fp(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn zpoly_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out.iter().map(|c| c.mod_floor(m)).collect()
}

/// Hensel-lift `phi ≡ g·h (mod p)` to `phi ≡ G·H (mod p^n)`, `G` monic and
/// `G ≡ g`. Linear lifting, one digit per step.
fn hensel_lift(phi: &[BigInt], g: &FpPoly, p: u64, n: u32) -> Vec<BigInt> {
    let phi_p: FpPoly = modp::trim(phi.iter().map(|c| to_fp(c, p)).collect());
    let (h, r) = modp::divrem(&phi_p, g, p);
    assert!(r.is_empty(), "chosen factor must divide Φ mod p");
    let (one, s, t) = modp::xgcd(g, &h, p);
    assert_eq!(one, vec![1], "Φ_k' is squarefree mod p");
    let to_z = |v: &FpPoly| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let mut big_g = to_z(g);
    let mut big_h = to_z(&h);
    let pb = BigInt::from(p);
    let mut pm = pb.clone();
    for _ in 1..n {
        let next = &pm * &pb;
        let gh = zpoly_mul(&big_g, &big_h, &next);
        let err: FpPoly = modp::trim(
            (0..phi.len())
                .map(|i| {
                    let diff = (&phi[i] - gh.get(i).cloned().unwrap_or_default()).mod_floor(&next);
                    debug_assert!((&diff % &pm).is_zero());
                    to_fp(&(diff / &pm), p)
                })
                .collect(),
        );
        if !err.is_empty() {
            let te = modp::mul(&t, &err, p);
            let (q, g1) = modp::divrem(&te, g, p);
            let h1 = modp::add(&modp::mul(&s, &err, p), &modp::mul(&q, &h, p), p);
            for (i, c) in g1.iter().enumerate() {
                big_g[i] += &pm * BigInt::from(*c);
            }
            if big_h.len() < h1.len() {
                big_h.resize(h1.len(), BigInt::zero());
            }
            for (i, c) in h1.iter().enumerate() {
                big_h[i] += &pm * BigInt::from(*c);
            }
        }
        pm = next;
    }
    big_g
}

impl PadicTower {
    /// Build (or fetch from the process-wide cache) the tower for `Q(ζ_k)`
    /// at the canonical prime above `p`, working modulo `p^N`.
    pub fn build(p: u64, k: u64, precision: u32) -> Result<Arc<PadicTower>> {
        Self::validate(p, k, precision)?;
        let key = (p, k, precision);
        if let Some(t) = tower_cache().lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let built = Arc::new(Self::construct(p, k, precision));
        Ok(tower_cache()
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(built)
            .clone())
    }

    /// Build without consulting or filling the cache.
    pub fn build_uncached(p: u64, k: u64, precision: u32) -> Result<Arc<PadicTower>> {
        Self::validate(p, k, precision)?;
        Ok(Arc::new(Self::construct(p, k, precision)))
    }

    fn validate(p: u64, k: u64, precision: u32) -> Result<()> {
        require_odd_prime(p)?;
        if precision < 1 || k < 1 {
            return Err(Error::InvalidArgument("need k ≥ 1 and N ≥ 1".into()));
        }
        Ok(())
    }

    fn construct(p: u64, k: u64, precision: u32) -> PadicTower {
        let wild_exp = val_u64(k, p);
        let p_a = p.pow(wild_exp);
        let k_tame = k / p_a;
        let modulus = BigInt::from(p).pow(precision);
        let residue_factor = chosen_residue_factor(p, k_tame);
        let phi: Vec<BigInt> = cyclotomic_poly(k_tame).coeffs().to_vec();
        let lifted_poly = hensel_lift(&phi, &residue_factor, p, precision);
        let f_res = lifted_poly.len() - 1;
        // Φ_{p^a}(1 + π) = Σ_{i<p} (1+π)^{i p^{a-1}}, or π when a = 0.
        let eisenstein: Vec<BigInt> = if wild_exp == 0 {
            vec![BigInt::zero(), BigInt::one()]
        } else {
            let step = p.pow(wild_exp - 1) as usize;
            let deg = step * (p as usize - 1);
            let mut coeffs = vec![BigInt::zero(); deg + 1];
            for i in 0..p as usize {
                let n = i * step;
                let mut binom = BigInt::one();
                for (j, slot) in coeffs.iter_mut().enumerate().take(n + 1) {
                    *slot += &binom;
                    binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
                }
            }
            coeffs.iter().map(|c| c.mod_floor(&modulus)).collect()
        };
        let e_ram = eisenstein.len() - 1;
        let mut tower = PadicTower {
            p,
            k,
            precision,
            k_tame,
            wild_exp,
            residue_factor,
            lifted_poly,
            eisenstein,
            e_ram,
            f_res,
            modulus,
            zeta_images: Vec::new(),
        };
        // ζ_k ↦ (1 + π)·x, given as a raw (π-degree ≤ 1, x-degree ≤ 1) array
        let mut raw = vec![vec![BigInt::zero(); 2]; 2];
        raw[0][1] = BigInt::one();
        raw[1][1] = BigInt::one();
        let zeta = tower.reduce_raw(raw);
        let mut images = Vec::with_capacity(k as usize);
        images.push(tower.one_coeffs());
        for j in 1..k as usize {
            images.push(tower.mul_coeffs(&images[j - 1], &zeta));
        }
        tower.zeta_images = images;
        tower
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn e_ram(&self) -> usize {
        self.e_ram
    }

    pub fn f_res(&self) -> usize {
        self.f_res
    }

    pub fn k_tame(&self) -> u64 {
        self.k_tame
    }

    pub fn wild_exp(&self) -> u32 {
        self.wild_exp
    }

    pub fn residue_factor(&self) -> &[u64] {
        &self.residue_factor
    }

    pub fn lifted_poly(&self) -> &[BigInt] {
        &self.lifted_poly
    }

    pub fn eisenstein_poly(&self) -> &[BigInt] {
        &self.eisenstein
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor {
            p: self.p,
            k: self.k,
            precision: self.precision,
            k_tame: self.k_tame,
            wild_exp: self.wild_exp,
            e_ram: self.e_ram,
            f_res: self.f_res,
            factor: self.residue_factor.clone(),
        }
    }

    fn degree(&self) -> usize {
        self.e_ram * self.f_res
    }

    fn one_coeffs(&self) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = BigInt::one();
        c
    }

    /// Reduce an arbitrary `raw[j][i]` (coefficient of `π^j x^i`) to
    /// canonical coordinates.
    fn reduce_raw(&self, raw: Vec<Vec<BigInt>>) -> Vec<BigInt> {
        let f = self.f_res;
        let e = self.e_ram;
        let m = &self.modulus;
        let g = &self.lifted_poly;
        // x-degree reduction, row by row (g monic of degree f)
        let mut rows: Vec<Vec<BigInt>> = raw
            .into_iter()
            .map(|mut row| {
                for i in (f..row.len()).rev() {
                    let c = std::mem::take(&mut row[i]).mod_floor(m);
                    if c.is_zero() {
                        continue;
                    }
                    for (j, gj) in g[..f].iter().enumerate() {
                        if !gj.is_zero() {
                            row[i - f + j] -= &c * gj;
                        }
                    }
                }
                row.resize(f, BigInt::zero());
                row.iter().map(|c| c.mod_floor(m)).collect()
            })
            .collect();
        // π-degree reduction (E monic of degree e, integer coefficients)
        let eis = &self.eisenstein;
        for j in (e..rows.len()).rev() {
            let top = std::mem::take(&mut rows[j]);
            if top.iter().all(|c| c.is_zero()) {
                continue;
            }
            for (t, et) in eis[..e].iter().enumerate() {
                if et.is_zero() {
                    continue;
                }
                let target = &mut rows[j - e + t];
                for (i, c) in top.iter().enumerate() {
                    if !c.is_zero() {
                        target[i] = (&target[i] - c * et).mod_floor(m);
                    }
                }
            }
        }
        rows.resize(e, vec![BigInt::zero(); f]);
        rows.truncate(e);
        rows.into_iter().flatten().collect()
    }

    fn mul_coeffs(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let f = self.f_res;
        let e = self.e_ram;
        let mut raw = vec![vec![BigInt::zero(); 2 * f - 1]; 2 * e - 1];
        for ja in 0..e {
            for ia in 0..f {
                let x = &a[ja * f + ia];
                if x.is_zero() {
                    continue;
                }
                for jb in 0..e {
                    let row = &mut raw[ja + jb];
                    for ib in 0..f {
                        let y = &b[jb * f + ib];
                        if !y.is_zero() {
                            row[ia + ib] += x * y;
                        }
                    }
                }
            }
        }
        self.reduce_raw(raw)
    }

    fn element(self: &Arc<Self>, coeffs: Vec<BigInt>, den_exp: u32) -> PadicElt {
        PadicElt { tower: self.clone(), coeffs, den_exp }
    }

    pub fn zero(self: &Arc<Self>) -> PadicElt {
        self.element(vec![BigInt::zero(); self.degree()], 0)
    }

    pub fn one(self: &Arc<Self>) -> PadicElt {
        self.element(self.one_coeffs(), 0)
    }

    /// The uniformizer `π = ζ_{p^a} - 1` (or `p` when `a = 0`).
    pub fn uniformizer(self: &Arc<Self>) -> PadicElt {
        let mut c = vec![BigInt::zero(); self.degree()];
        if self.e_ram > 1 {
            c[self.f_res] = BigInt::one();
        } else {
            c[0] = BigInt::from(self.p);
        }
        self.element(c, 0)
    }

    pub fn from_integer(self: &Arc<Self>, n: &BigInt) -> PadicElt {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = n.mod_floor(&self.modulus);
        self.element(c, 0)
    }

    /// Image of `ζ_k^j`.
    pub fn zeta_pow(self: &Arc<Self>, j: i64) -> PadicElt {
        let idx = j.rem_euclid(self.k as i64) as usize;
        self.element(self.zeta_images[idx].clone(), 0)
    }

    /// Embed `z ∈ Q(ζ_d)`, `d | k`, via `ζ_d = ζ_k^{k/d}`. A power of `p`
    /// in the denominator is carried as an explicit shift.
    pub fn embed(self: &Arc<Self>, z: &CycloElt) -> Result<PadicElt> {
        let d = z.order();
        if !self.k.is_multiple_of(d) {
            return Err(Error::IncompatibleOrders { from: d, to: self.k });
        }
        let step = (self.k / d) as usize;
        let den = z.denominator();
        let pb = BigInt::from(self.p);
        let mut den_exp = 0u32;
        let mut unit_den = den.clone();
        while (&unit_den % &pb).is_zero() {
            unit_den /= &pb;
            den_exp += 1;
        }
        if den_exp >= self.precision {
            return Err(Error::PrecisionExhausted { cap: self.precision });
        }
        let unit_inv = unit_den
            .modinv(&self.modulus)
            .expect("prime-to-p part of the denominator is invertible");
        let m = &self.modulus;
        let mut acc = vec![BigInt::zero(); self.degree()];
        for (i, c) in z.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // c·den is an integer
            let n = (c.numer() * (&den / c.denom())).mod_floor(m);
            let n = (n * &unit_inv).mod_floor(m);
            for (slot, img) in acc.iter_mut().zip(&self.zeta_images[i * step]) {
                if !img.is_zero() {
                    *slot += &n * img;
                }
            }
        }
        let acc = acc.into_iter().map(|c| c.mod_floor(m)).collect();
        Ok(self.element(acc, den_exp))
    }

    /// Image of `ζ_k^j` in the residue field `F_p[x]/(ḡ)`: `x̄^j`.
    pub fn residue_of_zeta_pow(&self, j: u64) -> FpPoly {
        modp::powmod_u64(&[0, 1], j, &self.residue_factor, self.p)
    }
}

/// Residue-field image of `ζ_k^j` under the canonical prime, without
/// building a full tower (only the factor of `Φ_{k'}` mod `p` is needed).
pub fn residue_of_root_of_unity(p: u64, k: u64, j: u64) -> FpPoly {
    let k_tame = k / p.pow(val_u64(k, p));
    let g = chosen_residue_factor(p, k_tame);
    modp::powmod_u64(&[0, 1], j, &g, p)
}

#[derive(Clone)]
pub struct PadicElt {
    tower: Arc<PadicTower>,
    coeffs: Vec<BigInt>,
    /// The element is `coeffs / p^den_exp`.
    den_exp: u32,
}

impl fmt::Debug for PadicElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PadicElt(p={}, k={}, N={}, den=p^{}, {:?})",
            self.tower.p, self.tower.k, self.tower.precision, self.den_exp, self.coeffs
        )
    }
}

impl PadicElt {
    pub fn tower(&self) -> &Arc<PadicTower> {
        &self.tower
    }

    /// Coefficient of `π^j x^i` (before the denominator shift).
    pub fn coeff(&self, j: usize, i: usize) -> &BigInt {
        &self.coeffs[j * self.tower.f_res + i]
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    fn same_tower(&self, other: &PadicElt) {
        assert!(
            Arc::ptr_eq(&self.tower, &other.tower),
            "operands live in different towers"
        );
    }

    /// Rewrite with a larger denominator exponent.
    fn with_den(&self, den_exp: u32) -> Vec<BigInt> {
        let shift = den_exp - self.den_exp;
        let scale = BigInt::from(self.tower.p).pow(shift);
        let m = &self.tower.modulus;
        self.coeffs.iter().map(|c| (c * &scale).mod_floor(m)).collect()
    }

    pub fn valuation(&self) -> Valuation {
        let t = &self.tower;
        let e = t.e_ram as i64;
        let mut best: Option<Ratio<i64>> = None;
        for j in 0..t.e_ram {
            let vw = (0..t.f_res)
                .filter_map(|i| {
                    let c = &self.coeffs[j * t.f_res + i];
                    (!c.is_zero()).then(|| padic_valuation_bigint(c, t.p) as i64)
                })
                .min();
            if let Some(vw) = vw {
                let cand = Ratio::new(vw * e + j as i64, e);
                best = Some(best.map_or(cand, |b: Ratio<i64>| b.min(cand)));
            }
        }
        match best {
            Some(v) => Valuation::Finite(v - Ratio::from_integer(self.den_exp as i64)),
            None => Valuation::AbovePrecision,
        }
    }

    /// Image in the residue field `F_p[x]/(ḡ)`, or `None` when the
    /// valuation is negative.
    pub fn residue(&self) -> Option<FpPoly> {
        match self.valuation() {
            // known to vanish modulo p^{N - den} with N > den
            Valuation::AbovePrecision => return Some(Vec::new()),
            Valuation::Finite(v) if v.is_negative() => return None,
            Valuation::Finite(_) => {}
        }
        let p = self.tower.p;
        let scale = BigInt::from(p).pow(self.den_exp);
        let c0: Vec<u64> = (0..self.tower.f_res)
            .map(|i| {
                let c = &self.coeffs[i];
                debug_assert!((c % &scale).is_zero());
                to_fp(&(c / &scale), p)
            })
            .collect();
        Some(modp::trim(c0))
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Equality as elements of `O/p^{N - max den}`.
    pub fn same_value(&self, other: &PadicElt) -> bool {
        self.same_tower(other);
        let d = self.den_exp.max(other.den_exp);
        self.with_den(d) == other.with_den(d)
    }
}

impl Add for &PadicElt {
    type Output = PadicElt;
    fn add(self, rhs: &PadicElt) -> PadicElt {
        self.same_tower(rhs);
        let d = self.den_exp.max(rhs.den_exp);
        let m = &self.tower.modulus;
        let coeffs = self
            .with_den(d)
            .into_iter()
            .zip(rhs.with_den(d))
            .map(|(a, b)| (a + b).mod_floor(m))
            .collect();
        self.tower.element(coeffs, d)
    }
}

impl Neg for &PadicElt {
    type Output = PadicElt;
    fn neg(self) -> PadicElt {
        let m = &self.tower.modulus;
        let coeffs = self.coeffs.iter().map(|c| (-c).mod_floor(m)).collect();
        self.tower.element(coeffs, self.den_exp)
    }
}

impl Sub for &PadicElt {
    type Output = PadicElt;
    fn sub(self, rhs: &PadicElt) -> PadicElt {
        self + &(-rhs)
    }
}

impl Mul for &PadicElt {
    type Output = PadicElt;
    fn mul(self, rhs: &PadicElt) -> PadicElt {
        self.same_tower(rhs);
        let coeffs = self.tower.mul_coeffs(&self.coeffs, &rhs.coeffs);
        #[allow(clippy::suspicious_arithmetic_impl)]
        let den_exp = self.den_exp + rhs.den_exp;
        self.tower.element(coeffs, den_exp)
    }
}

fn padic_valuation_bigint(c: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut c = c.clone();
    while !c.is_zero() && (&c % &pb).is_zero() {
        c /= &pb;
        v += 1;
    }
    v
}

/// `v_𝔭(z)` at the canonical prime above `p` for `z ∈ Q(ζ_d)`, computed in
/// the tower of `Q(ζ_k)` (`d | k`). Starts at `start` digits and doubles on
/// [`Valuation::AbovePrecision`] up to [`PRECISION_CAP`]. Returns the
/// valuation and the precision that decided it.
pub fn valuation_with_escalation(z: &CycloElt, p: u64, k: u64, start: u32) -> Result<(Ratio<i64>, u32)> {
    if z.is_zero() {
        return Err(Error::PrecisionExhausted { cap: PRECISION_CAP });
    }
    let mut n = start.max(1);
    loop {
        let tower = PadicTower::build(p, k, n)?;
        match tower.embed(z) {
            Ok(elt) => {
                if let Valuation::Finite(v) = elt.valuation() {
                    return Ok((v, n));
                }
            }
            Err(Error::PrecisionExhausted { .. }) => {}
            Err(e) => return Err(e),
        }
        if n >= PRECISION_CAP {
            return Err(Error::PrecisionExhausted { cap: PRECISION_CAP });
        }
        n = (n * 2).min(PRECISION_CAP);
    }
}

/// Teichmüller lift of `a` modulo `p^N`: the `(p-1)`-th root of unity
/// congruent to `a` mod `p`, as the fixed point of `x ↦ x^p`.
pub fn teichmuller(a: i64, p: u64, precision: u32) -> Result<BigInt> {
    require_odd_prime(p)?;
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidArgument(format!("{a} is not a unit mod {p}")));
    }
    let m = BigInt::from(p).pow(precision);
    let pe = BigInt::from(p);
    let mut x = BigInt::from(a).mod_floor(&m);
    loop {
        let next = x.modpow(&pe, &m);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// Does `χ ≡ ω^t (mod 𝔭)`, i.e. does the residue of `χ(a)` equal `a^t mod p`
/// for every unit `a` mod `lcm(f, p)`? Only generators are tested.
pub fn char_is_omega_power_mod_p(chi: &DirichletChar, p: u64, t: i64) -> Result<bool> {
    require_odd_prime(p)?;
    let m = lcm(chi.modulus(), p);
    let k = chi.value_order();
    let basis = crate::dirichlet::UnitGroupBasis::get(m);
    let te = t.rem_euclid(p as i64 - 1) as u64;
    for g in basis.generators() {
        let j = chi
            .exponent_at(g.residue as i64)
            .expect("a unit mod lcm(f, p) is a unit mod f");
        let lhs = residue_of_root_of_unity(p, k, j);
        let rhs = modp::trim(vec![mod_pow(g.residue % p, te, p)]);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a^t mod p` for a unit `a` and any integer `t`.
pub fn power_mod_p(a: u64, t: i64, p: u64) -> u64 {
    let base = if t < 0 { mod_inv(a as i64, p).unwrap() } else { a % p };
    mod_pow(base, t.unsigned_abs(), p)
}

/// Exact valuation of a rational integer at `p` (for oracle comparisons).
pub fn rational_valuation(r: &num_rational::BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let num = padic_valuation_bigint(r.numer(), p) as i64;
    let den = padic_valuation_bigint(r.denom(), p) as i64;
    Some(num - den)
}

#[cfg(test)]
mod tests;
