//! Exact arithmetic in the cyclotomic field `Q(ζ_k)`.
//!
//! Elements are stored in the power basis `ζ^0, …, ζ^{φ(k)-1}` reduced
//! modulo `Φ_k`, so two elements of the same order are equal exactly when
//! their coordinate vectors are. Mixed-order arithmetic first embeds both
//! operands into `Q(ζ_lcm)` through `ζ_k = ζ_K^{K/k}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::nt::{euler_phi, gcd, lcm};
use super::poly::cyclotomic_poly;
use crate::{Error, Result};

pub type BigRat = BigRational;

#[derive(Clone, Debug)]
pub struct CycloElt {
    order: u64,
    coords: Vec<BigRat>,
}

/// Reduce an integer vector indexed by exponents of ζ_k (any length) to the
/// canonical power-basis coordinates.
pub(crate) fn reduce_int_exponents(k: u64, raw: Vec<BigInt>) -> Vec<BigInt> {
    let kk = k as usize;
    let mut folded = vec![BigInt::zero(); kk];
    for (i, c) in raw.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % kk] += c;
        }
    }
    let phi = cyclotomic_poly(k);
    let d = phi.degree().unwrap();
    let pc = phi.coeffs();
    for i in (d..kk).rev() {
        let c = std::mem::take(&mut folded[i]);
        if c.is_zero() {
            continue;
        }
        for (j, a) in pc[..d].iter().enumerate() {
            if !a.is_zero() {
                folded[i - d + j] -= &c * a;
            }
        }
    }
    folded.truncate(d);
    folded
}

fn reduce_rat_exponents(k: u64, raw: Vec<BigRat>) -> Vec<BigRat> {
    let kk = k as usize;
    let mut folded = vec![BigRat::zero(); kk];
    for (i, c) in raw.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % kk] += c;
        }
    }
    let phi = cyclotomic_poly(k);
    let d = phi.degree().unwrap();
    let pc = phi.coeffs();
    for i in (d..kk).rev() {
        let c = std::mem::take(&mut folded[i]);
        if c.is_zero() {
            continue;
        }
        for (j, a) in pc[..d].iter().enumerate() {
            if !a.is_zero() {
                folded[i - d + j] -= &c * BigRat::from_integer(a.clone());
            }
        }
    }
    folded.truncate(d);
    folded
}

impl CycloElt {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        CycloElt {
            order,
            coords: vec![BigRat::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, BigRat::one())
    }

    pub fn from_rational(order: u64, r: BigRat) -> Self {
        let mut z = Self::zero(order);
        z.coords[0] = r;
        z
    }

    pub fn from_int(order: u64, n: i64) -> Self {
        Self::from_rational(order, BigRat::from_integer(BigInt::from(n)))
    }

    /// `ζ_k^j` for any integer `j`.
    pub fn zeta_pow(order: u64, j: i64) -> Self {
        let e = j.rem_euclid(order as i64) as usize;
        let mut raw = vec![BigInt::zero(); e + 1];
        raw[e] = BigInt::one();
        Self::from_exponent_counts(order, raw)
    }

    /// `Σ_j counts[j]·ζ_k^j`; indices may exceed `k`.
    pub fn from_exponent_counts(order: u64, counts: Vec<BigInt>) -> Self {
        let coords = reduce_int_exponents(order, counts)
            .into_iter()
            .map(BigRat::from_integer)
            .collect();
        CycloElt { order, coords }
    }

    /// Build from explicit power-basis coordinates (length must be `φ(k)`).
    pub fn from_coords(order: u64, coords: Vec<BigRat>) -> Result<Self> {
        if coords.len() != euler_phi(order) as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates for order {order}, got {}",
                euler_phi(order),
                coords.len()
            )));
        }
        Ok(CycloElt { order, coords })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coords(&self) -> &[BigRat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRat> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// True iff every coordinate is an integer; this decides membership in
    /// `Z[ζ_k]`, which is the full ring of integers of `Q(ζ_k)`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| {
            let d = c.denom();
            num_integer::Integer::lcm(&acc, d)
        })
    }

    pub fn scale(&self, r: &BigRat) -> Self {
        CycloElt {
            order: self.order,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Image under `ζ_k ↦ ζ_K^{K/k}`.
    pub fn embed_into(&self, target: u64) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(Error::IncompatibleOrders {
                from: self.order,
                to: target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut raw = vec![BigRat::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (i, c) in self.coords.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Ok(CycloElt {
            order: target,
            coords: reduce_rat_exponents(target, raw),
        })
    }

    fn merged(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let m = lcm(a.order, b.order);
        (a.embed_into(m).unwrap(), b.embed_into(m).unwrap())
    }

    /// Field automorphism `ζ_k ↦ ζ_k^j`, `gcd(j, k) = 1`.
    pub fn galois_conj(&self, j: i64) -> Result<Self> {
        let k = self.order;
        let jr = j.rem_euclid(k as i64) as u64;
        if gcd(jr, k) != 1 {
            return Err(Error::InvalidArgument(format!(
                "galois_conj exponent {j} is not coprime to {k}"
            )));
        }
        let mut raw = vec![BigRat::zero(); k as usize];
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                raw[(i as u64 * jr % k) as usize] += c;
            }
        }
        Ok(CycloElt {
            order: k,
            coords: reduce_rat_exponents(k, raw),
        })
    }

    /// Exponents `j` in `[1, k)` coprime to `k`, one per automorphism.
    pub fn galois_exponents(order: u64) -> Vec<u64> {
        if order == 1 {
            return vec![1];
        }
        (1..order).filter(|&j| gcd(j, order) == 1).collect()
    }

    /// Field norm to `Q`, the product of all Galois conjugates.
    pub fn norm(&self) -> BigRat {
        let mut acc = CycloElt::one(self.order);
        for j in Self::galois_exponents(self.order) {
            acc = &acc * &self.galois_conj(j as i64).unwrap();
        }
        acc.as_rational()
            .expect("product over all conjugates is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // z^{-1} = (∏_{σ≠1} σ(z)) / N(z)
        let mut cofactor = CycloElt::one(self.order);
        for j in Self::galois_exponents(self.order) {
            if j == 1 {
                continue;
            }
            cofactor = &cofactor * &self.galois_conj(j as i64).unwrap();
        }
        let norm = (&cofactor * self)
            .as_rational()
            .expect("norm is rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = CycloElt::one(self.order);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Coordinates as `"num/den"` strings (denominator always written).
    pub fn to_coord_strings(&self) -> Vec<String> {
        self.coords
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    pub fn from_coord_strings(order: u64, strings: &[String]) -> Result<Self> {
        let coords = strings
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coords(order, coords)
    }
}

pub(crate) fn parse_rat(s: &str) -> Result<BigRat> {
    let bad = || Error::InvalidArgument(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRat::new(n, d))
}

impl PartialEq for CycloElt {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coords == other.coords;
        }
        let (a, b) = Self::merged(self, other);
        a.coords == b.coords
    }
}

impl Eq for CycloElt {}

impl<'a> Add<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn add(self, rhs: &'a CycloElt) -> CycloElt {
        let (mut a, b) = CycloElt::merged(self, rhs);
        for (x, y) in a.coords.iter_mut().zip(b.coords) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn sub(self, rhs: &'a CycloElt) -> CycloElt {
        let (mut a, b) = CycloElt::merged(self, rhs);
        for (x, y) in a.coords.iter_mut().zip(b.coords) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn mul(self, rhs: &'a CycloElt) -> CycloElt {
        let (a, b) = CycloElt::merged(self, rhs);
        let n = a.coords.len();
        let mut raw = vec![BigRat::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        CycloElt {
            order: a.order,
            coords: reduce_rat_exponents(a.order, raw),
        }
    }
}

impl Neg for &CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        CycloElt {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => write!(f, "z{}^{i}", self.order)?,
                (_, false) => write!(f, "({abs})*z{}^{i}", self.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
