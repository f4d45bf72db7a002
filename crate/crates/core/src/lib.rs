//! Exact Dirichlet L-values at `s = 0` and their integrality at a fixed prime
//! above `p`.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: rationals, integer polynomials, cyclotomic fields.
//! * [`dirichlet`]: unit-group bases, characters, conductors.
//! * [`bernoulli`]: Bernoulli numbers, `B_{1,χ}`, `L(0, χ)`, `h⁻(p)`.
//! * [`padic`]: the local model `Z_p[ζ_{k'}][ζ_{p^a}]` fixing the prime `𝔭`.
//! * [`lab`]: integrality verdicts, congruence checks and scans built from
//!   the layers above.

pub mod arith;
pub mod bernoulli;
pub mod dirichlet;
pub mod lab;
pub mod padic;

use thiserror::Error;

pub use arith::{cyclotomic_poly, BigRat, CycloElt, IntPoly};
pub use dirichlet::{DirichletChar, Parity, UnitGroupBasis};
pub use lab::VerdictRecord;
pub use padic::{PadicElt, PadicTower, Valuation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot embed order {from} into order {to}")]
    IncompatibleOrders { from: u64, to: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("modulus {modulus} is not a power of {p}")]
    NotPrimePower { modulus: u64, p: u64 },
    #[error("character mod {modulus} is imprimitive (conductor {conductor})")]
    ImprimitiveInput { modulus: u64, conductor: u64 },
    #[error("expected an integer result: {0}")]
    NonIntegralResult(String),
    #[error("p-adic precision exhausted at N = {cap}")]
    PrecisionExhausted { cap: u32 },
    #[error("classification violated: {0:?}")]
    ClassificationViolation(Box<VerdictRecord>),
    #[error("integrality violated: {0}")]
    IntegralityViolation(String),
    #[error("Kummer congruence violated at p = {p}, n = {n}: {lhs} != {rhs}")]
    CongruenceViolation { p: u64, n: u64, lhs: u64, rhs: u64 },
    #[error("count law violated at p = {p}, d = {d}: {observed} non-integral characters, expected {expected}")]
    CountLawViolation { p: u64, d: u32, observed: usize, expected: u64 },
    #[error("no character of order {p} modulo {q}")]
    NoOrderPCharacter { p: u64, q: u64 },
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
