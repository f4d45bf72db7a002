//! Exact rational, polynomial and cyclotomic-field arithmetic.

pub mod cyclo;
pub mod nt;
pub mod poly;

pub use cyclo::{BigRat, CycloElt};
pub use poly::{cyclotomic_poly, IntPoly};
