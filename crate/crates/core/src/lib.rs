//! Exact sign determination for signed sums of square roots of small
//! integers, plus two kinds of compact per-`k` advice that reduce every sign
//! query to cheap exact arithmetic.
//!
//! Pipeline overview:
//!
//! * [`numtheory`] decomposes integers as `c²·s` and enumerates the
//!   square-free basis `1 = s₀ < s₁ < … < s_m ≤ k`.
//! * [`instances`] rewrites a signed sum `Σ δᵢ√aᵢ` into normal form
//!   `Δ₀ + Σ Δⱼ√sⱼ` and provides coefficient domains, enumeration and
//!   instance families.
//! * [`oracle`] decides signs exactly with adaptive dyadic interval
//!   arithmetic whose termination is certified by an algebraic lower bound.
//! * [`ltf`] synthesizes integer weights `u` such that `sign(Σ Δⱼuⱼ)` equals
//!   the true sign on a whole coefficient domain.
//! * [`basis`] builds the lightest basis of a domain together with short
//!   dyadic approximations of its values, and decides by a truncated sum.
//!
//! Both deciders only use integer additions and small exact rational
//! arithmetic once the advice is known. The low circuit depth this enables
//! is not modelled here.

pub mod advice;
pub mod basis;
pub mod dyadic;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod ltf;
pub mod numtheory;
pub mod oracle;
pub mod poly;
pub mod simplex;
pub mod sign;
pub mod text;

pub use advice::Advice;
pub use basis::{BasisAdvice, BasisCoordinates, BasisSearchReport, LightestBasis};
pub use dyadic::{Dyadic, DyadicInterval};
pub use error::{Error, Result};
pub use instances::{DomainSpec, Family, Term, UussrInstance, UssrInstance};
pub use ltf::{LtfAdvice, LtfMethod};
pub use numtheory::{SquareFreeBasis, SquareFreeDecomposition};
pub use poly::IntPolynomial;
pub use sign::Sign;
pub use text::InstanceFile;
