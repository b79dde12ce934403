//! Word metrics on the additive group of integers.
//!
//! The crate is organised around the generating sets
//! `A_g = {0} ∪ {±g^i}` and their mixed-base relatives:
//!
//! * [`gadic`] computes the unique minimum-length signed-digit representation
//!   of an integer in base `g`, and with it the exact word length `ℓ_g(n)`.
//! * [`wordlen`] is a bounded search engine for mixed generating sets such as
//!   `{±2^i} ∪ {±3^i}`, with sphere enumeration, `λ(h)` and an exponential
//!   Diophantine sweep.
//! * [`nets`] builds h-nets in `(Z, d_g)` from spheres of word length, issues
//!   cover certificates and verifies nets over finite windows.
//! * [`complements`] decides additive and asymptotic complements of finite
//!   sets against eventually periodic sets and prunes complements to minimal
//!   ones.
//! * [`map23`] is the length-preserving bijection `(Z, d_2) → (Z, d_3)` and its
//!   distortion witnesses.

pub mod bigjson;
pub mod complements;
mod error;
pub mod gadic;
mod generator;
pub mod map23;
pub mod nets;
mod window;
pub mod wordlen;

pub use error::{Error, Result};
pub use generator::Generator;
pub use window::{AllIntegers, ExplicitSet, IntegerSet, PredicateSet, Window};

pub use complements::{EventuallyPeriodicSet, FiniteSet, MinimalityCertificate, PrunedView};
pub use gadic::{canonical_repr, length, RawRepresentation, SignedDigitRepr, Summand};
pub use map23::{distortion_witness, map23, map23_inverse, DistortionWitness, ExponentProfile};
pub use nets::{CoverCertificate, NetSpec, NetVerdict, Stride};
pub use wordlen::{GeneratingSetSpec, LengthResult, SetKind, WordLengthEngine};

pub use num_bigint::BigInt;
