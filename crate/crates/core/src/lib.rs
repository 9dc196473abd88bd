//! Exact evaluation of the 2- and 3-nilpotent obstructions δ2 and δ3 (mod 2)
//! for points `(b, a)` of the Jacobian of `P¹ − {0, 1, ∞}` over Q.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: rationals, factorization, residue symbols.
//! * [`localclass`]: square classes and cup products at odd primes and R.
//! * [`k2global`]: tame symbols and the global δ2 verdict.
//! * [`nilpotent`]: normal forms in nilpotent quotients of the free group on
//!   `x, y`, with a Magnus-series cross-check.
//! * [`cohomology`]: cochains on finite Galois models and the closed forms
//!   for δ2 and δ3.
//! * [`obstruct`]: the local δ3 evaluators, the `(-p³, p)` family, and
//!   report assembly.
//! * [`verify`]: options and reports for the oracle suites.

pub mod arith;
pub mod cohomology;
pub mod error;
pub mod k2global;
pub mod localclass;
pub mod nilpotent;
pub mod obstruct;
pub mod verify;

pub use error::{Error, Result};
