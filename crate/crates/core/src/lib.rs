//! Metacommutation of primes at desk scale.
//!
//! When an element of a noncommutative order is factored along the primes
//! dividing its reduced norm, reordering the primes permutes the set of
//! prime factors of a given norm. This crate computes those permutations in
//! two concrete orders — `M_n(Z)` inside `M_n(Q)`, and the Hurwitz
//! quaternions — and verifies, along independent computation paths, that
//! each of them is the action of an invertible matrix over a finite field
//! on projective space:
//!
//! * [`fq`] — finite fields `F_{p^e}`, polynomial factorization, and the
//!   order invariants driving the cycle-length formulas;
//! * [`fqmat`] — exact linear algebra over `F_q`: kernels, characteristic
//!   and minimal polynomials, elementary divisors, companion and
//!   hypercompanion blocks;
//! * [`projective`] — `P^{m-1}(F_q)`, the action `v -> Q^{-1} v`, and cycle
//!   types;
//! * [`cycles`] — closed-form cycle structure: fixed points, per-block
//!   counts, the `GL_2` law, the uniform criterion for diagonalizable
//!   matrices, and a dispatcher with brute-force fallback;
//! * [`intmat`] — Hermite-normal-form ideal arithmetic and metacommutation
//!   in `M_n(Z)`;
//! * [`hurwitz`] — the Hurwitz order: right-gcd factorization, prime
//!   classes, metacommutation, and reduction into `M_2(F_p)`;
//! * [`verify`] — the sweeps that check every formula against brute force.

pub mod cycles;
pub mod error;
pub mod fault;
pub mod fq;
pub mod fqmat;
pub mod hurwitz;
pub mod intmat;
pub mod projective;
pub mod verify;

pub use cycles::{CycleReport, CycleSource};
pub use error::{Error, ErrorCategory, Result};
pub use fq::{Field, FieldElem, Poly};
pub use fqmat::MatFq;
pub use hurwitz::Quaternion;
pub use intmat::MatZ;
pub use projective::{CycleType, Perm, ProjPoint};
