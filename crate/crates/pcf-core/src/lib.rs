//! Exact-arithmetic P-adic continued fractions over Q and quadratic fields.
//!
//! The library computes continued fraction expansions attached to a *type*
//! `(K, P, s)` — a field Q or Q(sqrt(D)), a prime ideal P over an odd prime,
//! and a P-adic floor function `s` — entirely in exact arithmetic, detects
//! finiteness and periodicity, and certifies finiteness (CFF) / periodicity
//! (CFP) criteria by exact inequality evaluation.
//!
//! Module map:
//! - [`quad`]: exact elements a + b*sqrt(D), signs of real surds, norms,
//!   traces, minimal polynomials, and the canonical text grammar.
//! - [`interval`]: rational-endpoint interval arithmetic (sqrt, ln, theta)
//!   used wherever a quantity leaves the field.
//! - [`height`]: multiplicative Weil heights, stored as H^d.
//! - [`primes`]: prime splitting, residue fields, P-adic valuations, Hensel
//!   roots, fundamental units, generator search.
//! - [`floor`]: the floor-function variants (Browkin, Ruban, special types,
//!   the Q(sqrt(2)) coordinate floor, norm-Euclidean region floor).
//! - [`cf`]: the expansion engine, convergents, back-evaluation, and the
//!   structural identities as checkable reports.
//! - [`certify`]: the certification layer (FEC inequality, imaginary
//!   quadratic criteria, the full Q(sqrt(2)) decision procedure, Browkin
//!   length bounds) and the prime sweeps.
//! - [`selftest`]: seeded property suites driven by the CLI self test.

pub mod cf;
pub mod certify;
pub mod floor;
pub mod height;
pub mod interval;
pub mod json;
pub mod primes;
pub mod quad;
pub mod selftest;

pub use quad::{QuadElem, Rational, Sign};
