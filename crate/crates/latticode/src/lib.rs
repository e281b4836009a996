//! Lattice-coded modulation for LWE-based public-key encryption.
//!
//! The crate is organised around the encode/decode pipeline of a modulo-`q`
//! additive-noise channel:
//!
//! * [`linalg`] — exact arithmetic over dyadic rationals (integers scaled by
//!   a power of two); every correctness-critical basis manipulation runs on
//!   these types, never on floats.
//! * [`catalog`] — the structured lattices (`Z`, `D4`, `E8`, the Barnes-Wall
//!   family, Leech constants) with rectangular-form bases, Construction A/D
//!   builders and their coding-gain/kissing-number constants.
//! * [`codec`] — the bijective labeling between mixed-radix message indices
//!   and lattice codewords under hypercube shaping, plus the bit mapper.
//! * [`cvp`] — closest-vector quantizers for the catalog lattices and
//!   brute-force oracles used by the test suites.
//! * [`pke`] — a FrodoPKE-style encrypt/decrypt simulation with pluggable
//!   message modulation and deterministic seeded randomness.
//! * [`analysis`] — the decryption-failure-rate calculator and the Monte
//!   Carlo harness that validates it.

pub mod analysis;
pub mod catalog;
pub mod codec;
pub mod cvp;
pub mod linalg;
pub mod pke;
