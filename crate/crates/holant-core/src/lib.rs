//! Exact algebra for Holant problems with symmetric signatures.
//!
//! The crate provides, bottom to top:
//!
//! - [`cyclo`]: exact arithmetic in the cyclotomic fields ℚ(ζ_N), the ground
//!   ring for everything else. Values are held in a fixed canonical basis so
//!   equality is syntactic.
//! - [`sigalg`]: symmetric signatures (Boolean domain), their symmetrized
//!   tensor calculus, recurrence degree / vanishing degree, self-loops and
//!   connections, and decomposition into generalized second-order recurrences.
//! - [`xform`]: 2×2 holographic transformations acting on signatures, with the
//!   named matrices (Z, H₂, D, …) and stabilizer tests for the affine and
//!   product-type signature sets.
//! - [`grid`]: signature grids, brute-force Holant evaluation, gadget
//!   signature extraction, and the arity-4 signature-matrix calculus
//!   (compression, rotation, chains, the interpolation sequence, and the
//!   block-Vandermonde nonsingularity test).
//! - [`classify`]: the dichotomy classifier — decides whether a finite
//!   signature set is tractable (with an explicit witness) or #P-hard (with a
//!   reduction rule chain).
//! - [`tracteval`]: polynomial-time evaluators for each tractable class, plus
//!   a dispatcher that routes a grid through the classifier to the right
//!   evaluator.
//! - [`oracles`]: independent counting oracles (vertex covers, Eulerian
//!   orientations, matchings) and the bridges expressing them as Holant
//!   values, used to cross-check the evaluators.
//!
//! The crate is `no_std` (with `alloc`); all IO and file formats live in the
//! companion CLI crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classify;
pub mod cyclo;
pub mod grid;
pub mod oracles;
pub mod sigalg;
pub mod tracteval;
pub mod xform;

mod quad;
