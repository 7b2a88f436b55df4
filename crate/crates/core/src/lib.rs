//! Computable pieces of nonabelian Cohen–Lenstra moments.
//!
//! * [`group`]: finite groups as Cayley tables, automorphism groups by
//!   exhaustive search, and GI-extension detection and counting.
//! * [`affine`]: the affine groups `G(q, d) = {x ↦ ax + b : a^d = 1}` over
//!   finite fields, realized as block upper-triangular matrices.
//! * [`disc`]: fundamental discriminants, Kronecker symbols, 3-part
//!   discriminant factorizations and the unramified Q8 / D4 counts.
//! * [`analytic`]: L-values at `s = 1`, truncated Euler products and the
//!   residues that predict the growth of the restricted Q8 sums.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod affine;
pub mod analytic;
pub mod arith;
pub mod disc;
mod error;
pub mod group;

pub use error::{Error, Result};
