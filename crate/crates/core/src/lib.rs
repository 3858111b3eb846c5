//! Exact algebra for cyclotomic decompositions of representation rings.
//!
//! Everything here works over the localized integers `Z[1/N]` with exact
//! big-integer arithmetic; there is no floating point anywhere. The crate is
//! `no_std` and only needs `alloc`.
//!
//! - [`lambda`]: the coefficient ring `Z[1/N]`, dense matrices over it,
//!   integer lattice kernels and the orbit-invariants comparison.
//! - [`cyclo`]: `Z[1/N][t]/(t^s - 1)` and `Z[1/N][t]/(Phi_s)`, norms, inverses
//!   and `lambda_{-1}` classes.
//! - [`diaggrp`]: finite abelian character groups, their cyclic quotients,
//!   the decomposition `delta` and its idempotents, localizations.
//! - [`gln`]: weight-function classification of cyclic subgroups of `GL_n`.
//! - [`gsets`]: equivariant `K_0` of finite-orbit actions, the map `Psi`,
//!   and the verifiers built on it.

#![no_std]

extern crate alloc;

pub mod cyclo;
pub mod diaggrp;
mod error;
pub mod gln;
pub mod gsets;
pub mod lambda;

pub use error::{Error, Result};
