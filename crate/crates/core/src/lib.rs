#![no_std]
// once std is anywhere in the build graph its inherent float methods shadow `Float`
#![allow(unused_imports)]
//! Numerical core for anisotropic Gabor singularity filters in dimension one.
//!
//! Everything here is `no_std` with `alloc`: weights and neighbourhoods on the
//! phase plane, sampled signals, short-time Fourier analysis and synthesis,
//! phase-space symbols, decay-based filter membership, hamiltonian flows of the
//! power hamiltonians and a Hermite-basis spectral propagator.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod geometry;
pub mod hamilton;
pub mod schrodinger;
pub mod signal;
pub mod singularity;
pub mod special;
pub mod stft;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;
