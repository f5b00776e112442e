//! Numerical harmonic analysis of central functions on compact simply
//! connected Lie groups, reduced to the maximal torus.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`rootsys`] builds root data, the exact invariant inner product, and
//!    the Weyl group as integer matrices.
//! 2. [`torus`] samples Weyl-invariant functions on an aligned grid of the
//!    maximal torus and computes exact-twiddle rectangle Fourier transforms.
//! 3. [`spectral`] turns torus transforms of `f * A_delta` into
//!    noncommutative Fourier coefficients and Schatten-type norms, with two
//!    independent evaluation routes that must agree.
//! 4. [`localhy`] runs the scaled-family experiment whose quotients estimate
//!    the local Hausdorff-Young constant, together with its closed-form
//!    limit.
//! 5. [`sharpness`] certifies lower-bound growth for translate families and
//!    character families.
//!
//! Everything downstream of sampling is deterministic: fixed seeds, fixed
//! summation order, exact rational lattice arithmetic where exactness is
//! load-bearing.

pub mod error;
pub mod io;
pub mod kahan;
pub mod localhy;
pub mod rootsys;
pub mod sharpness;
pub mod spectral;
pub mod torus;

pub use error::{Error, Result};
pub use rootsys::{dominant_decomposition, pair, CartanSpec, Family, Rat, RootSystem, Weight, WeylGroup};
