//! Fourier analysis toolkit for the ordinates of the non-trivial zeros of
//! the Riemann zeta function.
//!
//! The ordinates form a real, strictly increasing sequence; transforming a
//! prefix of them to the complex plane exposes structure worth measuring:
//! a smooth global curve with a high-variance cluster at its vertex, a
//! circulant Hermitian matrix whose eigenvalues are the ordinates
//! themselves, and spacing recursions that approximate the sequence and
//! its transform. This crate implements those procedures at desk scale:
//!
//! * [`zeros`] - ingest and validate published zero tables, with an
//!   HTTP byte cache.
//! * [`spectral`] - forward/inverse transforms under the mean-forward and
//!   unitary conventions, conjugate-symmetry checks, mid-band real-part
//!   averaging.
//! * [`recursion`] - the spacing recursion
//!   `gamma_(n+1) = gamma_n + 2*pi/log(gamma_n/2*pi)` and its lift to a
//!   recursion on Fourier coefficients.
//! * [`circulant`] - the circulant operator built from a spectrum,
//!   Fourier-polygon eigenpairs, a dense eigensolver cross-check, and the
//!   lifted half-plus-i-M operator.
//! * [`cluster`] - cloud-index detection and the two cluster
//!   distribution fits.
//! * [`nested`] - the binary tree of iterated real/imaginary-part
//!   transforms.
//! * [`cli`] - the `zeta-spectra` binary: one subcommand per analysis,
//!   CSV/JSON artifacts, reproducible manifests.
//!
//! The `examples/` directory has one runnable program per capability;
//! each uses the bundled table of the first 10000 ordinates under
//! `data/`.

pub mod circulant;
pub mod cli;
pub mod cluster;
pub mod error;
pub mod nested;
pub mod recursion;
pub mod spectral;
pub mod zeros;

pub use error::{Error, Result};
