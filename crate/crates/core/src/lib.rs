//! Generalized-Bessel convolution operator `B_κ^c` acting on truncated complex
//! power series, plus numerical checks of the subordination implications and
//! admissibility conditions built on top of it.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is a pure
//! function of immutable values, so callers are free to fan work out across
//! threads. IO, configuration and report formatting live in the companion
//! `bessel-subord` crate.
//!
//! # Layout
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`complexfn`] | complex Gamma (Lanczos) and Pochhammer symbols |
//! | [`series`] | [`TruncatedSeries`], Cauchy/Hadamard products, sup-modulus sampling |
//! | [`besselgen`] | `φ_{p,b,c}`, `ω_{p,b,c}`, closed forms, `qFs`, ODE residual |
//! | [`operator`] | `B_κ^c`, its special cases and recursion identities |
//! | [`subordination`] | disk subordination and implication checks |
//! | [`admissibility`] | boundary-point builders and admissibility audits |
//! | [`family`] | seeded test-function families and default parameter boxes |
//!
//! ```
//! use bessel_subord_core::{besselgen::{phi_series, BesselParams}, series::TruncatedSeries};
//! use num_complex::Complex64;
//!
//! // φ for p = 1/2, b = c = 1 is √z·sin√z.
//! let params = BesselParams::real(0.5, 1.0, 1.0).unwrap();
//! let phi = phi_series(&params, 32).unwrap();
//! let z = Complex64::new(0.25, 0.0);
//! assert!((phi.evaluate(z).re - 0.5 * 0.5f64.sin()).abs() < 1e-15);
//! # let _ = TruncatedSeries::geometric(4);
//! ```

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod admissibility;
pub mod besselgen;
pub mod complexfn;
mod error;
pub mod family;
pub mod operator;
pub mod series;
pub mod subordination;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{DiskGrid, TruncatedSeries};
