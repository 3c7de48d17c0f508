//! Finite-series summation engine.
//!
//! A finite sum `Σ_{k=1}^{N} g(k)` is evaluated through several independent
//! routes, each cross-checked against a compensated direct-summation oracle:
//!
//! - [`laplace`]: the integral representation built from the inverse Laplace
//!   transform `G(t)` of the index function, including alternating, shifted
//!   and exponential-factor variants and the companion `Σ G(x/k)/k` sums.
//! - [`fourier`]: the Dirichlet-kernel integral for index functions with a
//!   tabulated Fourier transform.
//! - [`telescope`]: the telescoped infinite series `Σ [g(k) - g(N+k)]` and the
//!   zeta shortcut for inverse powers.
//! - [`euler_maclaurin`]: classical Euler-Maclaurin summation and tail sums.
//! - [`identities`]: closed forms for trigonometric, geometric and power sums.
//!
//! Index functions are written in a small expression language ([`expr`]) and
//! matched against a catalog of transform pairs ([`kernels`]).

pub mod error;
pub mod euler_maclaurin;
pub mod expr;
pub mod fourier;
pub mod identities;
pub mod jet;
pub mod kernels;
pub mod laplace;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod telescope;

pub use error::{Error, Result};
pub use jet::{Jet, Scalar};
pub use num_complex::Complex64;
pub use series::{
    antidifference_sum, direct_sum, Diagnostics, IndexFn, JetFn, Method, SeriesSpec, SumResult,
    Variant,
};

/// Shorthand for the complex scalar used throughout the crate.
pub type C64 = Complex64;
