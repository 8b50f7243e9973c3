//! Mixed Tempered Stable (MixedTS) distributions.
//!
//! A MixedTS variate is built from a positive mixing variable `V` and a
//! standardized Classical Tempered Stable (stdCTS) conditional law:
//!
//! ```text
//! Y = mu + beta * V + sqrt(V) * X,      X | V ~ stdCTS(alpha, lambda_+ sqrt(V), lambda_- sqrt(V))
//! ```
//!
//! Throughout this crate `V` is Gamma distributed, which keeps every
//! transform in closed form. The crate covers:
//!
//! * [`cts`] — stdCTS cumulant/characteristic exponents, derivatives and
//!   exact/near-exact variate generation,
//! * [`univariate`] — the univariate MixedTS–Gamma law: moments, fundamental
//!   strip, theoretical tail exponents, sampling and increment scaling,
//! * [`multivariate`] — the common-factor Gamma construction
//!   `V_i = G_i + a_i Z` with joint characteristic function, comoments and
//!   covariance bounds,
//! * [`tails`] — empirical tail-exponent regression on log-ECDF windows,
//! * [`estimate`] — characteristic-function-distance estimation with a
//!   dynamic tail-matching penalty plus a bootstrap study harness,
//! * [`levy`] — Fourier recovery of the Lévy density from the second
//!   derivative of the cumulant function.

pub mod cts;
pub mod error;
pub mod estimate;
pub mod levy;
pub mod multivariate;
pub mod sample;
pub mod tails;
pub mod univariate;

mod fourier;
mod gammainc;
mod simplex;

pub use error::{Error, Result};
pub use sample::SampleMatrix;
