//! Exact sl3 Toda conformal field theory structure constants and their
//! probabilistic verification.
//!
//! The crate has five layers:
//!
//! * [`root_system`] - the sl3 Cartan plane, Weyl group and chambers;
//! * [`special`] - log-Gamma, l(x) and the Upsilon function;
//! * [`exact`] - the Fateev-Litvinov three-point formula, DOZZ, reflection
//!   coefficients and their shift equations;
//! * [`blocks`] - third-order hypergeometric machinery for the four-point
//!   functions;
//! * [`gmc`] - Gaussian-multiplicative-chaos Monte-Carlo estimators of the
//!   probabilistic representations.
//!
//! [`verify`] packages the residual checks behind a name-keyed registry of
//! interchangeable suites so frontends can select them at runtime.

pub mod blocks;
pub mod exact;
pub mod gmc;
pub mod logscale;
pub mod root_system;
pub mod special;
pub mod verify;

#[doc(hidden)]
pub mod testutil;

pub use logscale::{LogComplex, LogSignedReal};
pub use root_system::{TodaParams, WeightVector, WeylElement};
