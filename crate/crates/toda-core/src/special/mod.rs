//! Scalar special functions: log-Gamma, l(x) = Gamma(x)/Gamma(1-x), Upsilon.

pub mod gamma;
pub mod quadrature;
pub mod upsilon;

pub use gamma::{l_func, l_func_allow_zero, log_gamma, log_gamma_real, LKind, SpecialError};
pub use upsilon::{on_zero_lattice, upsilon, upsilon_log, upsilon_log_real, upsilon_prime_zero};
