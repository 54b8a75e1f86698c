//! The DOZZ structure constant and the Liouville reflection coefficient,
//! written at a Liouville coupling gamma_t in (0, 2).
//!
//! The Upsilon engine works in the Toda normalization, so a DOZZ call at
//! coupling gamma_t evaluates the standard Upsilon_{gamma_t/2}(x) as
//! Upsilon(sqrt2 x) at Toda coupling gamma_t/sqrt2, and
//! Upsilon_{gamma_t/2}'(0) = Upsilon(gamma_t/sqrt2).

use crate::exact::{ScValue, Tri};
use crate::logscale::LogSignedReal;
use crate::special::gamma::{l_func, log_gamma_real};
use crate::special::upsilon::upsilon_log_real;
use std::f64::consts::{PI, SQRT_2};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum LiouvilleError {
    #[error("Gamma pole in factor {factor}")]
    GammaPole { factor: String },
    #[error("coupling gamma_t = {0} outside (0, 2)")]
    CouplingOutOfRange(f64),
}

pub fn liouville_q(gamma_t: f64) -> f64 {
    0.5 * gamma_t + 2.0 / gamma_t
}

/// DOZZ three-point constant C^DOZZ_{gamma_t}(a1, a2, a3), log-signed.
/// Upsilon zeros in the denominator are reported as a pole tri-state.
pub fn dozz_log(a1: f64, a2: f64, a3: f64, gamma_t: f64, mu: f64) -> Result<ScValue, LiouvilleError> {
    if !(gamma_t > 0.0 && gamma_t < 2.0) {
        return Err(LiouvilleError::CouplingOutOfRange(gamma_t));
    }
    let g = gamma_t / SQRT_2; // Toda-normalized coupling of the Upsilon engine
    let ql = liouville_q(gamma_t);
    let abar = a1 + a2 + a3;

    let l_quarter = l_func(gamma_t * gamma_t / 4.0).expect("gamma_t^2/4 in (0,1)");
    let base = PI * mu * l_quarter.to_f64() * (0.5 * gamma_t).powf(2.0 - 0.5 * gamma_t * gamma_t);
    let mut value = LogSignedReal::new(((2.0 * ql - abar) / gamma_t) * base.ln(), 1);

    let mut zeros_num = 0usize;
    let mut zeros_den = 0usize;
    let mut flags = Vec::new();

    // Upsilon_std'(0) = Upsilon(g) in the Toda convention
    let up0 = upsilon_log_real(g, g);
    value = value * up0;

    for (label, x) in [("a1", a1), ("a2", a2), ("a3", a3)] {
        let u = upsilon_log_real(SQRT_2 * x, g);
        if u.is_zero() {
            zeros_num += 1;
            flags.push(format!("NumeratorZero: Upsilon({label})"));
        } else {
            value = value * u;
        }
    }
    for (label, x) in [
        ("abar/2-Q", 0.5 * abar - ql),
        ("abar/2-a1", 0.5 * abar - a1),
        ("abar/2-a2", 0.5 * abar - a2),
        ("abar/2-a3", 0.5 * abar - a3),
    ] {
        let u = upsilon_log_real(SQRT_2 * x, g);
        if u.is_zero() {
            zeros_den += 1;
            flags.push(format!("DenominatorZero: Upsilon({label})"));
        } else {
            value = value / u;
        }
    }

    let tri = match (zeros_num, zeros_den) {
        (0, 0) => Tri::Finite,
        (_, 0) => Tri::Zero,
        (0, _) => Tri::Pole,
        _ => Tri::Indeterminate,
    };
    Ok(ScValue { value, tri, flags })
}

/// Liouville reflection coefficient
/// R(a) = -(pi mu l(gamma_t^2/4))^{2(Q-a)/gamma_t}
///        Gamma(2(a-Q)/gamma_t) Gamma(gamma_t (a-Q)/2)
///      / [Gamma(2(Q-a)/gamma_t) Gamma(gamma_t (Q-a)/2)].
pub fn liouville_reflection(a: f64, gamma_t: f64, mu: f64) -> Result<LogSignedReal, LiouvilleError> {
    if !(gamma_t > 0.0 && gamma_t < 2.0) {
        return Err(LiouvilleError::CouplingOutOfRange(gamma_t));
    }
    let ql = liouville_q(gamma_t);
    let d = a - ql;
    let l_quarter = l_func(gamma_t * gamma_t / 4.0).expect("gamma_t^2/4 in (0,1)");
    let base = PI * mu * l_quarter.to_f64();
    let mut acc = LogSignedReal::new((-2.0 * d / gamma_t) * base.ln(), -1);
    for (label, arg) in [
        ("Gamma(2(a-Q)/gamma)", 2.0 * d / gamma_t),
        ("Gamma(gamma(a-Q)/2)", 0.5 * gamma_t * d),
    ] {
        acc = acc
            * log_gamma_real(arg).map_err(|_| LiouvilleError::GammaPole {
                factor: format!("{label} at {arg:.6}"),
            })?;
    }
    for (label, arg) in [
        ("Gamma(2(Q-a)/gamma)", -2.0 * d / gamma_t),
        ("Gamma(gamma(Q-a)/2)", -0.5 * gamma_t * d),
    ] {
        acc = acc
            / log_gamma_real(arg).map_err(|_| LiouvilleError::GammaPole {
                factor: format!("{label} at {arg:.6}"),
            })?;
    }
    Ok(acc)
}
