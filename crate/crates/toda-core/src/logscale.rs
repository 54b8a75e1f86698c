//! Log-magnitude representations for products of Gamma/Upsilon factors.
//!
//! The Fateev-Litvinov formula multiplies a dozen Upsilon values whose
//! magnitudes vary over hundreds of orders; all structure constants are
//! therefore carried as (log |value|, sign) or (log |value|, phase).

use serde::{Deserialize, Serialize};
use std::ops::{Div, Mul};

/// sign * exp(log_abs); sign = 0 together with log_abs = -inf encodes exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSignedReal {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogSignedReal {
    pub const ONE: LogSignedReal = LogSignedReal { log_abs: 0.0, sign: 1 };
    pub const ZERO: LogSignedReal = LogSignedReal {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };

    pub fn new(log_abs: f64, sign: i8) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            Self::ZERO
        } else {
            LogSignedReal { log_abs, sign }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogSignedReal {
                log_abs: v.abs().ln(),
                sign: if v > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Lossy linear-scale value (may overflow to +-inf).
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.log_abs.exp()
    }

    /// Raise to a real power. The base must be nonnegative unless the
    /// exponent is an integer.
    pub fn powf(&self, e: f64) -> LogSignedReal {
        if self.sign == 0 {
            return if e == 0.0 { Self::ONE } else { Self::ZERO };
        }
        let sign = if self.sign > 0 {
            1
        } else {
            assert!(
                e.fract() == 0.0,
                "fractional power of a negative log-signed value"
            );
            if (e as i64) % 2 == 0 {
                1
            } else {
                -1
            }
        };
        LogSignedReal::new(self.log_abs * e, sign)
    }

    pub fn inv(&self) -> LogSignedReal {
        assert!(self.sign != 0, "inverse of zero");
        LogSignedReal::new(-self.log_abs, self.sign)
    }

    pub fn abs(&self) -> LogSignedReal {
        LogSignedReal::new(self.log_abs, if self.sign == 0 { 0 } else { 1 })
    }

    /// Relative difference |a - b| / max(|a|, |b|), computed in log scale.
    pub fn rel_diff(&self, other: &LogSignedReal) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let m = self.log_abs.max(other.log_abs);
        let a = self.sign as f64 * (self.log_abs - m).exp();
        let b = other.sign as f64 * (other.log_abs - m).exp();
        (a - b).abs() / a.abs().max(b.abs())
    }
}

impl Mul for LogSignedReal {
    type Output = LogSignedReal;
    fn mul(self, o: LogSignedReal) -> LogSignedReal {
        LogSignedReal::new(self.log_abs + o.log_abs, self.sign * o.sign)
    }
}

impl Div for LogSignedReal {
    type Output = LogSignedReal;
    fn div(self, o: LogSignedReal) -> LogSignedReal {
        assert!(o.sign != 0, "division by log-signed zero");
        LogSignedReal::new(self.log_abs - o.log_abs, self.sign * o.sign)
    }
}

/// exp(log_abs + i phase) with phase kept in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_abs: f64,
    pub phase: f64,
}

pub fn wrap_phase(p: f64) -> f64 {
    if p.is_finite() {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut r = p % two_pi;
        if r <= -std::f64::consts::PI {
            r += two_pi;
        } else if r > std::f64::consts::PI {
            r -= two_pi;
        }
        r
    } else {
        p
    }
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex { log_abs: 0.0, phase: 0.0 };
    pub const ZERO: LogComplex = LogComplex {
        log_abs: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_abs: f64, phase: f64) -> Self {
        LogComplex {
            log_abs,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: num_complex::Complex64) -> Self {
        LogComplex::new(z.norm().ln(), z.arg())
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(self.log_abs.exp(), self.phase)
    }

    /// Restriction to the real axis; phase must be 0 or pi up to `tol`.
    pub fn to_signed_real(&self, tol: f64) -> Option<LogSignedReal> {
        if self.is_zero() {
            return Some(LogSignedReal::ZERO);
        }
        if self.phase.abs() < tol {
            Some(LogSignedReal::new(self.log_abs, 1))
        } else if (self.phase.abs() - std::f64::consts::PI).abs() < tol {
            Some(LogSignedReal::new(self.log_abs, -1))
        } else {
            None
        }
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, o: LogComplex) -> LogComplex {
        if self.is_zero() || o.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_abs + o.log_abs, self.phase + o.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, o: LogComplex) -> LogComplex {
        assert!(!o.is_zero(), "division by log-complex zero");
        LogComplex::new(self.log_abs - o.log_abs, self.phase - o.phase)
    }
}

impl From<LogSignedReal> for LogComplex {
    fn from(v: LogSignedReal) -> LogComplex {
        match v.sign {
            0 => LogComplex::ZERO,
            1 => LogComplex::new(v.log_abs, 0.0),
            _ => LogComplex::new(v.log_abs, std::f64::consts::PI),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_adds_logs_and_multiplies_signs() {
        let a = LogSignedReal::from_f64(-3.0);
        let b = LogSignedReal::from_f64(0.5);
        let c = a * b;
        assert!((c.to_f64() + 1.5).abs() < 1e-15);
        assert_eq!((a * LogSignedReal::ZERO).sign, 0);
    }

    #[test]
    fn rel_diff_is_scale_free() {
        let a = LogSignedReal::new(700.0, 1);
        let b = LogSignedReal::new(700.0 + 1e-9, 1);
        assert!(a.rel_diff(&b) < 2e-9);
        assert!(a.rel_diff(&b) > 1e-10);
    }

    #[test]
    fn phase_wraps_into_half_open_interval() {
        let z = LogComplex::new(0.0, 3.0 * std::f64::consts::PI);
        assert!((z.phase - std::f64::consts::PI).abs() < 1e-12);
        let w = LogComplex::new(0.0, -std::f64::consts::PI);
        assert!((w.phase - std::f64::consts::PI).abs() < 1e-12);
    }
}
