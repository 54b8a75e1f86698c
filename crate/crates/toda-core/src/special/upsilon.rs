//! The Upsilon function in the convention Upsilon(z) = Upsilon_{gamma/sqrt2}(z/sqrt2).
//!
//! Inside the strip 0 < Re z < q the value comes from adaptive quadrature of
//!
//!   ln Y(z) = int_0^inf [ (q/2-z)^2 e^{-t}/2
//!             - sinh^2((q/2-z) t/(2 sqrt2)) / (sinh(g t/(2 sqrt2)) sinh(t/(sqrt2 g))) ] dt/t,
//!
//! and is transported everywhere else with the shift equations
//! Y(z+chi) = l(chi z/2) (chi/sqrt2)^{1-chi z} Y(z) for chi in {gamma, 2/gamma}.
//! Y is entire with zeros exactly on (-g N - (2/g) N) u (q + g N + (2/g) N).

use crate::logscale::{LogComplex, LogSignedReal};
use crate::special::gamma::{l_func, log_gamma};
use crate::special::quadrature::integrate;
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

fn q_of(gamma: f64) -> f64 {
    gamma + 2.0 / gamma
}

/// Is z (real) on the zero lattice of Upsilon?
pub fn on_zero_lattice(z: f64, gamma: f64) -> bool {
    let q = q_of(gamma);
    let tol = 1e-11 * (1.0 + z.abs());
    let hit = |w: f64| -> bool {
        // w in gamma N + (2/gamma) N (nonnegative combinations)?
        if w < -tol {
            return false;
        }
        let step = 2.0 / gamma;
        let a_max = (w / gamma + 1.0) as i64;
        for a in 0..=a_max.max(0) {
            let rem = w - a as f64 * gamma;
            if rem < -tol {
                break;
            }
            let b = rem / step;
            if (b - b.round()).abs() * step < tol && b.round() >= -0.5 {
                return true;
            }
        }
        false
    };
    hit(-z) || hit(z - q)
}

fn strip_integrand(t: f64, p: Complex64, gamma: f64) -> Complex64 {
    let b = gamma / (2.0 * SQRT_2);
    let c = 1.0 / (SQRT_2 * gamma);
    if t < 1e-3 {
        // Maclaurin form; removable singularity at t = 0
        let p2 = p * p;
        let b2 = b * b;
        let c2 = c * c;
        let k2 = p2 / 24.0 - (b2 + c2) / 6.0;
        let k4 = p2 * p2 / 1440.0 - p2 * (b2 + c2) / 144.0 + (b2 + c2) * (b2 + c2) / 36.0
            - (b2 * b2 + c2 * c2) / 120.0
            - b2 * c2 / 36.0;
        let em1 = (-t).exp_m1() / t;
        return p2 * 0.5 * (Complex64::new(em1, 0.0) - k2 * t - k4 * t * t * t);
    }
    let sh = (p * t / (2.0 * SQRT_2)).sinh();
    let den = (b * t).sinh() * (c * t).sinh();
    (p * p * (-t).exp() * 0.5 - sh * sh / den) / t
}

/// ln Upsilon(z) by quadrature; requires Re z strictly inside (0, q),
/// ideally within chi_big/2 of q/2 for a fast-decaying tail.
fn ln_upsilon_strip(z: Complex64, gamma: f64) -> Complex64 {
    let q = q_of(gamma);
    let p = Complex64::new(q / 2.0, 0.0) - z;
    if p.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let margin = (q - 2.0 * p.re.abs()).max(1e-3) / (2.0 * SQRT_2);
    let t_max = (42.0 / margin).max(45.0);
    let breaks = [0.0, 1.0, 4.0, 12.0, 30.0f64.min(t_max * 0.5), t_max];
    let mut bk: Vec<f64> = breaks.to_vec();
    bk.dedup_by(|a, b| *a <= *b);
    bk.sort_by(f64::total_cmp);
    bk.dedup();
    let (v, _err) = integrate(|t| strip_integrand(t, p, gamma), &bk, 1e-14, 1e-13);
    v
}

const CHI_EPS: f64 = 0.0;

/// log Upsilon for real argument with exact sign bookkeeping.
/// Zeros on the lattice return `LogSignedReal::ZERO`.
pub fn upsilon_log_real(z: f64, gamma: f64) -> LogSignedReal {
    assert!(gamma > 0.0 && gamma < SQRT_2, "gamma must lie in (0, sqrt2)");
    if on_zero_lattice(z, gamma) {
        return LogSignedReal::ZERO;
    }
    let q = q_of(gamma);
    let chi = gamma.max(2.0 / gamma);
    let lo = (q - chi) / 2.0 - CHI_EPS;
    let hi = (q + chi) / 2.0;
    let mut acc = LogSignedReal::ONE;
    let mut z = z;
    let log_base = (chi / SQRT_2).ln();
    while z < lo {
        // Y(z) = Y(z+chi) / [ l(chi z/2) (chi/sqrt2)^{1-chi z} ]
        let f = l_func(chi * z / 2.0).expect("off-lattice reduction cannot hit integer l");
        let pw = LogSignedReal::new((1.0 - chi * z) * log_base, 1);
        acc = acc / (f * pw);
        z += chi;
    }
    while z >= hi {
        let zm = z - chi;
        let f = l_func(chi * zm / 2.0).expect("off-lattice reduction cannot hit integer l");
        let pw = LogSignedReal::new((1.0 - chi * zm) * log_base, 1);
        acc = acc * f * pw;
        z = zm;
    }
    let ln_y = ln_upsilon_strip(Complex64::new(z, 0.0), gamma);
    acc * LogSignedReal::new(ln_y.re, 1)
}

/// log Upsilon for complex argument.
pub fn upsilon_log(z: Complex64, gamma: f64) -> LogComplex {
    if z.im == 0.0 {
        return upsilon_log_real(z.re, gamma).into();
    }
    let q = q_of(gamma);
    let chi = gamma.max(2.0 / gamma);
    let lo = (q - chi) / 2.0;
    let hi = (q + chi) / 2.0;
    let mut acc = LogComplex::ONE;
    let mut z = z;
    let log_base = (chi / SQRT_2).ln();
    while z.re < lo {
        let f = shift_factor(z, chi, log_base);
        acc = acc / f;
        z += chi;
    }
    while z.re >= hi {
        let zm = z - chi;
        acc = acc * shift_factor(zm, chi, log_base);
        z = zm;
    }
    let ln_y = ln_upsilon_strip(z, gamma);
    acc * LogComplex::new(ln_y.re, ln_y.im)
}

fn shift_factor(z: Complex64, chi: f64, log_base: f64) -> LogComplex {
    // l(chi z / 2) (chi/sqrt2)^{1 - chi z}
    let a = chi * z / 2.0;
    let lg = log_gamma(a).expect("complex argument cannot hit a Gamma pole")
        / log_gamma(Complex64::new(1.0, 0.0) - a).expect("complex argument");
    let one_m = Complex64::new(1.0, 0.0) - chi * z;
    lg * LogComplex::new(one_m.re * log_base, one_m.im * log_base)
}

/// Linear-scale Upsilon (may under/overflow; prefer the log forms).
pub fn upsilon(z: f64, gamma: f64) -> f64 {
    upsilon_log_real(z, gamma).to_f64()
}

/// Upsilon'(0) = Upsilon(gamma)/sqrt2, the shift-equation limit at the simple
/// zero z = 0 (equivalently Upsilon(2/gamma)/sqrt2).
pub fn upsilon_prime_zero(gamma: f64) -> LogSignedReal {
    upsilon_log_real(gamma, gamma) * LogSignedReal::new(-0.5 * 2.0f64.ln(), 1)
}
