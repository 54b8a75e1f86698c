//! Residual verification suites behind a name-keyed registry.
//!
//! Every suite implements the same `VerifySuite` trait and is selected at
//! runtime by name (CLI `verify <suite>`), so frontends can treat the whole
//! family of checks as interchangeable strategies.

use crate::blocks::{self, BlockFn, BlockParams};
use crate::exact::{self, ThreePointInput};
use crate::logscale::LogSignedReal;
use crate::root_system::{rho, TodaParams, WeightVector, E1, E2, WEYL_GROUP};
use crate::special::gamma::l_func;
use crate::special::upsilon::{on_zero_lattice, upsilon, upsilon_log_real, upsilon_prime_zero};
use crate::testutil::Lcg;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// coupling override; suites fall back to their spec-pinned set
    pub gamma: Option<f64>,
    pub mu: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { gamma: None, mu: 1.0, trials: 0, seed: 0xc0ffee }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), checks: Vec::new(), pass: true }
    }

    fn push(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        let pass = residual.is_finite() && residual <= tol;
        self.pass &= pass;
        self.checks.push(CheckResult { name: name.into(), residual, tol, pass });
    }
}

pub trait VerifySuite: Sync + Send {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, cfg: &VerifyConfig) -> SuiteReport;
}

/// All registered suites, in presentation order.
pub fn registry() -> Vec<Box<dyn VerifySuite>> {
    vec![
        Box::new(UpsilonSuite),
        Box::new(ReflectionSuite),
        Box::new(ShiftSuite),
        Box::new(BlocksSuite),
        Box::new(IntegralSuite),
        Box::new(DozzLimitSuite),
    ]
}

pub fn find(name: &str) -> Option<Box<dyn VerifySuite>> {
    registry().into_iter().find(|s| s.name() == name)
}

fn gammas(cfg: &VerifyConfig, default: &[f64]) -> Vec<f64> {
    match cfg.gamma {
        Some(g) => vec![g],
        None => default.to_vec(),
    }
}

/// Random admissible three-point input for a coupling.
fn sample_input(gamma: f64, mu: f64, rng: &mut Lcg) -> ThreePointInput {
    let p = TodaParams::new(gamma, [mu, mu]);
    let q_vec = p.q_vec();
    loop {
        let input = ThreePointInput::new(
            q_vec - E1 * rng.uniform(0.1, 0.45) - E2 * rng.uniform(0.1, 0.45),
            rng.uniform(0.3, 0.6) * p.q(),
            q_vec - E1 * rng.uniform(0.1, 0.45) - E2 * rng.uniform(0.1, 0.45),
            p,
        );
        if let Ok(v) = exact::fateev_litvinov(&input) {
            if v.is_finite() {
                return input;
            }
        }
    }
}

// ---------------------------------------------------------------------------

struct UpsilonSuite;

impl VerifySuite for UpsilonSuite {
    fn name(&self) -> &'static str {
        "upsilon"
    }
    fn description(&self) -> &'static str {
        "Upsilon shift equations, reflection symmetry, zero lattice, derivative at 0"
    }
    fn run(&self, cfg: &VerifyConfig) -> SuiteReport {
        let mut rep = SuiteReport::new(self.name());
        let trials = if cfg.trials == 0 { 200 } else { cfg.trials };
        let mut rng = Lcg::new(cfg.seed);
        let sqrt2 = std::f64::consts::SQRT_2;

        let mut shift_worst: f64 = 0.0;
        let mut refl_worst: f64 = 0.0;
        for g in gammas(cfg, &[0.8, 1.0, 1.3]) {
            let q = g + 2.0 / g;
            for _ in 0..trials {
                let z = rng.uniform(0.02 * q, 0.98 * q);
                if on_zero_lattice(z, g) {
                    continue;
                }
                for chi in [g, 2.0 / g] {
                    let lhs = upsilon_log_real(z + chi, g);
                    let f = match l_func(chi * z / 2.0) {
                        Ok(f) => f,
                        Err(_) => continue,
                    };
                    let rhs = f
                        * LogSignedReal::new((1.0 - chi * z) * (chi / sqrt2).ln(), 1)
                        * upsilon_log_real(z, g);
                    shift_worst = shift_worst.max(lhs.rel_diff(&rhs));
                }
                let a = upsilon_log_real(z, g);
                let b = upsilon_log_real(q - z, g);
                refl_worst = refl_worst.max(a.rel_diff(&b));
            }
        }
        rep.push("shift-equation residual (both chi)", shift_worst, 1e-10);
        rep.push("reflection Y(q-z) = Y(z)", refl_worst, 1e-12);

        let mut mid_worst: f64 = 0.0;
        for g in gammas(cfg, &[0.8, 1.0, 1.3]) {
            mid_worst = mid_worst.max(upsilon_log_real((g + 2.0 / g) / 2.0, g).log_abs.abs());
        }
        rep.push("Y(q/2) = 1", mid_worst, 1e-13);

        let g = gammas(cfg, &[1.0])[0];
        let lattice_ok = [0.0, -g, -2.0 / g, -g - 2.0 / g, g + 2.0 / g, 2.0 * g + 2.0 / g]
            .iter()
            .all(|&z| upsilon_log_real(z, g).is_zero());
        let mut off_ok = true;
        for _ in 0..100 {
            let z = rng.uniform(-5.0, 8.0);
            if !on_zero_lattice(z, g) && upsilon_log_real(z, g).is_zero() {
                off_ok = false;
            }
        }
        rep.push(
            "zero lattice exactness",
            if lattice_ok && off_ok { 0.0 } else { 1.0 },
            0.5,
        );

        let d = upsilon_prime_zero(g).to_f64();
        let h = 1e-4;
        let fd = (upsilon(h, g) - upsilon(-h, g)) / (2.0 * h);
        rep.push("Y'(0) vs central finite difference", (d - fd).abs() / fd.abs(), 1e-6);
        rep
    }
}

// ---------------------------------------------------------------------------

struct ReflectionSuite;

impl VerifySuite for ReflectionSuite {
    fn name(&self) -> &'static str {
        "reflection"
    }
    fn description(&self) -> &'static str {
        "Toda reflection cocycle, involutions, Liouville reflection unitarity"
    }
    fn run(&self, cfg: &VerifyConfig) -> SuiteReport {
        let mut rep = SuiteReport::new(self.name());
        let mut rng = Lcg::new(cfg.seed ^ 0x5f5f);
        let g = gammas(cfg, &[1.2])[0];
        let p = TodaParams::new(g, [cfg.mu, cfg.mu * 0.7 + 0.3]);
        let alpha =
            p.q_vec() + WeightVector::from_roots(rng.uniform(0.2, 0.9), rng.uniform(-0.9, -0.2));

        let mut cocycle_worst: f64 = 0.0;
        for s in WEYL_GROUP {
            for t in WEYL_GROUP {
                let st = s.compose(t);
                let lhs = exact::reflection_coeff(st, alpha, &p).unwrap();
                let rhs = exact::reflection_coeff(s, t.shifted(alpha, &p), &p).unwrap()
                    * exact::reflection_coeff(t, alpha, &p).unwrap();
                cocycle_worst = cocycle_worst.max(lhs.rel_diff(&rhs));
            }
        }
        rep.push("cocycle R_{st} = R_s(t_hat .) R_t (36 pairs)", cocycle_worst, 1e-10);

        let r_id = exact::reflection_coeff(crate::root_system::WeylElement::Id, alpha, &p).unwrap();
        rep.push("R_id = 1", (r_id.to_f64() - 1.0).abs(), 1e-13);

        let mut inv_worst: f64 = 0.0;
        for s in [crate::root_system::WeylElement::S1, crate::root_system::WeylElement::S2] {
            let r1 = exact::reflection_coeff(s, alpha, &p).unwrap();
            let r2 = exact::reflection_coeff(s, s.shifted(alpha, &p), &p).unwrap();
            inv_worst = inv_worst.max(((r1 * r2).to_f64() - 1.0).abs());
        }
        rep.push("involution R_s(a) R_s(s_hat a) = 1", inv_worst, 1e-11);

        let gt = (2.0 * g).sqrt().clamp(0.3, 1.9);
        let ql = exact::liouville::liouville_q(gt);
        let mut uni_worst: f64 = 0.0;
        for _ in 0..20 {
            let a = rng.uniform(0.05, 0.95) * ql;
            if let (Ok(r1), Ok(r2)) = (
                exact::liouville_reflection(a, gt, cfg.mu),
                exact::liouville_reflection(2.0 * ql - a, gt, cfg.mu),
            ) {
                uni_worst = uni_worst.max(((r1 * r2).to_f64() - 1.0).abs());
            }
        }
        rep.push("Liouville unitarity R(a) R(2Q-a) = 1", uni_worst, 1e-10);
        rep
    }
}

// ---------------------------------------------------------------------------

struct ShiftSuite;

impl VerifySuite for ShiftSuite {
    fn name(&self) -> &'static str {
        "shift"
    }
    fn description(&self) -> &'static str {
        "shift equations of the exact three-point formula (both periods)"
    }
    fn run(&self, cfg: &VerifyConfig) -> SuiteReport {
        let mut rep = SuiteReport::new(self.name());
        let trials = if cfg.trials == 0 { 100 } else { cfg.trials };
        let mut rng = Lcg::new(cfg.seed ^ 0x51f7);
        for g in gammas(cfg, &[0.9, 1.0, 1.25]) {
            let mut worst: f64 = 0.0;
            let mut done = 0;
            while done < trials {
                let input = sample_input(g, cfg.mu, &mut rng);
                for i in [1, 2] {
                    for chi in [g, 2.0 / g] {
                        if let Ok(r) = exact::check_shift_equation(i, chi, &input) {
                            worst = worst.max(r);
                        }
                    }
                }
                done += 1;
            }
            rep.push(
                format!("shift residual, gamma = {g} ({trials} triples, i = 1,2, both chi)"),
                worst,
                1e-8,
            );
        }
        rep
    }
}

// ---------------------------------------------------------------------------

struct BlocksSuite;

impl VerifySuite for BlocksSuite {
    fn name(&self) -> &'static str {
        "blocks"
    }
    fn description(&self) -> &'static str {
        "3F2 recurrence, ODE residuals, Thomae connection, crossing constraint"
    }
    fn run(&self, cfg: &VerifyConfig) -> SuiteReport {
        use num_complex::Complex64;
        let mut rep = SuiteReport::new(self.name());
        let mut rng = Lcg::new(cfg.seed ^ 0xb10c);
        let params: Vec<BlockParams> = (0..4)
            .map(|_| loop {
                let p = BlockParams::new(
                    [
                        rng.uniform(-0.85, 0.85),
                        rng.uniform(-0.85, 0.85),
                        rng.uniform(-0.85, 0.85),
                    ],
                    [1.0 + rng.uniform(-0.5, 0.5), 1.0 + rng.uniform(-0.5, 0.5)],
                );
                if p.non_generic().is_none() {
                    break p;
                }
            })
            .collect();

        // coefficient recurrence at rounding scale
        let p0 = params[0];
        let mut rec_worst: f64 = 0.0;
        let mut coeff = 1.0f64;
        for n in 0..60usize {
            let nf = n as f64;
            let ratio = (nf + p0.a[0]) * (nf + p0.a[1]) * (nf + p0.a[2])
                / ((nf + 1.0) * (nf + p0.b[0]) * (nf + p0.b[1]));
            let next = coeff * ratio;
            let mut prod = 1.0f64;
            for k in 0..=n {
                let kf = k as f64;
                prod *= (kf + p0.a[0]) * (kf + p0.a[1]) * (kf + p0.a[2])
                    / ((kf + 1.0) * (kf + p0.b[0]) * (kf + p0.b[1]));
            }
            rec_worst = rec_worst.max((next - prod).abs() / prod.abs().max(1e-300));
            coeff = next;
        }
        rep.push("coefficient recurrence vs direct product", rec_worst, 1e-12);

        // ODE residuals for all six blocks at 20 interior points
        let mut ode_worst: f64 = 0.0;
        for p in &params[..2] {
            for _ in 0..10 {
                let zin = Complex64::from_polar(rng.uniform(0.15, 0.6), rng.uniform(0.3, 2.8));
                let zout = Complex64::from_polar(rng.uniform(1.6, 4.0), rng.uniform(0.4, 2.7));
                for i in 0..=2 {
                    ode_worst = ode_worst.max(blocks::ode_residual(p, BlockFn::H(i), zin).unwrap());
                }
                for i in 1..=3 {
                    ode_worst = ode_worst.max(blocks::ode_residual(p, BlockFn::G(i), zout).unwrap());
                }
            }
        }
        rep.push("ODE residual, all six blocks, 20 points", ode_worst, 1e-6);

        let mut thomae_worst: f64 = 0.0;
        for p in &params {
            for z in [Complex64::new(-2.0, 0.0), Complex64::new(0.5, 2.0)] {
                thomae_worst = thomae_worst.max(blocks::thomae_connection_residual(p, z).unwrap());
            }
        }
        rep.push("Thomae connection residual", thomae_worst, 1e-8);

        let mut sine_worst: f64 = 0.0;
        for p in &params {
            for i in 1..=3 {
                sine_worst = sine_worst.max(blocks::crossing_sine_identity(p, i).unwrap());
            }
        }
        rep.push("crossing sine identity (all i)", sine_worst, 1e-10);
        rep
    }
}

// ---------------------------------------------------------------------------

struct IntegralSuite;

impl VerifySuite for IntegralSuite {
    fn name(&self) -> &'static str {
        "integral"
    }
    fn description(&self) -> &'static str {
        "subtracted insertion integral: adaptive quadrature vs closed form"
    }
    fn run(&self, _cfg: &VerifyConfig) -> SuiteReport {
        let mut rep = SuiteReport::new(self.name());
        // ten pairs spanning both subtraction regimes
        let pairs = [
            (1.7, 0.2),
            (1.9, 1.2),
            (1.5, -0.3),
            (1.8, 0.5),
            (1.2, -0.5),
            (1.95, 1.5),
            (0.9, -0.6),
            (1.6, 0.9),
            (1.4, 0.1),
            (1.85, 1.05),
        ];
        let mut worst: f64 = 0.0;
        for (a, b) in pairs {
            let r = exact::fateev_integral(a, b).unwrap();
            worst = worst.max(r.residual);
        }
        rep.push("quadrature vs closed form (10 pairs)", worst, 1e-4);
        rep
    }
}

// ---------------------------------------------------------------------------

struct DozzLimitSuite;

impl VerifySuite for DozzLimitSuite {
    fn name(&self) -> &'static str {
        "dozz-limit"
    }
    fn description(&self) -> &'static str {
        "degenerate limit of the three-point formula against DOZZ"
    }
    fn run(&self, cfg: &VerifyConfig) -> SuiteReport {
        let mut rep = SuiteReport::new(self.name());
        let mut rng = Lcg::new(cfg.seed ^ 0xd022);
        let trials = if cfg.trials == 0 { 10 } else { cfg.trials };
        let mut worst: f64 = 0.0;
        let mut slope_worst: f64 = 0.0;
        let mut done = 0;
        while done < trials {
            let g = rng.uniform(0.85, 1.25);
            let p = TodaParams::new(g, [cfg.mu, cfg.mu]);
            let input = ThreePointInput::new(
                p.q_vec() - E1 * rng.uniform(0.15, 0.4) - E2 * rng.uniform(0.15, 0.4),
                f64::NAN,
                p.q_vec() - E1 * rng.uniform(0.15, 0.4) - E2 * rng.uniform(0.15, 0.4),
                p,
            );
            match exact::check_dozz_limit(&input, &[1e-2, 1e-3, 1e-4, 1e-5]) {
                Ok(out) => {
                    worst = worst.max(out.rel_residual);
                    slope_worst = slope_worst.max(out.slope_linearity);
                    done += 1;
                }
                Err(_) => continue,
            }
        }
        rep.push(
            format!("Richardson-extrapolated limit vs DOZZ ({trials} configs)"),
            worst,
            1e-6,
        );
        rep.push("slope linearity of the pole residue", slope_worst, 0.25);
        let _ = rho();
        rep
    }
}
