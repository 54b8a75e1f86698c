//! Monte-Carlo estimators of the probabilistic three-point representations.

use super::field::{rng_for_chunk, FieldSampler};
use super::grid::{GridSpec, PointSet};
use super::{FieldSample, GmcError};
use crate::exact::liouville::{liouville_q, liouville_reflection};
use crate::exact::ThreePointInput;
use crate::logscale::LogSignedReal;
use crate::root_system::{pairing, WeightVector, E1, E2};
use crate::special::gamma::log_gamma_real;
use rayon::prelude::*;
use serde::Serialize;

const CHUNK: usize = 64;
const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT32: f64 = 1.224744871391589; // sqrt(3/2)

/// Per-direction insertion data over a point set: log-prefactors and the
/// deterministic far-field tail mass.
struct Insertions {
    logpref: Vec<f64>,
    /// logpref with the chaos counterterm added back; exp-sum is E[rho]
    log_mean: Vec<f64>,
    tail: f64,
    tail_dropped: bool,
}

/// exponents (a_bar, a0, a1, a_inf) paired with a coupling along one direction
fn insertion_table(
    ps: &PointSet,
    coupling: f64,
    counterterm_scale: f64,
    e_abar: f64,
    e_a0: f64,
    e_a1: f64,
    e_ainf: f64,
) -> Insertions {
    let n = ps.len();
    let mut logpref = Vec::with_capacity(n);
    let mut log_mean = Vec::with_capacity(n);
    for j in 0..n {
        let x = ps.points[j];
        let lx = x.norm().ln();
        let lxp = x.norm().max(1.0).ln();
        let lx1 = (x - 1.0).norm().ln();
        let var = (1.0 / ps.eps[j]).ln() + 2.0 * lxp;
        let base = ps.cell_weight[j].ln() + coupling * e_abar * lxp
            - coupling * e_a0 * lx
            - coupling * e_a1 * lx1
            - 4.0 * lxp;
        logpref.push(base - counterterm_scale * var);
        log_mean.push(base);
    }
    // mean tail mass beyond r_cut: the angular average of the insertion
    // density decays like r^{coupling*e_ainf - 4}
    let expo = coupling * e_ainf;
    let (tail, tail_dropped) = if expo < 2.0 - 1e-9 {
        (
            2.0 * std::f64::consts::PI * ps.r_cut.powf(expo - 2.0) / (2.0 - expo),
            false,
        )
    } else {
        (0.0, true)
    };
    Insertions { logpref, log_mean, tail, tail_dropped }
}

/// Deterministic first moment E[rho]: the chaos factor is mean-one, so the
/// expectation is the plain insertion quadrature plus the tail.
fn expected_mass(ins: &Insertions) -> f64 {
    ins.log_mean.iter().map(|l| l.exp()).sum::<f64>() + ins.tail
}

fn mass_from_field(ins: &Insertions, coupling: f64, field: &[f64]) -> f64 {
    let mut acc = ins.tail;
    for (l, f) in ins.logpref.iter().zip(field) {
        acc += (l + coupling * f).exp();
    }
    acc
}

// ---------------------------------------------------------------------------
// spec-facing field-sample API
// ---------------------------------------------------------------------------

/// Draw one two-component field sample (deterministic per seed).
pub fn sample_field(sampler: &FieldSampler, ps: &PointSet, seed: u64) -> FieldSample {
    let n = sampler.len();
    let mut rng = rng_for_chunk(seed, 0);
    let mut y1 = vec![0.0; n];
    let mut y2 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    sampler.sample_into(&mut rng, &mut y1, &mut tmp);
    sampler.sample_into(&mut rng, &mut y2, &mut tmp);
    let values = y1.iter().zip(&y2).map(|(&a, &b)| [a, b]).collect();
    let _ = ps;
    FieldSample { values }
}

/// GMC masses (rho_1, rho_2) of one field sample.
pub fn gmc_masses(
    fs: &FieldSample,
    ps: &PointSet,
    input: &ThreePointInput,
) -> Result<(f64, f64), GmcError> {
    let tables = toda_insertions(ps, input);
    let g = input.params.gamma;
    let mut rho = [0.0f64; 2];
    for (i, t) in tables.iter().enumerate() {
        let mut acc = t.tail;
        for (j, l) in t.logpref.iter().enumerate() {
            let [y1, y2] = fs.values[j];
            let f = if i == 0 {
                SQRT2 * y1
            } else {
                -y1 / SQRT2 + SQRT32 * y2
            };
            acc += (l + g * f).exp();
        }
        rho[i] = acc;
    }
    Ok((rho[0], rho[1]))
}

/// Seiberg-type per-insertion bounds <alpha_k - Q, e_i> < 0 for all k, i.
pub fn seiberg_check(input: &ThreePointInput) -> Vec<String> {
    let q_vec = input.params.q_vec();
    let mut warnings = Vec::new();
    for (name, alpha) in [
        ("alpha0", input.alpha0),
        ("alpha1", input.alpha1()),
        ("alphainf", input.alpha_inf),
    ] {
        for (i, e) in [E1, E2].iter().enumerate() {
            let v = pairing(alpha - q_vec, *e);
            if v >= 0.0 {
                warnings.push(format!("SeibergViolation: <{name}-Q, e{}> = {v:.4} >= 0", i + 1));
            }
        }
    }
    warnings
}

fn toda_insertions(ps: &PointSet, input: &ThreePointInput) -> [Insertions; 2] {
    let g = input.params.gamma;
    let abar = input.alpha0 + input.alpha1() + input.alpha_inf;
    let mk = |e: WeightVector| {
        insertion_table(
            ps,
            g,
            g * g, // (gamma^2/2) * Var with Var doubled by <e_i,e_i> = 2
            pairing(abar, e),
            pairing(input.alpha0, e),
            pairing(input.alpha1(), e),
            pairing(input.alpha_inf, e),
        )
    };
    [mk(E1), mk(E2)]
}

// ---------------------------------------------------------------------------
// accumulation in log scale
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct LogMoments {
    max_log: f64,
    sum1: f64,
    sum2: f64,
    n: usize,
}

impl LogMoments {
    fn empty() -> Self {
        LogMoments { max_log: f64::NEG_INFINITY, sum1: 0.0, sum2: 0.0, n: 0 }
    }

    fn push(&mut self, log_v: f64) {
        if log_v > self.max_log {
            let shift = (self.max_log - log_v).exp();
            self.sum1 *= shift;
            self.sum2 *= shift * shift;
            self.max_log = log_v;
        }
        let e = (log_v - self.max_log).exp();
        self.sum1 += e;
        self.sum2 += e * e;
        self.n += 1;
    }

    fn merge(mut self, other: LogMoments) -> LogMoments {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        if other.max_log > self.max_log {
            return other.merge(self);
        }
        let shift = (other.max_log - self.max_log).exp();
        self.sum1 += other.sum1 * shift;
        self.sum2 += other.sum2 * shift * shift;
        self.n += other.n;
        self
    }

    /// (log mean, relative stderr of the mean)
    fn mean_and_stderr(&self) -> (f64, f64) {
        let n = self.n as f64;
        let log_mean = self.max_log + (self.sum1 / n).ln();
        let m1 = self.sum1 / n;
        let m2 = self.sum2 / n;
        let var = (m2 - m1 * m1).max(0.0);
        let rel = (var / n).sqrt() / m1;
        (log_mean, rel)
    }
}

/// One refinement level of a Monte-Carlo run.
#[derive(Debug, Clone, Serialize)]
pub struct McLevelResult {
    pub level: u32,
    pub n_points: usize,
    pub n_samples: usize,
    /// log-signed estimate of the structure constant
    pub estimate: LogSignedReal,
    /// relative standard error of the magnitude
    pub stderr_rel: f64,
    pub estimate_f64: f64,
    pub stderr_f64: f64,
    /// false when the doubled moment order leaves the finite-variance window
    pub variance_window_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct McRun {
    pub levels: Vec<McLevelResult>,
    pub warnings: Vec<String>,
}

impl McRun {
    pub fn final_level(&self) -> &McLevelResult {
        self.levels.last().expect("at least one level")
    }
}

/// Vector-GMC estimator of the Toda three-point constant
/// E[prod_i Gamma(s_i) rho_i^{-s_i} / (gamma mu_i^{s_i})].
pub fn mc_three_point(
    input: &ThreePointInput,
    grid: &GridSpec,
    n_samples: usize,
    seed: u64,
) -> Result<McRun, GmcError> {
    grid.validate().map_err(GmcError::Config)?;
    let p = &input.params;
    let g = p.gamma;
    let mut warnings = seiberg_check(input);

    let s = [input.s_exponent(1), input.s_exponent(2)];
    let q_vec = p.q_vec();
    for (i, e) in [E1, E2].iter().enumerate() {
        if s[i] == 0.0 {
            return Err(GmcError::MomentViolation(format!("<s, omega{}> = 0", i + 1)));
        }
        if s[i] < 0.0 {
            // required moment order of rho_i is -s_i > 0
            let depth = [input.alpha0, input.alpha1(), input.alpha_inf]
                .iter()
                .map(|a| pairing(q_vec - *a, *e) / g)
                .fold(f64::INFINITY, f64::min);
            let bound = (2.0 / (g * g)).min(depth);
            if -s[i] >= bound {
                return Err(GmcError::MomentViolation(format!(
                    "moment order {:.4} of rho_{} exceeds the window bound {:.4}",
                    -s[i],
                    i + 1,
                    bound
                )));
            }
            if 2.0 * -s[i] >= bound {
                warnings.push(format!(
                    "variance of rho_{}^{{-s}} outside the finite window (order {:.3} vs bound {:.3})",
                    i + 1,
                    2.0 * -s[i],
                    bound
                ));
            }
        }
    }

    // prefactor prod_i Gamma(s_i) mu_i^{-s_i} / gamma
    let mut pref = LogSignedReal::ONE;
    for i in 0..2 {
        let gam = log_gamma_real(s[i])
            .map_err(|_| GmcError::GammaPole(format!("Gamma(s_{}) at {}", i + 1, s[i])))?;
        pref = pref * gam * LogSignedReal::new(-s[i] * p.mu[i].ln() - g.ln(), 1);
    }

    let mut levels = Vec::new();
    for (level, &npts) in grid.points_per_level.iter().enumerate() {
        let ps = PointSet::graded(level as u32, npts, grid.r_cut);
        let sampler = FieldSampler::build(&ps)?;
        let tables = toda_insertions(&ps, input);
        if level == 0 {
            for (i, t) in tables.iter().enumerate() {
                if t.tail_dropped {
                    warnings.push(format!(
                        "far-field mean mass of rho_{} not integrable; tail beyond r_cut dropped",
                        i + 1
                    ));
                }
            }
        }
        let n = ps.len();
        let n_chunks = n_samples.div_ceil(CHUNK);
        let chunk_moments: Vec<LogMoments> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = rng_for_chunk(seed, c as u64);
                let mut y1 = vec![0.0; n];
                let mut y2 = vec![0.0; n];
                let mut tmp = vec![0.0; n];
                let mut f = vec![0.0; n];
                let mut m = LogMoments::empty();
                let todo = CHUNK.min(n_samples - c * CHUNK);
                for _ in 0..todo {
                    sampler.sample_into(&mut rng, &mut y1, &mut tmp);
                    sampler.sample_into(&mut rng, &mut y2, &mut tmp);
                    for j in 0..n {
                        f[j] = SQRT2 * y1[j];
                    }
                    let rho1 = mass_from_field(&tables[0], g, &f);
                    for j in 0..n {
                        f[j] = -y1[j] / SQRT2 + SQRT32 * y2[j];
                    }
                    let rho2 = mass_from_field(&tables[1], g, &f);
                    m.push(-s[0] * rho1.ln() - s[1] * rho2.ln());
                }
                m
            })
            .collect();
        let total = chunk_moments
            .into_iter()
            .fold(LogMoments::empty(), LogMoments::merge);
        let (log_mean, rel) = total.mean_and_stderr();
        let estimate = pref * LogSignedReal::new(log_mean, 1);
        levels.push(McLevelResult {
            level: level as u32,
            n_points: n,
            n_samples,
            estimate,
            stderr_rel: rel,
            estimate_f64: estimate.to_f64(),
            stderr_f64: rel * estimate.to_f64().abs(),
            variance_window_ok: warnings.iter().all(|w| !w.contains("variance of rho")),
        });
    }
    Ok(McRun { levels, warnings })
}

// ---------------------------------------------------------------------------
// scalar (Liouville) estimators
// ---------------------------------------------------------------------------

fn liouville_insertions(ps: &PointSet, a: [f64; 3], gamma_t: f64) -> Insertions {
    insertion_table(
        ps,
        gamma_t,
        0.5 * gamma_t * gamma_t,
        a[0] + a[1] + a[2],
        a[0],
        a[1],
        a[2],
    )
}

fn liouville_window_check(a: [f64; 3], gamma_t: f64) -> Result<Vec<String>, GmcError> {
    let ql = liouville_q(gamma_t);
    let mut warnings = Vec::new();
    for (k, ak) in a.iter().enumerate() {
        if *ak >= ql {
            return Err(GmcError::WindowViolation(format!(
                "a{} = {ak} must lie below Q = {ql}",
                k + 1
            )));
        }
    }
    let s = a[0] + a[1] + a[2] - 2.0 * ql;
    if s == 0.0 {
        return Err(GmcError::WindowViolation("s = 0".into()));
    }
    if s < 0.0 {
        let p = -s / gamma_t;
        let bound = (4.0 / (gamma_t * gamma_t))
            .min(a.iter().map(|ak| 2.0 * (ql - ak) / gamma_t).fold(f64::INFINITY, f64::min));
        if p >= bound {
            return Err(GmcError::MomentViolation(format!(
                "moment order {p:.4} outside the window bound {bound:.4}"
            )));
        }
        if 2.0 * p >= bound {
            warnings.push(format!(
                "variance outside the finite window (order {:.3} vs bound {bound:.3})",
                2.0 * p
            ));
        }
    }
    Ok(warnings)
}

/// Scalar-GMC estimator of 2 Gamma(s/gamma) mu^{-s/gamma} gamma^{-1} E[rho^{-s/gamma}],
/// the probabilistic DOZZ representation in the moment form. The overall
/// factor 2 is the standard zero-mode normalization; it is pinned numerically
/// by the degenerate limit of the Toda three-point formula.
pub fn mc_liouville_dozz(
    a: [f64; 3],
    gamma_t: f64,
    mu: f64,
    grid: &GridSpec,
    n_samples: usize,
    seed: u64,
) -> Result<McRun, GmcError> {
    grid.validate().map_err(GmcError::Config)?;
    let mut warnings = liouville_window_check(a, gamma_t)?;
    let ql = liouville_q(gamma_t);
    let s = a[0] + a[1] + a[2] - 2.0 * ql;
    let p_ord = s / gamma_t;
    let gam = log_gamma_real(p_ord)
        .map_err(|_| GmcError::GammaPole(format!("Gamma(s/gamma) at {p_ord}")))?;
    let pref = gam * LogSignedReal::new(2.0f64.ln() - p_ord * mu.ln() - gamma_t.ln(), 1);

    let mut levels = Vec::new();
    for (level, &npts) in grid.points_per_level.iter().enumerate() {
        let ps = PointSet::graded(level as u32, npts, grid.r_cut);
        let sampler = FieldSampler::build(&ps)?;
        let table = liouville_insertions(&ps, a, gamma_t);
        if level == 0 && table.tail_dropped {
            warnings.push("far-field mean mass not integrable; tail dropped".into());
        }
        let n = ps.len();
        let n_chunks = n_samples.div_ceil(CHUNK);
        let chunk_moments: Vec<LogMoments> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = rng_for_chunk(seed, c as u64);
                let mut y = vec![0.0; n];
                let mut tmp = vec![0.0; n];
                let mut m = LogMoments::empty();
                let todo = CHUNK.min(n_samples - c * CHUNK);
                for _ in 0..todo {
                    sampler.sample_into(&mut rng, &mut y, &mut tmp);
                    let rho = mass_from_field(&table, gamma_t, &y);
                    m.push(-p_ord * rho.ln());
                }
                m
            })
            .collect();
        let total = chunk_moments
            .into_iter()
            .fold(LogMoments::empty(), LogMoments::merge);
        let (log_mean, rel) = total.mean_and_stderr();
        let estimate = pref * LogSignedReal::new(log_mean, 1);
        levels.push(McLevelResult {
            level: level as u32,
            n_points: n,
            n_samples,
            estimate,
            stderr_rel: rel,
            estimate_f64: estimate.to_f64(),
            stderr_f64: rel * estimate.to_f64().abs(),
            variance_window_ok: warnings.iter().all(|w| !w.contains("variance")),
        });
    }
    Ok(McRun { levels, warnings })
}

/// Result of the remainder-subtracted zero-mode integral run.
#[derive(Debug, Clone, Serialize)]
pub struct ExtendedRun {
    pub estimate: f64,
    pub stderr: f64,
    /// bound on the truncated c-integral tails
    pub quadrature_tail_bound: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub n_c: usize,
    pub n_points: usize,
    pub n_samples: usize,
    pub active_subsets: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

/// Extended Liouville representation (remainder-subtracted zero-mode integral)
/// C = 2 int e^{sc} E[e^{-mu e^{gamma c} rho} - R_alpha(c)] dc
/// valid for a_k < Q and s > -gamma; the factor 2 is the same zero-mode
/// normalization as in the moment-form estimator.
pub fn mc_extended_liouville(
    a: [f64; 3],
    gamma_t: f64,
    mu: f64,
    n_c: usize,
    grid: &GridSpec,
    n_samples: usize,
    seed: u64,
) -> Result<ExtendedRun, GmcError> {
    grid.validate().map_err(GmcError::Config)?;
    let ql = liouville_q(gamma_t);
    let s = a[0] + a[1] + a[2] - 2.0 * ql;
    for (k, ak) in a.iter().enumerate() {
        if *ak >= ql {
            return Err(GmcError::WindowViolation(format!("a{} >= Q", k + 1)));
        }
    }
    if s <= -gamma_t {
        return Err(GmcError::WindowViolation(format!(
            "s = {s:.4} must exceed -gamma = {:.4}",
            -gamma_t
        )));
    }
    let mut warnings = Vec::new();

    // remainder terms: subsets U with s < sum_{k in U} 2(a_k - Q)
    let mut active: Vec<(Vec<usize>, f64, f64)> = Vec::new(); // (subset, coef, exponent)
    for mask in 0u8..8 {
        let subset: Vec<usize> = (0..3).filter(|k| mask & (1 << k) != 0).collect();
        let threshold: f64 = subset.iter().map(|&k| 2.0 * (a[k] - ql)).sum();
        if s < threshold {
            let mut coef = LogSignedReal::ONE;
            for &k in &subset {
                coef = coef
                    * liouville_reflection(a[k], gamma_t, mu)
                        .map_err(|e| GmcError::GammaPole(format!("{e}")))?;
            }
            let expo: f64 = subset.iter().map(|&k| 2.0 * (ql - a[k])).sum();
            active.push((subset, coef.to_f64(), expo));
        }
    }

    let ps = PointSet::graded(
        grid.levels - 1,
        *grid.points_per_level.last().unwrap(),
        grid.r_cut,
    );
    let sampler = FieldSampler::build(&ps)?;
    let table = liouville_insertions(&ps, a, gamma_t);
    if table.tail_dropped {
        warnings.push("far-field mean mass not integrable; tail dropped".into());
    }
    let n = ps.len();

    // pilot samples to locate the support of the c-integrand
    let remainder = |c: f64| -> f64 {
        active
            .iter()
            .map(|(_, coef, expo)| coef * (expo * c).exp())
            .sum()
    };
    let pilot_n = 48;
    let mut pilot_rho = Vec::with_capacity(pilot_n);
    {
        let mut rng = rng_for_chunk(seed ^ 0x70b1_107, 0);
        let mut y = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        for _ in 0..pilot_n {
            sampler.sample_into(&mut rng, &mut y, &mut tmp);
            pilot_rho.push(mass_from_field(&table, gamma_t, &y));
        }
    }
    let integrand_pilot = |c: f64| -> f64 {
        let mean: f64 = pilot_rho
            .iter()
            .map(|rho| (-mu * (gamma_t * c).exp() * rho).exp())
            .sum::<f64>()
            / pilot_n as f64;
        (s * c).exp() * (mean - remainder(c))
    };
    let rho_med = {
        let mut v = pilot_rho.clone();
        v.sort_by(f64::total_cmp);
        v[pilot_n / 2]
    };
    let c_center = -(mu * rho_med).ln() / gamma_t;
    let mut c_hi = c_center + 2.0;
    let mut c_lo = c_center - 2.0;
    let peak = integrand_pilot(c_center).abs().max(1e-300);
    while integrand_pilot(c_hi).abs() > 1e-8 * peak && c_hi < c_center + 80.0 {
        c_hi += 0.5;
    }
    // Extend left while the integrand keeps decaying. The true integrand
    // decays once the subtracted reflection terms cancel the expectation's
    // fractional-power asymptotics; at very negative c the discretized mass
    // cannot reproduce that power law (its tail is cut at the mesh scale),
    // and the mismatch shows up as an upturn of |integrand|. The first
    // upturn therefore marks the honest truncation point.
    let mut prev = integrand_pilot(c_lo).abs();
    while prev > 1e-8 * peak && c_lo > c_center - 400.0 {
        let next = integrand_pilot(c_lo - 0.5).abs();
        if next >= prev {
            break;
        }
        prev = next;
        c_lo -= 0.5;
    }
    let dc = (c_hi - c_lo) / (n_c - 1) as f64;

    // deterministic per-node data
    let cs: Vec<f64> = (0..n_c).map(|i| c_lo + i as f64 * dc).collect();
    let esc: Vec<f64> = cs.iter().map(|&c| (s * c).exp()).collect();
    let scale: Vec<f64> = cs.iter().map(|&c| mu * (gamma_t * c).exp()).collect();
    let rem: Vec<f64> = cs.iter().map(|&c| remainder(c)).collect();
    let wq: Vec<f64> = (0..n_c)
        .map(|i| if i == 0 || i == n_c - 1 { 0.5 * dc } else { dc })
        .collect();

    let n_chunks = n_samples.div_ceil(CHUNK);
    let partials: Vec<(f64, f64, usize)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_for_chunk(seed, c as u64);
            let mut y = vec![0.0; n];
            let mut tmp = vec![0.0; n];
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            let todo = CHUNK.min(n_samples - c * CHUNK);
            for _ in 0..todo {
                sampler.sample_into(&mut rng, &mut y, &mut tmp);
                let rho = mass_from_field(&table, gamma_t, &y);
                let mut val = 0.0;
                for i in 0..n_c {
                    val += wq[i] * esc[i] * ((-scale[i] * rho).exp() - rem[i]);
                }
                s1 += val;
                s2 += val * val;
            }
            (s1, s2, todo)
        })
        .collect();
    // compensated merge in chunk order
    let (mut s1, mut s2, mut cnt) = (0.0f64, 0.0f64, 0usize);
    let (mut k1, mut k2) = (0.0f64, 0.0f64);
    for (a1, a2, m) in partials {
        let y = a1 - k1;
        let t = s1 + y;
        k1 = (t - s1) - y;
        s1 = t;
        let y = a2 - k2;
        let t = s2 + y;
        k2 = (t - s2) - y;
        s2 = t;
        cnt += m;
    }
    let nf = cnt as f64;
    let mean = 2.0 * s1 / nf;
    let var = (4.0 * s2 / nf - mean * mean).max(0.0);
    let stderr = (var / nf).sqrt();

    // tail bound from the pilot envelope at the grid ends (geometric decay)
    let tail = 2.0
        * (integrand_pilot(c_lo).abs() / s.abs().max(0.1)
            + integrand_pilot(c_hi).abs() / gamma_t);

    Ok(ExtendedRun {
        estimate: mean,
        stderr,
        quadrature_tail_bound: tail,
        c_lo,
        c_hi,
        n_c,
        n_points: n,
        n_samples: cnt,
        active_subsets: active.iter().map(|(u, _, _)| u.clone()).collect(),
        warnings,
    })
}

/// Deterministic expected masses (E[rho_1], E[rho_2]) for the vector case;
/// exact first moments of the normalized chaos.
pub fn expected_masses(ps: &PointSet, input: &ThreePointInput) -> (f64, f64) {
    let t = toda_insertions(ps, input);
    (expected_mass(&t[0]), expected_mass(&t[1]))
}

/// Deterministic expected scalar mass for the Liouville case.
pub fn expected_mass_liouville(ps: &PointSet, a: [f64; 3], gamma_t: f64) -> f64 {
    expected_mass(&liouville_insertions(ps, a, gamma_t))
}
