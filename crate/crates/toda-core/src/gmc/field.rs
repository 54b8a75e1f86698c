//! Exact-covariance Gaussian field sampling on a point set: dense covariance,
//! Cholesky factorization, deterministic per-seed draws.

use super::grid::{green_kernel, PointSet};
use super::GmcError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Lower-triangular Cholesky factor of the regularized covariance matrix
/// C_ij = G(x_i, x_j) (i != j), C_ii = ln(1/eps_i) + 2 ln|x_i|_+.
pub struct FieldSampler {
    n: usize,
    chol: Vec<f64>, // row-major lower triangle, full n x n storage
}

const JITTER: f64 = 1e-10;

impl FieldSampler {
    pub fn build(ps: &PointSet) -> Result<FieldSampler, GmcError> {
        let n = ps.len();
        let mut c = vec![0.0f64; n * n];
        for i in 0..n {
            let xi = ps.points[i];
            c[i * n + i] = (1.0 / ps.eps[i]).ln() + 2.0 * xi.norm().max(1.0).ln() + JITTER;
            for j in 0..i {
                let g = green_kernel(xi, ps.points[j])?;
                c[i * n + j] = g;
                c[j * n + i] = g;
            }
        }
        match cholesky_in_place(&mut c, n) {
            Ok(()) => Ok(FieldSampler { n, chol: c }),
            Err(_pivot) => {
                let min_eig = smallest_eigenvalue_estimate(ps, n);
                Err(GmcError::NotPositiveDefinite { min_eig })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// One scalar field draw: values[j] = (L xi)_j with iid standard normals.
    pub fn sample_into(&self, rng: &mut ChaCha12Rng, out: &mut [f64], scratch: &mut [f64]) {
        debug_assert_eq!(out.len(), self.n);
        fill_standard_normal(rng, scratch);
        for i in 0..self.n {
            let row = &self.chol[i * self.n..i * self.n + i + 1];
            let mut acc = 0.0;
            for (l, x) in row.iter().zip(scratch.iter()) {
                acc += l * x;
            }
            out[i] = acc;
        }
    }
}

/// Deterministic Box-Muller pairs from the seeded stream.
pub fn fill_standard_normal(rng: &mut ChaCha12Rng, out: &mut [f64]) {
    let mut i = 0;
    while i < out.len() {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        out[i] = r * th.cos();
        if i + 1 < out.len() {
            out[i + 1] = r * th.sin();
        }
        i += 2;
    }
}

/// Sub-stream seed for a sample chunk, derived from the master seed.
pub fn chunk_seed(master: u64, chunk: u64) -> u64 {
    // splitmix64 of (master xor golden-ratio multiple)
    let mut z = master ^ chunk.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub fn rng_for_chunk(master: u64, chunk: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(chunk_seed(master, chunk))
}

fn cholesky_in_place(c: &mut [f64], n: usize) -> Result<(), f64> {
    for j in 0..n {
        let mut d = c[j * n + j];
        for k in 0..j {
            let v = c[j * n + k];
            d -= v * v;
        }
        if d <= 0.0 {
            return Err(d);
        }
        let dj = d.sqrt();
        c[j * n + j] = dj;
        let inv = 1.0 / dj;
        for i in j + 1..n {
            let mut acc = c[i * n + j];
            let (ri, rj) = (i * n, j * n);
            for k in 0..j {
                acc -= c[ri + k] * c[rj + k];
            }
            c[ri + j] = acc * inv;
        }
    }
    // zero the strict upper triangle so sample_into can use contiguous rows
    for i in 0..n {
        for j in i + 1..n {
            c[i * n + j] = 0.0;
        }
    }
    Ok(())
}

/// Crude smallest-eigenvalue estimate (shifted power iteration) used only in
/// the failure report of a non-positive-definite covariance.
fn smallest_eigenvalue_estimate(ps: &PointSet, n: usize) -> f64 {
    let mut c = vec![0.0f64; n * n];
    for i in 0..n {
        let xi = ps.points[i];
        c[i * n + i] = (1.0 / ps.eps[i]).ln() + 2.0 * xi.norm().max(1.0).ln();
        for j in 0..i {
            let g = green_kernel(xi, ps.points[j]).unwrap_or(0.0);
            c[i * n + j] = g;
            c[j * n + i] = g;
        }
    }
    let matvec = |v: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += c[i * n + j] * v[j];
            }
            out[i] = acc;
        }
    };
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0; n];
    let mut lam_max = 0.0;
    for _ in 0..40 {
        matvec(&v, &mut w);
        lam_max = w.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    // power iteration on lam_max I - C converges to the smallest eigenvalue
    let mut u: Vec<f64> = (0..n).map(|i| ((i * 37 % 101) as f64 / 101.0) - 0.5).collect();
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    u.iter_mut().for_each(|x| *x /= norm);
    let mut lam_shift = 0.0;
    for _ in 0..60 {
        matvec(&u, &mut w);
        for i in 0..n {
            w[i] = lam_max * u[i] - w[i];
        }
        lam_shift = w.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        for (ui, wi) in u.iter_mut().zip(&w) {
            *ui = wi / norm;
        }
    }
    lam_max - lam_shift
}
