//! Graded quadrature grids on the plane: polar patches around the insertion
//! points 0 and 1 plus a far-field annulus, with per-cell areas and
//! regularization scales.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Discretization of the plane: cell centers, areas and mollification radii.
#[derive(Debug, Clone)]
pub struct PointSet {
    pub points: Vec<Complex64>,
    pub cell_weight: Vec<f64>,
    pub eps: Vec<f64>,
    pub level: u32,
    /// far-field cutoff; the tail |x| > r_cut is handled analytically
    pub r_cut: f64,
    pub r_min: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub levels: u32,
    #[serde(default = "default_r_cut")]
    pub r_cut: f64,
    pub points_per_level: Vec<usize>,
}

fn default_r_cut() -> f64 {
    10.0
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.levels == 0 {
            return Err("grid.levels must be at least 1".into());
        }
        if self.points_per_level.len() != self.levels as usize {
            return Err(format!(
                "grid.points_per_level must list {} entries",
                self.levels
            ));
        }
        if self.r_cut <= 2.0 {
            return Err("grid.r_cut must exceed 2".into());
        }
        Ok(())
    }
}


struct Patch {
    center: Complex64,
    r_lo: f64,
    r_hi: f64,
    rings: usize,
}

impl Patch {
    /// Geometric radial grading with aspect-ratio-one cells.
    fn emit(&self, skip: impl Fn(Complex64) -> bool, out: &mut PointSet) {
        let ratio = (self.r_hi / self.r_lo).powf(1.0 / self.rings as f64);
        for k in 0..self.rings {
            let r0 = self.r_lo * ratio.powi(k as i32);
            let r1 = r0 * ratio;
            let rc = (r0 * r1).sqrt();
            let dr = r1 - r0;
            let n_theta = ((2.0 * std::f64::consts::PI * rc / dr).ceil() as usize).clamp(6, 512);
            let dth = 2.0 * std::f64::consts::PI / n_theta as f64;
            let area = 0.5 * (r1 * r1 - r0 * r0) * dth;
            // variance-matched mollification: the average of ln 1/|x-y| over
            // two copies of a radius-R disc is ln(1/R) + 1/4, so a circle
            // average at eps = R e^{-1/4} carries the same variance as the
            // cell average of the field; R is the equal-area disc radius.
            // The positivity pass below caps eps so neighbouring discs stay
            // disjoint.
            let eps = (area / std::f64::consts::PI).sqrt() * (-0.25f64).exp();
            for m in 0..n_theta {
                let th = (m as f64 + 0.5) * dth;
                let p = self.center + Complex64::from_polar(rc, th);
                if skip(p) {
                    continue;
                }
                out.points.push(p);
                out.cell_weight.push(area);
                out.eps.push(eps);
            }
        }
    }
}

/// Ring count so that a patch with log-extent `span` produces ~`target` cells.
fn rings_for(target: f64, span: f64) -> usize {
    ((target * span / (2.0 * std::f64::consts::PI)).sqrt().round() as usize).max(3)
}

const DISC0_RADIUS: f64 = 0.5;
const DISC1_RADIUS: f64 = 0.35;

impl PointSet {
    /// Build the graded grid for a refinement level. The smallest resolved
    /// scale halves with each level; `target_points` controls the density.
    pub fn graded(level: u32, target_points: usize, r_cut: f64) -> PointSet {
        let r_min = 2e-3 / (1u32 << level.min(16)) as f64;
        let mut ps = PointSet {
            points: Vec::new(),
            cell_weight: Vec::new(),
            eps: Vec::new(),
            level,
            r_cut,
            r_min,
        };
        let t = target_points as f64;
        let span0 = (DISC0_RADIUS / r_min).ln();
        let span1 = (DISC1_RADIUS / r_min).ln();
        let span_far = (r_cut / DISC0_RADIUS).ln();

        Patch {
            center: Complex64::new(0.0, 0.0),
            r_lo: r_min,
            r_hi: DISC0_RADIUS,
            rings: rings_for(0.35 * t, span0),
        }
        .emit(|_| false, &mut ps);
        Patch {
            center: Complex64::new(1.0, 0.0),
            r_lo: r_min,
            r_hi: DISC1_RADIUS,
            rings: rings_for(0.25 * t, span1),
        }
        .emit(|_| false, &mut ps);
        Patch {
            center: Complex64::new(0.0, 0.0),
            r_lo: DISC0_RADIUS,
            r_hi: r_cut,
            rings: rings_for(0.40 * t, span_far),
        }
        .emit(|p| (p - 1.0).norm() <= DISC1_RADIUS, &mut ps);
        ps.shrink_eps_for_positivity();
        ps
    }

    /// Clamp the mollification radii so that (a) the discs of any two cells
    /// stay disjoint and (b) no disc straddles the |x| = 1 ring where the
    /// metric kernel has a kink. Under these two conditions the discretized
    /// covariance is an exact Gram matrix of circle averages of the field,
    /// hence positive semidefinite.
    fn shrink_eps_for_positivity(&mut self) {
        let n = self.points.len();
        for i in 0..n {
            // a point whose disc would straddle |x| = 1 is pushed radially to
            // the near side of the ring; moving a node by less than its cell
            // size is an O(h) quadrature perturbation, while a straddling
            // disc would break the Gram structure of the covariance
            let r = self.points[i].norm();
            let gap = 1.8 * self.eps[i];
            if (r - 1.0).abs() < gap {
                let side = if r >= 1.0 { 1.0 } else { -1.0 };
                let dir = self.points[i] / r;
                self.points[i] = dir * (1.0 + side * gap);
            }
            let r = self.points[i].norm();
            self.eps[i] = self.eps[i].min(0.49 * (r - 1.0).abs());
        }
        for i in 0..n {
            for j in 0..i {
                let d = (self.points[i] - self.points[j]).norm();
                let cap = 0.45 * d;
                if self.eps[i] > cap {
                    self.eps[i] = cap;
                }
                if self.eps[j] > cap {
                    self.eps[j] = cap;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Green kernel of the sphere metric: G(x,y) = ln 1/|x-y| + ln|x|_+ + ln|y|_+.
pub fn green_kernel(x: Complex64, y: Complex64) -> Result<f64, super::GmcError> {
    if x == y {
        return Err(super::GmcError::CoincidentPoints(x));
    }
    Ok(-(x - y).norm().ln() + x.norm().max(1.0).ln() + y.norm().max(1.0).ln())
}
