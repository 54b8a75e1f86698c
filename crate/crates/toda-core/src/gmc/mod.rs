//! Monte-Carlo estimation of the probabilistic three-point functions:
//! exact-covariance sampling of the vector Gaussian field, correlated GMC
//! masses, and estimators for the Toda and (extended) Liouville
//! representations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub mod estimators;
pub mod field;
pub mod grid;

pub use estimators::{
    expected_mass_liouville, expected_masses, gmc_masses, mc_extended_liouville,
    mc_liouville_dozz, mc_three_point, sample_field, seiberg_check, ExtendedRun, McLevelResult,
    McRun,
};
pub use field::FieldSampler;
pub use grid::{green_kernel, GridSpec, PointSet};

#[derive(Debug, Clone, thiserror::Error)]
pub enum GmcError {
    #[error("coincident points at {0}")]
    CoincidentPoints(Complex64),
    #[error("covariance not positive definite (smallest eigenvalue ~ {min_eig:.3e}); coarsen eps")]
    NotPositiveDefinite { min_eig: f64 },
    #[error("Seiberg bound violated: {0}")]
    SeibergViolation(String),
    #[error("moment window violated: {0}")]
    MomentViolation(String),
    #[error("Gamma pole: {0}")]
    GammaPole(String),
    #[error("window violation: {0}")]
    WindowViolation(String),
    #[error("config: {0}")]
    Config(String),
}

/// One draw of the two-component Gaussian field over a point set.
#[derive(Debug, Clone)]
pub struct FieldSample {
    /// per-point field components in the Euclidean embedding of the Cartan plane
    pub values: Vec<[f64; 2]>,
}

/// Run configuration for the CLI front end (TOML or JSON).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// "toda", "liouville" or "liouville-extended"
    pub kind: String,
    pub gamma: f64,
    #[serde(default = "default_mu")]
    pub mu: [f64; 2],
    /// Toda weights (required for kind = "toda")
    pub alpha0: Option<crate::root_system::WeightVectorJson>,
    pub kappa: Option<f64>,
    pub alpha_inf: Option<crate::root_system::WeightVectorJson>,
    /// Liouville weights (required for the scalar kinds); gamma is then the
    /// Liouville coupling in (0, 2)
    pub weights: Option<[f64; 3]>,
    pub grid: GridSpec,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default = "default_nc")]
    pub c_nodes: usize,
}

fn default_mu() -> [f64; 2] {
    [1.0, 1.0]
}

fn default_nc() -> usize {
    512
}

#[cfg(test)]
mod tests;
