//! Exact sl3 Cartan-space linear algebra.
//!
//! Everything is stored in a fixed orthonormal embedding of the Cartan plane,
//! chosen so that the Gram pairing of the simple roots becomes the plain
//! Euclidean dot product and the Weyl group acts by orthogonal matrices:
//! `e1 = (sqrt 2, 0)`, `e2 = (-1/sqrt 2, sqrt(3/2))`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A point of the sl3 Cartan plane in the Euclidean embedding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector {
    pub x: f64,
    pub y: f64,
}

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Simple root e1 = (sqrt2, 0).
pub const E1: WeightVector = WeightVector {
    x: SQRT2,
    y: 0.0,
};
/// Simple root e2 = (-1/sqrt2, sqrt(3/2)).
pub const E2: WeightVector = WeightVector {
    x: -std::f64::consts::FRAC_1_SQRT_2,
    y: 1.224744871391589,
};

impl WeightVector {
    pub const ZERO: WeightVector = WeightVector { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        WeightVector { x, y }
    }

    /// Build from coefficients in the simple-root basis (e1, e2).
    pub fn from_roots(c1: f64, c2: f64) -> Self {
        E1 * c1 + E2 * c2
    }

    /// Build from coefficients in the fundamental-weight basis (omega1, omega2).
    pub fn from_weights(c1: f64, c2: f64) -> Self {
        omega(1) * c1 + omega(2) * c2
    }

    /// Coefficients in the simple-root basis, i.e. (<v,omega1>, <v,omega2>).
    pub fn root_coords(&self) -> (f64, f64) {
        (pairing(*self, omega(1)), pairing(*self, omega(2)))
    }

    /// Coefficients in the fundamental-weight basis, i.e. (<v,e1>, <v,e2>).
    pub fn weight_coords(&self) -> (f64, f64) {
        (pairing(*self, E1), pairing(*self, E2))
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl Add for WeightVector {
    type Output = WeightVector;
    fn add(self, o: WeightVector) -> WeightVector {
        WeightVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for WeightVector {
    type Output = WeightVector;
    fn sub(self, o: WeightVector) -> WeightVector {
        WeightVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for WeightVector {
    type Output = WeightVector;
    fn mul(self, c: f64) -> WeightVector {
        WeightVector::new(self.x * c, self.y * c)
    }
}

impl Neg for WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        WeightVector::new(-self.x, -self.y)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c1, c2) = self.root_coords();
        write!(f, "{c1:.6} e1 + {c2:.6} e2")
    }
}

/// The Gram pairing, a plain dot product in the embedding.
pub fn pairing(u: WeightVector, v: WeightVector) -> f64 {
    u.x * v.x + u.y * v.y
}

/// Fundamental weight omega_i (dual basis to the simple roots).
pub fn omega(i: usize) -> WeightVector {
    match i {
        1 => E1 * (2.0 / 3.0) + E2 * (1.0 / 3.0),
        2 => E1 * (1.0 / 3.0) + E2 * (2.0 / 3.0),
        _ => panic!("omega index must be 1 or 2"),
    }
}

/// Weyl vector rho = omega1 + omega2 = e1 + e2.
pub fn rho() -> WeightVector {
    E1 + E2
}

/// Weights h_1, h_2, h_3 of the first fundamental representation.
/// h1 - h2 = e1, h2 - h3 = e2, h1 + h2 + h3 = 0.
pub fn h_weight(i: usize) -> WeightVector {
    match i {
        1 => omega(1),
        2 => omega(2) - omega(1),
        3 => -omega(2),
        _ => panic!("h index must be 1, 2 or 3"),
    }
}

/// Positive roots {e1, e2, e1+e2}.
pub fn positive_roots() -> [WeightVector; 3] {
    [E1, E2, E1 + E2]
}

/// Reflection in the hyperplane orthogonal to the simple root e_i.
pub fn reflect(i: usize, v: WeightVector) -> WeightVector {
    let e = match i {
        1 => E1,
        2 => E2,
        _ => panic!("reflection index must be 1 or 2"),
    };
    v - e * pairing(v, e)
}

/// One of the six Weyl-group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeylElement {
    Id,
    S1,
    S2,
    S1S2,
    S2S1,
    S1S2S1,
}

pub const WEYL_GROUP: [WeylElement; 6] = [
    WeylElement::Id,
    WeylElement::S1,
    WeylElement::S2,
    WeylElement::S1S2,
    WeylElement::S2S1,
    WeylElement::S1S2S1,
];

impl WeylElement {
    /// Canonical reduced word over {1, 2}, leftmost letter acts last.
    pub fn word(&self) -> &'static [usize] {
        match self {
            WeylElement::Id => &[],
            WeylElement::S1 => &[1],
            WeylElement::S2 => &[2],
            WeylElement::S1S2 => &[1, 2],
            WeylElement::S2S1 => &[2, 1],
            WeylElement::S1S2S1 => &[1, 2, 1],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeylElement::Id => "id",
            WeylElement::S1 => "s1",
            WeylElement::S2 => "s2",
            WeylElement::S1S2 => "s1s2",
            WeylElement::S2S1 => "s2s1",
            WeylElement::S1S2S1 => "s1s2s1",
        }
    }

    /// Apply the element to a vector (rightmost letter of the word first).
    pub fn apply(&self, v: WeightVector) -> WeightVector {
        let mut out = v;
        for &i in self.word().iter().rev() {
            out = reflect(i, out);
        }
        out
    }

    /// Determinant of the orthogonal matrix, i.e. the sign epsilon(s).
    pub fn sign(&self) -> f64 {
        if self.word().len() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// 2x2 matrix of the element in the Euclidean embedding, row major.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let c1 = self.apply(WeightVector::new(1.0, 0.0));
        let c2 = self.apply(WeightVector::new(0.0, 1.0));
        [[c1.x, c2.x], [c1.y, c2.y]]
    }

    /// Group composition: (self * other)(v) = self(other(v)).
    pub fn compose(&self, other: WeylElement) -> WeylElement {
        let v = WeightVector::new(0.37, 0.11); // generic probe point
        let target = self.apply(other.apply(v));
        for s in WEYL_GROUP {
            let got = s.apply(v);
            if (got.x - target.x).abs() < 1e-12 && (got.y - target.y).abs() < 1e-12 {
                return s;
            }
        }
        unreachable!("Weyl group is closed under composition")
    }

    /// Shifted action s_hat(alpha) = Q + s(alpha - Q).
    pub fn shifted(&self, alpha: WeightVector, params: &TodaParams) -> WeightVector {
        params.q_vec() + self.apply(alpha - params.q_vec())
    }
}

/// Coupling gamma, cosmological constants, and the derived background charge.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TodaParams {
    pub gamma: f64,
    pub mu: [f64; 2],
}

impl TodaParams {
    pub fn new(gamma: f64, mu: [f64; 2]) -> Self {
        assert!(
            gamma > 0.0 && gamma < SQRT2,
            "coupling gamma must lie in (0, sqrt 2)"
        );
        assert!(mu[0] > 0.0 && mu[1] > 0.0, "cosmological constants must be positive");
        TodaParams { gamma, mu }
    }

    /// q = gamma + 2/gamma.
    pub fn q(&self) -> f64 {
        self.gamma + 2.0 / self.gamma
    }

    /// Background charge Q = q rho.
    pub fn q_vec(&self) -> WeightVector {
        rho() * self.q()
    }

    /// Equal cosmological constant, or None when mu1 != mu2.
    pub fn mu_equal(&self) -> Option<f64> {
        if self.mu[0] == self.mu[1] {
            Some(self.mu[0])
        } else {
            None
        }
    }
}

/// Relative tolerance for declaring a chamber wall hit.
fn wall_tol(v: WeightVector) -> f64 {
    1e-12 * (1.0 + v.norm())
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum RootSystemError {
    #[error("alpha - Q lies on a Weyl chamber wall (|<s(alpha-Q),e{index}>| = {value:.3e})")]
    WallDegeneracy { index: usize, value: f64 },
}

/// The unique s in W with s(alpha - Q) in the open negative chamber, and s_hat(alpha).
pub fn dominant_representative(
    alpha: WeightVector,
    params: &TodaParams,
) -> Result<(WeylElement, WeightVector), RootSystemError> {
    let beta = alpha - params.q_vec();
    let tol = wall_tol(beta);
    for s in WEYL_GROUP {
        let img = s.apply(beta);
        let p1 = pairing(img, E1);
        let p2 = pairing(img, E2);
        if p1.abs() < tol {
            return Err(RootSystemError::WallDegeneracy { index: 1, value: p1 });
        }
        if p2.abs() < tol {
            return Err(RootSystemError::WallDegeneracy { index: 2, value: p2 });
        }
        if p1 < 0.0 && p2 < 0.0 {
            return Ok((s, params.q_vec() + img));
        }
    }
    unreachable!("the Weyl group acts transitively on the chambers")
}

/// Conformal weight Delta_alpha = <alpha/2, Q - alpha/2>.
pub fn conformal_weight(alpha: WeightVector, params: &TodaParams) -> f64 {
    pairing(alpha * 0.5, params.q_vec() - alpha * 0.5)
}

/// JSON wire form of a weight vector: {"basis": "...", "coords": [x, y]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightVectorJson {
    pub basis: String,
    pub coords: [f64; 2],
}

impl WeightVectorJson {
    pub fn decode(&self) -> Result<WeightVector, String> {
        let [a, b] = self.coords;
        match self.basis.as_str() {
            "root" => Ok(WeightVector::from_roots(a, b)),
            "omega" => Ok(WeightVector::from_weights(a, b)),
            "euclid" => Ok(WeightVector::new(a, b)),
            other => Err(format!(
                "unknown basis {other:?}; expected \"omega\", \"root\" or \"euclid\""
            )),
        }
    }

    pub fn encode(v: WeightVector, basis: &str) -> Result<Self, String> {
        let coords = match basis {
            "root" => {
                let (a, b) = v.root_coords();
                [a, b]
            }
            "omega" => {
                let (a, b) = v.weight_coords();
                [a, b]
            }
            "euclid" => [v.x, v.y],
            other => return Err(format!("unknown basis {other:?}")),
        };
        Ok(WeightVectorJson {
            basis: basis.to_string(),
            coords,
        })
    }
}
