//! Peres' bomb-fragment model.
//!
//! A body at rest with angular momentum zero splits into two fragments
//! carrying `J` and `−J`. Observer A reads `sgn(a·J)` on fragment 1, observer
//! B reads `sgn(b·(−J))` on fragment 2. For `J` uniform on the sphere the
//! correlation is linear in the relative angle: `E(θ) = 2θ/π − 1`.

use std::f64::consts::{PI, TAU};
use std::ops::Neg;

use serde::Serialize;

use crate::band::{Angle, Outcome};
use crate::error::{in_range, Error, Result};
use crate::rng::{tag, TrialStream};

const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Direction3 {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction3 {
    pub const X: Direction3 = Direction3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Direction3 = Direction3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Direction3 = Direction3 { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self { x, y, z })
    }

    pub fn components(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Direction3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Direction at angle `theta` from `ẑ` inside the x–z plane.
    pub fn in_xz_plane(theta: Angle) -> Self {
        let (s, c) = theta.radians().sin_cos();
        Self { x: s, y: 0.0, z: c }
    }
}

impl Neg for Direction3 {
    type Output = Direction3;

    fn neg(self) -> Direction3 {
        Direction3 {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Angular momentum of fragment 1; fragment 2 carries `−j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeresShare {
    pub j: Direction3,
}

/// Uniform direction on the unit sphere: `z ~ U[−1, 1]`, azimuth `~ U[0, 2π)`.
pub fn sample_direction_uniform(stream: &mut TrialStream) -> Direction3 {
    let z = stream.uniform(tag::SPHERE_Z, -1.0, 1.0);
    let phi = stream.uniform(tag::SPHERE_AZIMUTH, 0.0, TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = phi.sin_cos();
    Direction3 { x: r * c, y: r * s, z }
}

pub fn peres_outcome(direction: Direction3, j: Direction3) -> Outcome {
    Outcome::from_value(direction.dot(j))
}

pub fn peres_pair_outcomes(
    share: &PeresShare,
    dir_a: Direction3,
    dir_b: Direction3,
) -> (Outcome, Outcome) {
    (peres_outcome(dir_a, share.j), peres_outcome(dir_b, -share.j))
}

/// Outcome product, or `None` when either projection is exactly zero.
pub fn peres_product_tie_excluded(
    share: &PeresShare,
    dir_a: Direction3,
    dir_b: Direction3,
) -> Option<i64> {
    if dir_a.dot(share.j) == 0.0 || dir_b.dot(share.j) == 0.0 {
        return None;
    }
    let (a, b) = peres_pair_outcomes(share, dir_a, dir_b);
    Some(a.times(b).value())
}

/// `E(θ) = 2θ/π − 1` on `[0, π]`.
pub fn peres_correlation_analytic(theta: Angle) -> Result<f64> {
    let t = in_range("theta", theta.radians(), 0.0, PI)?;
    Ok(2.0 * t / PI - 1.0)
}
