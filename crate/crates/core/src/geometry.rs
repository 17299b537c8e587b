//! Unit vectors on the sphere and the small amount of 3-vector algebra the
//! kernels need.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `a · (b × c)`.
pub fn triple(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    dot(a, &cross(b, c))
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Point on the unit sphere, `n = (cos φ sin θ, sin φ sin θ, cos θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AxisAngles", into = "AxisAngles")]
pub struct UnitAxis {
    theta: f64,
    phi: f64,
    cartesian: Vec3,
}

#[derive(Serialize, Deserialize)]
struct AxisAngles {
    theta: f64,
    phi: f64,
}

impl TryFrom<AxisAngles> for UnitAxis {
    type Error = Error;

    fn try_from(a: AxisAngles) -> Result<Self> {
        UnitAxis::new(a.theta, a.phi)
    }
}

impl From<UnitAxis> for AxisAngles {
    fn from(a: UnitAxis) -> Self {
        AxisAngles {
            theta: a.theta,
            phi: a.phi,
        }
    }
}

impl UnitAxis {
    pub const Z: UnitAxis = UnitAxis {
        theta: 0.0,
        phi: 0.0,
        cartesian: [0.0, 0.0, 1.0],
    };

    /// Axis from polar angle `theta ∈ [0, π]` and azimuth `phi` (wrapped into
    /// `[0, 2π)`).
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidAxis("non-finite angle".into()));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidAxis(format!("theta = {theta} outside [0, pi]")));
        }
        Ok(Self::from_angles_unchecked(theta, phi.rem_euclid(TAU)))
    }

    fn from_angles_unchecked(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitAxis {
            theta,
            phi,
            cartesian: [cp * st, sp * st, ct],
        }
    }

    /// Axis along a non-zero Cartesian vector, normalizing it.
    pub fn from_cartesian(v: Vec3) -> Result<Self> {
        let r = norm(&v);
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidAxis(format!("cannot normalize {v:?}")));
        }
        let u = [v[0] / r, v[1] / r, v[2] / r];
        let theta = u[2].clamp(-1.0, 1.0).acos();
        let phi = u[1].atan2(u[0]).rem_euclid(TAU);
        Ok(UnitAxis {
            theta,
            phi,
            cartesian: u,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cartesian(&self) -> &Vec3 {
        &self.cartesian
    }

    pub fn dot(&self, other: &UnitAxis) -> f64 {
        dot(&self.cartesian, &other.cartesian)
    }

    /// Image under a rotation given as a row-major 3x3 orthogonal matrix.
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> UnitAxis {
        let v = &self.cartesian;
        let w = [dot(&rot[0], v), dot(&rot[1], v), dot(&rot[2], v)];
        UnitAxis::from_cartesian(w).expect("rotation preserves norm")
    }

    /// Mirror image through the xy plane.
    pub fn reflected_z(&self) -> UnitAxis {
        let [x, y, z] = self.cartesian;
        UnitAxis::from_cartesian([x, y, -z]).expect("reflection preserves norm")
    }
}
