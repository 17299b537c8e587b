//! Product quadrature on the unit sphere.
//!
//! Gauss-Legendre in `cos θ` with `L` nodes times the trapezoid rule in `φ`
//! with `M` equally spaced nodes. The rule integrates spherical harmonics
//! exactly up to degree `min(2L - 1, M - 1)`. Weights are normalized to sum to
//! one, i.e. they carry the `1/4π` of the phase-space measure.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitAxis;
use crate::spin::Spin;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureNode {
    pub axis: UnitAxis,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    polar: usize,
    azimuthal: usize,
    nodes: Vec<QuadratureNode>,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

impl SphereQuadrature {
    pub fn new(polar: usize, azimuthal: usize) -> Result<Self> {
        if polar == 0 || azimuthal == 0 {
            return Err(Error::EmptyQuadrature);
        }
        let (x, w) = gauss_legendre(polar);
        let mut nodes = Vec::with_capacity(polar * azimuthal);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.clamp(-1.0, 1.0).acos();
            for k in 0..azimuthal {
                let phi = TAU * k as f64 / azimuthal as f64;
                nodes.push(QuadratureNode {
                    axis: UnitAxis::new(theta, phi)?,
                    weight: wi / (2.0 * azimuthal as f64),
                });
            }
        }
        Ok(SphereQuadrature {
            polar,
            azimuthal,
            nodes,
        })
    }

    /// Default orders for spin `j`: `L = 2j + 2`, `M = 4j + 2`.
    pub fn for_spin(spin: Spin) -> Self {
        let tj = spin.twice() as usize;
        Self::new(tj + 2, 2 * tj + 2).expect("positive orders")
    }

    /// Smallest orders that integrate products of two spin-`j` symbols exactly.
    pub fn minimum_orders(spin: Spin) -> (usize, usize) {
        let tj = spin.twice() as usize;
        (tj + 1, 2 * tj + 1)
    }

    pub fn resolves(&self, spin: Spin) -> bool {
        let (l, m) = Self::minimum_orders(spin);
        self.polar >= l && self.azimuthal >= m
    }

    pub fn check_resolves(&self, spin: Spin) -> Result<()> {
        if self.resolves(spin) {
            return Ok(());
        }
        let (min_polar, min_azimuthal) = Self::minimum_orders(spin);
        Err(Error::UnderResolved {
            twice_j: spin.twice(),
            polar: self.polar,
            azimuthal: self.azimuthal,
            min_polar,
            min_azimuthal,
        })
    }

    pub fn polar(&self) -> usize {
        self.polar
    }

    pub fn azimuthal(&self) -> usize {
        self.azimuthal
    }

    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sphere average `(1/4π) ∫ f dΩ`.
    pub fn average(&self, f: impl Fn(&UnitAxis) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(&n.axis)).sum()
    }
}
