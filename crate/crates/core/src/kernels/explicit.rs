//! Closed-form kernels assembled from the universal sums.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::universal::point_factor;
use super::{CompositionTable, KernelAxes, KernelEvaluator, KernelPoint, PairTable, ShiftSum, FULL_SHIFTS, NO_SHIFT};
use crate::geometry::UnitAxis;
use crate::spin::Spin;
use crate::tomography::PhasePoint;

/// Direction of an intertwining kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `f^d(x1) = ∫ f(x2) Tr(D(x2) D(x1)) dx2`.
    OrdinaryToDual,
    /// `f(x1) = ∫ f^d(x2) Tr(U(x2) U(x1)) dx2`.
    DualToOrdinary,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::OrdinaryToDual => "ordinary-to-dual",
            Direction::DualToOrdinary => "dual-to-ordinary",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ordinary-to-dual" | "o2d" => Ok(Direction::OrdinaryToDual),
            "dual-to-ordinary" | "d2o" => Ok(Direction::DualToOrdinary),
            other => Err(format!("unknown direction `{other}`")),
        }
    }
}

fn dim(spin: Spin) -> f64 {
    spin.dim() as f64
}

/// `K_j = (2j+1)² Σ_{s3,s2} T_j(s3, s2, s1 = 0)`.
pub fn kernel_explicit(spin: Spin, p: &KernelPoint) -> Complex64 {
    ExplicitKernel::new(spin).evaluate(p)
}

/// `K^d_j = (2j+1) Σ_{s1} T_j(s3 = 0, s2 = 0, s1)`.
pub fn dual_kernel(spin: Spin, p: &KernelPoint) -> Complex64 {
    ExplicitKernel::dual(spin).evaluate(p)
}

/// `K^δ_j = (2j+1) Σ_{s2} Q_j(s2, s1 = 0)`.
pub fn delta_kernel(spin: Spin, x2: &PhasePoint, x1: &PhasePoint) -> Complex64 {
    let d12 = x1.axis.dot(&x2.axis);
    PairTable::new(spin).sum(d12, [x2.m.twice(), x1.m.twice()], [FULL_SHIFTS, NO_SHIFT]) * dim(spin)
}

/// `(2j+1)² Σ_{s2,s1} Q_j` (ordinary to dual) or `Q_j(0, 0)` (dual to
/// ordinary).
pub fn intertwine_kernel(direction: Direction, spin: Spin, x2: &PhasePoint, x1: &PhasePoint) -> Complex64 {
    let d12 = x1.axis.dot(&x2.axis);
    let m = [x2.m.twice(), x1.m.twice()];
    let table = PairTable::new(spin);
    match direction {
        Direction::OrdinaryToDual => table.sum(d12, m, [FULL_SHIFTS, FULL_SHIFTS]) * dim(spin).powi(2),
        Direction::DualToOrdinary => table.sum(d12, m, [NO_SHIFT, NO_SHIFT]),
    }
}

/// Closed-form three-point kernel with a prebuilt composition table.
#[derive(Debug, Clone)]
pub struct ExplicitKernel {
    table: CompositionTable,
    shifts: [ShiftSum<'static>; 3],
    scale: f64,
    dual: bool,
}

impl ExplicitKernel {
    /// The star-product kernel `Tr(D D U)`.
    pub fn new(spin: Spin) -> Self {
        ExplicitKernel {
            table: CompositionTable::new(spin),
            shifts: [FULL_SHIFTS, FULL_SHIFTS, NO_SHIFT],
            scale: dim(spin).powi(2),
            dual: false,
        }
    }

    /// The dual star-product kernel `Tr(U U D)`.
    pub fn dual(spin: Spin) -> Self {
        ExplicitKernel {
            table: CompositionTable::new(spin),
            shifts: [NO_SHIFT, NO_SHIFT, FULL_SHIFTS],
            scale: dim(spin),
            dual: true,
        }
    }

    pub fn table(&self) -> &CompositionTable {
        &self.table
    }

    /// Value at an axes triple with precomputed weights; used when many
    /// projection triples share the same axes.
    pub fn evaluate_with_weights(&self, weights: &[Complex64], twice_m: [i32; 3]) -> Complex64 {
        self.table.sum(weights, twice_m, self.shifts) * self.scale
    }
}

impl KernelEvaluator for ExplicitKernel {
    fn spin(&self) -> Spin {
        self.table.spin()
    }

    fn name(&self) -> &'static str {
        if self.dual {
            "explicit-dual"
        } else {
            "explicit"
        }
    }

    fn evaluate(&self, p: &KernelPoint) -> Complex64 {
        let w = self.table.weights(&p.axes());
        self.evaluate_with_weights(&w, p.twice_m())
    }

    fn evaluate_block(&self, n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis, out: &mut [Complex64]) {
        let spin = self.spin();
        let tj = spin.twice() as i32;
        let d = spin.dim();
        let weights = self.table.weights(&KernelAxes::new(n3, n2, n1));
        out.iter_mut().for_each(|v| *v = Complex64::default());
        let mut f = [vec![0.0; d], vec![0.0; d], vec![0.0; d]];
        for (g, w) in self.table.groups().iter().zip(&weights) {
            for (pos, fp) in f.iter_mut().enumerate() {
                for (i, v) in fp.iter_mut().enumerate() {
                    *v = point_factor(tj, spin.twice_m_at(i), g.k, g.offsets[pos], self.shifts[pos]);
                }
            }
            for i3 in 0..d {
                if f[0][i3] == 0.0 {
                    continue;
                }
                for i2 in 0..d {
                    let a = f[0][i3] * f[1][i2];
                    if a == 0.0 {
                        continue;
                    }
                    let wa = w * (a * self.scale);
                    for i1 in 0..d {
                        out[(i3 * d + i2) * d + i1] += wa * f[2][i1];
                    }
                }
            }
        }
    }
}
