//! Star product of symbols and two-point kernel transforms on a quadrature
//! grid.
//!
//! `(fA ⋆ fB)(x1) = ∫∫ fA(x3) fB(x2) K(x3, x2, x1) dx2 dx3`. The integrand
//! has degree at most `4j` on each sphere, so a quadrature that resolves the
//! spin integrates it exactly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Direction, KernelEvaluator, PairTable, ShiftSum, FULL_SHIFTS, NO_SHIFT};
use crate::error::{Error, Result};
use crate::quadrature::SphereQuadrature;
use crate::spin::Spin;
use crate::tomography::{PhasePoint, SymbolKind, SymbolTable};

fn check_inputs(fa: &SymbolTable, fb: &SymbolTable, spin: Spin, quad: &SphereQuadrature) -> Result<()> {
    fa.check_compatible(fb)?;
    fa.check_grid(quad)?;
    if fa.spin() != spin {
        return Err(Error::GridMismatch(format!(
            "symbols are spin {}, kernel is spin {}",
            fa.spin(),
            spin
        )));
    }
    quad.check_resolves(spin)
}

/// Kernel values at one fixed `x1` over every grid pair `(x3, x2)`, with the
/// quadrature weights folded in.
#[derive(Debug, Clone)]
pub struct KernelSlice {
    spin: Spin,
    orders: (usize, usize),
    /// `values[a3 * n + a2]`, `a = m_index * nodes + node`.
    values: Vec<Complex64>,
}

impl KernelSlice {
    pub fn new(kernel: &dyn KernelEvaluator, quad: &SphereQuadrature, x1: &PhasePoint) -> Result<Self> {
        let spin = kernel.spin();
        let i1 = spin.index_of(x1.m.twice()).ok_or(Error::ProjectionOutOfRange {
            twice_j: spin.twice(),
            twice_m: x1.m.twice(),
        })?;
        let d = spin.dim();
        let nodes = quad.nodes();
        let n = d * nodes.len();
        let rows: Vec<Vec<(usize, Complex64)>> = nodes
            .par_iter()
            .enumerate()
            .map(|(b3, node3)| {
                let mut block = vec![Complex64::default(); d * d * d];
                let mut row = Vec::with_capacity(d * d * nodes.len());
                for (b2, node2) in nodes.iter().enumerate() {
                    kernel.evaluate_block(&node3.axis, &node2.axis, &x1.axis, &mut block);
                    let w = node3.weight * node2.weight;
                    for i3 in 0..d {
                        for i2 in 0..d {
                            let a3 = i3 * nodes.len() + b3;
                            let a2 = i2 * nodes.len() + b2;
                            row.push((a3 * n + a2, block[(i3 * d + i2) * d + i1] * w));
                        }
                    }
                }
                row
            })
            .collect();
        let mut values = vec![Complex64::default(); n * n];
        for (idx, v) in rows.into_iter().flatten() {
            values[idx] = v;
        }
        Ok(KernelSlice {
            spin,
            orders: (quad.polar(), quad.azimuthal()),
            values,
        })
    }

    /// Weighted values, `values[a3 * n + a2]` with `a = m_index * nodes + node`.
    pub fn weighted_values(&self) -> &[Complex64] {
        &self.values
    }

    /// `self - other` for slices on the same grid.
    pub fn difference(&self, other: &KernelSlice) -> KernelSlice {
        assert_eq!(self.values.len(), other.values.len());
        KernelSlice {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }

    /// `∫∫ fA(x3) fB(x2) K(x3, x2, x1)` for the slice's `x1`.
    pub fn apply(&self, fa: &SymbolTable, fb: &SymbolTable) -> Result<Complex64> {
        fa.check_compatible(fb)?;
        if fa.spin() != self.spin || fa.orders() != self.orders {
            return Err(Error::GridMismatch("symbol table does not match kernel slice".into()));
        }
        let n = fa.values().len();
        let mut acc = Complex64::default();
        for (a3, va) in fa.values().iter().enumerate() {
            let row = &self.values[a3 * n..(a3 + 1) * n];
            let inner: Complex64 = row.iter().zip(fb.values()).map(|(k, vb)| k * vb).sum();
            acc += va * inner;
        }
        Ok(acc)
    }
}

/// `(fA ⋆ fB)(x1)` at a single point.
pub fn star_product_at(
    fa: &SymbolTable,
    fb: &SymbolTable,
    kernel: &dyn KernelEvaluator,
    quad: &SphereQuadrature,
    x1: &PhasePoint,
) -> Result<Complex64> {
    check_inputs(fa, fb, kernel.spin(), quad)?;
    KernelSlice::new(kernel, quad, x1)?.apply(fa, fb)
}

/// `fA ⋆ fB` on the whole grid.
pub fn star_product(
    fa: &SymbolTable,
    fb: &SymbolTable,
    kernel: &dyn KernelEvaluator,
    quad: &SphereQuadrature,
) -> Result<SymbolTable> {
    let spin = kernel.spin();
    check_inputs(fa, fb, spin, quad)?;
    let d = spin.dim();
    let nodes = quad.nodes();
    let nn = nodes.len();
    let per_node: Vec<Vec<Complex64>> = nodes
        .par_iter()
        .map(|node1| {
            let mut block = vec![Complex64::default(); d * d * d];
            let mut acc = vec![Complex64::default(); d];
            for (b3, node3) in nodes.iter().enumerate() {
                for (b2, node2) in nodes.iter().enumerate() {
                    kernel.evaluate_block(&node3.axis, &node2.axis, &node1.axis, &mut block);
                    let w = node3.weight * node2.weight;
                    for i3 in 0..d {
                        for i2 in 0..d {
                            let f = fa.value(i3, b3) * fb.value(i2, b2) * w;
                            let base = (i3 * d + i2) * d;
                            for (i1, a) in acc.iter_mut().enumerate() {
                                *a += f * block[base + i1];
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut values = vec![Complex64::default(); d * nn];
    for (b1, acc) in per_node.iter().enumerate() {
        for (i1, v) in acc.iter().enumerate() {
            values[i1 * nn + b1] = *v;
        }
    }
    let kind = match fa.kind() {
        SymbolKind::Dual => SymbolKind::Dual,
        _ => SymbolKind::Ordinary,
    };
    SymbolTable::from_values(spin, quad, kind, values)
}

/// Two-point kernels acting on a single symbol table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoPointKernel {
    /// `Tr(D(x2) U(x1))`, the identity on symbols.
    Delta,
    Intertwine(Direction),
}

impl TwoPointKernel {
    fn assembly(self, spin: Spin) -> ([ShiftSum<'static>; 2], f64, Option<SymbolKind>) {
        let d = spin.dim() as f64;
        match self {
            TwoPointKernel::Delta => ([FULL_SHIFTS, NO_SHIFT], d, None),
            TwoPointKernel::Intertwine(Direction::OrdinaryToDual) => {
                ([FULL_SHIFTS, FULL_SHIFTS], d * d, Some(SymbolKind::Dual))
            }
            TwoPointKernel::Intertwine(Direction::DualToOrdinary) => {
                ([NO_SHIFT, NO_SHIFT], 1.0, Some(SymbolKind::Ordinary))
            }
        }
    }
}

/// `g(x1) = ∫ f(x2) K(x2, x1) dx2` with the closed-form two-point kernel.
pub fn transform_two_point(f: &SymbolTable, kernel: TwoPointKernel, quad: &SphereQuadrature) -> Result<SymbolTable> {
    f.check_grid(quad)?;
    let spin = f.spin();
    quad.check_resolves(spin)?;
    let table = PairTable::new(spin);
    let (shifts, scale, kind) = kernel.assembly(spin);
    let d = spin.dim();
    let nodes = quad.nodes();
    let nn = nodes.len();
    let per_node: Vec<Vec<Complex64>> = nodes
        .par_iter()
        .map(|node1| {
            let mut acc = vec![Complex64::default(); d];
            for (b2, node2) in nodes.iter().enumerate() {
                let d12 = node1.axis.dot(&node2.axis);
                for i2 in 0..d {
                    let fv = f.value(i2, b2) * node2.weight;
                    for (i1, a) in acc.iter_mut().enumerate() {
                        let m = [spin.twice_m_at(i2), spin.twice_m_at(i1)];
                        *a += fv * table.sum(d12, m, shifts) * scale;
                    }
                }
            }
            acc
        })
        .collect();
    let mut values = vec![Complex64::default(); d * nn];
    for (b1, acc) in per_node.iter().enumerate() {
        for (i1, v) in acc.iter().enumerate() {
            values[i1 * nn + b1] = *v;
        }
    }
    Ok(f.with_values(kind.unwrap_or(f.kind()), values))
}
