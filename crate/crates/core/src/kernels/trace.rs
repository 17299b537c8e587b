//! Kernels as operator traces. These are the ground truth for every closed
//! form.

use num_complex::Complex64;

use super::{Direction, KernelEvaluator, KernelPoint};
use crate::geometry::UnitAxis;
use crate::matrix::ComplexMatrix;
use crate::spin::Spin;
use crate::tomography::{dequantizer, quantizer, PhasePoint};

/// `Tr(D(x3) D(x2) U(x1))`.
pub fn kernel_trace(spin: Spin, p: &KernelPoint) -> Complex64 {
    let dd = &quantizer(spin, &p.x3) * &quantizer(spin, &p.x2);
    dd.trace_product(&dequantizer(spin, &p.x1))
}

/// `Tr(U(x3) U(x2) D(x1))`.
pub fn dual_kernel_trace(spin: Spin, p: &KernelPoint) -> Complex64 {
    let uu = &dequantizer(spin, &p.x3) * &dequantizer(spin, &p.x2);
    uu.trace_product(&quantizer(spin, &p.x1))
}

/// `Tr(D(x2) U(x1))`.
pub fn delta_kernel_trace(spin: Spin, x2: &PhasePoint, x1: &PhasePoint) -> Complex64 {
    quantizer(spin, x2).trace_product(&dequantizer(spin, x1))
}

/// `Tr(D(x2) D(x1))` for ordinary-to-dual, `Tr(U(x2) U(x1))` for
/// dual-to-ordinary.
pub fn intertwine_kernel_trace(direction: Direction, spin: Spin, x2: &PhasePoint, x1: &PhasePoint) -> Complex64 {
    match direction {
        Direction::OrdinaryToDual => quantizer(spin, x2).trace_product(&quantizer(spin, x1)),
        Direction::DualToOrdinary => dequantizer(spin, x2).trace_product(&dequantizer(spin, x1)),
    }
}

/// [`kernel_trace`] (or [`dual_kernel_trace`]) as an evaluator.
#[derive(Debug, Clone, Copy)]
pub struct TraceKernel {
    spin: Spin,
    dual: bool,
}

impl TraceKernel {
    pub fn new(spin: Spin) -> Self {
        TraceKernel { spin, dual: false }
    }

    pub fn dual(spin: Spin) -> Self {
        TraceKernel { spin, dual: true }
    }
}

fn operators_at(spin: Spin, axis: &UnitAxis, quantizers: bool) -> Vec<ComplexMatrix> {
    spin.projections()
        .map(|m| {
            let x = PhasePoint::new(m, *axis);
            if quantizers {
                quantizer(spin, &x)
            } else {
                dequantizer(spin, &x)
            }
        })
        .collect()
}

impl KernelEvaluator for TraceKernel {
    fn spin(&self) -> Spin {
        self.spin
    }

    fn name(&self) -> &'static str {
        if self.dual {
            "trace-dual"
        } else {
            "trace"
        }
    }

    fn evaluate(&self, p: &KernelPoint) -> Complex64 {
        if self.dual {
            dual_kernel_trace(self.spin, p)
        } else {
            kernel_trace(self.spin, p)
        }
    }

    fn evaluate_block(&self, n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis, out: &mut [Complex64]) {
        let d = self.spin.dim();
        let outer = !self.dual;
        let d3 = operators_at(self.spin, n3, outer);
        let d2 = operators_at(self.spin, n2, outer);
        let u1 = operators_at(self.spin, n1, self.dual);
        for (i3, a) in d3.iter().enumerate() {
            for (i2, b) in d2.iter().enumerate() {
                let ab = a * b;
                for (i1, u) in u1.iter().enumerate() {
                    out[(i3 * d + i2) * d + i1] = ab.trace_product(u);
                }
            }
        }
    }
}
