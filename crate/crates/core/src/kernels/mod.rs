//! Star-product kernels.
//!
//! Every kernel is a function of phase-space points ordered `(x3, x2, x1)`,
//! where `x1` carries the dequantizer: `K(x3, x2, x1) = Tr(D(x3) D(x2) U(x1))`.
//! Two-point kernels take `(x2, x1)`.
//!
//! Kernels are evaluated at projections outside `[-j, j]` by the formal
//! extension of the operator content: `D(m)` keeps its projector-sum form for
//! every `m` and `U(m)` vanishes. This is what the spin recurrence needs.

mod explicit;
mod fourier;
mod recurrence;
mod star;
mod trace;
mod universal;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{dot, triple, UnitAxis, Vec3};
use crate::spin::Spin;
use crate::tomography::PhasePoint;

pub use explicit::{delta_kernel, dual_kernel, intertwine_kernel, kernel_explicit, Direction, ExplicitKernel};
pub use fourier::{kernel_fourier, FourierKernel, DEFAULT_FOURIER_GRID};
pub use recurrence::{kernel_recurrence_step, RecurrenceChain, RecurrenceKernel};
pub use star::{star_product, star_product_at, transform_two_point, KernelSlice, TwoPointKernel};
pub use trace::{delta_kernel_trace, dual_kernel_trace, intertwine_kernel_trace, kernel_trace, TraceKernel};
pub use universal::{
    universal_q, universal_q_via_t, universal_t, CompositionTable, PairTable, ShiftSum, FULL_SHIFTS, NO_SHIFT,
};

/// The three points of a three-point kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub x3: PhasePoint,
    pub x2: PhasePoint,
    pub x1: PhasePoint,
}

impl KernelPoint {
    pub fn new(x3: PhasePoint, x2: PhasePoint, x1: PhasePoint) -> Self {
        KernelPoint { x3, x2, x1 }
    }

    /// Doubled projections `(2m3, 2m2, 2m1)`.
    pub fn twice_m(&self) -> [i32; 3] {
        [self.x3.m.twice(), self.x2.m.twice(), self.x1.m.twice()]
    }

    pub fn axes(&self) -> KernelAxes {
        KernelAxes::new(&self.x3.axis, &self.x2.axis, &self.x1.axis)
    }

    pub fn with_twice_m(&self, twice_m: [i32; 3]) -> KernelPoint {
        KernelPoint {
            x3: PhasePoint::from_twice(twice_m[0], self.x3.axis),
            x2: PhasePoint::from_twice(twice_m[1], self.x2.axis),
            x1: PhasePoint::from_twice(twice_m[2], self.x1.axis),
        }
    }

    /// `(x2, x3, x1)`.
    pub fn swapped(&self) -> KernelPoint {
        KernelPoint::new(self.x2, self.x3, self.x1)
    }
}

/// Rotation invariants of an axes triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAxes {
    pub n3: UnitAxis,
    pub n2: UnitAxis,
    pub n1: UnitAxis,
    /// `n1·n2`
    pub d12: f64,
    /// `n2·n3`
    pub d23: f64,
    /// `n3·n1`
    pub d31: f64,
    /// `n1·(n2×n3)`
    pub triple: f64,
}

impl KernelAxes {
    pub fn new(n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis) -> Self {
        let (c3, c2, c1): (&Vec3, &Vec3, &Vec3) = (n3.cartesian(), n2.cartesian(), n1.cartesian());
        KernelAxes {
            n3: *n3,
            n2: *n2,
            n1: *n1,
            d12: dot(c1, c2),
            d23: dot(c2, c3),
            d31: dot(c3, c1),
            triple: triple(c1, c2, c3),
        }
    }

    /// `1 + n1·n2 + n2·n3 + n3·n1 - i n1·(n2×n3)`.
    pub fn complex_factor(&self) -> Complex64 {
        Complex64::new(1.0 + self.d12 + self.d23 + self.d31, -self.triple)
    }
}

/// A three-point kernel usable by [`star_product`] and the verification
/// batteries.
pub trait KernelEvaluator: Sync {
    fn spin(&self) -> Spin;

    fn name(&self) -> &'static str;

    fn evaluate(&self, p: &KernelPoint) -> Complex64;

    /// Values at every projection triple of one axes triple, laid out as
    /// `out[(i3 * d + i2) * d + i1]` with descending-`m` indices.
    fn evaluate_block(&self, n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis, out: &mut [Complex64]) {
        let spin = self.spin();
        let d = spin.dim();
        for i3 in 0..d {
            for i2 in 0..d {
                for i1 in 0..d {
                    let p = KernelPoint::new(
                        PhasePoint::from_twice(spin.twice_m_at(i3), *n3),
                        PhasePoint::from_twice(spin.twice_m_at(i2), *n2),
                        PhasePoint::from_twice(spin.twice_m_at(i1), *n1),
                    );
                    out[(i3 * d + i2) * d + i1] = self.evaluate(&p);
                }
            }
        }
    }
}

/// Generalized binomial `r (r-1) ... (r-q+1) / q!`; 0 for `q < 0`, 1 for
/// `q = 0`.
pub fn binomial_real(r: f64, q: i64) -> f64 {
    if q < 0 {
        return 0.0;
    }
    let mut v = 1.0;
    for i in 0..q {
        v *= (r - i as f64) / (i + 1) as f64;
    }
    v
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

fn neumaier(sum: &mut f64, carry: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *carry += (*sum - t) + x;
    } else {
        *carry += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        neumaier(&mut self.sum.re, &mut self.carry.re, x.re);
        neumaier(&mut self.sum.im, &mut self.carry.im, x.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}
