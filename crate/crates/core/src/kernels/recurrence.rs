//! Recurrence in the spin: `K_{j+1/2}` from `K_j` and `K_{j-1/2}` at the same
//! axes.
//!
//! ```text
//! K_{j+1/2}(m) = 2 ((2j+2)/(2j+1))² Σ_{m'} K_j(m') [bracket] - ((2j+2)/(2j))² K_{j-1/2}(m)
//! ```
//!
//! where `m'_i = m_i ± 1/2` and the bracket collects four groups: all three
//! raised; two raised with the pair sign; one raised with the pair factor
//! `1 + n_k·n_l`; and the complex factor `c` over all eight sign patterns.
//!
//! The lower kernels are needed at projections up to one step outside their
//! range, where they take their formal-extension values (only `U` vanishes).
//! With kernels forced to zero there the recurrence fails.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{ExplicitKernel, KernelAxes, KernelEvaluator, KernelPoint};
use crate::geometry::UnitAxis;
use crate::spin::Spin;

const SIGNS: [i32; 2] = [1, -1];

/// One recurrence step. `twice_j` is the spin of `k_j`; the result is the
/// spin `j + 1/2` kernel at doubled projections `twice_m` (order `x3, x2,
/// x1`). Requires `j ≥ 1/2`.
pub fn kernel_recurrence_step(
    twice_j: u32,
    axes: &KernelAxes,
    twice_m: [i32; 3],
    k_j: impl Fn([i32; 3]) -> Complex64,
    k_lower: impl Fn([i32; 3]) -> Complex64,
) -> Complex64 {
    assert!(twice_j >= 1, "the recurrence starts from spin 1/2");
    let at = |sh: [i32; 3]| k_j([twice_m[0] + sh[0], twice_m[1] + sh[1], twice_m[2] + sh[2]]);
    // Pair dots indexed by the position left out: (x2,x1), (x3,x1), (x3,x2).
    let pair_dot = [axes.d12, axes.d31, axes.d23];

    let mut bracket = at([1, 1, 1]);
    for h in 0..3 {
        let (k, l) = match h {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for nu in SIGNS {
            let mut sh = [0; 3];
            sh[k] = 1;
            sh[l] = 1;
            sh[h] = nu;
            let sign = if nu == 1 { -1.0 } else { 1.0 };
            bracket += at(sh) * (0.5 * sign);
        }
        for nk in SIGNS {
            for nl in SIGNS {
                let mut sh = [0; 3];
                sh[h] = 1;
                sh[k] = nk;
                sh[l] = nl;
                let sign = if ((2 + nk + nl) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                bracket += at(sh) * (0.25 * (1.0 + pair_dot[h]) * sign);
            }
        }
    }
    let c = axes.complex_factor() / 8.0;
    for v3 in SIGNS {
        for v2 in SIGNS {
            for v1 in SIGNS {
                let sign = if ((3 + v3 + v2 + v1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                bracket += at([v3, v2, v1]) * c * sign;
            }
        }
    }
    let j = f64::from(twice_j) / 2.0;
    let raise = 2.0 * ((2.0 * j + 2.0) / (2.0 * j + 1.0)).powi(2);
    let lower = ((2.0 * j + 2.0) / (2.0 * j)).powi(2);
    bracket * raise - k_lower(twice_m) * lower
}

/// Spin-zero kernel with formal extension: `c(m3) c(m2) δ_{m1,0}` with
/// `c(0) = 1`, `c(±1) = -1/2` and `c = 0` beyond.
fn scalar_kernel(twice_m: [i32; 3]) -> Complex64 {
    let c = |tm: i32| match tm {
        0 => 1.0,
        2 | -2 => -0.5,
        _ => 0.0,
    };
    let v = if twice_m[2] == 0 {
        c(twice_m[0]) * c(twice_m[1])
    } else {
        0.0
    };
    Complex64::new(v, 0.0)
}

/// Memoized chain from `K_0` and `K_{1/2}` upwards at one axes triple.
#[derive(Debug, Clone)]
pub struct RecurrenceChain {
    axes: KernelAxes,
    half: ExplicitKernel,
    half_weights: Vec<Complex64>,
    memo: HashMap<(u32, [i32; 3]), Complex64>,
}

impl RecurrenceChain {
    pub fn new(axes: KernelAxes) -> Self {
        let half = ExplicitKernel::new(Spin::HALF);
        let half_weights = half.table().weights(&axes);
        RecurrenceChain {
            axes,
            half,
            half_weights,
            memo: HashMap::new(),
        }
    }

    pub fn axes(&self) -> &KernelAxes {
        &self.axes
    }

    /// `K_j` at doubled projections `twice_m`, which may lie outside the spin
    /// range.
    pub fn kernel(&mut self, twice_j: u32, twice_m: [i32; 3]) -> Complex64 {
        match twice_j {
            0 => return scalar_kernel(twice_m),
            1 => return self.half.evaluate_with_weights(&self.half_weights, twice_m),
            _ => {}
        }
        if let Some(v) = self.memo.get(&(twice_j, twice_m)) {
            return *v;
        }
        let below = twice_j - 1;
        let two_below = twice_j - 2;
        let mut upper = HashMap::with_capacity(8);
        for v3 in SIGNS {
            for v2 in SIGNS {
                for v1 in SIGNS {
                    let m = [twice_m[0] + v3, twice_m[1] + v2, twice_m[2] + v1];
                    upper.insert(m, self.kernel(below, m));
                }
            }
        }
        let lower = self.kernel(two_below, twice_m);
        let v = kernel_recurrence_step(below, &self.axes, twice_m, |m| upper[&m], |_| lower);
        self.memo.insert((twice_j, twice_m), v);
        v
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// Kernel evaluated through the recurrence chain.
#[derive(Debug, Clone, Copy)]
pub struct RecurrenceKernel {
    spin: Spin,
}

impl RecurrenceKernel {
    pub fn new(spin: Spin) -> Self {
        RecurrenceKernel { spin }
    }
}

impl KernelEvaluator for RecurrenceKernel {
    fn spin(&self) -> Spin {
        self.spin
    }

    fn name(&self) -> &'static str {
        "recurrence"
    }

    fn evaluate(&self, p: &KernelPoint) -> Complex64 {
        RecurrenceChain::new(p.axes()).kernel(self.spin.twice(), p.twice_m())
    }

    fn evaluate_block(&self, n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis, out: &mut [Complex64]) {
        let mut chain = RecurrenceChain::new(KernelAxes::new(n3, n2, n1));
        let d = self.spin.dim();
        for (i, v) in out.iter_mut().enumerate() {
            let m = [i / (d * d), (i / d) % d, i % d].map(|x| self.spin.twice_m_at(x));
            *v = chain.kernel(self.spin.twice(), m);
        }
    }
}
