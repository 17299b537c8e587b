//! The kernel written through Clebsch-Gordan and Racah coefficients, its
//! residual with respect to the explicit kernel, and the sum-rule check that
//! the residual integrates to zero against every pair of symbols.
//!
//! The coupling-coefficient kernel is `Tr(D' D' U)` for the quantizer
//! `D'(m, n) = Σ_L (2L+1) (-1)^{j-m} <jm; j-m|L0> R(n) T^L_0 R(n)†`, with
//! `T^L_M[m, m'] = (-1)^{j-m'} <jm; j-m'|LM>`. It agrees with `Tr(D D U)`
//! pointwise at `j ≤ 1/2` only; above that the two differ by a residual that
//! vanishes under integration.
//!
//! ```text
//! K'_j = (-1)^{j-m1-m2-m3} Σ_{L1,L2,L3} sqrt((2L3+1)³ (2L2+1)³ (2L1+1))
//!        Π_i <j m_i; j -m_i|L_i 0>  {L2 L3 L1; j j j}
//!        Σ_M (L2 L3 L1; M2 M3 M1) Π_i D^{L_i}_{0,-M_i}(0, θ_i, -φ_i)
//! ```

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupling::{clebsch_gordan, wigner_3j, wigner_6j, wigner_d_element};
use crate::error::{Error, Result};
use crate::geometry::UnitAxis;
use crate::kernels::{ExplicitKernel, KernelEvaluator, KernelPoint, KernelSlice};
use crate::matrix::ComplexMatrix;
use crate::quadrature::SphereQuadrature;
use crate::spin::{Projection, Spin};
use crate::su2::rotation_operator;
use crate::tomography::{dequantizer, symbol_table, OperatorGrid, PhasePoint, SymbolTable};

struct Coupling {
    /// `(L1, L2, L3)`.
    l: [usize; 3],
    /// Weight times the 6j symbol.
    factor: f64,
    /// `(M1, M2, M3, 3j)` with non-zero 3j.
    terms: Vec<([i32; 3], f64)>,
}

/// Coefficient tables for one spin, built once and then read-only.
pub struct CgTables {
    spin: Spin,
    /// `cg[L][i] = <j m_i; j -m_i | L 0>`.
    cg: Vec<Vec<f64>>,
    couplings: Vec<Coupling>,
}

impl CgTables {
    fn build(spin: Spin) -> Self {
        let tj = spin.twice() as i32;
        let lmax = spin.twice() as usize;
        let cg = (0..=lmax)
            .map(|l| {
                spin.projections()
                    .map(|m| clebsch_gordan(tj, m.twice(), tj, -m.twice(), 2 * l as i32, 0))
                    .collect()
            })
            .collect();
        let mut couplings = Vec::new();
        for l1 in 0..=lmax {
            for l2 in 0..=lmax {
                for l3 in 0..=lmax {
                    let [t1, t2, t3] = [l1, l2, l3].map(|l| 2 * l as i32);
                    let six = wigner_6j([t2, t3, t1], [tj, tj, tj]);
                    if six == 0.0 {
                        continue;
                    }
                    let w = ((2 * l3 + 1).pow(3) * (2 * l2 + 1).pow(3) * (2 * l1 + 1)) as f64;
                    let mut terms = Vec::new();
                    for m1 in -(l1 as i32)..=l1 as i32 {
                        for m2 in -(l2 as i32)..=l2 as i32 {
                            let m3 = -m1 - m2;
                            if m3.unsigned_abs() as usize > l3 {
                                continue;
                            }
                            let v = wigner_3j([t2, t3, t1], [2 * m2, 2 * m3, 2 * m1]);
                            if v != 0.0 {
                                terms.push(([m1, m2, m3], v));
                            }
                        }
                    }
                    if !terms.is_empty() {
                        couplings.push(Coupling {
                            l: [l1, l2, l3],
                            factor: w.sqrt() * six,
                            terms,
                        });
                    }
                }
            }
        }
        CgTables { spin, cg, couplings }
    }

    /// Shared tables for `spin`.
    pub fn for_spin(spin: Spin) -> Arc<CgTables> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CgTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("table cache poisoned");
        guard
            .entry(spin.twice())
            .or_insert_with(|| Arc::new(CgTables::build(spin)))
            .clone()
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }
}

/// `d[L][M + L] = D^L_{0,-M}(0, θ, -φ)`.
fn wigner_row(lmax: usize, axis: &UnitAxis) -> Vec<Vec<Complex64>> {
    (0..=lmax)
        .map(|l| {
            (-(l as i32)..=l as i32)
                .map(|m| wigner_d_element(2 * l as u32, 0, -2 * m, 0.0, axis.theta(), -axis.phi()))
                .collect()
        })
        .collect()
}

fn sign(exp: i32) -> f64 {
    if exp.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The coupling-coefficient kernel.
pub struct CgKernel {
    tables: Arc<CgTables>,
}

impl CgKernel {
    pub fn new(spin: Spin) -> Self {
        CgKernel {
            tables: CgTables::for_spin(spin),
        }
    }

    fn with_rows(&self, rows: [&[Vec<Complex64>]; 3], twice_m: [i32; 3]) -> Complex64 {
        let spin = self.tables.spin;
        let (Some(i3), Some(i2), Some(i1)) = (
            spin.index_of(twice_m[0]),
            spin.index_of(twice_m[1]),
            spin.index_of(twice_m[2]),
        ) else {
            return Complex64::default();
        };
        let [r3, r2, r1] = rows;
        let mut acc = Complex64::default();
        for c in &self.tables.couplings {
            let [l1, l2, l3] = c.l;
            let g = self.tables.cg[l1][i1] * self.tables.cg[l2][i2] * self.tables.cg[l3][i3];
            if g == 0.0 {
                continue;
            }
            let mut inner = Complex64::default();
            for &([m1, m2, m3], v) in &c.terms {
                inner += r1[l1][(m1 + l1 as i32) as usize]
                    * r2[l2][(m2 + l2 as i32) as usize]
                    * r3[l3][(m3 + l3 as i32) as usize]
                    * v;
            }
            acc += inner * (c.factor * g);
        }
        let tj = spin.twice() as i32;
        acc * sign((tj - twice_m[0] - twice_m[1] - twice_m[2]) / 2)
    }
}

impl KernelEvaluator for CgKernel {
    fn spin(&self) -> Spin {
        self.tables.spin
    }

    fn name(&self) -> &'static str {
        "cg"
    }

    fn evaluate(&self, p: &KernelPoint) -> Complex64 {
        let lmax = self.tables.spin.twice() as usize;
        let rows = [&p.x3.axis, &p.x2.axis, &p.x1.axis].map(|a| wigner_row(lmax, a));
        self.with_rows([&rows[0], &rows[1], &rows[2]], p.twice_m())
    }

    fn evaluate_block(&self, n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis, out: &mut [Complex64]) {
        let spin = self.tables.spin;
        let lmax = spin.twice() as usize;
        let rows = [n3, n2, n1].map(|a| wigner_row(lmax, a));
        let d = spin.dim();
        for (i, v) in out.iter_mut().enumerate() {
            let m = [i / (d * d), (i / d) % d, i % d].map(|x| spin.twice_m_at(x));
            *v = self.with_rows([&rows[0], &rows[1], &rows[2]], m);
        }
    }
}

/// Coupling-coefficient kernel at one point.
pub fn kernel_cg(spin: Spin, p: &KernelPoint) -> Complex64 {
    CgKernel::new(spin).evaluate(p)
}

/// `T^L_M[m, m'] = (-1)^{j-m'} <jm; j-m'|LM>`.
pub fn tensor_operator(spin: Spin, twice_l: i32, twice_big_m: i32) -> ComplexMatrix {
    let tj = spin.twice() as i32;
    ComplexMatrix::from_fn(spin.dim(), |a, b| {
        let (m, mp) = (spin.twice_m_at(a), spin.twice_m_at(b));
        Complex64::new(
            sign((tj - mp) / 2) * clebsch_gordan(tj, m, tj, -mp, twice_l, twice_big_m),
            0.0,
        )
    })
}

/// Quantizer `D'(m, n)` of the coupling-coefficient kernel.
pub fn cg_quantizer(spin: Spin, x: &PhasePoint) -> ComplexMatrix {
    let tj = spin.twice() as i32;
    let tm = x.m.twice();
    let r = rotation_operator(spin, &x.axis);
    let mut t = ComplexMatrix::zeros(spin.dim());
    for l in 0..=tj {
        let c = f64::from(2 * l + 1) * sign((tj - tm) / 2) * clebsch_gordan(tj, tm, tj, -tm, 2 * l, 0);
        if c != 0.0 {
            t.add_scaled(Complex64::new(c, 0.0), &tensor_operator(spin, 2 * l, 0));
        }
    }
    &(&r * &t) * &r.adjoint()
}

/// `Tr(D'(x3) D'(x2) U(x1))`, an oracle for [`kernel_cg`] built from
/// matrices.
pub fn kernel_cg_trace(spin: Spin, p: &KernelPoint) -> Complex64 {
    let dd = &cg_quantizer(spin, &p.x3) * &cg_quantizer(spin, &p.x2);
    dd.trace_product(&dequantizer(spin, &p.x1))
}

/// Closed form of `kernel_explicit - kernel_cg` at `j = 1`.
///
/// Writing `a12 = n1·n2`, `a23 = n2·n3`, `a31 = n3·n1`, `t = n1·(n2×n3)`,
/// `q_i = 3m_i² - 2`, `P(x) = 3x² - 1` and
/// `S = 5 - 3(a12² + a23² + a31²) - 9t²`.
pub fn delta_j1(p: &KernelPoint) -> Complex64 {
    let a = p.axes();
    let (a12, a23, a31, t) = (a.d12, a.d23, a.d31, a.triple);
    let [m3, m2, m1] = p.twice_m().map(|tm| f64::from(tm) / 2.0);
    let q = |m: f64| 3.0 * m * m - 2.0;
    let big_p = |x: f64| 3.0 * x * x - 1.0;
    let (q1, q2, q3) = (q(m1), q(m2), q(m3));
    let s = 5.0 - 3.0 * (a12 * a12 + a23 * a23 + a31 * a31) - 9.0 * t * t;

    let re = big_p(a23) / 36.0
        + m1 * m2 / 8.0 * (3.0 * a23 * a31 - a12)
        + m1 * m3 / 8.0 * (3.0 * a12 * a23 - a31)
        + q1 / 144.0 * (s + 4.0 * big_p(a12) + 4.0 * big_p(a31))
        + (q2 + q3) / 36.0 * (5.0 * big_p(a23) + 2.0)
        + m1 * m2 * q3 / 4.0 * a12
        + m1 * q2 * m3 / 4.0 * a31
        + q2 * q3 / 36.0
        + q1 * q2 / 144.0 * (2.0 * big_p(a31) + 5.0 * s)
        + q1 * q3 / 144.0 * (2.0 * big_p(a12) + 5.0 * s)
        + 5.0 / 72.0 * q1 * q2 * q3 * (big_p(a12) + big_p(a31));
    let im = -m1 * a23 * t / 8.0 - 5.0 / 8.0 * m1 * (q2 + q3) * a23 * t - 3.0 / 8.0 * q1 * (m2 * a31 + m3 * a12) * t;
    Complex64::new(re, im)
}

/// `ΔD(m, n) = (3m² - 2)/6 · I + R(n) diag(1, -2, 1) R(n)† / 6` at `j = 1`.
pub fn quantizer_residual_j1(m: Projection, axis: &UnitAxis) -> ComplexMatrix {
    let mv = m.value();
    let r = rotation_operator(Spin::ONE, axis);
    let rotated = &(&r * &ComplexMatrix::real_diagonal(&[1.0, -2.0, 1.0])) * &r.adjoint();
    let mut out = ComplexMatrix::identity(3).scale_real((3.0 * mv * mv - 2.0) / 6.0);
    out.add_scaled(Complex64::new(1.0 / 6.0, 0.0), &rotated);
    out
}

/// Outcome of a sum-rule comparison between two kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub twice_j: u32,
    /// Largest `|K'' - K'|` over the sampled points.
    pub max_pointwise_gap: f64,
    /// Largest `|∫∫ fA fB (K'' - K')|` over all matrix-unit pairs and sampled
    /// `x1`.
    pub max_integrated_gap: f64,
    /// Number of sampled `x1`.
    pub samples: usize,
    /// Number of operator pairs integrated at each sample.
    pub pairs: usize,
}

/// Symbols of every matrix unit `|jm'><jm''|` on the grid.
pub fn matrix_unit_symbols(spin: Spin, quad: &SphereQuadrature) -> Result<Vec<SymbolTable>> {
    let grid = OperatorGrid::new(spin, quad);
    let d = spin.dim();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            out.push(symbol_table(&ComplexMatrix::unit(d, a, b), &grid, quad)?);
        }
    }
    Ok(out)
}

/// Compares `kernel_explicit` with `kernel_cg` at each `x1` in `samples`:
/// pointwise over every grid pair `(x3, x2)` and integrated against every
/// pair of matrix-unit symbols.
pub fn sum_rule_check(spin: Spin, quad: &SphereQuadrature, samples: &[PhasePoint]) -> Result<ResidualReport> {
    quad.check_resolves(spin)?;
    if samples.is_empty() {
        return Err(Error::Format("sum-rule check needs at least one sample".into()));
    }
    let explicit = ExplicitKernel::new(spin);
    let cg = CgKernel::new(spin);
    let units = matrix_unit_symbols(spin, quad)?;
    let nodes = quad.nodes();
    let d = spin.dim();
    let mut pointwise: f64 = 0.0;
    let mut integrated: f64 = 0.0;
    for x1 in samples {
        let a = KernelSlice::new(&explicit, quad, x1)?;
        let b = KernelSlice::new(&cg, quad, x1)?;
        let diff = a.difference(&b);
        let n = d * nodes.len();
        for (idx, v) in diff.weighted_values().iter().enumerate() {
            let (a3, a2) = (idx / n, idx % n);
            let w = nodes[a3 % nodes.len()].weight * nodes[a2 % nodes.len()].weight;
            pointwise = pointwise.max(v.norm() / w);
        }
        for fa in &units {
            for fb in &units {
                integrated = integrated.max(diff.apply(fa, fb)?.norm());
            }
        }
    }
    Ok(ResidualReport {
        twice_j: spin.twice(),
        max_pointwise_gap: pointwise,
        max_integrated_gap: integrated,
        samples: samples.len(),
        pairs: units.len() * units.len(),
    })
}

/// Whether `delta_j1` is unchanged by a rotation of all three axes.
pub fn delta_j1_rotation_gap(p: &KernelPoint, rot: &[[f64; 3]; 3]) -> f64 {
    let axes = [p.x3.axis, p.x2.axis, p.x1.axis].map(|a| a.rotated(rot));
    let q = KernelPoint::new(
        PhasePoint::new(p.x3.m, axes[0]),
        PhasePoint::new(p.x2.m, axes[1]),
        PhasePoint::new(p.x1.m, axes[2]),
    );
    (delta_j1(p) - delta_j1(&q)).norm()
}
