//! Seeded verification batteries. Every check records the measured gap next
//! to its bound, so a report shows how much margin each identity has.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::composition::{character, compose_axis_times_sin, compose_cos_half_angle, RotationTriple};
use crate::equivalence::{
    cg_quantizer, delta_j1, delta_j1_rotation_gap, kernel_cg, quantizer_residual_j1, sum_rule_check, ResidualReport,
};
use crate::error::{Error, Result};
use crate::geometry::dot;

use crate::kernels::{
    delta_kernel, delta_kernel_trace, dual_kernel, dual_kernel_trace, intertwine_kernel, intertwine_kernel_trace,
    kernel_explicit, kernel_fourier, kernel_trace, star_product, transform_two_point, Direction, ExplicitKernel,
    KernelEvaluator, KernelSlice, RecurrenceKernel, TwoPointKernel, DEFAULT_FOURIER_GRID,
};
use crate::matrix::ComplexMatrix;
use crate::quadrature::SphereQuadrature;
use crate::random::{
    random_axis, random_density_matrix, random_kernel_point, random_operator, random_phase_point, seeded, SeededRng,
};
use crate::spin::Spin;
use crate::su2::axis_exponential;
use crate::tomography::{
    average_via_dual, dequantizer, dual_symbol_table, phase_space_integrate, quantizer, reconstruct, symbol_table,
    tomogram, OperatorGrid, PhasePoint, SymbolKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Tomography,
    Kernels,
    Equivalence,
    Recurrence,
}

impl Suite {
    const PARTS: [Suite; 4] = [Suite::Tomography, Suite::Kernels, Suite::Equivalence, Suite::Recurrence];

    fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Tomography => "tomography",
            Suite::Kernels => "kernels",
            Suite::Equivalence => "equivalence",
            Suite::Recurrence => "recurrence",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::PARTS.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Self::PARTS)
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub spins: Vec<u32>,
    pub seed: u64,
    /// Random draws per check.
    pub samples: usize,
    /// Replaces every upper bound when set.
    pub tol_override: Option<f64>,
    /// Quadrature orders; the per-spin default when unset.
    pub quad_orders: Option<(usize, usize)>,
    /// Adds the 64³ Fourier brute-force check.
    pub slow: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            spins: vec![1, 2, 3],
            seed: 1,
            samples: 20,
            tol_override: None,
            quad_orders: None,
            slow: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Passes when `measured <= tolerance`.
    Max,
    /// Passes when `measured >= tolerance`.
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub twice_j: u32,
    pub measured: f64,
    pub bound: Bound,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub config: VerifyConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub residuals: Vec<ResidualReport>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Runner<'a> {
    config: &'a VerifyConfig,
    stream: u64,
    checks: Vec<Check>,
    residuals: Vec<ResidualReport>,
}

fn max_gap(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN must fail, so it wins over any finite gap.
    it.into_iter().fold(
        0.0,
        |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) },
    )
}

impl<'a> Runner<'a> {
    /// A fresh generator per check keeps each check's draws independent of
    /// which other checks ran.
    fn rng(&mut self) -> SeededRng {
        let mut r = seeded(self.config.seed);
        r.set_stream(self.stream);
        self.stream += 1;
        r
    }

    fn quad(&self, spin: Spin) -> Result<SphereQuadrature> {
        let q = match self.config.quad_orders {
            Some((l, m)) => SphereQuadrature::new(l, m)?,
            None => SphereQuadrature::for_spin(spin),
        };
        q.check_resolves(spin)?;
        Ok(q)
    }

    fn record(&mut self, suite: Suite, name: &str, spin: Spin, measured: f64, bound: Bound, tolerance: f64) {
        let tolerance = match (bound, self.config.tol_override) {
            (Bound::Max, Some(t)) => t,
            _ => tolerance,
        };
        let passed = match bound {
            Bound::Max => measured <= tolerance,
            Bound::Min => measured >= tolerance,
        };
        self.checks.push(Check {
            suite,
            name: name.to_owned(),
            twice_j: spin.twice(),
            measured,
            bound,
            tolerance,
            passed,
        });
    }

    fn upper(&mut self, suite: Suite, name: &str, spin: Spin, measured: f64, tolerance: f64) {
        self.record(suite, name, spin, measured, Bound::Max, tolerance);
    }

    fn tomography(&mut self, spin: Spin) -> Result<()> {
        const S: Suite = Suite::Tomography;
        let n = self.config.samples;
        let quad = self.quad(spin)?;
        let grid = OperatorGrid::new(spin, &quad);
        let d = spin.dim();

        let mut rng = self.rng();
        let gap = max_gap((0..n).map(|_| {
            let axis = random_axis(&mut rng);
            let mut sum = ComplexMatrix::zeros(d);
            for m in spin.projections() {
                sum += &dequantizer(spin, &PhasePoint::new(m, axis));
            }
            sum.max_abs_diff(&ComplexMatrix::identity(d))
        }));
        self.upper(S, "completeness", spin, gap, 1e-12);

        let mut rng = self.rng();
        let mut sum_m: f64 = 0.0;
        let mut sphere: f64 = 0.0;
        let mut negative: f64 = 0.0;
        let mut round_trip: f64 = 0.0;
        for _ in 0..n {
            let rho = random_density_matrix(spin, &mut rng);
            let w = tomogram(&rho, &quad)?;
            for b in 0..quad.len() {
                let s: f64 = (0..d).map(|i| w.value(i, b).re).sum();
                sum_m = max_gap([sum_m, (s - 1.0).abs()]);
            }
            for i in 0..d {
                let s: f64 = (0..quad.len()).map(|b| w.value(i, b).re * quad.nodes()[b].weight).sum();
                sphere = max_gap([sphere, (s * d as f64 - 1.0).abs()]);
            }
            negative = max_gap(w.values().iter().map(|v| -v.re).chain([negative]));
            round_trip = max_gap([round_trip, reconstruct(&w, &quad)?.matrix().max_abs_diff(rho.matrix())]);
        }
        self.upper(S, "normalization_sum_m", spin, sum_m, 1e-12);
        self.upper(S, "normalization_sphere", spin, sphere, 1e-12);
        self.upper(S, "nonnegativity", spin, negative, 1e-12);
        self.upper(S, "reconstruction", spin, round_trip, 1e-10);

        let mut rng = self.rng();
        let mut bi: f64 = 0.0;
        let mut avg: f64 = 0.0;
        for _ in 0..n {
            let a = random_operator(spin, &mut rng);
            let b = random_operator(spin, &mut rng);
            let fa = symbol_table(&a, &grid, &quad)?;
            let fb = dual_symbol_table(&b, &grid, &quad)?;
            let prod = fa.with_values(
                SymbolKind::Ordinary,
                fa.values().iter().zip(fb.values()).map(|(x, y)| x * y).collect(),
            );
            let lhs = phase_space_integrate(&prod, &quad)?;
            bi = max_gap([bi, (lhs - (&a * &b).trace()).norm()]);

            let rho = random_density_matrix(spin, &mut rng);
            let w = tomogram(&rho, &quad)?;
            let direct = rho.matrix().trace_product(&b);
            avg = max_gap([avg, (average_via_dual(&w, &fb, &quad)? - direct).norm()]);
        }
        self.upper(S, "biorthogonality", spin, bi, 1e-10);
        self.upper(S, "dual_average", spin, avg, 1e-10);
        Ok(())
    }

    fn kernels(&mut self, spin: Spin) -> Result<()> {
        const S: Suite = Suite::Kernels;
        let n = self.config.samples;
        let quad = self.quad(spin)?;
        let grid = OperatorGrid::new(spin, &quad);

        let mut rng = self.rng();
        let mut chi: f64 = 0.0;
        let mut pyth: f64 = 0.0;
        for _ in 0..n {
            let axes = [random_axis(&mut rng), random_axis(&mut rng), random_axis(&mut rng)];
            let angles: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.0..2.0 * std::f64::consts::TAU));
            let t = RotationTriple::new(axes, angles);
            let product = &(&axis_exponential(spin, &axes[2], angles[2])
                * &axis_exponential(spin, &axes[1], angles[1]))
                * &axis_exponential(spin, &axes[0], angles[0]);
            let c = compose_cos_half_angle(&t)?;
            chi = max_gap([chi, (product.trace() - Complex64::new(character(spin, c)?, 0.0)).norm()]);
            let s = compose_axis_times_sin(&t);
            pyth = max_gap([pyth, (c * c + dot(&s, &s) - 1.0).abs()]);
        }
        self.upper(S, "character_identity", spin, chi, 1e-11);
        self.upper(S, "composition_pythagoras", spin, pyth, 1e-12);

        let mut rng = self.rng();
        let points: Vec<_> = (0..n).map(|_| random_kernel_point(spin, &mut rng)).collect();
        let gap = |f: &dyn Fn(&crate::kernels::KernelPoint) -> f64| max_gap(points.iter().map(f));
        let explicit = gap(&|p| (kernel_explicit(spin, p) - kernel_trace(spin, p)).norm());
        let dual = gap(&|p| (dual_kernel(spin, p) - dual_kernel_trace(spin, p)).norm());
        let delta = gap(&|p| (delta_kernel(spin, &p.x2, &p.x1) - delta_kernel_trace(spin, &p.x2, &p.x1)).norm());
        let inter = gap(&|p| {
            [Direction::OrdinaryToDual, Direction::DualToOrdinary]
                .iter()
                .map(|&dir| {
                    (intertwine_kernel(dir, spin, &p.x2, &p.x1) - intertwine_kernel_trace(dir, spin, &p.x2, &p.x1))
                        .norm()
                })
                .fold(0.0, f64::max)
        });
        let swap = gap(&|p| (kernel_trace(spin, p).conj() - kernel_trace(spin, &p.swapped())).norm());
        self.upper(S, "explicit_vs_trace", spin, explicit, 1e-9);
        self.upper(S, "dual_vs_trace", spin, dual, 1e-9);
        self.upper(S, "delta_vs_trace", spin, delta, 1e-9);
        self.upper(S, "intertwine_vs_trace", spin, inter, 1e-9);
        self.upper(S, "hermitian_swap", spin, swap, 1e-12);

        let mut rng = self.rng();
        let mut reproduce: f64 = 0.0;
        let mut round_trip: f64 = 0.0;
        for _ in 0..n {
            let w = tomogram(&random_density_matrix(spin, &mut rng), &quad)?;
            reproduce = max_gap([
                reproduce,
                transform_two_point(&w, TwoPointKernel::Delta, &quad)?.max_abs_diff(&w),
            ]);
            let f = symbol_table(&random_operator(spin, &mut rng), &grid, &quad)?;
            let fd = transform_two_point(&f, TwoPointKernel::Intertwine(Direction::OrdinaryToDual), &quad)?;
            let back = transform_two_point(&fd, TwoPointKernel::Intertwine(Direction::DualToOrdinary), &quad)?;
            round_trip = max_gap([round_trip, back.max_abs_diff(&f)]);
        }
        self.upper(S, "delta_reproducing", spin, reproduce, 1e-9);
        self.upper(S, "intertwine_round_trip", spin, round_trip, 1e-9);

        let mut rng = self.rng();
        let kernel = ExplicitKernel::new(spin);
        let ops: Vec<(ComplexMatrix, ComplexMatrix)> = (0..n)
            .map(|_| (random_operator(spin, &mut rng), random_operator(spin, &mut rng)))
            .collect();
        let symbols = ops
            .iter()
            .map(|(a, b)| Ok((symbol_table(a, &grid, &quad)?, symbol_table(b, &grid, &quad)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut star: f64 = 0.0;
        for _ in 0..n {
            let x1 = random_phase_point(spin, &mut rng);
            let slice = KernelSlice::new(&kernel, &quad, &x1)?;
            let u = dequantizer(spin, &x1);
            for ((a, b), (fa, fb)) in ops.iter().zip(&symbols) {
                let direct = (a * b).trace_product(&u);
                star = max_gap([star, (slice.apply(fa, fb)? - direct).norm()]);
            }
        }
        self.upper(S, "star_product", spin, star, 1e-9);

        let [a, b, c] = [0, 1, 2].map(|_| random_operator(spin, &mut rng));
        let [fa, fb, fc] = [&a, &b, &c].map(|m| symbol_table(m, &grid, &quad));
        let (fa, fb, fc) = (fa?, fb?, fc?);
        let left = star_product(&star_product(&fa, &fb, &kernel, &quad)?, &fc, &kernel, &quad)?;
        let right = star_product(&fa, &star_product(&fb, &fc, &kernel, &quad)?, &kernel, &quad)?;
        let direct = symbol_table(&(&(&a * &b) * &c), &grid, &quad)?;
        self.upper(
            S,
            "associativity",
            spin,
            left.max_abs_diff(&right).max(left.max_abs_diff(&direct)),
            1e-8,
        );

        if self.config.slow && spin.twice() <= 2 {
            let mut rng = self.rng();
            let mut fourier: f64 = 0.0;
            for _ in 0..n {
                let p = random_kernel_point(spin, &mut rng);
                fourier = max_gap([
                    fourier,
                    (kernel_fourier(spin, &p, DEFAULT_FOURIER_GRID)? - kernel_explicit(spin, &p)).norm(),
                ]);
            }
            self.upper(S, "fourier_brute_force", spin, fourier, 2e-3);
        }
        Ok(())
    }

    fn equivalence(&mut self, spin: Spin) -> Result<()> {
        const S: Suite = Suite::Equivalence;
        let n = self.config.samples;
        let quad = self.quad(spin)?;
        let tj = spin.twice();

        let mut rng = self.rng();
        let points: Vec<_> = (0..n).map(|_| random_kernel_point(spin, &mut rng)).collect();
        if tj == 1 {
            let gap = max_gap(
                points
                    .iter()
                    .map(|p| (kernel_cg(spin, p) - kernel_explicit(spin, p)).norm()),
            );
            self.upper(S, "cg_vs_explicit", spin, gap, 1e-10);
            let xs: Vec<_> = (0..n).map(|_| random_phase_point(spin, &mut rng)).collect();
            let gap = max_gap(
                xs.iter()
                    .map(|x| quantizer(spin, x).max_abs_diff(&cg_quantizer(spin, x))),
            );
            self.upper(S, "quantizer_residual_vanishes", spin, gap, 1e-12);
        }
        if tj == 2 {
            let gap = max_gap(
                points
                    .iter()
                    .map(|p| (kernel_explicit(spin, p) - kernel_cg(spin, p) - delta_j1(p)).norm()),
            );
            self.upper(S, "delta_j1_closed_form", spin, gap, 1e-9);

            let mut identity: f64 = 0.0;
            let mut integral: f64 = 0.0;
            for _ in 0..n {
                let x = random_phase_point(spin, &mut rng);
                let diff = &quantizer(spin, &x) - &cg_quantizer(spin, &x);
                identity = max_gap([identity, diff.max_abs_diff(&quantizer_residual_j1(x.m, &x.axis))]);
                let w = tomogram(&random_density_matrix(spin, &mut rng), &quad)?;
                let mut acc = ComplexMatrix::zeros(3);
                let nodes = quad.nodes();
                for (i, m) in spin.projections().enumerate() {
                    for (b, node) in nodes.iter().enumerate() {
                        acc.add_scaled(w.value(i, b) * node.weight, &quantizer_residual_j1(m, &node.axis));
                    }
                }
                integral = max_gap([integral, acc.max_abs()]);
            }
            self.upper(S, "quantizer_residual_identity", spin, identity, 1e-12);
            self.upper(S, "quantizer_residual_integral", spin, integral, 1e-10);

            let mut rot_gap: f64 = 0.0;
            for p in &points {
                let rot = random_rotation(&mut rng);
                rot_gap = max_gap([rot_gap, delta_j1_rotation_gap(p, &rot)]);
            }
            self.upper(S, "delta_j1_rotation_invariance", spin, rot_gap, 1e-12);
        }
        if tj >= 1 {
            let xs: Vec<_> = (0..n.min(5)).map(|_| random_phase_point(spin, &mut rng)).collect();
            let report = sum_rule_check(spin, &quad, &xs)?;
            let integrated_tol = if tj <= 2 { 1e-9 } else { 1e-8 };
            self.upper(
                S,
                "sum_rule_integrated",
                spin,
                report.max_integrated_gap,
                integrated_tol,
            );
            if tj == 1 {
                self.upper(S, "sum_rule_pointwise", spin, report.max_pointwise_gap, 1e-10);
            } else {
                self.record(
                    S,
                    "sum_rule_pointwise_nonzero",
                    spin,
                    report.max_pointwise_gap,
                    Bound::Min,
                    1e-2,
                );
            }
            self.residuals.push(report);
        }
        Ok(())
    }

    fn recurrence(&mut self, spin: Spin) -> Result<()> {
        if spin.twice() < 2 {
            return Ok(());
        }
        let mut rng = self.rng();
        let k = RecurrenceKernel::new(spin);
        let gap = max_gap(
            (0..self.config.samples)
                .map(|_| random_kernel_point(spin, &mut rng))
                .map(|p| (k.evaluate(&p) - kernel_trace(spin, &p)).norm()),
        );
        let tol = if spin.twice() <= 3 { 1e-8 } else { 1e-7 };
        self.upper(Suite::Recurrence, "recurrence_vs_trace", spin, gap, tol);
        Ok(())
    }
}

/// Uniform random rotation matrix from a random unit quaternion.
pub fn random_rotation<R: Rng>(rng: &mut R) -> [[f64; 3]; 3] {
    let axis = random_axis(rng);
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let [x, y, z] = *axis.cartesian();
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

fn validate(config: &VerifyConfig) -> Result<()> {
    if config.spins.is_empty() {
        return Err(Error::Format("no spins selected".into()));
    }
    if config.samples == 0 {
        return Err(Error::Format("samples must be positive".into()));
    }
    if let Some(t) = config.tol_override {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Format(format!("tolerance {t} must be finite and non-negative")));
        }
    }
    if let Some((l, m)) = config.quad_orders {
        SphereQuadrature::new(l, m)?;
    }
    Ok(())
}

/// Runs `suite` for every spin in the config. Errors are configuration
/// problems; failed identities show up as failed checks.
pub fn run(suite: Suite, config: &VerifyConfig) -> Result<VerifyReport> {
    validate(config)?;
    let mut r = Runner {
        config,
        stream: 0,
        checks: Vec::new(),
        residuals: Vec::new(),
    };
    for part in suite.parts() {
        for &tj in &config.spins {
            let spin = Spin::from_twice(tj);
            match part {
                Suite::Tomography => r.tomography(spin)?,
                Suite::Kernels => r.kernels(spin)?,
                Suite::Equivalence => r.equivalence(spin)?,
                Suite::Recurrence => r.recurrence(spin)?,
                Suite::All => unreachable!("expanded by parts()"),
            }
        }
    }
    let passed = r.checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        suite,
        config: config.clone(),
        passed,
        checks: r.checks,
        residuals: r.residuals,
    })
}
