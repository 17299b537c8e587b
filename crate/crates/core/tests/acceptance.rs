//! Acceptance criteria, one line each. Runs as a plain binary so the summary
//! lines always reach the test log; exits non-zero if any criterion fails.

use std::process::ExitCode;

use spintomo::composition::{character, compose_axis_times_sin, compose_cos_half_angle, RotationTriple};
use spintomo::equivalence::{cg_quantizer, delta_j1, kernel_cg, quantizer_residual_j1, sum_rule_check};
use spintomo::figures::{default_figure, FigureId, FigureSpec};
use spintomo::kernels::{
    delta_kernel_trace, dual_kernel, dual_kernel_trace, kernel_explicit, kernel_fourier, kernel_recurrence_step,
    kernel_trace, star_product, transform_two_point, Direction, ExplicitKernel, KernelEvaluator, KernelPoint,
    KernelSlice, RecurrenceKernel, TwoPointKernel, DEFAULT_FOURIER_GRID,
};
use spintomo::random::{
    random_axis, random_density_matrix, random_kernel_point, random_operator, random_phase_point, seeded,
};
use spintomo::su2::axis_exponential;
use spintomo::tomography::{
    average_via_dual, dequantizer, dual_symbol_table, quantizer, reconstruct, symbol_table, tomogram, OperatorGrid,
};
use spintomo::{Complex64, ComplexMatrix, PhasePoint, SphereQuadrature, Spin, UnitAxis};

/// One measured gap against its bound.
struct Gap {
    label: String,
    value: f64,
    tol: f64,
}

impl Gap {
    fn ok(&self) -> bool {
        self.value <= self.tol
    }
}

fn gap(label: impl Into<String>, value: f64, tol: f64) -> Gap {
    Gap {
        label: label.into(),
        value,
        tol,
    }
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(
        0.0,
        |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) },
    )
}

fn spin_label(tj: u32) -> String {
    Spin::from_twice(tj).to_string()
}

fn explicit_vs_trace() -> Vec<Gap> {
    let mut rng = seeded(101);
    (1..=4)
        .map(|tj| {
            let spin = Spin::from_twice(tj);
            let g = max((0..200).map(|_| {
                let p = random_kernel_point(spin, &mut rng);
                (kernel_explicit(spin, &p) - kernel_trace(spin, &p)).norm()
            }));
            gap(format!("j={}", spin_label(tj)), g, 1e-9)
        })
        .collect()
}

fn star_product_correctness() -> Vec<Gap> {
    let mut rng = seeded(102);
    let mut out = Vec::new();
    for tj in 0..=3 {
        let spin = Spin::from_twice(tj);
        let quad = SphereQuadrature::for_spin(spin);
        let grid = OperatorGrid::new(spin, &quad);
        let kernel = ExplicitKernel::new(spin);
        let ops: Vec<_> = (0..20)
            .map(|_| (random_operator(spin, &mut rng), random_operator(spin, &mut rng)))
            .collect();
        let syms: Vec<_> = ops
            .iter()
            .map(|(a, b)| {
                (
                    symbol_table(a, &grid, &quad).unwrap(),
                    symbol_table(b, &grid, &quad).unwrap(),
                )
            })
            .collect();
        let mut pointwise: f64 = 0.0;
        for _ in 0..20 {
            let x1 = random_phase_point(spin, &mut rng);
            let slice = KernelSlice::new(&kernel, &quad, &x1).unwrap();
            let u = dequantizer(spin, &x1);
            for ((a, b), (fa, fb)) in ops.iter().zip(&syms) {
                let v = slice.apply(fa, fb).unwrap();
                pointwise = max([pointwise, (v - (a * b).trace_product(&u)).norm()]);
            }
        }
        out.push(gap(format!("product j={}", spin_label(tj)), pointwise, 1e-9));

        let mut assoc: f64 = 0.0;
        for _ in 0..2 {
            let [a, b, c] = [0, 1, 2].map(|_| random_operator(spin, &mut rng));
            let [fa, fb, fc] = [&a, &b, &c].map(|m| symbol_table(m, &grid, &quad).unwrap());
            let ab = star_product(&fa, &fb, &kernel, &quad).unwrap();
            let bc = star_product(&fb, &fc, &kernel, &quad).unwrap();
            let left = star_product(&ab, &fc, &kernel, &quad).unwrap();
            let right = star_product(&fa, &bc, &kernel, &quad).unwrap();
            assoc = max([assoc, left.max_abs_diff(&right)]);
        }
        out.push(gap(format!("associativity j={}", spin_label(tj)), assoc, 1e-8));
    }
    out
}

fn delta_reproducing() -> Vec<Gap> {
    let mut rng = seeded(103);
    (0..=4)
        .map(|tj| {
            let spin = Spin::from_twice(tj);
            let quad = SphereQuadrature::for_spin(spin);
            let g = max((0..20).map(|_| {
                let w = tomogram(&random_density_matrix(spin, &mut rng), &quad).unwrap();
                transform_two_point(&w, TwoPointKernel::Delta, &quad)
                    .unwrap()
                    .max_abs_diff(&w)
            }));
            gap(format!("j={}", spin_label(tj)), g, 1e-9)
        })
        .collect()
}

fn reconstruction() -> Vec<Gap> {
    let mut rng = seeded(104);
    let mut out = Vec::new();
    for tj in 0..=4 {
        let spin = Spin::from_twice(tj);
        let d = spin.dim();
        let quad = SphereQuadrature::for_spin(spin);
        let (mut rt, mut sum_m, mut sphere) = (0.0_f64, 0.0_f64, 0.0_f64);
        for _ in 0..50 {
            let rho = random_density_matrix(spin, &mut rng);
            let w = tomogram(&rho, &quad).unwrap();
            rt = max([rt, reconstruct(&w, &quad).unwrap().matrix().max_abs_diff(rho.matrix())]);
            for b in 0..quad.len() {
                let s: f64 = (0..d).map(|i| w.value(i, b).re).sum();
                sum_m = max([sum_m, (s - 1.0).abs()]);
            }
            for i in 0..d {
                let s: f64 = quad
                    .nodes()
                    .iter()
                    .enumerate()
                    .map(|(b, n)| w.value(i, b).re * n.weight)
                    .sum();
                sphere = max([sphere, (s * d as f64 - 1.0).abs()]);
            }
        }
        let j = spin_label(tj);
        out.push(gap(format!("round trip j={j}"), rt, 1e-10));
        out.push(gap(format!("sum over m j={j}"), sum_m, 1e-12));
        out.push(gap(format!("sphere average j={j}"), sphere, 1e-12));
    }
    out
}

fn equivalence() -> Vec<Gap> {
    let mut rng = seeded(105);
    let half = max((0..200).map(|_| {
        let p = random_kernel_point(Spin::HALF, &mut rng);
        (kernel_explicit(Spin::HALF, &p) - kernel_cg(Spin::HALF, &p)).norm()
    }));
    let one = max((0..200).map(|_| {
        let p = random_kernel_point(Spin::ONE, &mut rng);
        (kernel_explicit(Spin::ONE, &p) - kernel_cg(Spin::ONE, &p) - delta_j1(&p)).norm()
    }));
    let samples = |spin: Spin, n: usize, rng: &mut _| -> Vec<PhasePoint> {
        (0..n).map(|_| random_phase_point(spin, rng)).collect()
    };
    let xs1 = samples(Spin::ONE, 10, &mut rng);
    let r1 = sum_rule_check(Spin::ONE, &SphereQuadrature::for_spin(Spin::ONE), &xs1).unwrap();
    let s32 = Spin::from_twice(3);
    let xs3 = samples(s32, 5, &mut rng);
    let r3 = sum_rule_check(s32, &SphereQuadrature::for_spin(s32), &xs3).unwrap();
    vec![
        gap("j=1/2 pointwise", half, 1e-10),
        gap("j=1 pointwise minus closed-form residual", one, 1e-9),
        gap("j=1 integrated", r1.max_integrated_gap, 1e-9),
        gap("j=3/2 integrated", r3.max_integrated_gap, 1e-8),
    ]
}

fn quantizer_residual() -> Vec<Gap> {
    let mut rng = seeded(106);
    let spin = Spin::ONE;
    let quad = SphereQuadrature::for_spin(spin);
    let integral = max((0..20).map(|_| {
        let w = tomogram(&random_density_matrix(spin, &mut rng), &quad).unwrap();
        let mut acc = ComplexMatrix::zeros(3);
        for (i, m) in spin.projections().enumerate() {
            for (b, node) in quad.nodes().iter().enumerate() {
                acc.add_scaled(w.value(i, b) * node.weight, &quantizer_residual_j1(m, &node.axis));
            }
        }
        acc.max_abs()
    }));
    let half_quantizer = max((0..50).map(|_| {
        let x = random_phase_point(Spin::HALF, &mut rng);
        quantizer(Spin::HALF, &x).max_abs_diff(&cg_quantizer(Spin::HALF, &x))
    }));
    let half_kernel = max((0..50).map(|_| {
        let p = random_kernel_point(Spin::HALF, &mut rng);
        (kernel_trace(Spin::HALF, &p) - kernel_cg(Spin::HALF, &p)).norm()
    }));
    vec![
        gap("j=1 integral against tomograms", integral, 1e-10),
        gap("j=1/2 quantizer residual", half_quantizer, 1e-12),
        gap("j=1/2 kernel residual", half_kernel, 1e-12),
    ]
}

fn at(axes: &KernelPoint, twice_m: [i32; 3]) -> KernelPoint {
    axes.with_twice_m(twice_m)
}

fn recurrence() -> Vec<Gap> {
    let mut rng = seeded(107);
    let one = max((0..50).map(|_| {
        let p = random_kernel_point(Spin::ONE, &mut rng);
        (RecurrenceKernel::new(Spin::ONE).evaluate(&p) - kernel_trace(Spin::ONE, &p)).norm()
    }));
    let s32 = Spin::from_twice(3);
    let k1 = ExplicitKernel::new(Spin::ONE);
    let kh = ExplicitKernel::new(Spin::HALF);
    let three_halves = max((0..50).map(|_| {
        let p = random_kernel_point(s32, &mut rng);
        let v = kernel_recurrence_step(
            2,
            &p.axes(),
            p.twice_m(),
            |m| k1.evaluate(&at(&p, m)),
            |m| kh.evaluate(&at(&p, m)),
        );
        (v - kernel_trace(s32, &p)).norm()
    }));
    let s2 = Spin::from_twice(4);
    let chain = max((0..50).map(|_| {
        let p = random_kernel_point(s2, &mut rng);
        (RecurrenceKernel::new(s2).evaluate(&p) - kernel_trace(s2, &p)).norm()
    }));
    vec![
        gap("K_1 from K_1/2, K_0", one, 1e-8),
        gap("K_3/2 from K_1, K_1/2", three_halves, 1e-8),
        gap("chain to K_2", chain, 1e-7),
    ]
}

fn character_identity() -> Vec<Gap> {
    let mut rng = seeded(108);
    let mut out = Vec::new();
    for tj in 0..=4 {
        let spin = Spin::from_twice(tj);
        let (mut chi, mut pyth) = (0.0_f64, 0.0_f64);
        for _ in 0..100 {
            let axes = [random_axis(&mut rng), random_axis(&mut rng), random_axis(&mut rng)];
            let angles: [f64; 3] =
                std::array::from_fn(|_| rand::Rng::gen_range(&mut rng, 0.0..4.0 * std::f64::consts::PI));
            let t = RotationTriple::new(axes, angles);
            let product = &(&axis_exponential(spin, &axes[2], angles[2])
                * &axis_exponential(spin, &axes[1], angles[1]))
                * &axis_exponential(spin, &axes[0], angles[0]);
            let c = compose_cos_half_angle(&t).unwrap();
            let expected = Complex64::new(character(spin, c).unwrap(), 0.0);
            chi = max([chi, (product.trace() - expected).norm()]);
            let s = compose_axis_times_sin(&t);
            pyth = max([pyth, (c * c + s.iter().map(|v| v * v).sum::<f64>() - 1.0).abs()]);
        }
        let j = spin_label(tj);
        out.push(gap(format!("trace vs U_2j j={j}"), chi, 1e-11));
        out.push(gap(format!("pythagoras j={j}"), pyth, 1e-12));
    }
    out
}

fn dual_machinery() -> Vec<Gap> {
    let mut rng = seeded(109);
    let mut out = Vec::new();
    for tj in 1..=4 {
        let spin = Spin::from_twice(tj);
        let quad = SphereQuadrature::for_spin(spin);
        let grid = OperatorGrid::new(spin, &quad);
        let closed = max((0..100).map(|_| {
            let p = random_kernel_point(spin, &mut rng);
            (dual_kernel(spin, &p) - dual_kernel_trace(spin, &p)).norm()
        }));
        let (mut round, mut avg) = (0.0_f64, 0.0_f64);
        for _ in 0..10 {
            let a = random_operator(spin, &mut rng);
            let f = symbol_table(&a, &grid, &quad).unwrap();
            let fd = transform_two_point(&f, TwoPointKernel::Intertwine(Direction::OrdinaryToDual), &quad).unwrap();
            let back = transform_two_point(&fd, TwoPointKernel::Intertwine(Direction::DualToOrdinary), &quad).unwrap();
            round = max([round, back.max_abs_diff(&f)]);
            let rho = random_density_matrix(spin, &mut rng);
            let w = tomogram(&rho, &quad).unwrap();
            let fd_direct = dual_symbol_table(&a, &grid, &quad).unwrap();
            let v = average_via_dual(&w, &fd_direct, &quad).unwrap();
            avg = max([avg, (v - rho.matrix().trace_product(&a)).norm()]);
        }
        let j = spin_label(tj);
        out.push(gap(format!("dual kernel j={j}"), closed, 1e-9));
        out.push(gap(format!("intertwining round trip j={j}"), round, 1e-9));
        out.push(gap(format!("dual average j={j}"), avg, 1e-10));
    }
    out
}

fn fourier_brute_force() -> Vec<Gap> {
    let mut rng = seeded(110);
    (0..=2)
        .map(|tj| {
            let spin = Spin::from_twice(tj);
            let g = max((0..10).map(|_| {
                let p = random_kernel_point(spin, &mut rng);
                (kernel_fourier(spin, &p, DEFAULT_FOURIER_GRID).unwrap() - kernel_explicit(spin, &p)).norm()
            }));
            gap(format!("j={} on {}^3", spin_label(tj), DEFAULT_FOURIER_GRID), g, 2e-3)
        })
        .collect()
}

fn figure_grids() -> Vec<Gap> {
    let mut out = Vec::new();
    for id in FigureId::ALL {
        let g = default_figure(id).unwrap();
        let nonfinite = g
            .rows
            .iter()
            .filter(|r| !(r.re.is_finite() && r.im.is_finite()))
            .count();
        let missing = (g.polar_points * g.azimuthal_points).abs_diff(g.rows.len());
        out.push(gap(
            format!("{id} finite, {} rows", g.rows.len()),
            (nonfinite + missing) as f64,
            0.0,
        ));
    }
    let spec = FigureSpec::of(FigureId::Fig1a);
    let g = default_figure(FigureId::Fig1a).unwrap();
    let (m2, n2) = spec.fixed[0];
    let x2 = PhasePoint::from_twice(m2, n2);
    let oracle = max(g.rows.iter().map(|r| {
        let x1 = PhasePoint::from_twice(spec.twice_m1, UnitAxis::new(r.theta1, r.phi1).unwrap());
        (Complex64::new(r.re, r.im) - delta_kernel_trace(spec.spin, &x2, &x1)).norm()
    }));
    out.push(gap("fig1a vs Tr(DU)", oracle, 1e-10));
    out
}

type Criterion = fn() -> Vec<Gap>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("explicit vs trace kernel", explicit_vs_trace),
        ("star product and associativity", star_product_correctness),
        ("delta kernel reproduces tomograms", delta_reproducing),
        ("reconstruction and normalization", reconstruction),
        ("explicit vs Clebsch-Gordan kernel", equivalence),
        ("quantizer residual", quantizer_residual),
        ("spin recurrence", recurrence),
        ("character identity", character_identity),
        ("dual symbols and intertwining", dual_machinery),
        ("Fourier brute force", fourier_brute_force),
        ("figure grids", figure_grids),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let gaps = run();
        let ok = gaps.iter().all(Gap::ok);
        if !ok {
            failed += 1;
        }
        let worst = gaps
            .iter()
            .map(|g| format!("{} {:.1e}/{:.0e}", g.label, g.value, g.tol))
            .collect::<Vec<_>>()
            .join("; ");
        println!("{} {:>2} {title}: {worst}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
