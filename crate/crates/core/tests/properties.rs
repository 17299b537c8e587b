use proptest::prelude::*;
use spintomo::composition::*;
use spintomo::equivalence::{delta_j1, delta_j1_rotation_gap, kernel_cg, kernel_cg_trace};
use spintomo::io::{read_density_matrix_json, write_density_matrix_json};
use spintomo::kernels::*;
use spintomo::random::{random_density_matrix, random_kernel_point, seeded};
use spintomo::su2::axis_exponential;
use spintomo::tomography::*;
use spintomo::verify::random_rotation;
use spintomo::*;
use std::f64::consts::{PI, TAU};

fn axis_strategy() -> impl Strategy<Value = UnitAxis> {
    (0.0..=PI, 0.0..TAU).prop_map(|(t, p)| UnitAxis::new(t, p).unwrap())
}

fn spin_strategy(max_twice: u32) -> impl Strategy<Value = Spin> {
    (0..=max_twice).prop_map(Spin::from_twice)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dequantizers_resolve_identity(spin in spin_strategy(6), n in axis_strategy()) {
        let mut total = ComplexMatrix::zeros(spin.dim());
        for m in spin.projections() {
            total += &dequantizer(spin, &PhasePoint::new(m, n));
        }
        prop_assert!(total.max_abs_diff(&ComplexMatrix::identity(spin.dim())) < 1e-12);
    }

    #[test]
    fn quantizers_sum_to_edge_projectors(spin in spin_strategy(6), n in axis_strategy()) {
        // Shift terms telescope, leaving half of each edge projector.
        let mut total = ComplexMatrix::zeros(spin.dim());
        for m in spin.projections() {
            total += &quantizer(spin, &PhasePoint::new(m, n));
        }
        let half_d = 0.5 * spin.dim() as f64;
        let mut expected = ComplexMatrix::zeros(spin.dim());
        for edge in [spin.twice() as i32, -(spin.twice() as i32)] {
            expected += &dequantizer(spin, &PhasePoint::from_twice(edge, n)).scale_real(half_d);
        }
        prop_assert!(total.max_abs_diff(&expected) < 1e-11);
    }

    #[test]
    fn tomogram_is_a_distribution(spin in spin_strategy(5), seed in any::<u64>()) {
        let rho = random_density_matrix(spin, &mut seeded(seed));
        let quad = SphereQuadrature::for_spin(spin);
        let w = tomogram(&rho, &quad).unwrap();
        for b in 0..w.nodes() {
            let mut sum = 0.0;
            for i in 0..spin.dim() {
                let v = w.value(i, b);
                prop_assert!(v.re > -1e-12 && v.im.abs() < 1e-12);
                sum += v.re;
            }
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tomogram_round_trip(spin in spin_strategy(4), seed in any::<u64>()) {
        let rho = random_density_matrix(spin, &mut seeded(seed));
        let quad = SphereQuadrature::for_spin(spin);
        let back = reconstruct(&tomogram(&rho, &quad).unwrap(), &quad).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn explicit_kernel_matches_trace(spin in spin_strategy(3), seed in any::<u64>()) {
        let p = random_kernel_point(spin, &mut seeded(seed));
        let gap = (kernel_explicit(spin, &p) - kernel_trace(spin, &p)).norm();
        prop_assert!(gap < 1e-9, "gap {gap}");
    }

    #[test]
    fn cg_kernel_matches_its_trace_form(spin in spin_strategy(3), seed in any::<u64>()) {
        let p = random_kernel_point(spin, &mut seeded(seed));
        let cg = kernel_cg(spin, &p);
        prop_assert!((cg - kernel_cg_trace(spin, &p)).norm() < 1e-9);
        // The two quantizers coincide only up to spin one half.
        if spin.twice() <= 1 {
            prop_assert!((cg - kernel_trace(spin, &p)).norm() < 1e-9);
        }
    }

    #[test]
    fn swapping_quantizer_arguments_conjugates(spin in spin_strategy(4), seed in any::<u64>()) {
        let p = random_kernel_point(spin, &mut seeded(seed));
        let a = kernel_explicit(spin, &p).conj();
        let b = kernel_explicit(spin, &p.swapped());
        prop_assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn kernel_is_rotation_invariant(spin in spin_strategy(3), seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_kernel_point(spin, &mut rng);
        let rot = random_rotation(&mut rng);
        let turn = |x: &PhasePoint| PhasePoint::from_twice(x.m.twice(), x.axis.rotated(&rot));
        let q = KernelPoint::new(turn(&p.x3), turn(&p.x2), turn(&p.x1));
        prop_assert!((kernel_explicit(spin, &p) - kernel_explicit(spin, &q)).norm() < 1e-10);
    }

    #[test]
    fn mirror_image_conjugates_kernel(spin in spin_strategy(3), seed in any::<u64>()) {
        // Reflection flips the triple product and leaves the dot products.
        let p = random_kernel_point(spin, &mut seeded(seed));
        let flip = |x: &PhasePoint| PhasePoint::from_twice(x.m.twice(), x.axis.reflected_z());
        let q = KernelPoint::new(flip(&p.x3), flip(&p.x2), flip(&p.x1));
        prop_assert!((kernel_explicit(spin, &p).conj() - kernel_explicit(spin, &q)).norm() < 1e-10);
    }

    #[test]
    fn delta_j1_is_rotation_invariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_kernel_point(Spin::ONE, &mut rng);
        let rot = random_rotation(&mut rng);
        prop_assert!(delta_j1_rotation_gap(&p, &rot) < 1e-12);
        let d = kernel_trace(Spin::ONE, &p) - kernel_cg(Spin::ONE, &p);
        prop_assert!((d - delta_j1(&p)).norm() < 1e-9);
    }

    #[test]
    fn recurrence_matches_trace(spin in spin_strategy(3), seed in any::<u64>()) {
        let p = random_kernel_point(spin, &mut seeded(seed));
        let r = RecurrenceChain::new(p.axes()).kernel(spin.twice(), p.twice_m());
        prop_assert!((r - kernel_trace(spin, &p)).norm() < 1e-8);
    }

    #[test]
    fn composed_character_matches_operator_trace(
        spin in spin_strategy(5),
        a in (axis_strategy(), axis_strategy(), axis_strategy()),
        angles in (0.0..TAU, 0.0..TAU, 0.0..TAU),
    ) {
        let axes = [a.0, a.1, a.2];
        let angles = [angles.0, angles.1, angles.2];
        let t = RotationTriple::new(axes, angles);
        let c = compose_cos_half_angle(&t).unwrap();
        let v = compose_axis_times_sin(&t);
        prop_assert!((c * c + v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        let r = &(&axis_exponential(spin, &axes[2], angles[2]) * &axis_exponential(spin, &axes[1], angles[1]))
            * &axis_exponential(spin, &axes[0], angles[0]);
        let tr = r.trace();
        prop_assert!((character(spin, c).unwrap() - tr.re).abs() < 1e-10 && tr.im.abs() < 1e-10);
    }

    #[test]
    fn density_matrix_json_round_trip_is_exact(spin in spin_strategy(6), seed in any::<u64>()) {
        let rho = random_density_matrix(spin, &mut seeded(seed));
        let mut buf = Vec::new();
        write_density_matrix_json(&rho, &mut buf).unwrap();
        let back = read_density_matrix_json(buf.as_slice()).unwrap();
        prop_assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn axis_angles_round_trip(n in axis_strategy()) {
        let m = UnitAxis::from_cartesian(*n.cartesian()).unwrap();
        for i in 0..3 {
            prop_assert!((m.cartesian()[i] - n.cartesian()[i]).abs() < 1e-15);
        }
    }
}
