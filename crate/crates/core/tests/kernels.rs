mod kernel_types {
    use spintomo::kernels::*;
    use spintomo::*;

    #[test]
    fn binomial_definition() {
        assert_eq!(binomial_real(7.3, 0), 1.0);
        assert_eq!(binomial_real(-1.5, -2), 0.0);
        assert!((binomial_real(-1.5, 2) - 1.875).abs() < 1e-15);
        assert_eq!(binomial_real(5.0, 2), 10.0);
        // r a non-negative integer below q: the product passes through zero.
        assert_eq!(binomial_real(2.0, 4), 0.0);
        // (-1 choose q) = (-1)^q
        for q in 0..8 {
            assert_eq!(binomial_real(-1.0, q), if q % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(Complex64::new(1e16, 0.0));
        for _ in 0..10 {
            s.add(Complex64::new(1.0, 1.0));
        }
        s.add(Complex64::new(-1e16, 0.0));
        assert_eq!(s.value(), Complex64::new(10.0, 10.0));
    }

    #[test]
    fn complex_factor_for_orthonormal_triad() {
        let x = UnitAxis::from_cartesian([1.0, 0.0, 0.0]).unwrap();
        let y = UnitAxis::from_cartesian([0.0, 1.0, 0.0]).unwrap();
        let z = UnitAxis::Z;
        // n1 = x, n2 = y, n3 = z: triple product +1.
        let a = KernelAxes::new(&z, &y, &x);
        assert!((a.triple - 1.0).abs() < 1e-15);
        assert!((a.complex_factor() - Complex64::new(1.0, -1.0)).norm() < 1e-15);
    }
}

mod universal {
    use spintomo::kernels::*;
    use spintomo::random::{random_kernel_point, seeded};
    use spintomo::*;

    #[test]
    fn composition_counts() {
        // k runs down from 2j in steps of 2 parts; n parts into 8 slots give C(n+7, 7)
        assert_eq!(CompositionTable::new(Spin::ZERO).len(), 1);
        assert_eq!(CompositionTable::new(Spin::ONE).len(), 36 + 1);
        assert_eq!(CompositionTable::new(Spin::from_twice(3)).len(), 120 + 8);
        assert_eq!(CompositionTable::new(Spin::from_twice(4)).len(), 330 + 36 + 1);
    }

    #[test]
    fn scalar_t_is_one() {
        let mut rng = seeded(4);
        let p = random_kernel_point(Spin::ZERO, &mut rng);
        assert_eq!(universal_t(Spin::ZERO, &p, [0, 0, 0]), Complex64::new(1.0, 0.0));
        assert_eq!(universal_q(Spin::ZERO, &p.x2, &p.x1, [0, 0]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn grouped_sum_matches_literal() {
        let mut rng = seeded(5);
        for tj in 0..=4 {
            let spin = Spin::from_twice(tj);
            let table = CompositionTable::new(spin);
            for _ in 0..5 {
                let p = random_kernel_point(spin, &mut rng);
                let axes = p.axes();
                let w = table.weights(&axes);
                for s3 in -1..=1 {
                    for s1 in -1..=1 {
                        let s = [s3, 0, s1];
                        let lit = table.evaluate_literal(&axes, p.twice_m(), s);
                        let sh = |x: i32| [(x, if x == 0 { 1.0 } else { -0.5 })];
                        let (a, b, c) = (sh(s[0]), sh(s[1]), sh(s[2]));
                        let grp = table.sum(&w, p.twice_m(), [&a, &b, &c]);
                        assert!((lit - grp).norm() < 1e-12 * (1.0 + lit.norm()), "tj={tj}");
                    }
                }
            }
        }
    }

    #[test]
    fn q_matches_reduced_t() {
        let mut rng = seeded(6);
        for tj in 0..=5 {
            let spin = Spin::from_twice(tj);
            for _ in 0..10 {
                let p = random_kernel_point(spin, &mut rng);
                for s2 in -1..=1 {
                    for s1 in -1..=1 {
                        let a = universal_q(spin, &p.x2, &p.x1, [s2, s1]);
                        let b = universal_q_via_t(spin, &p.x2, &p.x1, [s2, s1]);
                        assert!((a - b).norm() < 1e-12, "tj={tj}: {a} vs {b}");
                    }
                }
            }
        }
    }
}

mod explicit {
    use spintomo::kernels::*;
    use spintomo::kernels::{delta_kernel_trace, dual_kernel_trace, intertwine_kernel_trace, kernel_trace};
    use spintomo::random::{random_kernel_point, seeded};
    use spintomo::*;

    #[test]
    fn scalar_kernels_are_one() {
        let mut rng = seeded(7);
        let p = random_kernel_point(Spin::ZERO, &mut rng);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(kernel_explicit(Spin::ZERO, &p), one);
        assert_eq!(dual_kernel(Spin::ZERO, &p), one);
        assert_eq!(delta_kernel(Spin::ZERO, &p.x2, &p.x1), one);
    }

    #[test]
    fn closed_forms_match_traces() {
        let mut rng = seeded(8);
        for tj in 1..=4 {
            let spin = Spin::from_twice(tj);
            for _ in 0..10 {
                let p = random_kernel_point(spin, &mut rng);
                assert!((kernel_explicit(spin, &p) - kernel_trace(spin, &p)).norm() < 1e-10);
                assert!((dual_kernel(spin, &p) - dual_kernel_trace(spin, &p)).norm() < 1e-10);
                assert!((delta_kernel(spin, &p.x2, &p.x1) - delta_kernel_trace(spin, &p.x2, &p.x1)).norm() < 1e-10);
                for dir in [Direction::OrdinaryToDual, Direction::DualToOrdinary] {
                    let a = intertwine_kernel(dir, spin, &p.x2, &p.x1);
                    let b = intertwine_kernel_trace(dir, spin, &p.x2, &p.x1);
                    assert!((a - b).norm() < 1e-10, "{dir} tj={tj}");
                }
            }
        }
    }

    /// Outside the spin range the closed form follows the formal operator
    /// extension, where only `U` vanishes.
    #[test]
    fn formal_extension_out_of_range() {
        let mut rng = seeded(9);
        for tj in 1..=3 {
            let spin = Spin::from_twice(tj);
            for _ in 0..10 {
                let p = random_kernel_point(spin, &mut rng);
                let m = [p.twice_m()[0] + 2 * (tj as i32), p.twice_m()[1] - 2, p.twice_m()[2]];
                let q = p.with_twice_m(m);
                assert!((kernel_explicit(spin, &q) - kernel_trace(spin, &q)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn block_matches_pointwise() {
        let mut rng = seeded(10);
        let spin = Spin::from_twice(3);
        for k in [ExplicitKernel::new(spin), ExplicitKernel::dual(spin)] {
            let p = random_kernel_point(spin, &mut rng);
            let d = spin.dim();
            let mut out = vec![Complex64::default(); d * d * d];
            k.evaluate_block(&p.x3.axis, &p.x2.axis, &p.x1.axis, &mut out);
            for (i, v) in out.iter().enumerate() {
                let m = [i / (d * d), (i / d) % d, i % d].map(|x| spin.twice_m_at(x));
                assert!((v - k.evaluate(&p.with_twice_m(m))).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("o2d".parse::<Direction>().unwrap(), Direction::OrdinaryToDual);
        assert_eq!(
            Direction::DualToOrdinary.to_string().parse::<Direction>().unwrap(),
            Direction::DualToOrdinary
        );
        assert!("sideways".parse::<Direction>().is_err());
    }
}

mod trace {
    use spintomo::kernels::*;
    use spintomo::random::{random_kernel_point, seeded};
    use spintomo::*;

    #[test]
    fn scalar_kernel_is_one() {
        let mut rng = seeded(1);
        let p = random_kernel_point(Spin::ZERO, &mut rng);
        assert_eq!(kernel_trace(Spin::ZERO, &p), Complex64::new(1.0, 0.0));
        assert_eq!(dual_kernel_trace(Spin::ZERO, &p), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn block_matches_pointwise() {
        let mut rng = seeded(2);
        let spin = Spin::from_twice(3);
        let k = TraceKernel::new(spin);
        let p = random_kernel_point(spin, &mut rng);
        let d = spin.dim();
        let mut out = vec![Complex64::default(); d * d * d];
        k.evaluate_block(&p.x3.axis, &p.x2.axis, &p.x1.axis, &mut out);
        let idx = |tm: i32| spin.index_of(tm).unwrap();
        let [a, b, c] = p.twice_m();
        assert!((out[(idx(a) * d + idx(b)) * d + idx(c)] - k.evaluate(&p)).norm() < 1e-13);
    }

    #[test]
    fn projector_overlap_with_itself_is_one() {
        let mut rng = seeded(3);
        let p = random_kernel_point(Spin::from_twice(4), &mut rng);
        let v = intertwine_kernel_trace(Direction::DualToOrdinary, Spin::from_twice(4), &p.x1, &p.x1);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }
}

mod star {
    use spintomo::kernels::*;
    use spintomo::random::{random_operator, random_phase_point, seeded};
    use spintomo::su2::angular_momentum;
    use spintomo::tomography::SymbolKind;
    use spintomo::tomography::{symbol, symbol_table, OperatorGrid};
    use spintomo::ComplexMatrix;
    use spintomo::*;

    #[test]
    fn identity_is_neutral() {
        let mut rng = seeded(12);
        let spin = Spin::HALF;
        let quad = SphereQuadrature::for_spin(spin);
        let grid = OperatorGrid::new(spin, &quad);
        let id = symbol_table(&ComplexMatrix::identity(2), &grid, &quad).unwrap();
        let b = symbol_table(&random_operator(spin, &mut rng), &grid, &quad).unwrap();
        let prod = star_product(&id, &b, &ExplicitKernel::new(spin), &quad).unwrap();
        assert!(prod.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn commutator_of_jx_jy() {
        let spin = Spin::ONE;
        let quad = SphereQuadrature::for_spin(spin);
        let grid = OperatorGrid::new(spin, &quad);
        let j = angular_momentum(spin);
        let fx = symbol_table(&j.x, &grid, &quad).unwrap();
        let fy = symbol_table(&j.y, &grid, &quad).unwrap();
        let k = TraceKernel::new(spin);
        let xy = star_product(&fx, &fy, &k, &quad).unwrap();
        let yx = star_product(&fy, &fx, &k, &quad).unwrap();
        let ijz = symbol_table(&j.z.scale(Complex64::new(0.0, 1.0)), &grid, &quad).unwrap();
        let diff: Vec<Complex64> = xy.values().iter().zip(yx.values()).map(|(a, b)| a - b).collect();
        assert!(ijz.max_abs_diff(&ijz.with_values(SymbolKind::Ordinary, diff)) < 1e-9);
        assert!(xy.max_abs_diff(&yx) > 0.1);
    }

    #[test]
    fn slice_agrees_with_full_table() {
        let mut rng = seeded(13);
        let spin = Spin::HALF;
        let quad = SphereQuadrature::for_spin(spin);
        let grid = OperatorGrid::new(spin, &quad);
        let a = random_operator(spin, &mut rng);
        let b = random_operator(spin, &mut rng);
        let fa = symbol_table(&a, &grid, &quad).unwrap();
        let fb = symbol_table(&b, &grid, &quad).unwrap();
        let x1 = random_phase_point(spin, &mut rng);
        let v = star_product_at(&fa, &fb, &ExplicitKernel::new(spin), &quad, &x1).unwrap();
        let expected = symbol(&(&a * &b), spin, &x1);
        assert!((v - expected).norm() < 1e-10);
    }

    #[test]
    fn under_resolved_grid_rejected() {
        let spin = Spin::ONE;
        let quad = SphereQuadrature::new(2, 3).unwrap();
        let f = SymbolTable::from_values(
            spin,
            &quad,
            SymbolKind::Ordinary,
            vec![Complex64::default(); 3 * quad.len()],
        )
        .unwrap();
        assert!(matches!(
            star_product(&f, &f, &TraceKernel::new(spin), &quad),
            Err(Error::UnderResolved { .. })
        ));
        assert!(matches!(
            transform_two_point(&f, TwoPointKernel::Delta, &quad),
            Err(Error::UnderResolved { .. })
        ));
    }
}

mod recurrence {
    use spintomo::kernels::*;
    use spintomo::random::{random_kernel_point, seeded};
    use spintomo::tomography::PhasePoint;
    use spintomo::*;

    fn point_at(axes: &KernelAxes, twice_m: [i32; 3]) -> KernelPoint {
        KernelPoint::new(
            PhasePoint::from_twice(twice_m[0], axes.n3),
            PhasePoint::from_twice(twice_m[1], axes.n2),
            PhasePoint::from_twice(twice_m[2], axes.n1),
        )
    }

    #[test]
    fn scalar_base_is_formal_trace() {
        let mut rng = seeded(14);
        let p = random_kernel_point(Spin::ZERO, &mut rng);
        for m3 in [-4, -2, 0, 2, 4] {
            for m2 in [-2, 0, 2] {
                for m1 in [-2, 0, 2] {
                    let q = p.with_twice_m([m3, m2, m1]);
                    let expected = kernel_trace(Spin::ZERO, &q);
                    assert_eq!(RecurrenceChain::new(q.axes()).kernel(0, [m3, m2, m1]), expected);
                }
            }
        }
    }

    #[test]
    fn spin_one_from_lower_kernels() {
        let mut rng = seeded(15);
        for _ in 0..10 {
            let p = random_kernel_point(Spin::ONE, &mut rng);
            let v = RecurrenceKernel::new(Spin::ONE).evaluate(&p);
            assert!((v - kernel_trace(Spin::ONE, &p)).norm() < 1e-10);
        }
    }

    #[test]
    fn step_with_explicit_lower_kernels() {
        let mut rng = seeded(16);
        let spin = Spin::from_twice(3);
        for _ in 0..5 {
            let p = random_kernel_point(spin, &mut rng);
            let axes = p.axes();
            let k1 = ExplicitKernel::new(Spin::ONE);
            let kh = ExplicitKernel::new(Spin::HALF);
            let v = kernel_recurrence_step(
                2,
                &axes,
                p.twice_m(),
                |m| k1.evaluate(&point_at(&axes, m)),
                |m| kh.evaluate(&point_at(&axes, m)),
            );
            assert!((v - kernel_trace(spin, &p)).norm() < 1e-10);
        }
    }
}

mod fourier {
    use spintomo::kernels::*;
    use spintomo::random::{random_kernel_point, seeded};
    use spintomo::*;

    #[test]
    fn small_grid_matches_trace() {
        let mut rng = seeded(17);
        for tj in 0..=2 {
            let spin = Spin::from_twice(tj);
            let p = random_kernel_point(spin, &mut rng);
            let v = kernel_fourier(spin, &p, 4 * tj as usize + 4).unwrap();
            assert!((v - kernel_trace(spin, &p)).norm() < 1e-11, "tj={tj}");
        }
    }
}
