use spintomo::equivalence::*;
use spintomo::kernels::{kernel_explicit, kernel_trace};
use spintomo::random::{random_kernel_point, seeded};
use spintomo::tomography::quantizer;
use spintomo::*;

#[test]
fn cg_kernel_matches_its_matrix_form() {
    let mut rng = seeded(20);
    for tj in 0..=3 {
        let spin = Spin::from_twice(tj);
        for _ in 0..10 {
            let p = random_kernel_point(spin, &mut rng);
            let a = kernel_cg(spin, &p);
            let b = kernel_cg_trace(spin, &p);
            assert!((a - b).norm() < 1e-10, "tj={tj}: {a} vs {b}");
        }
    }
}

#[test]
fn spin_half_kernels_coincide() {
    let mut rng = seeded(21);
    for _ in 0..20 {
        let p = random_kernel_point(Spin::HALF, &mut rng);
        assert!((kernel_cg(Spin::HALF, &p) - kernel_explicit(Spin::HALF, &p)).norm() < 1e-12);
    }
}

#[test]
fn spin_one_residual_closed_form() {
    let mut rng = seeded(22);
    for _ in 0..30 {
        let p = random_kernel_point(Spin::ONE, &mut rng);
        let gap = kernel_trace(Spin::ONE, &p) - kernel_cg(Spin::ONE, &p);
        assert!((gap - delta_j1(&p)).norm() < 1e-12, "{gap} vs {}", delta_j1(&p));
    }
}

#[test]
fn quantizer_residual_is_difference_of_quantizers() {
    let mut rng = seeded(23);
    for _ in 0..10 {
        let x = spintomo::random::random_phase_point(Spin::ONE, &mut rng);
        let diff = &quantizer(Spin::ONE, &x) - &cg_quantizer(Spin::ONE, &x);
        assert!(diff.max_abs_diff(&quantizer_residual_j1(x.m, &x.axis)) < 1e-13);
    }
}

#[test]
fn quantizer_residual_on_z() {
    let r = quantizer_residual_j1(Projection::from_twice(0), &UnitAxis::Z);
    let expected = ComplexMatrix::real_diagonal(&[-2.0 / 6.0 + 1.0 / 6.0, -4.0 / 6.0, -1.0 / 6.0]);
    assert!(r.max_abs_diff(&expected) < 1e-15);
    assert!(r.is_hermitian(1e-15));
}

#[test]
fn spin_half_quantizers_coincide() {
    let mut rng = seeded(24);
    let x = spintomo::random::random_phase_point(Spin::HALF, &mut rng);
    assert!(quantizer(Spin::HALF, &x).max_abs_diff(&cg_quantizer(Spin::HALF, &x)) < 1e-14);
}
