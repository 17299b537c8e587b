//! Seeded random sampling of axes, phase-space points, operators and states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::UnitAxis;
use crate::kernels::KernelPoint;
use crate::matrix::ComplexMatrix;
use crate::spin::Spin;
use crate::tomography::{DensityMatrix, PhasePoint};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the sphere.
pub fn random_axis<R: Rng>(rng: &mut R) -> UnitAxis {
    let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    UnitAxis::new(cos_theta.acos(), phi).expect("angles in range")
}

pub fn random_phase_point<R: Rng>(spin: Spin, rng: &mut R) -> PhasePoint {
    let k = rng.gen_range(0..spin.dim());
    PhasePoint::from_twice(spin.twice_m_at(k), random_axis(rng))
}

pub fn random_kernel_point<R: Rng>(spin: Spin, rng: &mut R) -> KernelPoint {
    KernelPoint::new(
        random_phase_point(spin, rng),
        random_phase_point(spin, rng),
        random_phase_point(spin, rng),
    )
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_operator<R: Rng>(spin: Spin, rng: &mut R) -> ComplexMatrix {
    let d = spin.dim();
    ComplexMatrix::from_fn(d, |_, _| gaussian(rng))
}

/// `A A† / Tr(A A†)` with Gaussian `A`.
pub fn random_density_matrix<R: Rng>(spin: Spin, rng: &mut R) -> DensityMatrix {
    let a = random_operator(spin, rng);
    let mut rho = &a * &a.adjoint();
    let tr = rho.trace().re;
    rho = rho.scale_real(1.0 / tr);
    // Remove roundoff asymmetry so validation sees an exactly Hermitian matrix.
    let rho = (&rho + &rho.adjoint()).scale_real(0.5);
    DensityMatrix::new(spin, rho).expect("Gram matrix is a state")
}
