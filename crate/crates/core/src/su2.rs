//! Angular momentum matrices, Wigner rotation matrices and axis-angle
//! exponentials for arbitrary spin.
//!
//! Conventions: `R(n) = exp(-i θ (n⊥ · J))` with `n⊥ = (-sin φ, cos φ, 0)`,
//! which factorizes as `exp(-iφJz) d(θ) exp(iφJz)` where `d(β) = exp(-iβJy)`
//! is the Wigner small-d matrix. With this choice `R(n) Jz R(n)† = n · J`.

use num_complex::Complex64;

use crate::factorial;
use crate::geometry::UnitAxis;
use crate::matrix::ComplexMatrix;
use crate::spin::Spin;

/// The three spin matrices `Jx`, `Jy`, `Jz`.
#[derive(Debug, Clone)]
pub struct AngularMomentum {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl AngularMomentum {
    /// `n · J`.
    pub fn along(&self, n: &UnitAxis) -> ComplexMatrix {
        let [nx, ny, nz] = *n.cartesian();
        let mut out = self.x.scale_real(nx);
        out.add_scaled(Complex64::new(ny, 0.0), &self.y);
        out.add_scaled(Complex64::new(nz, 0.0), &self.z);
        out
    }

    /// `Jx² + Jy² + Jz²`.
    pub fn casimir(&self) -> ComplexMatrix {
        let mut c = &self.x * &self.x;
        c += &(&self.y * &self.y);
        c += &(&self.z * &self.z);
        c
    }
}

/// Spin matrices built from the ladder operators `J± |jm> = sqrt(j(j+1) - m(m±1)) |j m±1>`.
pub fn angular_momentum(spin: Spin) -> AngularMomentum {
    let n = spin.dim();
    let j = spin.value();
    let mut raise = ComplexMatrix::zeros(n);
    // J+ maps index i (m) to index i-1 (m+1).
    for i in 1..n {
        let m = f64::from(spin.twice_m_at(i)) / 2.0;
        raise[(i - 1, i)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let x = (&raise + &lower).scale_real(0.5);
    let y = (&raise - &lower).scale(Complex64::new(0.0, -0.5));
    let z = ComplexMatrix::real_diagonal(&spin.projections().map(|m| m.value()).collect::<Vec<_>>());
    AngularMomentum { x, y, z }
}

/// Single Wigner small-d element `d^{(j)}_{m'm}(β) = <jm'| exp(-iβJy) |jm>` by
/// the finite factorial sum. Arguments are doubled. Returns 0 if either
/// projection is not a state of `j`.
pub fn small_d_element(twice_j: u32, twice_mp: i32, twice_m: i32, beta: f64) -> f64 {
    let spin = Spin::from_twice(twice_j);
    if !spin.contains(twice_mp) || !spin.contains(twice_m) {
        return 0.0;
    }
    let tj = twice_j as i32;
    let j_plus_m = ((tj + twice_m) / 2) as usize;
    let j_minus_m = ((tj - twice_m) / 2) as usize;
    let j_plus_mp = ((tj + twice_mp) / 2) as usize;
    let j_minus_mp = ((tj - twice_mp) / 2) as usize;
    let mp_minus_m = (twice_mp - twice_m) / 2;

    let (s_half, c_half) = (beta / 2.0).sin_cos();
    let neg_s = -s_half;
    let s_min = 0.max(-mp_minus_m) as usize;
    let s_max = j_minus_mp.min(j_plus_m);
    let numer = [j_plus_m, j_minus_m, j_plus_mp, j_minus_mp];
    let mut sum = 0.0;
    for s in s_min..=s_max {
        let den = [s, j_minus_mp - s, j_plus_m - s, (mp_minus_m + s as i32) as usize];
        let coef = factorial::sqrt_over(&numer, &den);
        let cos_pow = tj + (twice_m - twice_mp) / 2 - 2 * s as i32;
        let sin_pow = mp_minus_m + 2 * s as i32;
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * coef * c_half.powi(cos_pow) * neg_s.powi(sin_pow);
    }
    sum
}

/// The full small-d matrix (real entries stored as complex).
pub fn wigner_small_d(spin: Spin, beta: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(spin.dim(), |a, b| {
        Complex64::new(
            small_d_element(spin.twice(), spin.twice_m_at(a), spin.twice_m_at(b), beta),
            0.0,
        )
    })
}

/// `R(n)`, the rotation carrying the z axis onto `n`.
pub fn rotation_operator(spin: Spin, n: &UnitAxis) -> ComplexMatrix {
    let d = wigner_small_d(spin, n.theta());
    let phi = n.phi();
    let phases: Vec<Complex64> = spin
        .projections()
        .map(|m| Complex64::from_polar(1.0, -m.value() * phi))
        .collect();
    ComplexMatrix::from_fn(spin.dim(), |a, b| phases[a] * d[(a, b)] * phases[b].conj())
}

/// `exp(-i (n · J) angle)`, built as `R(n) exp(-i Jz angle) R(n)†`.
pub fn axis_exponential(spin: Spin, n: &UnitAxis, angle: f64) -> ComplexMatrix {
    let r = rotation_operator(spin, n);
    let phases: Vec<Complex64> = spin
        .projections()
        .map(|m| Complex64::from_polar(1.0, -m.value() * angle))
        .collect();
    let n_dim = spin.dim();
    ComplexMatrix::from_fn(n_dim, |a, b| {
        (0..n_dim).map(|k| r[(a, k)] * phases[k] * r[(b, k)].conj()).sum()
    })
}
