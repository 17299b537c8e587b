//! Brute-force kernel from the Fourier representation of the quantizer and
//! dequantizer:
//!
//! ```text
//! K_j = (2j+1)² Σ_{s3,s2} c(s3) c(s2) (2π)^{-3} ∫ d³φ χ_j(Φ(φ))
//!       e^{i((m3+s3) φ3 + (m2+s2) φ2 + m1 φ1)}
//! ```
//!
//! with `χ_j = U_{2j}(cos Φ/2)` of the composed rotation
//! `e^{-i(n3·J)φ3} e^{-i(n2·J)φ2} e^{-i(n1·J)φ1}`. The integrand is a
//! trigonometric polynomial of degree `2j + 1` per angle, so an `N`-point
//! periodic rule with `N > 4j + 2` is exact up to roundoff.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{KernelEvaluator, KernelPoint};
use crate::composition::{character, compose_cos_half_angle, RotationTriple};
use crate::error::Result;
use crate::geometry::UnitAxis;
use crate::spin::Spin;
use crate::tomography::QUANTIZER_SHIFTS;

/// Grid points per angle.
pub const DEFAULT_FOURIER_GRID: usize = 64;

fn character_grid(spin: Spin, axes: [UnitAxis; 3], n: usize) -> Result<Vec<f64>> {
    // axes are (n1, n2, n3); index (i3 * n + i2) * n + i1
    let angle = |i: usize| TAU * i as f64 / n as f64;
    let mut chi = Vec::with_capacity(n * n * n);
    for i3 in 0..n {
        for i2 in 0..n {
            for i1 in 0..n {
                let t = RotationTriple::new(axes, [angle(i1), angle(i2), angle(i3)]);
                chi.push(character(spin, compose_cos_half_angle(&t)?)?);
            }
        }
    }
    Ok(chi)
}

/// `e^{i (tm/2) φ_i}` for every grid angle.
fn phases(twice_freq: i32, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| Complex64::from_polar(1.0, f64::from(twice_freq) / 2.0 * TAU * i as f64 / n as f64))
        .collect()
}

/// `N^{-3} Σ χ e^{i(a3 φ3 + a2 φ2 + a1 φ1)}` for all requested doubled
/// frequencies, as `out[(k3 * |f2| + k2) * |f1| + k1]`.
fn coefficients(chi: &[f64], n: usize, f3: &[i32], f2: &[i32], f1: &[i32]) -> Vec<Complex64> {
    let ph1: Vec<Vec<Complex64>> = f1.iter().map(|&f| phases(f, n)).collect();
    let ph2: Vec<Vec<Complex64>> = f2.iter().map(|&f| phases(f, n)).collect();
    let ph3: Vec<Vec<Complex64>> = f3.iter().map(|&f| phases(f, n)).collect();
    // Stage 1: over φ1.
    let mut s1 = vec![Complex64::default(); n * n * f1.len()];
    for (r, row) in chi.chunks(n).enumerate() {
        for (k1, p) in ph1.iter().enumerate() {
            s1[r * f1.len() + k1] = row.iter().zip(p).map(|(c, e)| e * c).sum();
        }
    }
    // Stage 2: over φ2.
    let mut s2 = vec![Complex64::default(); n * f2.len() * f1.len()];
    for i3 in 0..n {
        for (k2, p) in ph2.iter().enumerate() {
            for k1 in 0..f1.len() {
                let mut acc = Complex64::default();
                for (i2, e) in p.iter().enumerate() {
                    acc += e * s1[(i3 * n + i2) * f1.len() + k1];
                }
                s2[(i3 * f2.len() + k2) * f1.len() + k1] = acc;
            }
        }
    }
    // Stage 3: over φ3.
    let norm = (n * n * n) as f64;
    let mut out = vec![Complex64::default(); f3.len() * f2.len() * f1.len()];
    for (k3, p) in ph3.iter().enumerate() {
        for k21 in 0..f2.len() * f1.len() {
            let mut acc = Complex64::default();
            for (i3, e) in p.iter().enumerate() {
                acc += e * s2[i3 * f2.len() * f1.len() + k21];
            }
            out[k3 * f2.len() * f1.len() + k21] = acc / norm;
        }
    }
    out
}

/// Brute-force kernel on an `n³` grid.
pub fn kernel_fourier(spin: Spin, p: &KernelPoint, n: usize) -> Result<Complex64> {
    let k = FourierKernel::with_grid(spin, n);
    let d = spin.dim();
    let mut out = vec![Complex64::default(); d * d * d];
    k.try_block(&p.x3.axis, &p.x2.axis, &p.x1.axis, &mut out)?;
    let idx = |tm: i32| spin.index_of(tm).expect("projection in range");
    let [a, b, c] = p.twice_m();
    Ok(out[(idx(a) * d + idx(b)) * d + idx(c)])
}

#[derive(Debug, Clone, Copy)]
pub struct FourierKernel {
    spin: Spin,
    grid: usize,
}

impl FourierKernel {
    pub fn new(spin: Spin) -> Self {
        Self::with_grid(spin, DEFAULT_FOURIER_GRID)
    }

    pub fn with_grid(spin: Spin, grid: usize) -> Self {
        FourierKernel { spin, grid }
    }

    fn try_block(&self, n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis, out: &mut [Complex64]) -> Result<()> {
        let spin = self.spin;
        let tj = spin.twice() as i32;
        let d = spin.dim();
        let chi = character_grid(spin, [*n1, *n2, *n3], self.grid)?;
        // Shifted frequencies for the quantizer points, plain ones for x1.
        let wide: Vec<i32> = (0..d + 2).map(|i| tj + 2 - 2 * i as i32).collect();
        let plain: Vec<i32> = (0..d).map(|i| spin.twice_m_at(i)).collect();
        let coef = coefficients(&chi, self.grid, &wide, &wide, &plain);
        let scale = (d * d) as f64;
        let wide_index = |tm: i32| ((tj + 2 - tm) / 2) as usize;
        for i3 in 0..d {
            for i2 in 0..d {
                for i1 in 0..d {
                    let mut acc = Complex64::default();
                    for &(s3, c3) in &QUANTIZER_SHIFTS {
                        for &(s2, c2) in &QUANTIZER_SHIFTS {
                            let k3 = wide_index(plain[i3] + 2 * s3);
                            let k2 = wide_index(plain[i2] + 2 * s2);
                            acc += coef[(k3 * wide.len() + k2) * d + i1] * (c3 * c2);
                        }
                    }
                    out[(i3 * d + i2) * d + i1] = acc * scale;
                }
            }
        }
        Ok(())
    }
}

impl KernelEvaluator for FourierKernel {
    fn spin(&self) -> Spin {
        self.spin
    }

    fn name(&self) -> &'static str {
        "fourier"
    }

    fn evaluate(&self, p: &KernelPoint) -> Complex64 {
        kernel_fourier(self.spin, p, self.grid).expect("unit axes keep the composition in domain")
    }

    fn evaluate_block(&self, n3: &UnitAxis, n2: &UnitAxis, n1: &UnitAxis, out: &mut [Complex64]) {
        self.try_block(n3, n2, n1, out)
            .expect("unit axes keep the composition in domain");
    }
}
