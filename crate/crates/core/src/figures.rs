//! Non-locality grids of the delta kernel and the star-product kernel.
//!
//! Each figure fixes every argument except the last axis `n1`, which sweeps a
//! `(θ, φ)` grid: `θ` over `[0, π]` inclusive, `φ` over `[0, 2π)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitAxis;
use crate::kernels::{ExplicitKernel, KernelAxes, PairTable, FULL_SHIFTS, NO_SHIFT};
use crate::spin::Spin;

pub const DEFAULT_POLAR_POINTS: usize = 90;
pub const DEFAULT_AZIMUTHAL_POINTS: usize = 180;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    Fig1a,
    Fig1b,
    /// Real and imaginary parts of the qubit kernel.
    Fig1cE,
    /// Real and imaginary parts of the qutrit kernel.
    Fig1dF,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig1a, FigureId::Fig1b, FigureId::Fig1cE, FigureId::Fig1dF];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig1cE => "fig1c_e",
            FigureId::Fig1dF => "fig1d_f",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| {
            Error::Format(format!(
                "unknown figure `{s}`; expected one of fig1a, fig1b, fig1c_e, fig1d_f"
            ))
        })
    }
}

/// Which kernel a figure shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureKernel {
    /// `K^δ(x2, x1)`.
    Delta,
    /// `K(x3, x2, x1)`.
    Star,
}

/// A fixed argument of the plotted kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    /// `"x3"` or `"x2"`.
    pub label: String,
    pub twice_m: i32,
    pub axis: [f64; 3],
}

/// Fixed parameters of one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    pub spin: Spin,
    pub kernel: FigureKernel,
    /// `x3` (star kernel only) then `x2`.
    pub fixed: Vec<(i32, UnitAxis)>,
    pub twice_m1: i32,
}

fn axis(v: [f64; 3]) -> UnitAxis {
    UnitAxis::from_cartesian(v).expect("figure axes are unit vectors")
}

impl FigureSpec {
    pub fn of(id: FigureId) -> FigureSpec {
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        match id {
            FigureId::Fig1a => FigureSpec {
                id,
                spin: Spin::HALF,
                kernel: FigureKernel::Delta,
                fixed: vec![(-1, axis([0.0, -s3 / 2.0, 0.5]))],
                twice_m1: 1,
            },
            FigureId::Fig1b => FigureSpec {
                id,
                spin: Spin::ONE,
                kernel: FigureKernel::Delta,
                fixed: vec![(2, axis([-1.0 / (2.0 * s2), s3 / (2.0 * s2), 1.0 / s2]))],
                twice_m1: 0,
            },
            FigureId::Fig1cE => FigureSpec {
                id,
                spin: Spin::HALF,
                kernel: FigureKernel::Star,
                fixed: vec![
                    (1, axis([-0.5, -s3 / 2.0, 0.0])),
                    (1, axis([-s3 / (2.0 * s2), -s3 / (2.0 * s2), -1.0 / s2])),
                ],
                twice_m1: 1,
            },
            FigureId::Fig1dF => FigureSpec {
                id,
                spin: Spin::ONE,
                kernel: FigureKernel::Star,
                fixed: vec![(-2, axis([0.0, 1.0, 0.0])), (2, axis([0.5, -0.5, 1.0 / s2]))],
                twice_m1: 0,
            },
        }
    }

    fn labels(&self) -> &'static [&'static str] {
        match self.kernel {
            FigureKernel::Delta => &["x2"],
            FigureKernel::Star => &["x3", "x2"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub theta1: f64,
    pub phi1: f64,
    pub re: f64,
    pub im: f64,
}

/// Kernel values over the `n1` grid, rows with `θ` outer and `φ` inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    pub figure: FigureId,
    pub twice_j: u32,
    pub kernel: FigureKernel,
    pub fixed: Vec<FixedPoint>,
    pub twice_m1: i32,
    pub polar_points: usize,
    pub azimuthal_points: usize,
    pub rows: Vec<GridRow>,
}

/// Grid angles: `θ_i = π i / (nθ - 1)`, `φ_k = 2π k / nφ`.
pub fn grid_angles(polar_points: usize, azimuthal_points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if polar_points < 2 || azimuthal_points < 1 {
        return Err(Error::Format(format!(
            "figure grid {polar_points}x{azimuthal_points} is too small; need at least 2x1"
        )));
    }
    let theta = (0..polar_points)
        .map(|i| (PI * i as f64 / (polar_points - 1) as f64).min(PI))
        .collect();
    let phi = (0..azimuthal_points)
        .map(|k| TAU * k as f64 / azimuthal_points as f64)
        .collect();
    Ok((theta, phi))
}

/// Evaluates the figure's kernel at one `n1`.
fn evaluator(spec: &FigureSpec) -> Box<dyn Fn(&UnitAxis) -> Complex64 + Sync + '_> {
    let spin = spec.spin;
    let d = spin.dim() as f64;
    match spec.kernel {
        FigureKernel::Delta => {
            let table = PairTable::new(spin);
            let (m2, n2) = spec.fixed[0];
            let m = [m2, spec.twice_m1];
            Box::new(move |n1| table.sum(n1.dot(&n2), m, [FULL_SHIFTS, NO_SHIFT]) * d)
        }
        FigureKernel::Star => {
            let kernel = ExplicitKernel::new(spin);
            let (m3, n3) = spec.fixed[0];
            let (m2, n2) = spec.fixed[1];
            let m = [m3, m2, spec.twice_m1];
            Box::new(move |n1| {
                let w = kernel.table().weights(&KernelAxes::new(&n3, &n2, n1));
                kernel.evaluate_with_weights(&w, m)
            })
        }
    }
}

/// Values of `spec`'s kernel over the `n1` grid.
pub fn figure_grid(spec: &FigureSpec, polar_points: usize, azimuthal_points: usize) -> Result<KernelGrid> {
    let (thetas, phis) = grid_angles(polar_points, azimuthal_points)?;
    let eval = evaluator(spec);
    let rows: Vec<GridRow> = thetas
        .par_iter()
        .map(|&theta1| {
            phis.iter()
                .map(|&phi1| {
                    let v = eval(&UnitAxis::new(theta1, phi1)?);
                    Ok(GridRow {
                        theta1,
                        phi1,
                        re: v.re,
                        im: v.im,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let fixed = spec
        .labels()
        .iter()
        .zip(&spec.fixed)
        .map(|(label, (twice_m, n))| FixedPoint {
            label: (*label).to_string(),
            twice_m: *twice_m,
            axis: *n.cartesian(),
        })
        .collect();
    Ok(KernelGrid {
        figure: spec.id,
        twice_j: spec.spin.twice(),
        kernel: spec.kernel,
        fixed,
        twice_m1: spec.twice_m1,
        polar_points,
        azimuthal_points,
        rows,
    })
}

/// The figure at the default `90 x 180` resolution.
pub fn default_figure(id: FigureId) -> Result<KernelGrid> {
    figure_grid(&FigureSpec::of(id), DEFAULT_POLAR_POINTS, DEFAULT_AZIMUTHAL_POINTS)
}
