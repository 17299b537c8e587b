//! Dequantizer and quantizer operators, spin tomograms, ordinary and dual
//! symbols and the phase-space measure `∫dx = Σ_m (1/4π) ∫dΩ`.
//!
//! The dequantizer is the rank-one projector `U(m, n) = R(n)|jm><jm|R(n)†`.
//! The quantizer is the projector combination
//! `D(m, n) = (2j+1) Σ_{s=-1}^{1} U(m+s, n) / (1 - 3s²)`, the closed form of
//! its Fourier-integral definition. `U` at a projection outside `[-j, j]` is
//! the zero matrix; `D` is defined by the same formula for every `m` of the
//! right parity and therefore vanishes only once `|m| > j + 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitAxis;
use crate::matrix::ComplexMatrix;
use crate::quadrature::SphereQuadrature;
use crate::spin::{Projection, Spin};
use crate::su2::rotation_operator;

/// Weights `1/(1 - 3s²)` of the shifted projectors in the quantizer.
pub const QUANTIZER_SHIFTS: [(i32, f64); 3] = [(-1, -0.5), (0, 1.0), (1, -0.5)];

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const EIGENVALUE_TOL: f64 = 1e-10;

/// A phase-space point `x = (m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub m: Projection,
    pub axis: UnitAxis,
}

impl PhasePoint {
    pub fn new(m: Projection, axis: UnitAxis) -> Self {
        PhasePoint { m, axis }
    }

    pub fn from_twice(twice_m: i32, axis: UnitAxis) -> Self {
        PhasePoint {
            m: Projection::from_twice(twice_m),
            axis,
        }
    }
}

/// `R(n)|jm>`, or `None` if `m` is not a state of `spin`.
fn rotated_basis_vector(spin: Spin, r: &ComplexMatrix, twice_m: i32) -> Option<Vec<Complex64>> {
    spin.index_of(twice_m).map(|k| r.column(k))
}

fn projector(v: Option<Vec<Complex64>>, dim: usize) -> ComplexMatrix {
    match v {
        Some(v) => ComplexMatrix::outer(&v, &v),
        None => ComplexMatrix::zeros(dim),
    }
}

fn quantizer_from_rotation(spin: Spin, r: &ComplexMatrix, twice_m: i32) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(spin.dim());
    let scale = spin.dim() as f64;
    for &(s, c) in &QUANTIZER_SHIFTS {
        if let Some(v) = rotated_basis_vector(spin, r, twice_m + 2 * s) {
            out.add_scaled(Complex64::new(scale * c, 0.0), &ComplexMatrix::outer(&v, &v));
        }
    }
    out
}

/// `U(m, n)`.
pub fn dequantizer(spin: Spin, x: &PhasePoint) -> ComplexMatrix {
    let r = rotation_operator(spin, &x.axis);
    projector(rotated_basis_vector(spin, &r, x.m.twice()), spin.dim())
}

/// `D(m, n)`.
pub fn quantizer(spin: Spin, x: &PhasePoint) -> ComplexMatrix {
    let r = rotation_operator(spin, &x.axis);
    quantizer_from_rotation(spin, &r, x.m.twice())
}

/// Ordinary symbol `f_A(x) = Tr(A U(x))`.
pub fn symbol(a: &ComplexMatrix, spin: Spin, x: &PhasePoint) -> Complex64 {
    a.trace_product(&dequantizer(spin, x))
}

/// Dual symbol `f^d_A(x) = Tr(A D(x))`.
pub fn dual_symbol(a: &ComplexMatrix, spin: Spin, x: &PhasePoint) -> Complex64 {
    a.trace_product(&quantizer(spin, x))
}

/// Dequantizers and quantizers at every point of a quadrature grid.
///
/// Points are ordered with the projection outermost (descending `m`) and the
/// quadrature node innermost, the same order as [`SymbolTable`] values.
#[derive(Debug, Clone)]
pub struct OperatorGrid {
    spin: Spin,
    points: Vec<PhasePoint>,
    weights: Vec<f64>,
    dequantizers: Vec<ComplexMatrix>,
    quantizers: Vec<ComplexMatrix>,
}

impl OperatorGrid {
    pub fn new(spin: Spin, quad: &SphereQuadrature) -> Self {
        let rotations: Vec<ComplexMatrix> = quad.nodes().iter().map(|n| rotation_operator(spin, &n.axis)).collect();
        let total = spin.dim() * quad.len();
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut dequantizers = Vec::with_capacity(total);
        let mut quantizers = Vec::with_capacity(total);
        for m in spin.projections() {
            for (node, r) in quad.nodes().iter().zip(&rotations) {
                points.push(PhasePoint::new(m, node.axis));
                weights.push(node.weight);
                dequantizers.push(projector(rotated_basis_vector(spin, r, m.twice()), spin.dim()));
                quantizers.push(quantizer_from_rotation(spin, r, m.twice()));
            }
        }
        OperatorGrid {
            spin,
            points,
            weights,
            dequantizers,
            quantizers,
        }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dequantizers(&self) -> &[ComplexMatrix] {
        &self.dequantizers
    }

    pub fn quantizers(&self) -> &[ComplexMatrix] {
        &self.quantizers
    }
}

/// A validated density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    spin: Spin,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(spin: Spin, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != spin.dim() {
            return Err(Error::Dimension {
                expected: spin.dim(),
                found: matrix.dim(),
            });
        }
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::TraceNotUnit { trace: trace.re });
        }
        let lowest = matrix.hermitian_eigenvalues()[0];
        if lowest < -EIGENVALUE_TOL {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
        Ok(DensityMatrix { spin, matrix })
    }

    /// `|j m><j m|`.
    pub fn pure(spin: Spin, m: Projection) -> Result<Self> {
        let k = spin
            .index_of(m.twice())
            .ok_or_else(|| spin.projection(m.twice()).unwrap_err())?;
        Ok(DensityMatrix {
            spin,
            matrix: ComplexMatrix::unit(spin.dim(), k, k),
        })
    }

    /// `|ψ><ψ|` for a non-zero vector, normalized.
    pub fn from_state_vector(spin: Spin, psi: &[Complex64]) -> Result<Self> {
        if psi.len() != spin.dim() {
            return Err(Error::Dimension {
                expected: spin.dim(),
                found: psi.len(),
            });
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(spin, ComplexMatrix::outer(&v, &v))
    }

    pub fn maximally_mixed(spin: Spin) -> Self {
        DensityMatrix {
            spin,
            matrix: ComplexMatrix::identity(spin.dim()).scale_real(1.0 / spin.dim() as f64),
        }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// What the values of a [`SymbolTable`] represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    /// A spin tomogram (a probability distribution in `m` at each node).
    Tomogram,
    /// Ordinary symbol `Tr(A U(x))`.
    Ordinary,
    /// Dual symbol `Tr(A D(x))`.
    Dual,
}

/// Values of a function on the grid `(m, node)` of a [`SphereQuadrature`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTable {
    spin: Spin,
    polar: usize,
    azimuthal: usize,
    kind: SymbolKind,
    values: Vec<Complex64>,
}

impl SymbolTable {
    /// Wraps raw values laid out as `values[m_index * nodes + node]`.
    pub fn from_values(spin: Spin, quad: &SphereQuadrature, kind: SymbolKind, values: Vec<Complex64>) -> Result<Self> {
        let expected = spin.dim() * quad.len();
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: values.len(),
            });
        }
        Ok(SymbolTable {
            spin,
            polar: quad.polar(),
            azimuthal: quad.azimuthal(),
            kind,
            values,
        })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_probability(&self) -> bool {
        self.kind == SymbolKind::Tomogram
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.polar, self.azimuthal)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nodes(&self) -> usize {
        self.polar * self.azimuthal
    }

    pub fn value(&self, m_index: usize, node: usize) -> Complex64 {
        self.values[m_index * self.nodes() + node]
    }

    /// Fails unless this table lives on `quad`.
    pub fn check_grid(&self, quad: &SphereQuadrature) -> Result<()> {
        if self.polar != quad.polar() || self.azimuthal != quad.azimuthal() {
            return Err(Error::GridMismatch(format!(
                "table is {}x{}, quadrature is {}x{}",
                self.polar,
                self.azimuthal,
                quad.polar(),
                quad.azimuthal()
            )));
        }
        Ok(())
    }

    /// Fails unless both tables share spin and grid.
    pub fn check_compatible(&self, other: &SymbolTable) -> Result<()> {
        if self.spin != other.spin || self.orders() != other.orders() {
            return Err(Error::GridMismatch(format!(
                "spin {} on {}x{} vs spin {} on {}x{}",
                self.spin, self.polar, self.azimuthal, other.spin, other.polar, other.azimuthal
            )));
        }
        Ok(())
    }

    /// Same grid, new values and kind.
    pub fn with_values(&self, kind: SymbolKind, values: Vec<Complex64>) -> SymbolTable {
        assert_eq!(values.len(), self.values.len());
        SymbolTable {
            kind,
            values,
            ..self.clone()
        }
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SymbolTable) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn table_from_operators(a: &ComplexMatrix, ops: &[ComplexMatrix]) -> Vec<Complex64> {
    ops.iter().map(|op| a.trace_product(op)).collect()
}

/// Ordinary symbols of `a` on the grid.
pub fn symbol_table(a: &ComplexMatrix, grid: &OperatorGrid, quad: &SphereQuadrature) -> Result<SymbolTable> {
    check_operator(a, grid.spin())?;
    SymbolTable::from_values(
        grid.spin(),
        quad,
        SymbolKind::Ordinary,
        table_from_operators(a, grid.dequantizers()),
    )
}

/// Dual symbols of `a` on the grid.
pub fn dual_symbol_table(a: &ComplexMatrix, grid: &OperatorGrid, quad: &SphereQuadrature) -> Result<SymbolTable> {
    check_operator(a, grid.spin())?;
    SymbolTable::from_values(
        grid.spin(),
        quad,
        SymbolKind::Dual,
        table_from_operators(a, grid.quantizers()),
    )
}

fn check_operator(a: &ComplexMatrix, spin: Spin) -> Result<()> {
    if a.dim() != spin.dim() {
        return Err(Error::Dimension {
            expected: spin.dim(),
            found: a.dim(),
        });
    }
    Ok(())
}

/// Spin tomogram `w(m, n) = Tr(ρ U(m, n))` on the quadrature grid.
pub fn tomogram(rho: &DensityMatrix, quad: &SphereQuadrature) -> Result<SymbolTable> {
    let grid = OperatorGrid::new(rho.spin(), quad);
    let values = grid
        .dequantizers()
        .iter()
        .map(|u| Complex64::new(rho.matrix().trace_product(u).re, 0.0))
        .collect();
    SymbolTable::from_values(rho.spin(), quad, SymbolKind::Tomogram, values)
}

/// `∫ f(x) dx = Σ_m Σ_nodes weight · f`.
pub fn phase_space_integrate(f: &SymbolTable, quad: &SphereQuadrature) -> Result<Complex64> {
    f.check_grid(quad)?;
    let nodes = quad.nodes();
    Ok(f.values()
        .chunks(nodes.len())
        .map(|row| row.iter().zip(nodes).map(|(v, n)| v * n.weight).sum::<Complex64>())
        .sum())
}

fn integrate_against(f: &SymbolTable, ops: &[ComplexMatrix], weights: &[f64]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(f.spin().dim());
    for ((v, op), w) in f.values().iter().zip(ops).zip(weights) {
        out.add_scaled(v * w, op);
    }
    out
}

fn prepare(f: &SymbolTable, quad: &SphereQuadrature) -> Result<OperatorGrid> {
    f.check_grid(quad)?;
    quad.check_resolves(f.spin())?;
    Ok(OperatorGrid::new(f.spin(), quad))
}

/// `A = ∫ f_A(x) D(x) dx` from ordinary symbols (or a tomogram).
pub fn operator_from_symbols(f: &SymbolTable, quad: &SphereQuadrature) -> Result<ComplexMatrix> {
    let grid = prepare(f, quad)?;
    Ok(integrate_against(f, grid.quantizers(), grid.weights()))
}

/// `A = ∫ f^d_A(x) U(x) dx` from dual symbols.
pub fn operator_from_dual_symbols(fd: &SymbolTable, quad: &SphereQuadrature) -> Result<ComplexMatrix> {
    let grid = prepare(fd, quad)?;
    Ok(integrate_against(fd, grid.dequantizers(), grid.weights()))
}

/// `ρ = ∫ w(x) D(x) dx`. Requires a quadrature that resolves the spin.
pub fn reconstruct(w: &SymbolTable, quad: &SphereQuadrature) -> Result<DensityMatrix> {
    let m = operator_from_symbols(w, quad)?;
    DensityMatrix::new(w.spin(), m)
}

/// `Tr(ρA) = ∫ w(x) f^d_A(x) dx`.
pub fn average_via_dual(w: &SymbolTable, fd: &SymbolTable, quad: &SphereQuadrature) -> Result<Complex64> {
    w.check_compatible(fd)?;
    let product = fd.with_values(
        SymbolKind::Ordinary,
        w.values().iter().zip(fd.values()).map(|(a, b)| a * b).collect(),
    );
    phase_space_integrate(&product, quad)
}
