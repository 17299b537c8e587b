//! File formats for symbol tables, density matrices and figure grids.
//!
//! Floats are written in shortest round-trip form, so every value reads back
//! bit for bit. Complex numbers are split into `re` and `im` fields.
//!
//! Symbol table, JSON:
//!
//! ```text
//! { "twice_j": 2, "polar": 4, "azimuthal": 6, "kind": "tomogram",
//!   "rows": [ { "twice_m": 2, "theta": .., "phi": .., "weight": .., "re": .., "im": .. }, .. ] }
//! ```
//!
//! Symbol table, CSV: an optional `# kind: <kind>` comment line, then the
//! header `twice_m,theta,phi,weight,re,im`. Rows run over `m` descending, then
//! polar nodes, then azimuthal nodes. The spin and the quadrature orders are
//! inferred from the rows and the nodes are checked against the rebuilt
//! quadrature.
//!
//! Density matrix, JSON: `{ "dim", "twice_j", "basis": "descending_m", "re",
//! "im" }` with `re` and `im` flat in row-major order.
//!
//! Kernel grid: JSON is the [`KernelGrid`] itself. CSV carries the fixed
//! points as `#` comment lines followed by `theta1,phi1,re,im` rows.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::figures::KernelGrid;
use crate::matrix::ComplexMatrix;
use crate::quadrature::SphereQuadrature;
use crate::spin::Spin;
use crate::tomography::{DensityMatrix, SymbolKind, SymbolTable};

/// Tolerance when matching file nodes against a rebuilt quadrature.
pub const NODE_TOL: f64 = 1e-12;

pub const BASIS_TAG: &str = "descending_m";

fn format_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolRow {
    pub twice_m: i32,
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SymbolFile {
    twice_j: u32,
    polar: usize,
    azimuthal: usize,
    kind: SymbolKind,
    rows: Vec<SymbolRow>,
}

/// Rows of `table` in file order.
pub fn symbol_rows(table: &SymbolTable, quad: &SphereQuadrature) -> Result<Vec<SymbolRow>> {
    table.check_grid(quad)?;
    let spin = table.spin();
    let mut rows = Vec::with_capacity(table.values().len());
    for i in 0..spin.dim() {
        for (b, node) in quad.nodes().iter().enumerate() {
            let v = table.value(i, b);
            rows.push(SymbolRow {
                twice_m: spin.twice_m_at(i),
                theta: node.axis.theta(),
                phi: node.axis.phi(),
                weight: node.weight,
                re: v.re,
                im: v.im,
            });
        }
    }
    Ok(rows)
}

/// Rebuilds a table from rows on `quad`, checking every node.
fn table_from_rows(spin: Spin, quad: &SphereQuadrature, kind: SymbolKind, rows: &[SymbolRow]) -> Result<SymbolTable> {
    let nodes = quad.nodes();
    let expected = spin.dim() * nodes.len();
    if rows.len() != expected {
        return Err(Error::Dimension {
            expected,
            found: rows.len(),
        });
    }
    for (idx, r) in rows.iter().enumerate() {
        let tm = spin.twice_m_at(idx / nodes.len());
        let node = &nodes[idx % nodes.len()];
        let off = (r.theta - node.axis.theta())
            .abs()
            .max((r.phi - node.axis.phi()).abs())
            .max((r.weight - node.weight).abs());
        if r.twice_m != tm || off > NODE_TOL {
            return Err(Error::GridMismatch(format!(
                "row {idx} (2m = {}, theta = {}, phi = {}) does not match the {}x{} quadrature",
                r.twice_m,
                r.theta,
                r.phi,
                quad.polar(),
                quad.azimuthal()
            )));
        }
    }
    let values = rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
    SymbolTable::from_values(spin, quad, kind, values)
}

/// Spin and orders from the rows: `2j` is the largest `2m`, the polar order
/// is the number of distinct `θ`.
fn infer_grid(rows: &[SymbolRow]) -> Result<(Spin, SphereQuadrature)> {
    let first = rows
        .first()
        .ok_or_else(|| Error::Format("symbol table has no rows".into()))?;
    if first.twice_m < 0 {
        return Err(Error::Format(format!("first row has 2m = {}", first.twice_m)));
    }
    let spin = Spin::from_twice(first.twice_m as u32);
    let per_m = rows.len() / spin.dim();
    if per_m == 0 || per_m * spin.dim() != rows.len() {
        return Err(Error::Format(format!(
            "{} rows do not split into {} projections",
            rows.len(),
            spin.dim()
        )));
    }
    let mut polar = 1;
    for w in rows[..per_m].windows(2) {
        if w[1].theta != w[0].theta {
            polar += 1;
        }
    }
    if !per_m.is_multiple_of(polar) {
        return Err(Error::Format(format!(
            "{per_m} nodes per projection over {polar} polar rings"
        )));
    }
    Ok((spin, SphereQuadrature::new(polar, per_m / polar)?))
}

pub fn write_symbol_table_json<W: Write>(table: &SymbolTable, quad: &SphereQuadrature, out: W) -> Result<()> {
    let file = SymbolFile {
        twice_j: table.spin().twice(),
        polar: quad.polar(),
        azimuthal: quad.azimuthal(),
        kind: table.kind(),
        rows: symbol_rows(table, quad)?,
    };
    serde_json::to_writer_pretty(out, &file).map_err(format_err)
}

/// Reads a JSON table and the quadrature it lives on.
pub fn read_symbol_table_json<R: Read>(input: R) -> Result<(SymbolTable, SphereQuadrature)> {
    let file: SymbolFile = serde_json::from_reader(input).map_err(format_err)?;
    let spin = Spin::from_twice(file.twice_j);
    let quad = SphereQuadrature::new(file.polar, file.azimuthal)?;
    let table = table_from_rows(spin, &quad, file.kind, &file.rows)?;
    Ok((table, quad))
}

fn kind_name(kind: SymbolKind) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub fn write_symbol_table_csv<W: Write>(table: &SymbolTable, quad: &SphereQuadrature, mut out: W) -> Result<()> {
    writeln!(out, "# kind: {}", kind_name(table.kind())).map_err(format_err)?;
    let mut w = csv::Writer::from_writer(out);
    for row in symbol_rows(table, quad)? {
        w.serialize(row).map_err(format_err)?;
    }
    w.flush().map_err(format_err)
}

/// Reads a CSV table. Without a `# kind:` line the table is taken as a
/// tomogram.
pub fn read_symbol_table_csv<R: Read>(mut input: R) -> Result<(SymbolTable, SphereQuadrature)> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(format_err)?;
    let mut kind = SymbolKind::Tomogram;
    for line in text.lines().filter_map(|l| l.strip_prefix('#')) {
        if let Some(k) = line.trim().strip_prefix("kind:") {
            kind = serde_json::from_value(serde_json::Value::String(k.trim().to_owned()))
                .map_err(|_| Error::Format(format!("unknown symbol kind `{}`", k.trim())))?;
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<SymbolRow>, _>>()
        .map_err(format_err)?;
    let (spin, quad) = infer_grid(&rows)?;
    let table = table_from_rows(spin, &quad, kind, &rows)?;
    Ok((table, quad))
}

/// Reads either format, choosing JSON when the first non-blank byte is `{`.
pub fn read_symbol_table<R: Read>(mut input: R) -> Result<(SymbolTable, SphereQuadrature)> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(format_err)?;
    match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
        Some(b'{') => read_symbol_table_json(bytes.as_slice()),
        _ => read_symbol_table_csv(bytes.as_slice()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixFile {
    pub dim: usize,
    pub twice_j: u32,
    pub basis: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl DensityMatrixFile {
    pub fn from_matrix(spin: Spin, m: &ComplexMatrix) -> Self {
        DensityMatrixFile {
            dim: m.dim(),
            twice_j: spin.twice(),
            basis: BASIS_TAG.to_owned(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        }
    }

    /// The raw matrix after checking shape and basis tag, but not positivity.
    pub fn matrix(&self) -> Result<(Spin, ComplexMatrix)> {
        if self.basis != BASIS_TAG {
            return Err(Error::Format(format!(
                "basis `{}` is not supported; expected `{BASIS_TAG}`",
                self.basis
            )));
        }
        let spin = Spin::from_twice(self.twice_j);
        if self.dim != spin.dim() {
            return Err(Error::Dimension {
                expected: spin.dim(),
                found: self.dim,
            });
        }
        let n = self.dim * self.dim;
        for len in [self.re.len(), self.im.len()] {
            if len != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: len,
                });
            }
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let m = ComplexMatrix::from_row_major(self.dim, data).expect("length checked");
        Ok((spin, m))
    }
}

pub fn write_density_matrix_json<W: Write>(rho: &DensityMatrix, out: W) -> Result<()> {
    let file = DensityMatrixFile::from_matrix(rho.spin(), rho.matrix());
    serde_json::to_writer_pretty(out, &file).map_err(format_err)
}

/// Reads and validates a density matrix.
pub fn read_density_matrix_json<R: Read>(input: R) -> Result<DensityMatrix> {
    let file: DensityMatrixFile = serde_json::from_reader(input).map_err(format_err)?;
    let (spin, m) = file.matrix()?;
    DensityMatrix::new(spin, m)
}

pub fn write_kernel_grid_json<W: Write>(grid: &KernelGrid, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, grid).map_err(format_err)
}

pub fn read_kernel_grid_json<R: Read>(input: R) -> Result<KernelGrid> {
    serde_json::from_reader(input).map_err(format_err)
}

pub fn write_kernel_grid_csv<W: Write>(grid: &KernelGrid, mut out: W) -> Result<()> {
    let mut meta = format!(
        "# figure: {}\n# twice_j: {}\n# kernel: {}\n",
        grid.figure,
        grid.twice_j,
        serde_json::to_value(grid.kernel)
            .map_err(format_err)?
            .as_str()
            .unwrap_or_default()
    );
    for p in &grid.fixed {
        meta += &format!(
            "# {}: twice_m = {}, axis = ({}, {}, {})\n",
            p.label, p.twice_m, p.axis[0], p.axis[1], p.axis[2]
        );
    }
    meta += &format!(
        "# x1: twice_m = {}, grid = {}x{}\n",
        grid.twice_m1, grid.polar_points, grid.azimuthal_points
    );
    out.write_all(meta.as_bytes()).map_err(format_err)?;
    let mut w = csv::Writer::from_writer(out);
    for row in &grid.rows {
        w.serialize(row).map_err(format_err)?;
    }
    w.flush().map_err(format_err)
}
