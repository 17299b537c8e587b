//! Spin-tomographic quantization for arbitrary spin `j`.
//!
//! A qudit state is described by its spin tomogram `w(m, n)`, the probability
//! of measuring projection `m` along the axis `n`. Operators map to functions
//! on the phase space `x = (m, n)` through a dequantizer `U(x)` and back
//! through a quantizer `D(x)`. Operator products become a non-local
//! star-product of symbols, whose three-point kernel `Tr(D D U)` is computed
//! here in several independent ways:
//!
//! * by direct matrix traces ([`kernels::kernel_trace`]),
//! * by an explicit finite sum that comes from Fourier-transforming the SU(2)
//!   character written as a Chebyshev polynomial ([`kernels::kernel_explicit`]),
//! * through Clebsch-Gordan and Racah coefficients ([`equivalence::kernel_cg`]),
//! * by a recurrence in the spin ([`kernels::RecurrenceKernel`]).
//!
//! All matrices use the basis `|j, j>, |j, j-1>, ..., |j, -j>` (descending
//! projection) and half-integers are stored doubled, see [`spin`].

pub mod composition;
pub mod coupling;
pub mod equivalence;
pub mod error;
pub mod factorial;
pub mod figures;
pub mod geometry;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod quadrature;
pub mod random;
pub mod spin;
pub mod su2;
pub mod tomography;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::UnitAxis;
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use quadrature::SphereQuadrature;
pub use spin::{Projection, Spin};
pub use tomography::{DensityMatrix, PhasePoint, SymbolTable};
