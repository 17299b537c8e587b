use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("projection 2m = {twice_m} has the wrong parity for spin 2j = {twice_j}")]
    Parity { twice_j: u32, twice_m: i32 },

    #[error("projection 2m = {twice_m} lies outside spin 2j = {twice_j}")]
    ProjectionOutOfRange { twice_j: u32, twice_m: i32 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace} instead of 1")]
    TraceNotUnit { trace: f64 },

    #[error("matrix has negative eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error(
        "quadrature ({polar} x {azimuthal}) is under-resolved for spin 2j = {twice_j}; \
         need polar >= {min_polar} and azimuthal >= {min_azimuthal}"
    )]
    UnderResolved {
        twice_j: u32,
        polar: usize,
        azimuthal: usize,
        min_polar: usize,
        min_azimuthal: usize,
    },

    #[error("quadrature orders must be positive")]
    EmptyQuadrature,

    #[error("value {value} outside the domain [-1, 1]")]
    Domain { value: f64 },

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
