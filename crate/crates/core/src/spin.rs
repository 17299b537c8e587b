//! Spin quantum numbers in doubled-integer form.
//!
//! `j` and `m` are half-integers, so they are stored as `2j` and `2m`.
//! Every matrix in the crate is indexed by the basis `|j, j>, |j, j-1>, ...,
//! |j, -j>`: row/column `i` holds the state with `2m = 2j - 2i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A spin `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spin {
    twice_j: u32,
}

impl Spin {
    pub const ZERO: Spin = Spin { twice_j: 0 };
    pub const HALF: Spin = Spin { twice_j: 1 };
    pub const ONE: Spin = Spin { twice_j: 2 };

    pub const fn from_twice(twice_j: u32) -> Self {
        Spin { twice_j }
    }

    pub const fn twice(self) -> u32 {
        self.twice_j
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    /// Hilbert space dimension `2j + 1`.
    pub const fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.twice_j % 2 == 1
    }

    /// `floor(j)`.
    pub fn floor(self) -> u32 {
        self.twice_j / 2
    }

    /// Spin one half-step up.
    pub fn raised(self) -> Spin {
        Spin::from_twice(self.twice_j + 1)
    }

    pub fn lowered(self) -> Option<Spin> {
        self.twice_j.checked_sub(1).map(Spin::from_twice)
    }

    /// Whether `2m` has the parity of `2j` (in or out of range).
    pub fn parity_matches(self, twice_m: i32) -> bool {
        (i64::from(self.twice_j) - i64::from(twice_m)).rem_euclid(2) == 0
    }

    pub fn contains(self, twice_m: i32) -> bool {
        self.parity_matches(twice_m) && twice_m.unsigned_abs() <= self.twice_j
    }

    /// Basis index of `2m`, or `None` when it is not a state of this spin.
    pub fn index_of(self, twice_m: i32) -> Option<usize> {
        if self.contains(twice_m) {
            Some(((self.twice_j as i32 - twice_m) / 2) as usize)
        } else {
            None
        }
    }

    /// `2m` of the basis state at `index`.
    pub fn twice_m_at(self, index: usize) -> i32 {
        self.twice_j as i32 - 2 * index as i32
    }

    /// Validated projection of this spin.
    pub fn projection(self, twice_m: i32) -> Result<Projection> {
        if !self.parity_matches(twice_m) {
            return Err(Error::Parity {
                twice_j: self.twice_j,
                twice_m,
            });
        }
        if twice_m.unsigned_abs() > self.twice_j {
            return Err(Error::ProjectionOutOfRange {
                twice_j: self.twice_j,
                twice_m,
            });
        }
        Ok(Projection::from_twice(twice_m))
    }

    /// All projections in basis order (`m = j` first).
    pub fn projections(self) -> impl DoubleEndedIterator<Item = Projection> + ExactSizeIterator {
        (0..self.dim()).map(move |i| Projection::from_twice(self.twice_m_at(i)))
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// A spin projection `m`, stored as `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Projection {
    twice_m: i32,
}

impl Projection {
    pub const fn from_twice(twice_m: i32) -> Self {
        Projection { twice_m }
    }

    pub const fn twice(self) -> i32 {
        self.twice_m
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_m) / 2.0
    }

    /// `m + shift` for an integer shift.
    pub fn shifted(self, shift: i32) -> Projection {
        Projection::from_twice(self.twice_m + 2 * shift)
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_m % 2 == 0 {
            write!(f, "{}", self.twice_m / 2)
        } else {
            write!(f, "{}/2", self.twice_m)
        }
    }
}
