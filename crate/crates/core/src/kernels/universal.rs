//! The universal sums `T_j` (three points) and `Q_j` (two points) from which
//! all closed-form kernels are assembled by choosing the shift arguments.
//!
//! A term of `T_j` is indexed by `k ∈ [0, ⌊j⌋]` and a weak composition
//! `p1 + ... + p8 = 2j - 2k`:
//!
//! ```text
//! (-1)^k (2j-k)! / (k! Πp!) · 2^{p1 - p5 - p6 - p7 - 2 p8}
//!   · (1 + n2·n3)^{p5} (1 + n3·n1)^{p6} (1 + n1·n2)^{p7} c^{p8}
//!   · B(r1, q1 - p1 - p2 - p4 - p5) B(r2, q2 - p1 - p2 - p3 - p6) B(r3, q3 - p1 - p3 - p4 - p7)
//! ```
//!
//! with `c = 1 + n1·n2 + n2·n3 + n3·n1 - i n1·(n2×n3)`,
//! `r_i = -j - m_i - s_i + k - 1`, `q_i = j - m_i - s_i - k` and `B` the
//! generalized binomial. The whole sum carries `Π 1/(1 - 3 s_i²)`.
//!
//! Terms sharing `k` and the three binomial offsets are grouped: their
//! geometric weights are summed once per axes triple, and a shift sum over
//! `s_i` factorizes per point.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{binomial_real, CompensatedSum, KernelAxes, KernelPoint};
use crate::factorial;
use crate::spin::Spin;
use crate::tomography::{PhasePoint, QUANTIZER_SHIFTS};

/// Shift values `s` with their weights, summed over at one point.
pub type ShiftSum<'a> = &'a [(i32, f64)];

/// `Σ_{s=-1}^{1} (·)/(1 - 3s²)`, the quantizer content.
pub const FULL_SHIFTS: ShiftSum<'static> = &QUANTIZER_SHIFTS;
/// `s = 0` only, the dequantizer content.
pub const NO_SHIFT: ShiftSum<'static> = &[(0, 1.0)];

fn shift_weight(s: i32) -> f64 {
    1.0 / (1.0 - 3.0 * f64::from(s * s))
}

/// Weak compositions of `total` into `parts` non-negative parts.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_{(s, c)} c · B(r, q)` at one point.
///
/// `twice_j` and `twice_m` share parity, so `r` and `q` are integers.
pub(crate) fn point_factor(twice_j: i32, twice_m: i32, k: i32, offset: i32, shifts: ShiftSum) -> f64 {
    let mut acc = 0.0;
    for &(s, c) in shifts {
        let q = (twice_j - twice_m) / 2 - s - k - offset;
        if q < 0 {
            continue;
        }
        let r = -(twice_j + twice_m) / 2 - s + k - 1;
        acc += c * binomial_real(f64::from(r), i64::from(q));
    }
    acc
}

/// Terms keyed by `(k, shift offsets)` while tables are built.
type Grouped<const N: usize, P> = BTreeMap<(i32, [i32; N]), Vec<(f64, P)>>;

#[derive(Debug, Clone, Copy)]
struct Term {
    k: usize,
    p: [usize; 8],
    coef: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Group {
    pub(crate) k: i32,
    /// Binomial offsets at `(x3, x2, x1)`.
    pub(crate) offsets: [i32; 3],
    /// `(coefficient, [p5, p6, p7, p8])`.
    members: Vec<(f64, [usize; 4])>,
}

/// All terms of `T_j` for one spin, grouped for fast evaluation.
#[derive(Debug, Clone)]
pub struct CompositionTable {
    spin: Spin,
    terms: Vec<Term>,
    groups: Vec<Group>,
}

impl CompositionTable {
    pub fn new(spin: Spin) -> Self {
        let tj = spin.twice() as usize;
        let mut terms = Vec::new();
        for k in 0..=tj / 2 {
            for p in compositions(tj - 2 * k, 8) {
                let mut den = vec![k];
                den.extend_from_slice(&p);
                let power = p[0] as i32 - (p[4] + p[5] + p[6] + 2 * p[7]) as i32;
                let coef = sign(k) * factorial::ratio(&[tj - k], &den) * 2f64.powi(power);
                let mut arr = [0; 8];
                arr.copy_from_slice(&p);
                terms.push(Term { k, p: arr, coef });
            }
        }
        let mut grouped: Grouped<3, [usize; 4]> = BTreeMap::new();
        for t in &terms {
            let p = t.p;
            let offsets = [
                (p[0] + p[2] + p[3] + p[6]) as i32,
                (p[0] + p[1] + p[2] + p[5]) as i32,
                (p[0] + p[1] + p[3] + p[4]) as i32,
            ];
            grouped
                .entry((t.k as i32, offsets))
                .or_default()
                .push((t.coef, [p[4], p[5], p[6], p[7]]));
        }
        let groups = grouped
            .into_iter()
            .map(|((k, offsets), members)| Group { k, offsets, members })
            .collect();
        CompositionTable { spin, terms, groups }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// Number of `(k, p)` terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub(crate) fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Geometric weight of every group at one axes triple.
    pub fn weights(&self, axes: &KernelAxes) -> Vec<Complex64> {
        let n = self.spin.twice() as usize + 1;
        let powers = |base: Complex64| {
            let mut v = Vec::with_capacity(n);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..n {
                v.push(acc);
                acc *= base;
            }
            v
        };
        let p5 = powers(Complex64::new(1.0 + axes.d23, 0.0));
        let p6 = powers(Complex64::new(1.0 + axes.d31, 0.0));
        let p7 = powers(Complex64::new(1.0 + axes.d12, 0.0));
        let p8 = powers(axes.complex_factor());
        self.groups
            .iter()
            .map(|g| {
                let mut acc = CompensatedSum::new();
                for &(c, [a, b, cc, d]) in &g.members {
                    acc.add(p5[a] * p6[b] * p7[cc] * p8[d] * c);
                }
                acc.value()
            })
            .collect()
    }

    /// `Σ_g W_g Π_i F_i` with per-point shift sums, points ordered
    /// `(x3, x2, x1)`.
    pub fn sum(&self, weights: &[Complex64], twice_m: [i32; 3], shifts: [ShiftSum; 3]) -> Complex64 {
        let tj = self.spin.twice() as i32;
        let mut acc = CompensatedSum::new();
        for (g, w) in self.groups.iter().zip(weights) {
            let f1 = point_factor(tj, twice_m[2], g.k, g.offsets[2], shifts[2]);
            if f1 == 0.0 {
                continue;
            }
            let f2 = point_factor(tj, twice_m[1], g.k, g.offsets[1], shifts[1]);
            if f2 == 0.0 {
                continue;
            }
            let f3 = point_factor(tj, twice_m[0], g.k, g.offsets[0], shifts[0]);
            acc.add(w * (f1 * f2 * f3));
        }
        acc.value()
    }

    /// `T_j` summed term by term with no grouping.
    pub fn evaluate_literal(&self, axes: &KernelAxes, twice_m: [i32; 3], s: [i32; 3]) -> Complex64 {
        self.literal(axes, twice_m, s, false)
    }

    fn literal(&self, axes: &KernelAxes, twice_m: [i32; 3], s: [i32; 3], reduced: bool) -> Complex64 {
        let tj = self.spin.twice() as i32;
        let c8 = axes.complex_factor();
        let mut acc = CompensatedSum::new();
        for t in &self.terms {
            let [p1, p2, p3, p4, p5, p6, p7, p8] = t.p;
            if reduced && (p2 | p5 | p6 | p8) != 0 {
                continue;
            }
            let k = t.k as i32;
            let b1 = point_factor(tj, twice_m[2], k, (p1 + p2 + p4 + p5) as i32, &[(s[2], 1.0)]);
            let b2 = point_factor(tj, twice_m[1], k, (p1 + p2 + p3 + p6) as i32, &[(s[1], 1.0)]);
            let b3 = if reduced {
                1.0
            } else {
                point_factor(tj, twice_m[0], k, (p1 + p3 + p4 + p7) as i32, &[(s[0], 1.0)])
            };
            let geom = Complex64::new(
                (1.0 + axes.d23).powi(p5 as i32) * (1.0 + axes.d31).powi(p6 as i32) * (1.0 + axes.d12).powi(p7 as i32),
                0.0,
            ) * c8.powu(p8 as u32);
            acc.add(geom * (t.coef * b1 * b2 * b3));
        }
        let mut scale = shift_weight(s[1]) * shift_weight(s[2]);
        if !reduced {
            scale *= shift_weight(s[0]);
        }
        acc.value() * scale
    }
}

#[derive(Debug, Clone)]
struct PairGroup {
    k: i32,
    /// Binomial offsets at `(x2, x1)`.
    offsets: [i32; 2],
    /// `(coefficient, p4)`.
    members: Vec<(f64, usize)>,
}

/// All terms of `Q_j` for one spin.
///
/// A term is indexed by `k` and `p1 + ... + p4 = 2j - 2k`:
/// `(-1)^k (2j-k)!/(k! Πp!) 2^{p1 - p4} (1 + n1·n2)^{p4}
///  B(r1, q1 - p1 - p2) B(r2, q2 - p1 - p3)`.
#[derive(Debug, Clone)]
pub struct PairTable {
    spin: Spin,
    groups: Vec<PairGroup>,
}

impl PairTable {
    pub fn new(spin: Spin) -> Self {
        let tj = spin.twice() as usize;
        let mut grouped: Grouped<2, usize> = BTreeMap::new();
        for k in 0..=tj / 2 {
            for p in compositions(tj - 2 * k, 4) {
                let mut den = vec![k];
                den.extend_from_slice(&p);
                let coef = sign(k) * factorial::ratio(&[tj - k], &den) * 2f64.powi(p[0] as i32 - p[3] as i32);
                let offsets = [(p[0] + p[2]) as i32, (p[0] + p[1]) as i32];
                grouped.entry((k as i32, offsets)).or_default().push((coef, p[3]));
            }
        }
        let groups = grouped
            .into_iter()
            .map(|((k, offsets), members)| PairGroup { k, offsets, members })
            .collect();
        PairTable { spin, groups }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// `Σ_g W_g F_2 F_1` with per-point shift sums, points ordered `(x2, x1)`.
    pub fn sum(&self, d12: f64, twice_m: [i32; 2], shifts: [ShiftSum; 2]) -> Complex64 {
        let tj = self.spin.twice() as i32;
        let base = 1.0 + d12;
        let mut acc = CompensatedSum::new();
        for g in &self.groups {
            let f1 = point_factor(tj, twice_m[1], g.k, g.offsets[1], shifts[1]);
            if f1 == 0.0 {
                continue;
            }
            let f2 = point_factor(tj, twice_m[0], g.k, g.offsets[0], shifts[0]);
            let w: f64 = g.members.iter().map(|&(c, p4)| c * base.powi(p4 as i32)).sum();
            acc.add(Complex64::new(w * f1 * f2, 0.0));
        }
        acc.value()
    }
}

/// `T_j(x3, x2, x1; s3, s2, s1)`.
pub fn universal_t(spin: Spin, p: &KernelPoint, s: [i32; 3]) -> Complex64 {
    CompositionTable::new(spin).evaluate_literal(&p.axes(), p.twice_m(), s)
}

/// `Q_j(x2, x1; s2, s1)`.
pub fn universal_q(spin: Spin, x2: &PhasePoint, x1: &PhasePoint, s: [i32; 2]) -> Complex64 {
    let d12 = x1.axis.dot(&x2.axis);
    let shifts = [[(s[0], shift_weight(s[0]))], [(s[1], shift_weight(s[1]))]];
    PairTable::new(spin).sum(d12, [x2.m.twice(), x1.m.twice()], [&shifts[0], &shifts[1]])
}

/// `Q_j` obtained from the `T_j` code path: drop the third binomial and keep
/// only terms with `p2 = p5 = p6 = p8 = 0`.
pub fn universal_q_via_t(spin: Spin, x2: &PhasePoint, x1: &PhasePoint, s: [i32; 2]) -> Complex64 {
    let table = CompositionTable::new(spin);
    let placeholder = PhasePoint::from_twice(0, x2.axis);
    let p = KernelPoint::new(placeholder, *x2, *x1);
    table.literal(&p.axes(), p.twice_m(), [0, s[0], s[1]], true)
}
