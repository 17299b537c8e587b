//! Clebsch-Gordan coefficients, Wigner 3j and 6j symbols and Wigner D
//! elements.
//!
//! All angular momenta and projections are passed doubled (`2j`, `2m`).
//! Arguments violating a triangle or projection selection rule give 0; the
//! kernel sums sweep over every `(L, M)` and rely on that.
//!
//! Each Racah sum term is formed from exact integer factorials and converted
//! to a float once. Terms are added in order of decreasing magnitude.

use num_complex::Complex64;

use crate::factorial;
use crate::su2::small_d_element;

fn valid_projection(tj: i32, tm: i32) -> bool {
    tj >= 0 && tm.abs() <= tj && (tj - tm) % 2 == 0
}

/// Triangle condition on doubled momenta, including integer perimeter.
pub fn triangle(ta: i32, tb: i32, tc: i32) -> bool {
    ta >= 0 && tb >= 0 && tc >= 0 && tc <= ta + tb && tc >= (ta - tb).abs() && (ta + tb + tc) % 2 == 0
}

fn sum_by_magnitude(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    terms.into_iter().sum()
}

fn half(x: i32) -> usize {
    debug_assert!(x >= 0 && x % 2 == 0);
    (x / 2) as usize
}

/// `<j1 m1; j2 m2 | j m>` in the Condon-Shortley convention.
pub fn clebsch_gordan(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32) -> f64 {
    if tm1 + tm2 != tm
        || !valid_projection(tj1, tm1)
        || !valid_projection(tj2, tm2)
        || !valid_projection(tj, tm)
        || !triangle(tj1, tj2, tj)
    {
        return 0.0;
    }
    let numer = [
        half(tj1 + tj2 - tj),
        half(tj1 - tj2 + tj),
        half(-tj1 + tj2 + tj),
        half(tj + tm),
        half(tj - tm),
        half(tj1 - tm1),
        half(tj1 + tm1),
        half(tj2 - tm2),
        half(tj2 + tm2),
    ];
    let norm = factorial::factorial(half(tj1 + tj2 + tj) + 1).sqrt();
    let weight = f64::from(tj + 1).sqrt();

    // k runs over all values keeping every factorial argument non-negative.
    let a = half(tj1 + tj2 - tj) as i32;
    let b = half(tj1 - tm1) as i32;
    let c = half(tj2 + tm2) as i32;
    let d = (tj - tj2 + tm1) / 2;
    let e = (tj - tj1 - tm2) / 2;
    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut terms = Vec::new();
    for k in k_min..=k_max {
        let den = [
            k as usize,
            (a - k) as usize,
            (b - k) as usize,
            (c - k) as usize,
            (d + k) as usize,
            (e + k) as usize,
        ];
        let t = factorial::sqrt_over(&numer, &den) / norm;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(sign * t);
    }
    weight * sum_by_magnitude(terms)
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner_3j(tj: [i32; 3], tm: [i32; 3]) -> f64 {
    if tm[0] + tm[1] + tm[2] != 0 || !triangle(tj[0], tj[1], tj[2]) {
        return 0.0;
    }
    let cg = clebsch_gordan(tj[0], tm[0], tj[1], tm[1], tj[2], -tm[2]);
    if cg == 0.0 {
        return 0.0;
    }
    // (-1)^{j1 - j2 - m3}; the exponent is an integer.
    let phase_exp = (tj[0] - tj[1] - tm[2]) / 2;
    let sign = if phase_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * cg / f64::from(tj[2] + 1).sqrt()
}

/// `Δ(abc) = sqrt((a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!)` as factorial
/// arguments (numerator list, denominator argument).
fn delta_args(ta: i32, tb: i32, tc: i32) -> ([usize; 3], usize) {
    (
        [half(ta + tb - tc), half(ta - tb + tc), half(-ta + tb + tc)],
        half(ta + tb + tc) + 1,
    )
}

/// Wigner 6j symbol `{a b c; d e f}` by the Racah formula.
pub fn wigner_6j(top: [i32; 3], bottom: [i32; 3]) -> f64 {
    let [a, b, c] = top;
    let [d, e, f] = bottom;
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if !triads.iter().all(|&(x, y, z)| triangle(x, y, z)) {
        return 0.0;
    }
    let mut sqrt_num = Vec::with_capacity(12);
    let mut sqrt_den = Vec::with_capacity(4);
    for &(x, y, z) in &triads {
        let (n, dd) = delta_args(x, y, z);
        sqrt_num.extend_from_slice(&n);
        sqrt_den.push(dd);
    }
    let pre = factorial::sqrt_over(&sqrt_num, &[]) / factorial::sqrt_over(&sqrt_den, &[]);

    let sums: Vec<i32> = triads.iter().map(|&(x, y, z)| (x + y + z) / 2).collect();
    let pairs = [(a + b + d + e) / 2, (a + c + d + f) / 2, (b + c + e + f) / 2];
    let t_min = *sums.iter().max().expect("four triads");
    let t_max = *pairs.iter().min().expect("three pairs");
    let mut terms = Vec::new();
    for t in t_min..=t_max {
        let mut den: Vec<usize> = sums.iter().map(|&s| (t - s) as usize).collect();
        den.extend(pairs.iter().map(|&p| (p - t) as usize));
        let term = factorial::ratio(&[(t + 1) as usize], &den);
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(sign * term);
    }
    pre * sum_by_magnitude(terms)
}

/// `D^{(L)}_{m'm}(α, β, γ) = e^{-im'α} e^{-imγ} d^{(L)}_{m'm}(β)`.
pub fn wigner_d_element(twice_l: u32, twice_mp: i32, twice_m: i32, alpha: f64, beta: f64, gamma: f64) -> Complex64 {
    let d = small_d_element(twice_l, twice_mp, twice_m, beta);
    let phase = -(f64::from(twice_mp) * alpha + f64::from(twice_m) * gamma) / 2.0;
    Complex64::from_polar(d, phase)
}
