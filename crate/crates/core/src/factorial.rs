//! Exact factorials and factorial ratios.
//!
//! Factorials up to 34! fit in a `u128`. Ratios of factorial products are
//! formed exactly in integers whenever the products fit and converted to
//! `f64` once; otherwise the ratio falls back to summed log-factorials.

/// Largest `n` with `n!` representable in a `u128`.
pub const MAX_EXACT: usize = 34;

const TABLE: [u128; MAX_EXACT + 1] = {
    let mut t = [1u128; MAX_EXACT + 1];
    let mut i = 1;
    while i <= MAX_EXACT {
        t[i] = t[i - 1] * i as u128;
        i += 1;
    }
    t
};

/// `n!` as an exact integer, `None` beyond the table.
pub fn exact(n: usize) -> Option<u128> {
    TABLE.get(n).copied()
}

pub fn ln_factorial(n: usize) -> f64 {
    if n <= MAX_EXACT {
        return (TABLE[n] as f64).ln();
    }
    (MAX_EXACT + 1..=n).fold((TABLE[MAX_EXACT] as f64).ln(), |acc, k| acc + (k as f64).ln())
}

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    match exact(n) {
        Some(v) => v as f64,
        None => ln_factorial(n).exp(),
    }
}

fn exact_product(args: &[usize]) -> Option<u128> {
    args.iter()
        .try_fold(1u128, |acc, &n| exact(n).and_then(|f| acc.checked_mul(f)))
}

/// `Π num_i! / Π den_i!`, evaluated exactly where possible.
pub fn ratio(num: &[usize], den: &[usize]) -> f64 {
    if let (Some(n), Some(d)) = (exact_product(num), exact_product(den)) {
        return exact_ratio(n, d);
    }
    let ln: f64 = num.iter().map(|&n| ln_factorial(n)).sum::<f64>() - den.iter().map(|&n| ln_factorial(n)).sum::<f64>();
    ln.exp()
}

fn exact_ratio(mut n: u128, mut d: u128) -> f64 {
    let g = gcd(n, d);
    n /= g;
    d /= g;
    n as f64 / d as f64
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `sqrt(Π num_i!) / Π den_i!`, the shape of every Racah-type sum term.
pub fn sqrt_over(num: &[usize], den: &[usize]) -> f64 {
    if let (Some(n), Some(d)) = (exact_product(num), exact_product(den)) {
        return (n as f64).sqrt() / d as f64;
    }
    let ln: f64 =
        0.5 * num.iter().map(|&n| ln_factorial(n)).sum::<f64>() - den.iter().map(|&n| ln_factorial(n)).sum::<f64>();
    ln.exp()
}
