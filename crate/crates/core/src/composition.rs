//! Composition of three axis-angle rotations, Chebyshev polynomials of the
//! second kind and the SU(2) irrep character.
//!
//! Three successive rotations `exp(-i(n3·J)φ3) exp(-i(n2·J)φ2) exp(-i(n1·J)φ1)`
//! equal a single rotation by `Φ` about `𝔑`. Both are returned through their
//! half-angle data `cos(Φ/2)` and `𝔑 sin(Φ/2)`, never through `Φ` itself, so
//! no inverse trigonometric branch is ever taken.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cross, dot, triple, UnitAxis, Vec3};
use crate::spin::Spin;

/// Tolerance on `|cos(Φ/2)| - 1` before a value counts as out of domain.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Three rotations applied in the order 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationTriple {
    pub axes: [UnitAxis; 3],
    pub angles: [f64; 3],
}

struct HalfAngles {
    c: [f64; 3],
    s: [f64; 3],
}

impl RotationTriple {
    pub fn new(axes: [UnitAxis; 3], angles: [f64; 3]) -> Self {
        RotationTriple { axes, angles }
    }

    fn half_angles(&self) -> HalfAngles {
        let mut c = [0.0; 3];
        let mut s = [0.0; 3];
        for k in 0..3 {
            let (sk, ck) = (self.angles[k] / 2.0).sin_cos();
            c[k] = ck;
            s[k] = sk;
        }
        HalfAngles { c, s }
    }
}

/// `cos(Φ/2)` of the composed rotation. Fails if roundoff pushed the value
/// beyond `±(1 + DOMAIN_SLACK)`, which cannot happen for unit axes.
pub fn compose_cos_half_angle(t: &RotationTriple) -> Result<f64> {
    let v = cos_half_angle_unclamped(t);
    if v.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain { value: v });
    }
    Ok(v.clamp(-1.0, 1.0))
}

fn cos_half_angle_unclamped(t: &RotationTriple) -> f64 {
    let HalfAngles { c, s } = t.half_angles();
    let [n1, n2, n3] = t.axes.map(|a| *a.cartesian());
    c[0] * c[1] * c[2]
        - dot(&n1, &n2) * s[0] * s[1] * c[2]
        - dot(&n2, &n3) * c[0] * s[1] * s[2]
        - dot(&n3, &n1) * s[0] * c[1] * s[2]
        + triple(&n1, &n2, &n3) * s[0] * s[1] * s[2]
}

/// `𝔑 sin(Φ/2)` of the composed rotation.
pub fn compose_axis_times_sin(t: &RotationTriple) -> Vec3 {
    let HalfAngles { c, s } = t.half_angles();
    let [n1, n2, n3] = t.axes.map(|a| *a.cartesian());
    let d12 = dot(&n1, &n2);
    let d13 = dot(&n1, &n3);
    let d23 = dot(&n2, &n3);
    let x12 = cross(&n1, &n2);
    let x23 = cross(&n2, &n3);
    let x13 = cross(&n1, &n3);
    let sss = s[0] * s[1] * s[2];
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = n1[i] * s[0] * c[1] * c[2] + n2[i] * c[0] * s[1] * c[2] + n3[i] * c[0] * c[1] * s[2]
            - (n1[i] * d23 - n2[i] * d13 + n3[i] * d12) * sss
            - x12[i] * s[0] * s[1] * c[2]
            - x23[i] * c[0] * s[1] * s[2]
            - x13[i] * s[0] * c[1] * s[2];
    }
    out
}

/// Chebyshev polynomial of the second kind `U_n(x)` by the three-term
/// recurrence `U_{n+1} = 2x U_n - U_{n-1}`.
pub fn chebyshev_u(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Character `χ_j = Σ_m e^{imΦ} = U_{2j}(cos(Φ/2))`.
pub fn character(spin: Spin, cos_half_angle: f64) -> Result<f64> {
    if !cos_half_angle.is_finite() || cos_half_angle.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain { value: cos_half_angle });
    }
    Ok(chebyshev_u(spin.twice(), cos_half_angle.clamp(-1.0, 1.0)))
}
