//! Parsing of axes and projections given on the command line.

use anyhow::{bail, Context, Result};
use spintomo::UnitAxis;

/// Cartesian input further than this from unit length triggers a warning.
pub const NORM_WARN: f64 = 1e-10;

/// `"theta,phi"` (radians, or degrees when `degrees`) or `"x,y,z"`.
pub fn parse_axis(text: &str, degrees: bool) -> Result<UnitAxis> {
    let parts = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("malformed axis `{text}`"))?;
    match *parts.as_slice() {
        [theta, phi] => {
            let scale = if degrees { std::f64::consts::PI / 180.0 } else { 1.0 };
            Ok(UnitAxis::new(theta * scale, phi * scale)?)
        }
        [x, y, z] => {
            let r = (x * x + y * y + z * z).sqrt();
            if (r - 1.0).abs() > NORM_WARN {
                eprintln!("warning: axis `{text}` has length {r}; normalizing");
            }
            Ok(UnitAxis::from_cartesian([x, y, z])?)
        }
        _ => bail!("axis `{text}` needs 2 angles or 3 Cartesian components"),
    }
}

/// `"m3,m2,m1"` as doubled projections.
pub fn parse_twice_m(text: &str) -> Result<[i32; 3]> {
    let parts = text
        .split(',')
        .map(|s| s.trim().parse::<i32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("malformed projections `{text}`; expected three doubled integers"))?;
    match parts.as_slice() {
        &[a, b, c] => Ok([a, b, c]),
        _ => bail!("projections `{text}` need exactly three values"),
    }
}
