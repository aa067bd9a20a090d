//! Geodesic sphere areas and ball volumes.

use super::functions::{cn, sn};
use crate::error::{Error, Result};
use crate::numerics::adaptive_simpson;

/// Total measure of the unit n-sphere in R^{n+1}: |S^0| = 2, |S^1| = 2 pi,
/// and |S^n| = 2 pi |S^{n-2}|/(n-1).
pub fn unit_sphere_measure(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI * unit_sphere_measure(n - 2) / (n as f64 - 1.0),
    }
}

fn check_radius(c: f64, m: usize, r: f64) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid(format!("dimension m = {m} must be >= 2")));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::invalid(format!("radius {r} must be non-negative")));
    }
    if c > 0.0 && r > std::f64::consts::PI / c.sqrt() + 1e-12 {
        return Err(Error::invalid(format!(
            "radius {r} exceeds the model diameter pi/sqrt(c)"
        )));
    }
    Ok(())
}

/// (m-1)-measure of the geodesic sphere of radius r in the m-dimensional
/// model space: |S^{m-1}| sn_c(r)^{m-1}.
pub fn sphere_area(c: f64, m: usize, r: f64) -> Result<f64> {
    check_radius(c, m, r)?;
    Ok(unit_sphere_measure(m - 1) * sn(c, r).powi(m as i32 - 1))
}

/// m-measure of the geodesic ball of radius r: the integral of the sphere
/// area from 0 to r. Closed forms for m = 2, 3; adaptive quadrature above.
pub fn ball_volume(c: f64, m: usize, r: f64) -> Result<f64> {
    check_radius(c, m, r)?;
    let omega = unit_sphere_measure(m - 1);
    if c == 0.0 {
        return Ok(omega * r.powi(m as i32) / m as f64);
    }
    match m {
        2 => Ok(omega * (1.0 - cn(c, r)) / c),
        3 => Ok(omega * (r - sn(c, r) * cn(c, r)) / (2.0 * c)),
        _ => Ok(adaptive_simpson(
            &|t: f64| omega * sn(c, t).powi(m as i32 - 1),
            0.0,
            r,
            1e-12 * omega * r.max(1.0),
        )),
    }
}
