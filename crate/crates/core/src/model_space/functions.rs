//! Generalized trigonometric functions and the characteristic radius.

use crate::error::{Error, Result};

/// Generalized sine: sin(t sqrt(c))/sqrt(c) for c > 0, t for c = 0,
/// sinh(t sqrt(-c))/sqrt(-c) for c < 0.
pub fn sn(c: f64, t: f64) -> f64 {
    if c > 0.0 {
        let k = c.sqrt();
        (k * t).sin() / k
    } else if c < 0.0 {
        let k = (-c).sqrt();
        (k * t).sinh() / k
    } else {
        t
    }
}

/// Derivative of the generalized sine: cos(t sqrt(c)), 1, or cosh(t sqrt(-c)).
pub fn cn(c: f64, t: f64) -> f64 {
    if c > 0.0 {
        (c.sqrt() * t).cos()
    } else if c < 0.0 {
        ((-c).sqrt() * t).cosh()
    } else {
        1.0
    }
}

/// Generalized cotangent ct_c = sn' / sn. Defined for t > 0, and for
/// t < pi/sqrt(c) when c > 0.
pub fn ct(c: f64, t: f64) -> Result<f64> {
    if t <= 0.0 || (c > 0.0 && t >= std::f64::consts::PI / c.sqrt()) {
        return Err(Error::OutsideCotangentDomain { t, curvature: c });
    }
    Ok(cn(c, t) / sn(c, t))
}

/// Existence conditions for a geodesic sphere of normal curvature lambda:
/// lambda > 0 always, and lambda > sqrt(-c) in negative curvature.
pub fn sphere_constraints_ok(c: f64, lambda: f64) -> bool {
    if !lambda.is_finite() {
        return false;
    }
    if c < 0.0 {
        lambda > (-c).sqrt()
    } else {
        lambda > 0.0
    }
}

/// Radius of the geodesic sphere with normal curvature lambda, i.e. the
/// inverse of the generalized cotangent: ct_c(R) = lambda.
pub fn characteristic_radius(c: f64, lambda: f64) -> Result<f64> {
    if !sphere_constraints_ok(c, lambda) {
        return Err(Error::SphereConstraints {
            lambda,
            curvature: c,
        });
    }
    if c > 0.0 {
        let k = c.sqrt();
        // arccot(lambda/k)/k, with arccot valued in (0, pi).
        Ok(f64::atan2(1.0, lambda / k) / k)
    } else if c < 0.0 {
        let k = (-c).sqrt();
        // arccoth(lambda/k)/k = atanh(k/lambda)/k.
        Ok((k / lambda).atanh() / k)
    } else {
        Ok(1.0 / lambda)
    }
}
