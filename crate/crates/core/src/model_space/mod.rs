//! Constant-curvature model spaces.
//!
//! Points live on embedded models: the sphere of radius 1/sqrt(c) in R^{m+1}
//! for c > 0, flat R^m for c = 0, and the upper hyperboloid sheet
//! <x, x> = 1/c (Minkowski form, time coordinate positive) for c < 0.
//! All formulas work for arbitrary curvature values; scale covariance is
//! covered by tests rather than baked in through canonicalization.

mod functions;
mod point;
mod triangle;
mod volume;

pub use functions::{characteristic_radius, cn, ct, sn, sphere_constraints_ok};
pub use point::{angle, distance, exp_map, log_map, ModelPoint, TangentVector};
pub use triangle::{angle_from_sides, side_from_sides_angle, triangle_angles};
pub use volume::{ball_volume, sphere_area, unit_sphere_measure};

use crate::error::{Error, Result};

/// Constraint tolerance used when validating point and tangent coordinates.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Guard band before the cut locus of a positively curved model space.
pub const CUT_LOCUS_GUARD: f64 = 1e-9;

/// Sectional curvature of a model space, with the ambient bilinear form it
/// induces (Euclidean for c >= 0, Minkowski with signature (-, +, ..., +)
/// for c < 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curvature(f64);

impl Curvature {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::invalid(format!("curvature must be finite, got {c}")));
        }
        Ok(Curvature(c))
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.0
    }

    /// sqrt(|c|); zero for the flat case.
    #[inline]
    pub fn kappa(&self) -> f64 {
        self.0.abs().sqrt()
    }

    #[inline]
    pub fn is_flat(&self) -> bool {
        self.0 == 0.0
    }

    #[inline]
    pub fn is_spherical(&self) -> bool {
        self.0 > 0.0
    }

    #[inline]
    pub fn is_hyperbolic(&self) -> bool {
        self.0 < 0.0
    }

    /// Ambient coordinates count for a point of the m-dimensional model.
    #[inline]
    pub fn ambient_dim(&self, m: usize) -> usize {
        if self.is_flat() {
            m
        } else {
            m + 1
        }
    }

    /// Ambient bilinear form on coordinate vectors: Euclidean dot product,
    /// or the Minkowski form -x0*y0 + sum_i xi*yi when c < 0.
    pub fn form(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let mut s = 0.0;
        for i in 0..a.len() {
            s += a[i] * b[i];
        }
        if self.is_hyperbolic() {
            s - 2.0 * a[0] * b[0]
        } else {
            s
        }
    }

    /// Norm induced by the ambient form on tangent vectors (positive there).
    pub fn norm(&self, a: &[f64]) -> f64 {
        self.form(a, a).max(0.0).sqrt()
    }

    /// Distance ceiling: pi/sqrt(c) for c > 0, infinity otherwise.
    pub fn diameter_bound(&self) -> f64 {
        if self.is_spherical() {
            std::f64::consts::PI / self.kappa()
        } else {
            f64::INFINITY
        }
    }

    pub fn same(&self, other: &Curvature) -> Result<()> {
        if self.0 == other.0 {
            Ok(())
        } else {
            Err(Error::MismatchedCurvature {
                left: self.0,
                right: other.0,
            })
        }
    }
}

impl From<Curvature> for f64 {
    fn from(c: Curvature) -> f64 {
        c.0
    }
}
