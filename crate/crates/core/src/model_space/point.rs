//! Points, tangent vectors and the exponential/logarithm maps.

use nalgebra::DVector;

use super::{Curvature, CONSTRAINT_TOL, CUT_LOCUS_GUARD};
use crate::error::{Error, Result};
use crate::numerics::{safe_acos, safe_acosh};

/// A point of the m-dimensional model space, stored in ambient coordinates:
/// length m for c = 0 and m+1 otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPoint {
    curvature: Curvature,
    coords: DVector<f64>,
}

impl ModelPoint {
    /// Validating constructor. For c > 0 the coordinates must satisfy
    /// |x|^2 = 1/c; for c < 0 the Minkowski form must equal 1/c with the
    /// time coordinate positive.
    pub fn new(curvature: Curvature, coords: Vec<f64>) -> Result<Self> {
        let coords = DVector::from_vec(coords);
        let p = ModelPoint { curvature, coords };
        p.check_constraint()?;
        Ok(p)
    }

    /// Constructor that rescales the coordinates back onto the constraint
    /// set; used internally after ambient arithmetic.
    pub fn project(curvature: Curvature, coords: DVector<f64>) -> Result<Self> {
        if curvature.is_flat() {
            return Ok(ModelPoint { curvature, coords });
        }
        let q = curvature.form(coords.as_slice(), coords.as_slice());
        let target = 1.0 / curvature.value();
        if q == 0.0 || q.signum() != target.signum() {
            return Err(Error::ConstraintViolated {
                reason: format!("cannot project: quadratic form {q} has wrong sign"),
            });
        }
        if curvature.is_hyperbolic() && coords[0] <= 0.0 {
            return Err(Error::ConstraintViolated {
                reason: "cannot project onto the upper sheet: time coordinate not positive".into(),
            });
        }
        let scale = (target / q).sqrt();
        Ok(ModelPoint {
            curvature,
            coords: coords * scale,
        })
    }

    /// The reference base point: (1/kappa, 0, ..., 0) on curved models and
    /// the origin of R^m in the flat case.
    pub fn base(curvature: Curvature, m: usize) -> Self {
        let n = curvature.ambient_dim(m);
        let mut coords = DVector::zeros(n);
        if !curvature.is_flat() {
            coords[0] = 1.0 / curvature.kappa();
        }
        ModelPoint { curvature, coords }
    }

    fn check_constraint(&self) -> Result<()> {
        let c = self.curvature.value();
        if c == 0.0 {
            return Ok(());
        }
        let q = self
            .curvature
            .form(self.coords.as_slice(), self.coords.as_slice());
        let target = 1.0 / c;
        let scale = target.abs().max(1.0);
        if (q - target).abs() > CONSTRAINT_TOL * scale {
            return Err(Error::ConstraintViolated {
                reason: format!("quadratic form {q} != 1/c = {target}"),
            });
        }
        if c < 0.0 && self.coords[0] <= 0.0 {
            return Err(Error::ConstraintViolated {
                reason: format!("time coordinate {} not positive", self.coords[0]),
            });
        }
        Ok(())
    }

    #[inline]
    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    #[inline]
    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    /// Manifold dimension m.
    #[inline]
    pub fn dim(&self) -> usize {
        if self.curvature.is_flat() {
            self.coords.len()
        } else {
            self.coords.len() - 1
        }
    }

    /// Orthonormal basis of the tangent space, built deterministically by
    /// projecting ambient basis vectors and orthogonalizing.
    pub fn tangent_basis(&self) -> Vec<DVector<f64>> {
        let m = self.dim();
        let n = self.coords.len();
        let c = self.curvature;
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m);
        for i in 0..n {
            if basis.len() == m {
                break;
            }
            let mut v = DVector::zeros(n);
            v[i] = 1.0;
            if !c.is_flat() {
                // Remove the component along the position vector.
                let coef = c.form(v.as_slice(), self.coords.as_slice()) * c.value();
                v -= &self.coords * coef;
            }
            for b in &basis {
                let coef = c.form(v.as_slice(), b.as_slice());
                v -= b * coef;
            }
            let norm = c.norm(v.as_slice());
            if norm > 1e-8 {
                basis.push(v / norm);
            }
        }
        debug_assert_eq!(basis.len(), m);
        basis
    }
}

/// A tangent vector, stored in ambient coordinates and orthogonal to the
/// position vector under the ambient form (automatic in the flat case).
#[derive(Clone, Debug)]
pub struct TangentVector {
    base: ModelPoint,
    vec: DVector<f64>,
}

impl TangentVector {
    pub fn new(base: ModelPoint, vec: DVector<f64>) -> Result<Self> {
        if vec.len() != base.coords.len() {
            return Err(Error::invalid(format!(
                "tangent vector length {} != ambient dimension {}",
                vec.len(),
                base.coords.len()
            )));
        }
        let c = base.curvature;
        if !c.is_flat() {
            let pairing = c.form(base.coords.as_slice(), vec.as_slice());
            let scale = 1.0 + base.coords.norm() * vec.norm();
            if pairing.abs() > CONSTRAINT_TOL * scale {
                return Err(Error::ConstraintViolated {
                    reason: format!("tangent not orthogonal to base: <x, v> = {pairing}"),
                });
            }
        }
        Ok(TangentVector { base, vec })
    }

    pub fn zero(base: ModelPoint) -> Self {
        let n = base.coords.len();
        TangentVector {
            base,
            vec: DVector::zeros(n),
        }
    }

    #[inline]
    pub fn base(&self) -> &ModelPoint {
        &self.base
    }

    #[inline]
    pub fn vec(&self) -> &DVector<f64> {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        self.base.curvature.norm(self.vec.as_slice())
    }

    pub fn scaled(&self, factor: f64) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            vec: &self.vec * factor,
        }
    }

    pub fn normalized(&self) -> Result<TangentVector> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::invalid("cannot normalize a zero tangent vector"));
        }
        Ok(self.scaled(1.0 / n))
    }
}

/// Geodesic distance between two points of the same model space.
///
/// Computed from the ambient chord |q - p|, whose squared form equals
/// (4/c) sn^2(kappa d / 2): the asin/asinh route keeps full precision at
/// small separations, where inverting cos/cosh directly loses half the
/// digits. Large separations fall back to the acos/acosh formulation,
/// which is the well-conditioned one there.
pub fn distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    p.curvature.same(&q.curvature)?;
    let c = p.curvature.value();
    if c == 0.0 {
        return Ok((&p.coords - &q.coords).norm());
    }
    let k = p.curvature.kappa();
    let diff = &q.coords - &p.coords;
    // Clamp: the Minkowski form of a difference of hyperboloid points is
    // nonnegative in exact arithmetic but can round below zero.
    let quad = p
        .curvature
        .form(diff.as_slice(), diff.as_slice())
        .max(0.0);
    let half = k * quad.sqrt() / 2.0;
    if c > 0.0 {
        if half <= 0.7 {
            return Ok(2.0 * half.asin() / k);
        }
        let inner = c * p.curvature.form(p.coords.as_slice(), q.coords.as_slice());
        Ok(safe_acos(inner) / k)
    } else {
        if half <= 1.0 {
            return Ok(2.0 * half.asinh() / k);
        }
        let inner = c * p.curvature.form(p.coords.as_slice(), q.coords.as_slice());
        Ok(safe_acosh(inner) / k)
    }
}

/// Exponential map: follow the geodesic from the base of `v` with initial
/// velocity `v` for unit time. For c > 0 the magnitude must stay below the
/// cut-locus guard pi/sqrt(c) - 1e-9.
pub fn exp_map(v: &TangentVector) -> Result<ModelPoint> {
    let c = v.base.curvature;
    let t = v.norm();
    if c.is_spherical() && t >= std::f64::consts::PI / c.kappa() - CUT_LOCUS_GUARD {
        return Err(Error::AtCutLocus {
            distance: t,
            curvature: c.value(),
        });
    }
    if t == 0.0 {
        return Ok(v.base.clone());
    }
    if c.is_flat() {
        return Ok(ModelPoint {
            curvature: c,
            coords: &v.base.coords + &v.vec,
        });
    }
    let unit = &v.vec / t;
    let coords = &v.base.coords * super::cn(c.value(), t) + unit * super::sn(c.value(), t);
    ModelPoint::project(c, coords)
}

/// Logarithm map: the tangent vector at p whose exponential is q. Errors at
/// or beyond the cut locus in positive curvature.
pub fn log_map(p: &ModelPoint, q: &ModelPoint) -> Result<TangentVector> {
    p.curvature.same(&q.curvature)?;
    let c = p.curvature;
    let d = distance(p, q)?;
    if c.is_spherical() && d >= std::f64::consts::PI / c.kappa() - CUT_LOCUS_GUARD {
        return Err(Error::AtCutLocus {
            distance: d,
            curvature: c.value(),
        });
    }
    if c.is_flat() {
        return TangentVector::new(p.clone(), &q.coords - &p.coords);
    }
    // Project q onto the tangent space at p and rescale to length d.
    let inner = c.form(p.coords.as_slice(), q.coords.as_slice());
    let w = &q.coords - &p.coords * (inner * c.value());
    let wn = c.norm(w.as_slice());
    if wn < 1e-15 || d == 0.0 {
        return Ok(TangentVector::zero(p.clone()));
    }
    TangentVector::new(p.clone(), w * (d / wn))
}

/// Angle between two tangent vectors at the same base point.
pub fn angle(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    u.base.curvature.same(&v.base.curvature)?;
    if (&u.base.coords - &v.base.coords).norm() > 1e-9 * (1.0 + u.base.coords.norm()) {
        return Err(Error::invalid("angle requires tangents at the same base point"));
    }
    let nu = u.norm();
    let nv = v.norm();
    if nu < 1e-300 || nv < 1e-300 {
        return Err(Error::invalid("angle undefined for zero tangent vectors"));
    }
    let c = u.base.curvature;
    Ok(safe_acos(c.form(u.vec.as_slice(), v.vec.as_slice()) / (nu * nv)))
}
