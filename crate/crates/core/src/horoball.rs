//! Busemann functions and horoball containment in negatively curved models.
//!
//! A unit-speed geodesic ray γ determines the Busemann function
//! b(q) = lim_{t→∞} (t − dist(q, γ(t))) and the horoball {b ≥ 0}, the
//! limit of balls tangent at γ(0) as their radius grows. On the
//! hyperboloid the limit collapses to a closed form: the ray's ideal
//! point is the null vector ξ = base + dir/κ and
//! b(q) = −(1/κ) log(c ⟨q, ξ⟩) in the ambient form. The limit definition
//! is kept alongside as the validation oracle. The rolling check asks
//! that a body stay inside the horoball seeded at a boundary point along
//! the inward normal, which is the content of the ball check with the
//! radius sent to infinity and is available exactly when λ ≥ √−c.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::convex_body::{unit_inward_normal, Body, Certification};
use crate::error::{Error, Result};
use crate::model_space::{exp_map, Curvature, ModelPoint, TangentVector};
use crate::numerics::safe_acosh;
use crate::radial_angle::wrap_into_domain;

/// Absolute tolerance on the null-vector and centering invariants of a
/// constructed ray: ⟨ξ, ξ⟩ = 0 and b(base) = 0.
pub const RAY_CONSTRUCTION_TOL: f64 = 1e-10;

/// A unit-speed geodesic ray in a hyperbolic model space, carrying the
/// null representative of its ideal point.
#[derive(Clone, Debug)]
pub struct BusemannRay {
    base: ModelPoint,
    dir: TangentVector,
    xi: DVector<f64>,
}

impl BusemannRay {
    /// Ray from the base point of `dir` in its direction. The direction
    /// is normalized; zero vectors and nonnegative curvature are refused.
    pub fn new(dir: &TangentVector) -> Result<Self> {
        let base = dir.base().clone();
        let c = base.curvature();
        if !c.is_hyperbolic() {
            return Err(Error::BusemannNeedsNegativeCurvature {
                curvature: c.value(),
            });
        }
        let dir = dir.normalized()?;
        let xi = base.coords() + dir.vec() / c.kappa();
        let ray = BusemannRay { base, dir, xi };
        let null_defect = c.form(ray.xi.as_slice(), ray.xi.as_slice()).abs();
        let centering = busemann_closed_form(&ray, &ray.base)?.abs();
        if null_defect > RAY_CONSTRUCTION_TOL || centering > RAY_CONSTRUCTION_TOL {
            return Err(Error::ConstraintViolated {
                reason: format!(
                    "ideal point drifted off the null cone: <xi,xi> = {null_defect:e}, b(base) = {centering:e}"
                ),
            });
        }
        Ok(ray)
    }

    pub fn base(&self) -> &ModelPoint {
        &self.base
    }

    /// Unit direction at the base.
    pub fn dir(&self) -> &TangentVector {
        &self.dir
    }

    /// Null ambient representative of the ideal endpoint.
    pub fn ideal_point(&self) -> &DVector<f64> {
        &self.xi
    }

    /// γ(t), the point at arclength t along the ray (t may be negative).
    pub fn point_at(&self, t: f64) -> Result<ModelPoint> {
        exp_map(&self.dir.scaled(t))
    }
}

/// b(q) = −(1/κ) log(c ⟨q, ξ⟩). Along the ray this is arclength exactly;
/// the sign convention puts the horoball interior at b > 0.
pub fn busemann_closed_form(ray: &BusemannRay, q: &ModelPoint) -> Result<f64> {
    let c = ray.base.curvature();
    if q.curvature() != c {
        return Err(Error::MismatchedCurvature {
            left: c.value(),
            right: q.curvature().value(),
        });
    }
    let pairing = c.value() * c.form(q.coords().as_slice(), ray.xi.as_slice());
    if pairing <= 0.0 {
        // Both arguments live in the forward cone, so this is unreachable
        // for valid points; refuse rather than return a NaN.
        return Err(Error::ConstraintViolated {
            reason: format!("Busemann pairing {pairing} not positive"),
        });
    }
    Ok(-pairing.ln() / c.kappa())
}

/// Partial sums of the defining limit b(q) = lim t − dist(q, γ(t)).
#[derive(Clone, Debug)]
pub struct BusemannLimit {
    /// The deepest partial value, t_max − dist(q, γ(t_max)).
    pub value: f64,
    /// Successive differences between partial values; nonnegative and
    /// exponentially shrinking when the limit is healthy.
    pub increments: Vec<f64>,
}

impl BusemannLimit {
    /// The final Cauchy increment, the builtin convergence diagnostic.
    pub fn last_increment(&self) -> f64 {
        self.increments.last().copied().unwrap_or(0.0)
    }
}

/// Evaluate t − dist(q, γ(t)) at geometrically spaced t doubling up to
/// t_max. The truncation error decays like e^{−2κt}, so t_max = 30 leaves
/// nothing above roundoff at unit distances.
pub fn busemann_by_limit(
    ray: &BusemannRay,
    q: &ModelPoint,
    t_max: f64,
    steps: usize,
) -> Result<BusemannLimit> {
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::invalid("limit horizon t_max must be positive"));
    }
    if steps < 2 {
        return Err(Error::invalid("limit evaluation needs at least 2 steps"));
    }
    let c = ray.base.curvature();
    if q.curvature() != c {
        return Err(Error::MismatchedCurvature {
            left: c.value(),
            right: q.curvature().value(),
        });
    }
    // gamma(t)'s ambient coordinates grow like e^{kappa t}, so forming the
    // point and pairing it with q would bury the O(1) chord value under
    // cancellation; assemble cosh(kappa d) = c<q, gamma(t)> from the two
    // O(1) pairings with the ray data instead.
    let kappa = c.kappa();
    let along_base = c.value() * c.form(q.coords().as_slice(), ray.base.coords().as_slice());
    let along_dir = c.value() * c.form(q.coords().as_slice(), ray.dir.vec().as_slice()) / kappa;
    let mut partials = Vec::with_capacity(steps);
    for j in 0..steps {
        let t = t_max * (2.0f64).powi(j as i32 + 1 - steps as i32);
        let pairing = (kappa * t).cosh() * along_base + (kappa * t).sinh() * along_dir;
        partials.push(t - safe_acosh(pairing) / kappa);
    }
    let increments = partials.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(BusemannLimit {
        value: *partials.last().expect("steps >= 2"),
        increments,
    })
}

/// Which way the rolled ray leaves a boundary seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayOrientation {
    /// Along the inward normal: the containment the theory asserts.
    Inward,
    /// Against it: the negative control, which any closed body must fail.
    Outward,
}

/// Busemann values of one rolled horoball over the body grid.
#[derive(Clone, Debug)]
pub struct HoroballResult {
    /// Seed parameter on the boundary chart (wrapped into the domain).
    pub seed: [f64; 2],
    pub ray: BusemannRay,
    /// b(q) per grid point, in grid order; containment means all ≥ 0.
    pub values: Vec<f64>,
    pub min_value: f64,
    /// Grid index attaining the minimum (smallest index on ties).
    pub argmin_index: usize,
    pub tol: f64,
    /// min_value ≥ −tol.
    pub pass: bool,
}

/// Roll one horoball at a boundary seed and evaluate the grid.
pub fn roll_horoball(
    body: &Body,
    cert: &Certification,
    seed: [f64; 2],
    orientation: RayOrientation,
    tol: f64,
) -> Result<HoroballResult> {
    cert.require()?;
    require_horoball_regime(body.curvature(), cert.lambda)?;
    let chart = body.chart();
    let seed = wrap_into_domain(chart, seed)
        .ok_or_else(|| Error::invalid("seed parameter outside the chart domain"))?;
    let nu = unit_inward_normal(chart, seed)?;
    let ray = match orientation {
        RayOrientation::Inward => BusemannRay::new(&nu)?,
        RayOrientation::Outward => BusemannRay::new(&nu.scaled(-1.0))?,
    };
    let values = (0..body.len())
        .into_par_iter()
        .map(|k| busemann_closed_form(&ray, &body.point_at(k)))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = (0usize, f64::INFINITY);
    for (k, &v) in values.iter().enumerate() {
        if v < best.1 {
            best = (k, v);
        }
    }
    let (argmin_index, min_value) = best;
    Ok(HoroballResult {
        seed,
        ray,
        values,
        min_value,
        argmin_index,
        tol,
        pass: min_value >= -tol,
    })
}

/// Check containment in the inward horoball at each seed: every grid
/// point must satisfy b ≥ −tol, with equality at the seed itself. Only
/// meaningful for λ ≥ √−c, where the tangent balls converge to a
/// horoball; smaller λ is refused.
pub fn verify_horoball_rolling(
    body: &Body,
    cert: &Certification,
    seeds: &[[f64; 2]],
    tol: f64,
) -> Result<Vec<HoroballResult>> {
    cert.require()?;
    require_horoball_regime(body.curvature(), cert.lambda)?;
    seeds
        .iter()
        .map(|&seed| roll_horoball(body, cert, seed, RayOrientation::Inward, tol))
        .collect()
}

fn require_horoball_regime(c: Curvature, lambda: f64) -> Result<()> {
    if !c.is_hyperbolic() {
        return Err(Error::BusemannNeedsNegativeCurvature {
            curvature: c.value(),
        });
    }
    let needed = c.kappa();
    if lambda < needed {
        return Err(Error::HoroballConstraints { lambda, needed });
    }
    Ok(())
}

/// n points of the level set {b = level} around γ(level), for m = 2:
/// the horocycle parameterized by arclength u ∈ [−half_width, half_width].
/// In ambient coordinates the level set is the parabolic orbit
/// q(u) = p + u W + (u² κ² e^{κ·level} / 2) ξ with W unit, tangent at the
/// base, and orthogonal to the ray; the pairing ⟨q, ξ⟩ is constant in u
/// by ξ's nullity, so every returned point sits on the level exactly.
pub fn busemann_level_points(
    ray: &BusemannRay,
    level: f64,
    half_width: f64,
    n: usize,
) -> Result<Vec<ModelPoint>> {
    let c = ray.base.curvature();
    if ray.base.dim() != 2 {
        return Err(Error::invalid("level polylines are drawn for m = 2"));
    }
    if !half_width.is_finite() || half_width <= 0.0 {
        return Err(Error::invalid("polyline half width must be positive"));
    }
    if n < 2 {
        return Err(Error::invalid("polyline needs at least 2 points"));
    }
    let p = ray.point_at(level)?;
    // Unit tangent at the base orthogonal to the ray direction.
    let d = ray.dir.vec();
    let mut w_best: Option<DVector<f64>> = None;
    let mut norm2_best = 0.0;
    for e in ray.base.tangent_basis() {
        let proj = c.form(e.as_slice(), d.as_slice());
        let w = e - d * proj;
        let norm2 = c.form(w.as_slice(), w.as_slice());
        if norm2 > norm2_best {
            norm2_best = norm2;
            w_best = Some(w);
        }
    }
    let w = w_best.ok_or_else(|| Error::invalid("no tangent direction orthogonal to the ray"))?
        / norm2_best.sqrt();
    let kappa = c.kappa();
    let quad = kappa * kappa * (kappa * level).exp() / 2.0;
    (0..n)
        .map(|k| {
            let u = -half_width + 2.0 * half_width * k as f64 / (n - 1) as f64;
            let coords = p.coords() + &w * u + &ray.xi * (quad * u * u);
            ModelPoint::project(c, coords)
        })
        .collect()
}
