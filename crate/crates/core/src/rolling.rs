//! Rolling-ball containment checks over boundary grids.
//!
//! A closed λ-convex body admits, at every boundary point, a tangent
//! geodesic ball of radius R_λ = ct_c⁻¹(λ) lying inside the body. The
//! checks here measure that containment directly: roll the ball at a seed
//! point (center at depth R_λ along the inward normal), evaluate the
//! margin R_λ − dist(center, q) at every grid point q, and require the
//! minimum to stay nonnegative. Companion checks probe the contact
//! configuration when margins vanish, compare the body's diameter and
//! volume against the rolled ball's, and quantify how the same containment
//! fails on the convex hull of two hyperbolic balls.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex_body::{make_two_ball_hull, unit_inward_normal, Body, Certification};
use crate::error::{Error, Result};
use crate::model_space::{
    ball_volume, characteristic_radius, distance, exp_map, log_map, sphere_area, Curvature,
    ModelPoint,
};
use crate::radial_angle::{locate_origin, wrap_into_domain};

/// Contact band half-width as a fraction of R_λ: the exact contact set
/// {margin = 0} becomes |margin| ≤ this · R_λ on a grid.
pub const CONTACT_TOL_FACTOR: f64 = 1e-5;

/// One rolled ball and its margins over the body grid.
#[derive(Clone, Debug)]
pub struct RollingResult {
    /// Seed parameter on the boundary chart (wrapped into the domain).
    pub seed: [f64; 2],
    /// Ball center: exp of R_λ times the inward normal at the seed.
    pub center: ModelPoint,
    pub r_lambda: f64,
    /// R_λ − dist(center, q) per grid point, in grid order.
    pub margins: Vec<f64>,
    pub min_margin: f64,
    /// Grid index attaining the minimum (smallest index on ties).
    pub argmin_index: usize,
    /// Half-width of the contact band: CONTACT_TOL_FACTOR · R_λ.
    pub contact_tol: f64,
    /// Grid indices with |margin| ≤ contact_tol.
    pub contact_set: Vec<usize>,
    pub tol: f64,
    /// min_margin ≥ −tol.
    pub pass: bool,
}

/// How the contact set sits around the rolled ball, judged from the lifted
/// directions log_center(q) in the tangent space at the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactConfiguration {
    /// No closed half-space contains every contact direction: the ball is
    /// touched from all sides (full-contact signature).
    Surrounding,
    /// A closed half-space contains the contact directions.
    Separable,
    /// At most one grid point touches.
    Isolated,
}

/// One named check with its verdict, margin, and tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
    pub tolerance: f64,
}

/// Aggregated verdicts for one scenario, serializable as the run artifact.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub curvature: f64,
    pub lambda: f64,
    pub r_lambda: f64,
    pub checks: Vec<CheckVerdict>,
    pub runtime_seconds: f64,
}

/// Smallest value and its first attaining index.
fn argmin(values: &[f64]) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for (k, &v) in values.iter().enumerate() {
        if v < best.1 {
            best = (k, v);
        }
    }
    best
}

/// Roll a ball of radius R_λ at each seed and report the margins over the
/// full grid. Fails when the certificate did not pass; for c > 0 the grid
/// must stay clear of the antipodal bound so every distance is defined.
pub fn verify_ball_rolling(
    body: &Body,
    cert: &Certification,
    seeds: &[[f64; 2]],
    tol: f64,
) -> Result<Vec<RollingResult>> {
    cert.require()?;
    let c = body.curvature();
    let r_lambda = characteristic_radius(c.value(), cert.lambda)?;
    if c.is_spherical() {
        let bound = std::f64::consts::PI / c.kappa();
        let diameter = grid_diameter(body)?;
        if diameter >= bound - 1e-12 {
            return Err(Error::invalid(format!(
                "grid diameter {diameter:.6} reaches the antipodal bound {bound:.6}"
            )));
        }
    }
    seeds
        .iter()
        .map(|&seed| roll_at(body, r_lambda, seed, tol))
        .collect()
}

fn roll_at(body: &Body, r_lambda: f64, seed: [f64; 2], tol: f64) -> Result<RollingResult> {
    let chart = body.chart();
    let seed = wrap_into_domain(chart, seed)
        .ok_or_else(|| Error::invalid("seed parameter outside the chart domain"))?;
    let nu = unit_inward_normal(chart, seed)?;
    let center = exp_map(&nu.scaled(r_lambda))?;
    let margins = (0..body.len())
        .into_par_iter()
        .map(|k| Ok(r_lambda - distance(&center, &body.point_at(k))?))
        .collect::<Result<Vec<f64>>>()?;
    let (argmin_index, min_margin) = argmin(&margins);
    let contact_tol = CONTACT_TOL_FACTOR * r_lambda;
    let contact_set = margins
        .iter()
        .enumerate()
        .filter(|&(_, m)| m.abs() <= contact_tol)
        .map(|(k, _)| k)
        .collect();
    Ok(RollingResult {
        seed,
        center,
        r_lambda,
        margins,
        min_margin,
        argmin_index,
        contact_tol,
        contact_set,
        tol,
        pass: min_margin >= -tol,
    })
}

/// Classify the contact set of a rolled ball. Contact points are lifted to
/// unit directions in the tangent space at the center; the probe then asks
/// whether some unit w satisfies ⟨w, v_i⟩ ≥ −half_space_tol for all i
/// (a separating closed half-space). m or fewer directions always admit
/// one, so Surrounding needs at least m + 1 contact points.
pub fn rigidity_probe(
    body: &Body,
    result: &RollingResult,
    half_space_tol: f64,
) -> Result<ContactConfiguration> {
    if result.contact_set.len() <= 1 {
        return Ok(ContactConfiguration::Isolated);
    }
    let c = body.curvature();
    let m = body.dim();
    let basis = result.center.tangent_basis();
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(result.contact_set.len());
    for &k in &result.contact_set {
        let v = log_map(&result.center, &body.point_at(k))?.normalized()?;
        dirs.push(
            basis
                .iter()
                .map(|e| c.form(v.vec().as_slice(), e.as_slice()))
                .collect(),
        );
    }
    if dirs.len() <= m {
        return Ok(ContactConfiguration::Separable);
    }
    let best = match m {
        2 => best_half_space_sweep(&dirs),
        3 => best_half_space_multistart(&dirs),
        _ => return Err(Error::invalid("contact probe supports m = 2 or 3")),
    };
    if best >= -half_space_tol {
        Ok(ContactConfiguration::Separable)
    } else {
        Ok(ContactConfiguration::Surrounding)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn half_space_score(dirs: &[Vec<f64>], w: &[f64]) -> f64 {
    dirs.iter().map(|v| dot(v, w)).fold(f64::INFINITY, f64::min)
}

/// Best achievable min_i ⟨w, v_i⟩ over unit w in the plane: a dense angular
/// sweep bracketing the maximum, then golden-section refinement. The score
/// is piecewise-smooth in θ, so the refined value resolves exact-zero
/// optima (antipodal direction pairs) well below any reasonable tolerance.
fn best_half_space_sweep(dirs: &[Vec<f64>]) -> f64 {
    let n = 4096;
    let eval = |theta: f64| half_space_score(dirs, &[theta.cos(), theta.sin()]);
    let mut best = (eval(0.0), 0.0f64);
    for k in 1..n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let s = eval(theta);
        if s > best.0 {
            best = (s, theta);
        }
    }
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let theta = crate::numerics::golden_min(|t| -eval(t), best.1 - h, best.1 + h, 1e-12);
    eval(theta).max(best.0)
}

/// Deterministic spread of directions on the unit sphere.
fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = 2.0 * std::f64::consts::PI * ((k as f64 / golden) % 1.0);
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

/// Best achievable min_i ⟨w, v_i⟩ over unit w in space: projected
/// subgradient ascent (step toward the worst-scoring direction, then
/// renormalize) from 20 spread starts, halving the step on stalls.
fn best_half_space_multistart(dirs: &[Vec<f64>]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for start in fibonacci_sphere(20) {
        let mut w = start.to_vec();
        let mut score = half_space_score(dirs, &w);
        let mut step = 0.5;
        for _ in 0..200 {
            let worst = dirs
                .iter()
                .min_by(|a, b| dot(a, &w).total_cmp(&dot(b, &w)))
                .expect("nonempty contact set");
            let mut cand: Vec<f64> = w
                .iter()
                .zip(worst)
                .map(|(wi, vi)| wi + step * vi)
                .collect();
            let norm = dot(&cand, &cand).sqrt();
            if norm < 1e-300 {
                break;
            }
            cand.iter_mut().for_each(|x| *x /= norm);
            let cand_score = half_space_score(dirs, &cand);
            if cand_score > score {
                w = cand;
                score = cand_score;
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
        }
        best = best.max(score);
    }
    best
}

/// Diameter and the 2 R_λ bound it must respect.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DiameterReport {
    /// Max pairwise grid distance: a lower bound on the true diameter,
    /// which is the conservative direction for an upper-bound claim.
    pub diameter: f64,
    /// 2 R_λ.
    pub bound: f64,
    pub margin: f64,
    /// For c > 0, diameter ≤ π/√c as well.
    pub ambient_bound_ok: bool,
    pub pass: bool,
}

/// Check diameter ≤ 2 R_λ (and ≤ π/√c when c > 0) on a certified body.
pub fn verify_diameter(body: &Body, cert: &Certification, tol: f64) -> Result<DiameterReport> {
    cert.require()?;
    let c = body.curvature();
    let r_lambda = characteristic_radius(c.value(), cert.lambda)?;
    let diameter = grid_diameter(body)?;
    let bound = 2.0 * r_lambda;
    let margin = bound - diameter;
    let ambient_bound_ok = !c.is_spherical() || diameter <= std::f64::consts::PI / c.kappa() + tol;
    Ok(DiameterReport {
        diameter,
        bound,
        margin,
        ambient_bound_ok,
        pass: margin >= -tol && ambient_bound_ok,
    })
}

/// Max pairwise grid distance: exact scan for small grids, farthest-point
/// jumps from 16 spread starts for large ones. Both are lower bounds on
/// the true diameter.
fn grid_diameter(body: &Body) -> Result<f64> {
    let n = body.len();
    let pts: Vec<ModelPoint> = (0..n).map(|k| body.point_at(k)).collect();
    if n <= 4096 {
        let per_row = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row_max = 0.0f64;
                for j in (i + 1)..n {
                    let d = distance(&pts[i], &pts[j])?;
                    row_max = row_max.max(d);
                }
                Ok(row_max)
            })
            .collect::<Result<Vec<f64>>>()?;
        return Ok(per_row.into_iter().fold(0.0, f64::max));
    }
    let farthest_from = |i: usize| -> Result<(f64, usize)> {
        (0..n)
            .into_par_iter()
            .map(|j| distance(&pts[i], &pts[j]).map(|d| (d, j)))
            .try_reduce(
                || (f64::NEG_INFINITY, usize::MAX),
                |a, b| Ok(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
            )
    };
    let mut best = 0.0f64;
    for s in 0..16 {
        let mut i = s * n / 16;
        loop {
            let (d, j) = farthest_from(i)?;
            if d <= best {
                break;
            }
            best = d;
            if j == i {
                break;
            }
            i = j;
        }
    }
    Ok(best)
}

/// Enclosed volume and boundary measure against the R_λ ball's.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VolumeReport {
    pub volume: f64,
    pub volume_bound: f64,
    /// Relative Richardson error estimate for the volume quadrature.
    pub volume_error: f64,
    pub boundary: f64,
    pub boundary_bound: f64,
    pub boundary_error: f64,
    pub pass: bool,
}

/// Richardson step for the grid quadrature: extrapolate from the base and
/// 2x-refined values (order-2 model, which only sharpens faster schemes)
/// and turn their gap into a relative error estimate, refusing tolerances
/// the refinement cannot support.
fn refine_quadrature(coarse: f64, fine: f64, tol_rel: f64) -> Result<(f64, f64)> {
    let correction = (fine - coarse) / 3.0;
    let value = fine + correction;
    let estimate = correction.abs() / value.abs().max(f64::MIN_POSITIVE);
    if estimate > tol_rel {
        return Err(Error::QuadratureNonConvergence {
            estimate,
            tol: tol_rel,
        });
    }
    Ok((value, estimate))
}

/// Check Vol(D) ≤ Vol(B_λ) and boundary measure ≤ area(∂B_λ) on a
/// certified body, with quadrature refined once for an error estimate.
pub fn verify_volume(body: &Body, cert: &Certification, tol_rel: f64) -> Result<VolumeReport> {
    cert.require()?;
    let c = body.curvature();
    let r_lambda = characteristic_radius(c.value(), cert.lambda)?;
    let fine = body.resample(2)?;
    let (volume, volume_error) =
        refine_quadrature(body.enclosed_volume()?, fine.enclosed_volume()?, tol_rel)?;
    let (boundary, boundary_error) =
        refine_quadrature(body.boundary_measure()?, fine.boundary_measure()?, tol_rel)?;
    let m = body.dim();
    let volume_bound = ball_volume(c.value(), m, r_lambda)?;
    let boundary_bound = sphere_area(c.value(), m, r_lambda)?;
    let pass =
        volume <= volume_bound * (1.0 + tol_rel) && boundary <= boundary_bound * (1.0 + tol_rel);
    Ok(VolumeReport {
        volume,
        volume_bound,
        volume_error,
        boundary,
        boundary_bound,
        boundary_error,
        pass,
    })
}

/// Tangent-ball penetration on the convex hull of two balls.
#[derive(Clone, Debug)]
pub struct HullPenetration {
    /// Ball radius; also the radius of the rolled tangent ball.
    pub r: f64,
    pub separation: f64,
    /// Chart parameter of the boundary point nearest the hull midpoint
    /// (a straight-edge midpoint), where the ball is rolled.
    pub tangent_point: [f64; 2],
    pub center: ModelPoint,
    /// Worst depth max(0, r − dist(center, q)) over the grid: how far the
    /// boundary cuts into the rolled ball.
    pub penetration: f64,
    /// Grid index attaining the depth (smallest index on ties).
    pub argmax_index: usize,
    /// penetration > tol.
    pub confirmed: bool,
}

/// Roll a ball of the construction radius at the flattest boundary point
/// of the hull of two balls (the straight-edge midpoint nearest the
/// centers' midpoint) and measure how deep the opposite boundary cuts into
/// it. Positive depth for c < 0 shows a body whose boundary curvature
/// everywhere meets the ball's cannot, in general, roll it inside; the
/// flat stadium (c = 0) is the zero-penetration control.
pub fn counterexample_two_ball_hull(
    c: Curvature,
    r: f64,
    separation: f64,
    n: usize,
    tol: f64,
) -> Result<HullPenetration> {
    let body = make_two_ball_hull(c, r, separation, 0.0, n)?;
    let midpoint = ModelPoint::base(c, 2);
    let origin = locate_origin(&body, &midpoint)?;
    let nu = unit_inward_normal(body.chart(), origin.foot)?;
    let center = exp_map(&nu.scaled(r))?;
    let depths = (0..body.len())
        .into_par_iter()
        .map(|k| Ok(r - distance(&center, &body.point_at(k))?))
        .collect::<Result<Vec<f64>>>()?;
    let mut arg = (0usize, f64::NEG_INFINITY);
    for (k, &d) in depths.iter().enumerate() {
        if d > arg.1 {
            arg = (k, d);
        }
    }
    let penetration = arg.1.max(0.0);
    Ok(HullPenetration {
        r,
        separation,
        tangent_point: origin.foot,
        center,
        penetration,
        argmax_index: arg.0,
        confirmed: penetration > tol,
    })
}

/// Worst violation of the offset containment dist(center, p) ≤ R_λ − ε
/// over sampled boundary points, where p = exp_q(ε ν(q)) steps inward by
/// ε = epsilon_frac · R_λ and the center is rolled at `seed`. Nonpositive
/// means every inward offset keeps its depth inside the rolled ball.
pub fn depth_margin_diagnostic(
    body: &Body,
    cert: &Certification,
    seed: [f64; 2],
    epsilon_frac: f64,
    stride: usize,
) -> Result<f64> {
    cert.require()?;
    if !(epsilon_frac > 0.0 && epsilon_frac < 1.0) {
        return Err(Error::invalid("epsilon fraction must lie in (0, 1)"));
    }
    if stride == 0 {
        return Err(Error::invalid("stride must be positive"));
    }
    let c = body.curvature();
    let r_lambda = characteristic_radius(c.value(), cert.lambda)?;
    let eps = epsilon_frac * r_lambda;
    let chart = body.chart();
    let seed = wrap_into_domain(chart, seed)
        .ok_or_else(|| Error::invalid("seed parameter outside the chart domain"))?;
    let nu = unit_inward_normal(chart, seed)?;
    let center = exp_map(&nu.scaled(r_lambda))?;
    let mut worst = f64::NEG_INFINITY;
    for k in (0..body.len()).step_by(stride) {
        let nu_q = unit_inward_normal(chart, body.grid()[k])?;
        let p = exp_map(&nu_q.scaled(eps))?;
        worst = worst.max(distance(&center, &p)? - (r_lambda - eps));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_body::{
        certify_lambda_convex, make_ellipse_like, make_geodesic_sphere, make_radial_curve,
        make_revolution_body, HarmonicTerm, Profile,
    };
    use crate::model_space::ct;
    use std::f64::consts::PI;

    fn curv(c: f64) -> Curvature {
        Curvature::new(c).unwrap()
    }

    fn flat_sphere(r: f64, n: usize) -> Body {
        let center = ModelPoint::base(curv(0.0), 2);
        make_geodesic_sphere(curv(0.0), 2, &center, r, n).unwrap()
    }

    #[test]
    fn rolled_ball_stays_inside_the_ellipse() {
        let body = make_ellipse_like(curv(0.0), [2.0, 1.0], 256).unwrap();
        let cert = certify_lambda_convex(&body, 0.25, 1e-7).unwrap();
        let seeds: Vec<[f64; 2]> = (0..8).map(|k| body.grid()[k * 32]).collect();
        let results = verify_ball_rolling(&body, &cert, &seeds, 1e-6).unwrap();
        assert_eq!(results.len(), 8);
        for res in &results {
            assert!(res.pass, "min margin {}", res.min_margin);
            assert!((res.r_lambda - 4.0).abs() < 1e-12);
            assert!(res.margins.iter().all(|m| m.is_finite()));
            // Containment is strict away from the seed tangency.
            assert!(res.min_margin >= 0.0);
        }
    }

    #[test]
    fn sphere_smaller_than_the_ball_passes_with_zero_margin_at_the_seed() {
        let body = flat_sphere(1.0, 64);
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        let seed = body.grid()[0];
        let res = &verify_ball_rolling(&body, &cert, &[seed], 1e-6).unwrap()[0];
        assert!(res.pass);
        // The rolled ball is internally tangent at the seed, so the seed
        // node itself sits at zero margin and is the grid minimum.
        assert!(res.min_margin.abs() < 1e-12, "min margin {}", res.min_margin);
        assert_eq!(res.argmin_index, 0);
        assert_eq!(res.contact_set, vec![0]);
    }

    #[test]
    fn sphere_of_the_critical_radius_touches_everywhere() {
        let body = flat_sphere(2.0, 64);
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        let res = &verify_ball_rolling(&body, &cert, &[[0.3, 0.0]], 1e-6).unwrap()[0];
        assert!(res.pass);
        assert_eq!(res.contact_set.len(), body.len());
        for &m in &res.margins {
            assert!(m.abs() < 1e-9, "margin {m}");
        }
    }

    #[test]
    fn shrinking_the_sphere_grows_the_min_margin() {
        // Seed strictly between grid nodes so the tangency itself is not a
        // grid point; radii above R_lambda / 2, where the near-seed margin
        // r (R - r) theta^2 / (2 R) shrinks as r grows.
        let seed = [PI / 64.0, 0.0];
        let mut last = f64::INFINITY;
        for r in [1.2, 1.5, 1.8] {
            let body = flat_sphere(r, 64);
            let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
            let res = &verify_ball_rolling(&body, &cert, &[seed], 1e-6).unwrap()[0];
            assert!(res.pass);
            assert!(res.min_margin > 0.0);
            assert!(
                res.min_margin < last,
                "margin {} did not drop below {last} at r = {r}",
                res.min_margin
            );
            last = res.min_margin;
        }
    }

    #[test]
    fn rolling_requires_a_passing_certificate() {
        let body = make_ellipse_like(curv(0.0), [2.0, 1.0], 64).unwrap();
        let cert = certify_lambda_convex(&body, 0.3, 1e-9).unwrap();
        assert!(!cert.pass);
        assert!(matches!(
            verify_ball_rolling(&body, &cert, &[[0.0, 0.0]], 1e-6),
            Err(Error::NotCertified { .. })
        ));
    }

    #[test]
    fn full_contact_sphere_reads_as_surrounding() {
        let body = flat_sphere(2.0, 64);
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        let res = &verify_ball_rolling(&body, &cert, &[[0.1, 0.0]], 1e-6).unwrap()[0];
        let config = rigidity_probe(&body, res, 1e-6).unwrap();
        assert_eq!(config, ContactConfiguration::Surrounding);
    }

    #[test]
    fn tangent_contact_reads_as_isolated() {
        let body = flat_sphere(1.0, 64);
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        let seed = body.grid()[5];
        let res = &verify_ball_rolling(&body, &cert, &[seed], 1e-6).unwrap()[0];
        assert_eq!(res.contact_set.len(), 1);
        let config = rigidity_probe(&body, res, 1e-6).unwrap();
        assert_eq!(config, ContactConfiguration::Isolated);
    }

    #[test]
    fn few_or_one_sided_contacts_never_read_as_surrounding() {
        let body = flat_sphere(2.0, 64);
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        let full = &verify_ball_rolling(&body, &cert, &[[0.1, 0.0]], 1e-6).unwrap()[0];

        // Two antipodal directions: separable only through the refined
        // sweep (the best w is exactly orthogonal to both).
        let mut two = full.clone();
        two.contact_set = vec![0, 32];
        assert_eq!(
            rigidity_probe(&body, &two, 1e-6).unwrap(),
            ContactConfiguration::Separable
        );

        // Three spread directions surround the center.
        let mut three = full.clone();
        three.contact_set = vec![0, 21, 42];
        assert_eq!(
            rigidity_probe(&body, &three, 1e-6).unwrap(),
            ContactConfiguration::Surrounding
        );

        // Three clustered directions stay one-sided.
        let mut clustered = full.clone();
        clustered.contact_set = vec![0, 1, 2];
        assert_eq!(
            rigidity_probe(&body, &clustered, 1e-6).unwrap(),
            ContactConfiguration::Separable
        );
    }

    #[test]
    fn surface_contact_configurations() {
        let center = ModelPoint::base(curv(0.0), 3);
        let body = make_geodesic_sphere(curv(0.0), 3, &center, 2.0, 24).unwrap();
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        let res = &verify_ball_rolling(&body, &cert, &[[0.7, 0.3]], 1e-6).unwrap()[0];
        assert!(res.pass);
        assert_eq!(res.contact_set.len(), body.len());
        assert_eq!(
            rigidity_probe(&body, res, 1e-6).unwrap(),
            ContactConfiguration::Surrounding
        );

        // Restrict the contacts to one polar cap: one-sided.
        let mut cap = res.clone();
        cap.contact_set = (0..body.len())
            .filter(|&k| body.grid()[k][0] < PI / 4.0)
            .collect();
        assert!(cap.contact_set.len() > 4);
        assert_eq!(
            rigidity_probe(&body, &cap, 1e-6).unwrap(),
            ContactConfiguration::Separable
        );
    }

    #[test]
    fn ellipse_contact_is_not_surrounding() {
        let body = make_ellipse_like(curv(0.0), [2.0, 1.0], 256).unwrap();
        let cert = certify_lambda_convex(&body, 0.25, 1e-7).unwrap();
        let res = &verify_ball_rolling(&body, &cert, &[body.grid()[7]], 1e-6).unwrap()[0];
        let config = rigidity_probe(&body, res, 1e-6).unwrap();
        assert_ne!(config, ContactConfiguration::Surrounding);
    }

    #[test]
    fn diameter_bound_on_the_ellipse() {
        let body = make_ellipse_like(curv(0.0), [2.0, 1.0], 256).unwrap();
        let cert = certify_lambda_convex(&body, 0.25, 1e-7).unwrap();
        let report = verify_diameter(&body, &cert, 1e-6).unwrap();
        assert!(report.pass);
        assert!((report.diameter - 4.0).abs() < 1e-3, "diameter {}", report.diameter);
        assert!((report.bound - 8.0).abs() < 1e-12);
        assert!((report.margin - 4.0).abs() < 1e-3);
    }

    #[test]
    fn diameter_equality_for_critical_spheres() {
        // Even node counts put antipodal pairs on the grid, so the grid
        // diameter hits 2 R_lambda exactly at the critical radius.
        for c in [-1.0, 0.0, 1.0] {
            let r = if c > 0.0 { 0.8 } else { 1.0 };
            let lambda = ct(c, r).unwrap();
            let center = ModelPoint::base(curv(c), 2);
            let body = make_geodesic_sphere(curv(c), 2, &center, r, 64).unwrap();
            let cert = certify_lambda_convex(&body, lambda, 1e-7).unwrap();
            assert!(cert.pass, "c = {c}");
            let report = verify_diameter(&body, &cert, 1e-6).unwrap();
            assert!(report.pass, "c = {c}");
            assert!(
                report.margin.abs() < 1e-6,
                "c = {c}: margin {}",
                report.margin
            );
            assert!(report.ambient_bound_ok);
        }
    }

    #[test]
    fn volume_bounds_on_the_ellipse() {
        let body = make_ellipse_like(curv(0.0), [2.0, 1.0], 128).unwrap();
        let cert = certify_lambda_convex(&body, 0.25, 1e-7).unwrap();
        let report = verify_volume(&body, &cert, 1e-6).unwrap();
        assert!(report.pass);
        assert!((report.volume - 2.0 * PI).abs() < 1e-8, "area {}", report.volume);
        assert!((report.volume_bound - 16.0 * PI).abs() < 1e-12);
        assert!((report.boundary - 9.688448220547677).abs() < 1e-8);
        assert!((report.boundary_bound - 8.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn volume_equality_for_the_critical_disk() {
        let body = flat_sphere(2.0, 128);
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        let report = verify_volume(&body, &cert, 1e-6).unwrap();
        assert!(report.pass);
        assert!((report.volume - report.volume_bound).abs() < 1e-9 * report.volume_bound);
        assert!((report.boundary - report.boundary_bound).abs() < 1e-9 * report.boundary_bound);
    }

    #[test]
    fn hyperbolic_disk_volume_stays_below_the_critical_ball() {
        let center = ModelPoint::base(curv(-1.0), 2);
        let body = make_geodesic_sphere(curv(-1.0), 2, &center, 1.0, 128).unwrap();
        let cert = certify_lambda_convex(&body, 1.1, 1e-7).unwrap();
        assert!(cert.pass);
        let report = verify_volume(&body, &cert, 1e-6).unwrap();
        assert!(report.pass);
        let want = 2.0 * PI * (1f64.cosh() - 1.0);
        assert!((report.volume - want).abs() < 1e-8 * want);
        assert!(report.volume < report.volume_bound);
        assert!(report.boundary < report.boundary_bound);
    }

    #[test]
    fn volume_check_on_a_revolution_body_converges_and_passes() {
        let profile = Profile::Harmonics {
            base: 1.0,
            terms: vec![HarmonicTerm { k: 2, cos_amp: 0.05, sin_amp: 0.0 }],
        };
        let body = make_revolution_body(curv(0.0), profile, 48).unwrap();
        let cert = certify_lambda_convex(&body, 0.5, 1e-7).unwrap();
        assert!(cert.pass, "margin {}", cert.margin());
        let report = verify_volume(&body, &cert, 1e-3).unwrap();
        assert!(report.pass);
        assert!(report.volume_error < 1e-3);
    }

    #[test]
    fn volume_check_refuses_unsupported_tolerances() {
        // The periodic rule drops every harmonic except multiples of the
        // node count, so a k = 5 profile on 10 nodes aliases its cos(10 t)
        // integrand component onto the mean and refinement moves the value.
        let profile = Profile::Harmonics {
            base: 1.0,
            terms: vec![HarmonicTerm { k: 5, cos_amp: 0.02, sin_amp: 0.0 }],
        };
        let body = make_radial_curve(curv(0.0), profile, 10).unwrap();
        let cert = certify_lambda_convex(&body, 0.2, 1e-7).unwrap();
        assert!(cert.pass, "margin {}", cert.margin());
        assert!(matches!(
            verify_volume(&body, &cert, 1e-12),
            Err(Error::QuadratureNonConvergence { .. })
        ));
    }

    #[test]
    fn hull_penetration_matches_the_closed_form() {
        // r chosen so the arcs have normal curvature 2: r = arccoth 2.
        let r = 3f64.ln() / 2.0;
        let separation = 3.0 * r;
        let report = counterexample_two_ball_hull(curv(-1.0), r, separation, 512, 1e-3).unwrap();
        assert!(report.confirmed);
        // Closed form: the rolled center sits r - y0 above the midpoint,
        // where y0 = asinh(sinh r / cosh(s/2)) is the midpoint-to-edge
        // distance; the opposite straight edge then cuts to depth
        // 2 (r - y0).
        let y0 = (r.sinh() / (separation / 2.0).cosh()).asinh();
        let want = 2.0 * (r - y0);
        assert!(
            (report.penetration - want).abs() < 1e-4,
            "penetration {} vs closed form {}",
            report.penetration,
            want
        );
        // The worst cut sits on the opposite edge, half a period away.
        let body = make_two_ball_hull(curv(-1.0), r, separation, 0.0, 512).unwrap();
        let argmax_u = body.grid()[report.argmax_index][0];
        let gap = (argmax_u - report.tangent_point[0]).rem_euclid(1.0);
        assert!((gap - 0.5).abs() < 0.01, "argmax at u = {argmax_u}");
    }

    #[test]
    fn stadium_control_has_zero_penetration() {
        let report = counterexample_two_ball_hull(curv(0.0), 0.5, 1.5, 512, 1e-9).unwrap();
        assert!(!report.confirmed);
        assert_eq!(report.penetration, 0.0);
    }

    #[test]
    fn penetration_shrinks_with_the_construction_scale() {
        // Curvature effects vanish at small scale like r^3, so halving r
        // must cut the depth by far more than half.
        let pen = |r: f64| {
            counterexample_two_ball_hull(curv(-1.0), r, 3.0 * r, 256, 1e-12)
                .unwrap()
                .penetration
        };
        let (p1, p2) = (pen(0.6), pen(0.3));
        assert!(p1 > 0.0 && p2 > 0.0);
        assert!(p2 < 0.3 * p1, "depths {p1} vs {p2}");
    }

    #[test]
    fn overlapping_balls_are_rejected() {
        assert!(matches!(
            counterexample_two_ball_hull(curv(-1.0), 0.5, 0.9, 128, 1e-6),
            Err(Error::BallsNotDisjoint { .. })
        ));
    }

    #[test]
    fn inward_offsets_keep_their_depth() {
        let body = make_ellipse_like(curv(0.0), [2.0, 1.0], 256).unwrap();
        let cert = certify_lambda_convex(&body, 0.25, 1e-7).unwrap();
        let worst = depth_margin_diagnostic(&body, &cert, [0.3, 0.0], 0.01, 4).unwrap();
        assert!(worst <= 1e-9, "violation {worst}");
    }

    #[test]
    fn report_serialization_round_trips() {
        let report = VerificationReport {
            scenario: "ellipse-roll".into(),
            curvature: 0.0,
            lambda: 0.25,
            r_lambda: 4.0,
            checks: vec![CheckVerdict {
                name: "ball_rolling".into(),
                pass: true,
                margin: 0.125,
                tolerance: 1e-6,
            }],
            runtime_seconds: 0.25,
        };
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks[0].name, "ball_rolling");
        assert_eq!(back.checks.len(), 1);
        assert!(back.checks[0].pass);
    }
}
