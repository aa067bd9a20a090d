//! Radial angle of a boundary point seen from an interior origin, and the
//! machinery built on it.
//!
//! Fix an origin p inside a body with boundary Σ. For a boundary point q,
//! the radial angle φ(q) is the angle between the arrival velocity of the
//! geodesic p → q and the outward direction −ν(q). The ambient gradient of
//! the distance-to-p function splits into a tangential part of length
//! |sin φ| and a normal part −cos φ · ν; following the normalized
//! tangential part traces curves along which t = |pq| changes monotonically
//! at rate dt/ds = sin φ. Along such curves the normal curvature of Σ in
//! the flow direction satisfies
//!
//! ```text
//! k(q, X) = ct_c(t) cos φ + d(cos φ)/dt,
//! ```
//!
//! and comparing against the geodesic sphere of normal curvature λ through
//! the same (d, t) data bounds φ by the sphere's angle φ_λ. The functions
//! here evaluate each ingredient numerically and certify the comparison on
//! sampled bodies.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::convex_body::{normal_curvature, unit_inward_normal, Body, Certification, Chart};
use crate::error::{Error, Result};
use crate::model_space::{
    angle, angle_from_sides, characteristic_radius, ct, distance, log_map, sn, ModelPoint,
};

/// Trajectory termination threshold: the flow field is undefined where the
/// tangential gradient vanishes, and φ below this floor counts as vanished.
pub const PHI_FLOOR: f64 = 1e-6;

const MAX_SAMPLES: usize = 400_000;

/// An interior origin with its distance to the boundary and the chart
/// parameter of the nearest boundary point.
#[derive(Clone, Debug)]
pub struct Origin {
    pub p: ModelPoint,
    /// Distance from p to the boundary (after local refinement).
    pub d: f64,
    /// Chart parameter of the nearest boundary point.
    pub foot: [f64; 2],
    /// Grid index of the discrete argmin; ties go to the smallest index.
    pub foot_index: usize,
}

/// Distance to p and its chart gradient at chart parameter u. The returned
/// tangent vector is the log map q → p (length t).
fn distance_gradient(
    chart: &dyn Chart,
    p: &ModelPoint,
    u: [f64; 2],
) -> Result<(f64, Vec<f64>, crate::model_space::TangentVector)> {
    let q = chart.point(u);
    let t = distance(p, &q)?;
    if t < 1e-14 {
        return Err(Error::CoincidentPoints);
    }
    let log = log_map(&q, p)?;
    let c = chart.curvature();
    let k = chart.dim() - 1;
    // grad of dist(p, .) at q is the unit vector away from p, so the chart
    // gradient is -<d1, log/t>.
    let unit = log.vec() / t;
    let mut g = vec![0.0; k];
    for (i, gi) in g.iter_mut().enumerate() {
        let ti = chart.d1(u, i);
        *gi = -c.form(ti.as_slice(), unit.as_slice());
    }
    Ok((t, g, log))
}

/// Wrap periodic components into the domain; report `None` when a bounded
/// component leaves it.
pub(crate) fn wrap_into_domain(chart: &dyn Chart, mut u: [f64; 2]) -> Option<[f64; 2]> {
    let dom = chart.domain();
    for i in 0..chart.dim() - 1 {
        let [lo, hi] = dom[i];
        let len = hi - lo;
        if chart.periodic(i) {
            u[i] = (u[i] - lo).rem_euclid(len) + lo;
        } else if u[i] < lo || u[i] > hi {
            return None;
        }
    }
    Some(u)
}

/// Like `wrap_into_domain` but clamps bounded components a hair inside the
/// domain instead of failing; used by the foot refinement.
fn clamp_into_domain(chart: &dyn Chart, mut u: [f64; 2]) -> [f64; 2] {
    let dom = chart.domain();
    for i in 0..chart.dim() - 1 {
        let [lo, hi] = dom[i];
        let len = hi - lo;
        if chart.periodic(i) {
            u[i] = (u[i] - lo).rem_euclid(len) + lo;
        } else {
            let margin = 1e-7 * len;
            u[i] = u[i].clamp(lo + margin, hi - margin);
        }
    }
    u
}

/// Find the boundary point nearest to p: discrete grid minimum followed by
/// a damped Newton refinement of dist(p, chart(u)) in chart coordinates.
pub fn locate_origin(body: &Body, p: &ModelPoint) -> Result<Origin> {
    body.curvature().same(&p.curvature())?;
    if p.dim() != body.dim() {
        return Err(Error::invalid(format!(
            "origin dimension {} does not match the body dimension {}",
            p.dim(),
            body.dim()
        )));
    }
    let chart = body.chart();
    let mut best = (f64::INFINITY, 0usize);
    for (idx, &u) in body.grid().iter().enumerate() {
        let t = distance(p, &chart.point(u))?;
        if t < best.0 {
            best = (t, idx);
        }
    }
    let foot_index = best.1;
    let k = chart.dim() - 1;
    let mut u = body.grid()[foot_index];
    let (mut t, mut g, _) = distance_gradient(chart, p, u)?;

    for _ in 0..60 {
        let gnorm = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if gnorm < 1e-13 * (1.0 + t) {
            break;
        }
        // Finite-difference Hessian of t(u) around the current iterate.
        let hstep = 1e-6;
        let mut hess = [[0.0f64; 2]; 2];
        for j in 0..k {
            let mut up = u;
            let mut um = u;
            up[j] += hstep;
            um[j] -= hstep;
            let (_, gp, _) = distance_gradient(chart, p, clamp_into_domain(chart, up))?;
            let (_, gm, _) = distance_gradient(chart, p, clamp_into_domain(chart, um))?;
            for i in 0..k {
                hess[i][j] = (gp[i] - gm[i]) / (2.0 * hstep);
            }
        }
        if k == 2 {
            let avg = 0.5 * (hess[0][1] + hess[1][0]);
            hess[0][1] = avg;
            hess[1][0] = avg;
        }
        // Levenberg-damped Newton step; increase damping until t decreases.
        let mut mu = 0.0f64;
        let mut accepted = false;
        for _ in 0..12 {
            let step = solve_spd(&hess, &g, mu, k);
            if let Some(step) = step {
                let trial = clamp_into_domain(
                    chart,
                    [u[0] - step[0], u[1] - if k == 2 { step[1] } else { 0.0 }],
                );
                if let Ok((t_new, g_new, _)) = distance_gradient(chart, p, trial) {
                    if t_new <= t {
                        let moved = (trial[0] - u[0]).abs().max((trial[1] - u[1]).abs());
                        u = trial;
                        t = t_new;
                        g = g_new;
                        accepted = true;
                        if moved < 1e-14 {
                            return finish_origin(body, p, u, t, foot_index);
                        }
                        break;
                    }
                }
            }
            mu = if mu == 0.0 { 1e-8 } else { mu * 16.0 };
        }
        if !accepted {
            break;
        }
    }
    finish_origin(body, p, u, t, foot_index)
}

fn finish_origin(
    body: &Body,
    p: &ModelPoint,
    foot: [f64; 2],
    d: f64,
    foot_index: usize,
) -> Result<Origin> {
    if d < 1e-12 {
        return Err(Error::invalid("origin lies on the boundary"));
    }
    // At the foot the geodesic to p runs along the normal line; p is
    // interior exactly when it lies on the inward side.
    let chart = body.chart();
    let q = chart.point(foot);
    let log = log_map(&q, p)?;
    let nu = unit_inward_normal(chart, foot)?;
    let side = body.curvature().form(log.vec().as_slice(), nu.vec().as_slice());
    if side <= 0.0 {
        return Err(Error::invalid("origin point is not inside the body"));
    }
    Ok(Origin {
        p: p.clone(),
        d,
        foot,
        foot_index,
    })
}

/// Solve (H + mu I) x = g for the k-dimensional symmetric H; `None` when the
/// damped matrix is not positive definite.
fn solve_spd(h: &[[f64; 2]; 2], g: &[f64], mu: f64, k: usize) -> Option<[f64; 2]> {
    if k == 1 {
        let a = h[0][0] + mu;
        if a <= 0.0 {
            return None;
        }
        return Some([g[0] / a, 0.0]);
    }
    let a = h[0][0] + mu;
    let b = h[0][1];
    let d = h[1][1] + mu;
    let det = a * d - b * b;
    if a <= 0.0 || det <= 0.0 {
        return None;
    }
    Some([(d * g[0] - b * g[1]) / det, (a * g[1] - b * g[0]) / det])
}

fn radial_angle_at(chart: &dyn Chart, p: &ModelPoint, u: [f64; 2]) -> Result<f64> {
    let q = chart.point(u);
    let t = distance(p, &q)?;
    if t < 1e-14 {
        return Err(Error::CoincidentPoints);
    }
    let log = log_map(&q, p)?;
    let nu = unit_inward_normal(chart, u)?;
    // The arrival velocity of p -> q is minus the log direction, and the
    // angle against -nu equals the angle of the log direction against nu.
    angle(&log, &nu)
}

/// Angle at the boundary point chart(u) between the arrival direction of
/// the geodesic from p and the outward normal. Zero means the geodesic
/// arrives head-on (as at the nearest boundary point).
pub fn radial_angle(body: &Body, p: &ModelPoint, u: [f64; 2]) -> Result<f64> {
    body.curvature().same(&p.curvature())?;
    radial_angle_at(body.chart(), p, u)
}

/// Residuals of the gradient split at a boundary point: the ambient unit
/// gradient of dist(p, .) must project onto the boundary tangent plane with
/// length |sin φ| and onto the inward normal with coefficient −cos φ.
#[derive(Clone, Copy, Debug)]
pub struct GradientSplit {
    /// |tangential projection| − |sin φ|.
    pub tangential: f64,
    /// ⟨gradient, ν⟩ + cos φ.
    pub normal: f64,
}

pub fn gradient_decomposition_check(
    body: &Body,
    p: &ModelPoint,
    u: [f64; 2],
) -> Result<GradientSplit> {
    body.curvature().same(&p.curvature())?;
    let chart = body.chart();
    let (t, g, log) = distance_gradient(chart, p, u)?;
    let phi = radial_angle_at(chart, p, u)?;
    let k = chart.dim() - 1;
    // |P_T grad|^2 = g^T G^{-1} g via the Gram matrix of the chart tangents.
    let c = chart.curvature();
    let mut gram = [[0.0f64; 2]; 2];
    let tangents: Vec<DVector<f64>> = (0..k).map(|i| chart.d1(u, i)).collect();
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = c.form(tangents[i].as_slice(), tangents[j].as_slice());
        }
    }
    let v = solve_spd(&gram, &g, 0.0, k)
        .ok_or_else(|| Error::ImmersionFailure { u0: u[0], u1: u[1] })?;
    let proj2 = g[0] * v[0] + if k == 2 { g[1] * v[1] } else { 0.0 };
    let proj = proj2.max(0.0).sqrt();

    let nu = unit_inward_normal(chart, u)?;
    let grad = -log.vec() / t;
    let normal_coeff = c.form(grad.as_slice(), nu.vec().as_slice());
    Ok(GradientSplit {
        tangential: proj - phi.sin().abs(),
        normal: normal_coeff + phi.cos(),
    })
}

/// Direction of travel for the distance along an integrated flow line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    IncreasingT,
    DecreasingT,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::IncreasingT => 1.0,
            Direction::DecreasingT => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrajectorySample {
    /// Arclength along the boundary from the start of the trajectory.
    pub s: f64,
    /// Distance to the origin.
    pub t: f64,
    /// Chart parameter.
    pub u: [f64; 2],
    /// Radial angle.
    pub phi: f64,
}

/// A flow line of the normalized tangential gradient of dist(p, .) on the
/// boundary, sampled per step. t is strictly monotone along the samples.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub direction: Direction,
}

impl Trajectory {
    /// CSV export with one row per sample: arclength, distance, radial
    /// angle, then the ambient coordinates of the boundary point.
    pub fn csv(&self, body: &Body) -> String {
        let chart = body.chart();
        let ambient = body.curvature().ambient_dim(body.dim());
        let mut out = String::from("s,t,phi");
        for i in 0..ambient {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for sample in &self.samples {
            let q = chart.point(sample.u);
            out.push_str(&format!("{},{},{}", sample.s, sample.t, sample.phi));
            for x in q.coords().iter() {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

struct FlowEval {
    t: f64,
    phi: f64,
    /// Unit-speed chart velocity in the requested direction.
    v: [f64; 2],
}

fn flow_eval(chart: &dyn Chart, p: &ModelPoint, u: [f64; 2], sign: f64) -> Result<FlowEval> {
    let (t, g, _) = distance_gradient(chart, p, u)?;
    let phi = radial_angle_at(chart, p, u)?;
    let k = chart.dim() - 1;
    let c = chart.curvature();
    let mut gram = [[0.0f64; 2]; 2];
    let tangents: Vec<DVector<f64>> = (0..k).map(|i| chart.d1(u, i)).collect();
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = c.form(tangents[i].as_slice(), tangents[j].as_slice());
        }
    }
    let raw = solve_spd(&gram, &g, 0.0, k)
        .ok_or_else(|| Error::ImmersionFailure { u0: u[0], u1: u[1] })?;
    let speed2 = g[0] * raw[0] + if k == 2 { g[1] * raw[1] } else { 0.0 };
    let speed = speed2.max(0.0).sqrt();
    let mut v = [0.0; 2];
    if speed > 1e-14 {
        for i in 0..k {
            v[i] = sign * raw[i] / speed;
        }
    }
    Ok(FlowEval { t, phi, v })
}

/// Integrate the normalized tangential-gradient flow of dist(p, .) from
/// chart parameter u0 with a classical fourth-order step. Terminates when
/// the radial angle drops below `PHI_FLOOR` (the tangential gradient
/// vanishes: the boundary touches the geodesic sphere through that point)
/// or when a bounded chart axis runs out.
pub fn integrate_trajectory(
    body: &Body,
    p: &ModelPoint,
    u0: [f64; 2],
    direction: Direction,
    step: f64,
) -> Result<Trajectory> {
    body.curvature().same(&p.curvature())?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("step must be positive"));
    }
    let chart = body.chart();
    let sign = direction.sign();
    let mut u = wrap_into_domain(chart, u0)
        .ok_or_else(|| Error::invalid("start parameter outside the chart domain"))?;
    let mut eval = flow_eval(chart, p, u, sign)?;
    if eval.phi <= PHI_FLOOR {
        return Err(Error::StiffTrajectory {
            phi: eval.phi,
            floor: PHI_FLOOR,
        });
    }
    let mut samples = vec![TrajectorySample {
        s: 0.0,
        t: eval.t,
        u,
        phi: eval.phi,
    }];
    let mut s = 0.0;
    let mut h = step;
    let h_min = step * 1e-6;

    'outer: while samples.len() < MAX_SAMPLES {
        if eval.phi < PHI_FLOOR {
            break;
        }
        loop {
            // One classical Runge-Kutta step in chart coordinates; any
            // stage leaving a bounded axis ends the trajectory.
            let stage = |du: [f64; 2], frac: f64| -> Option<[f64; 2]> {
                wrap_into_domain(chart, [u[0] + frac * h * du[0], u[1] + frac * h * du[1]])
            };
            let k1 = eval.v;
            let Some(u2) = stage(k1, 0.5) else { break 'outer };
            let Ok(e2) = flow_eval(chart, p, u2, sign) else { break 'outer };
            let Some(u3) = stage(e2.v, 0.5) else { break 'outer };
            let Ok(e3) = flow_eval(chart, p, u3, sign) else { break 'outer };
            let Some(u4) = stage(e3.v, 1.0) else { break 'outer };
            let Ok(e4) = flow_eval(chart, p, u4, sign) else { break 'outer };
            let k2 = e2.v;
            let k3 = e3.v;
            let k4 = e4.v;
            let unew = [
                u[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                u[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ];
            let Some(unew) = wrap_into_domain(chart, unew) else { break 'outer };
            let Ok(enew) = flow_eval(chart, p, unew, sign) else { break 'outer };
            // The normalized field reverses across a critical point of t.
            // A step whose stages sample both sides averages across that
            // discontinuity and lands short (or past the reversal), so
            // require every stage and the landing point to agree with the
            // starting direction, and require real progress: dt/ds =
            // sin phi, hence a healthy step advances t by about h sin phi.
            let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
            let aligned = dot(k1, k2) > 0.0
                && dot(k1, k3) > 0.0
                && dot(k1, k4) > 0.0
                && dot(k1, enew.v) > 0.0;
            let floor_rate = 0.25 * eval.phi.sin().min(enew.phi.sin());
            if aligned && sign * (enew.t - eval.t) > floor_rate * h {
                s += h;
                u = unew;
                eval = enew;
                samples.push(TrajectorySample {
                    s,
                    t: eval.t,
                    u,
                    phi: eval.phi,
                });
                h = (h * 2.0).min(step);
                break;
            }
            // Rejected: the step spans a reversal or t did not advance.
            h *= 0.5;
            if h < h_min {
                return Err(Error::StiffTrajectory {
                    phi: eval.phi,
                    floor: PHI_FLOOR,
                });
            }
        }
    }
    if samples.len() >= MAX_SAMPLES {
        return Err(Error::invalid(
            "trajectory exceeded the sample cap before terminating",
        ));
    }
    Ok(Trajectory { samples, direction })
}

/// Worst absolute residual of the flow-line curvature identity
/// k(q, X) = ct_c(t) cos φ + d(cos φ)/dt over the interior samples of a
/// trajectory, with d(cos φ)/dt estimated by centered differences.
pub fn liouville_residual(traj: &Trajectory, body: &Body, p: &ModelPoint) -> Result<f64> {
    let n = traj.samples.len();
    if n < 5 {
        return Err(Error::invalid(format!(
            "curvature identity needs at least 5 trajectory samples, got {n}"
        )));
    }
    let chart = body.chart();
    let c = body.curvature().value();
    let k = body.dim() - 1;
    let sign = traj.direction.sign();
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let prev = &traj.samples[i - 1];
        let here = &traj.samples[i];
        let next = &traj.samples[i + 1];
        let eval = flow_eval(chart, p, here.u, sign)?;
        let kn = normal_curvature(chart, here.u, &eval.v[..k])?;
        let dcos_dt = (next.phi.cos() - prev.phi.cos()) / (next.t - prev.t);
        let residual = kn - ct(c, here.t)? * here.phi.cos() - dcos_dt;
        if residual.abs() > worst {
            worst = residual.abs();
        }
    }
    Ok(worst)
}

/// Radial angle on the geodesic sphere of normal curvature lambda, for an
/// origin at distance d from the sphere: the angle at the boundary vertex
/// of the triangle with sides R (to the center), t (to the origin) and
/// R − d opposite. Vanishes at t = d and t = 2R − d.
pub fn comparison_radial_angle(c: f64, lambda: f64, d: f64, t: f64) -> Result<f64> {
    let r = characteristic_radius(c, lambda)?;
    if !(d > 0.0 && d < r) {
        return Err(Error::invalid(format!(
            "origin distance d = {d} must lie strictly between 0 and R = {r}"
        )));
    }
    let lo = d;
    let hi = 2.0 * r - d;
    let slack = 1e-12 * hi.max(1.0);
    if t < lo - slack || t > hi + slack {
        return Err(Error::OutsideChordRange { t, lo, hi });
    }
    let t = t.clamp(lo, hi);
    angle_from_sides(c, r, t, r - d)
}

/// Outcome of the grid comparison of radial angles against the reference
/// sphere with the same boundary distance.
#[derive(Clone, Debug)]
pub struct RacReport {
    pub lambda: f64,
    /// Origin-to-boundary distance used on the sphere side.
    pub d: f64,
    pub r_lambda: f64,
    pub tol: f64,
    /// Grid points that fell inside the comparable distance range.
    pub checked: usize,
    /// Grid points beyond the sphere's distance range (none, for a body
    /// that actually fits in the sphere).
    pub skipped: usize,
    /// max over the grid of φ − φ_λ; negative means strict inequality.
    pub max_violation: f64,
    pub argmax_index: usize,
    pub pass: bool,
}

/// Check φ(q) ≤ φ_λ(t) + tol at every grid point whose distance t to p is
/// comparable, for a body certified λ-convex.
pub fn rac_check(
    body: &Body,
    cert: &Certification,
    p: &ModelPoint,
    tol: f64,
) -> Result<RacReport> {
    if !cert.pass {
        return Err(Error::NotCertified {
            reason: format!(
                "convexity certificate failed: min normal curvature {} < {}",
                cert.min_kappa, cert.lambda
            ),
        });
    }
    let lambda = cert.lambda;
    let c = body.curvature().value();
    let r_lambda = characteristic_radius(c, lambda)?;
    let origin = locate_origin(body, p)?;
    let d = origin.d;
    let hi = 2.0 * r_lambda - d;

    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut max_violation = f64::NEG_INFINITY;
    let mut argmax_index = 0usize;
    for (idx, &u) in body.grid().iter().enumerate() {
        let q = body.chart().point(u);
        let mut t = distance(p, &q)?;
        if t < d {
            // Roundoff below the refined minimum.
            t = d;
        }
        if t > hi {
            skipped += 1;
            continue;
        }
        let phi = radial_angle_at(body.chart(), p, u)?;
        let phi_ref = comparison_radial_angle(c, lambda, d, t)?;
        let violation = phi - phi_ref;
        if violation > max_violation {
            max_violation = violation;
            argmax_index = idx;
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(Error::invalid(
            "no grid point lies in the comparable distance range",
        ));
    }
    Ok(RacReport {
        lambda,
        d,
        r_lambda,
        tol,
        checked,
        skipped,
        max_violation,
        argmax_index,
        pass: max_violation <= tol,
    })
}

/// Minimum discrete slope of t ↦ (cos φ(t) − cos φ_λ(t)) · sn_c(t) along a
/// trajectory. Non-negative (up to tolerance) exactly when the comparison
/// difference is monotone, which is how the angle comparison propagates
/// from the foot outward.
pub fn monotonicity_certificate(
    traj: &Trajectory,
    c: f64,
    lambda: f64,
    d: f64,
) -> Result<f64> {
    let r = characteristic_radius(c, lambda)?;
    let hi = 2.0 * r - d;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for sample in &traj.samples {
        if sample.t < d - 1e-12 || sample.t > hi + 1e-12 {
            continue;
        }
        let phi_ref = comparison_radial_angle(c, lambda, d, sample.t)?;
        let f = sample.phi.cos() - phi_ref.cos();
        points.push((sample.t, f * sn(c, sample.t)));
    }
    if points.len() < 2 {
        return Err(Error::invalid(
            "monotonicity certificate needs at least 2 samples in range",
        ));
    }
    if traj.direction == Direction::DecreasingT {
        points.reverse();
    }
    // Quotients over gaps below the sampling resolution only amplify the
    // rounding already present in cos phi, so coalesce clustered samples:
    // advance until the gap clears a small fraction of the sampled span.
    let span = points[points.len() - 1].0 - points[0].0;
    let gap_floor = 1e-6 * span;
    let mut min_slope = f64::INFINITY;
    let (mut t0, mut g0) = points[0];
    for &(t1, g1) in &points[1..] {
        if t1 - t0 < gap_floor {
            continue;
        }
        let slope = (g1 - g0) / (t1 - t0);
        if slope < min_slope {
            min_slope = slope;
        }
        (t0, g0) = (t1, g1);
    }
    if !min_slope.is_finite() {
        // Every gap sits below resolution; report one quotient for the span.
        let (ta, ga) = points[0];
        let (tb, gb) = points[points.len() - 1];
        if tb - ta <= 0.0 {
            return Err(Error::invalid(
                "trajectory samples span no distance range",
            ));
        }
        min_slope = (gb - ga) / (tb - ta);
    }
    Ok(min_slope)
}
