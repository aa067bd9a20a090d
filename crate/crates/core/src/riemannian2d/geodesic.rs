//! Geodesics and boundary-value distances on a chart metric.
//!
//! The initial value problem is a fixed-step RK4 on (u, du/ds) with the
//! Christoffel contraction as the force term. The boundary value problem
//! (chart_distance) is solved by shooting: a full-circle direction sweep
//! finds the closest-approach candidate for each target, then a Newton
//! iteration on (initial angle, arclength) drives the endpoint onto the
//! target. Arclength equals distance because initial velocities are unit
//! and RK4 conserves speed to far below the miss tolerance.

use std::f64::consts::TAU;

use serde::Serialize;

use super::metric::{christoffel, ChartMetric};
use crate::error::{Error, Result};

/// Directions tried in the initial shooting sweep.
pub const SWEEP_DIRECTIONS: usize = 720;
/// Integration steps per sweep path; coarse on purpose, the sweep only has
/// to land inside the Newton basin.
const SWEEP_STEPS: usize = 48;
/// Steps per path during Newton refinement.
const FINE_STEPS: usize = 512;
/// Endpoint miss (chart coordinates) above which shooting reports failure.
pub const MISS_TOL: f64 = 1e-8;
const NEWTON_ITERS: usize = 30;
const THETA_PROBE: f64 = 1e-6;

/// One sample of a unit-speed geodesic.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GeodesicState {
    pub u: [f64; 2],
    pub velocity: [f64; 2],
    pub s: f64,
}

/// A solved boundary value problem: the geodesic from the query point that
/// ends on the target.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Shot {
    /// Arclength of the connecting geodesic.
    pub length: f64,
    /// Unit initial velocity in chart coordinates.
    pub initial_velocity: [f64; 2],
    /// Endpoint error in chart coordinates.
    pub miss: f64,
}

fn rhs(metric: &ChartMetric, y: &[f64; 4]) -> Result<[f64; 4]> {
    let gamma = christoffel(metric, [y[0], y[1]])?;
    let w = [y[2], y[3]];
    let mut acc = [0.0; 2];
    for (k, a) in acc.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += gamma[k][i][j] * w[i] * w[j];
            }
        }
        *a = -s;
    }
    Ok([w[0], w[1], acc[0], acc[1]])
}

// numerics::rk4_step takes an infallible closure; the geodesic force term
// can fail (metric degeneracy off the good region), so the stages are
// unrolled here with error propagation instead.
fn rk4(metric: &ChartMetric, y: &[f64; 4], h: f64) -> Result<[f64; 4]> {
    let k1 = rhs(metric, y)?;
    let mut y2 = *y;
    for i in 0..4 {
        y2[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = rhs(metric, &y2)?;
    for i in 0..4 {
        y2[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = rhs(metric, &y2)?;
    for i in 0..4 {
        y2[i] = y[i] + h * k3[i];
    }
    let k4 = rhs(metric, &y2)?;
    let mut out = *y;
    for i in 0..4 {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Integrate the unit-speed geodesic from `start` in the direction of
/// `direction` (any nonzero chart vector; it is normalized in the metric)
/// for the given arclength. States are returned at every step, the first
/// one at s = 0. Leaving the chart domain is an error.
pub fn integrate_geodesic(
    metric: &ChartMetric,
    start: [f64; 2],
    direction: [f64; 2],
    length: f64,
    step: f64,
) -> Result<Vec<GeodesicState>> {
    if !metric.contains(start) {
        return Err(Error::invalid(format!(
            "geodesic start ({}, {}) outside the chart domain",
            start[0], start[1]
        )));
    }
    if !length.is_finite() || length < 0.0 {
        return Err(Error::invalid("geodesic length must be nonnegative"));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::invalid("geodesic step must be positive"));
    }
    let m = metric.metric_at(start)?;
    let nrm = m.norm(direction);
    if !nrm.is_finite() || nrm <= 0.0 {
        return Err(Error::invalid("geodesic direction must be nonzero"));
    }
    let w = [direction[0] / nrm, direction[1] / nrm];
    let mut states = vec![GeodesicState {
        u: start,
        velocity: w,
        s: 0.0,
    }];
    if length == 0.0 {
        return Ok(states);
    }
    let n = (length / step).ceil() as usize;
    if n > 4_000_000 {
        return Err(Error::invalid("geodesic step too small for the length"));
    }
    let h = length / n as f64;
    let mut y = [start[0], start[1], w[0], w[1]];
    for k in 1..=n {
        y = rk4(metric, &y, h)?;
        if !metric.contains([y[0], y[1]]) {
            return Err(Error::invalid(format!(
                "geodesic left the chart domain at ({}, {})",
                y[0], y[1]
            )));
        }
        states.push(GeodesicState {
            u: [y[0], y[1]],
            velocity: [y[2], y[3]],
            s: h * k as f64,
        });
    }
    Ok(states)
}

/// Endpoint (position, velocity) of the unit-speed geodesic with initial
/// chart angle theta after arclength s, without storing the path.
fn endpoint(
    metric: &ChartMetric,
    from: [f64; 2],
    theta: f64,
    s: f64,
    h_nominal: f64,
) -> Result<([f64; 2], [f64; 2])> {
    let m = metric.metric_at(from)?;
    let dir = [theta.cos(), theta.sin()];
    let nrm = m.norm(dir);
    let mut y = [from[0], from[1], dir[0] / nrm, dir[1] / nrm];
    let n = (s / h_nominal).ceil().max(1.0) as usize;
    let h = s / n as f64;
    for _ in 0..n {
        y = rk4(metric, &y, h)?;
        if !metric.contains([y[0], y[1]]) {
            return Err(Error::invalid("geodesic left the chart domain"));
        }
    }
    Ok(([y[0], y[1]], [y[2], y[3]]))
}

/// Metric length of the straight chart segment from a to b (composite
/// Simpson). An upper bound for the distance, used to cap shooting.
fn chart_segment_length(metric: &ChartMetric, a: [f64; 2], b: [f64; 2]) -> Result<f64> {
    let d = [b[0] - a[0], b[1] - a[1]];
    let n = 32;
    let mut sum = 0.0;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let p = [a[0] + d[0] * t, a[1] + d[1] * t];
        let val = metric.metric_at(p)?.norm(d);
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += w * val;
    }
    Ok(sum / (3.0 * n as f64))
}

/// Closest-approach candidates (theta, s, squared chart miss) per target
/// from the coarse full-circle sweep.
fn sweep_candidates(
    metric: &ChartMetric,
    from: [f64; 2],
    targets: &[[f64; 2]],
    s_max: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    let m = metric.metric_at(from)?;
    let h = s_max / SWEEP_STEPS as f64;
    let mut best = vec![(f64::NAN, f64::NAN, f64::INFINITY); targets.len()];
    for di in 0..SWEEP_DIRECTIONS {
        let theta = TAU * di as f64 / SWEEP_DIRECTIONS as f64;
        let dir = [theta.cos(), theta.sin()];
        let nrm = m.norm(dir);
        let mut y = [from[0], from[1], dir[0] / nrm, dir[1] / nrm];
        for k in 1..=SWEEP_STEPS {
            y = match rk4(metric, &y, h) {
                Ok(v) => v,
                Err(_) => break,
            };
            if !metric.contains([y[0], y[1]]) {
                break;
            }
            let s = h * k as f64;
            for (ti, t) in targets.iter().enumerate() {
                let dx = y[0] - t[0];
                let dy = y[1] - t[1];
                let d2 = dx * dx + dy * dy;
                if d2 < best[ti].2 {
                    best[ti] = (theta, s, d2);
                }
            }
        }
    }
    Ok(best)
}

/// Newton iteration on (theta, s) for the endpoint map, with a trust region
/// and domain-exit backtracking. None when it fails to meet MISS_TOL.
fn newton_refine(
    metric: &ChartMetric,
    from: [f64; 2],
    target: [f64; 2],
    theta0: f64,
    s0: f64,
    h_fine: f64,
    s_cap: f64,
) -> Option<(f64, f64, f64)> {
    let mut theta = theta0;
    let mut s = s0.clamp(1e-9, s_cap);
    let mut end = endpoint(metric, from, theta, s, h_fine).ok()?;
    for _ in 0..NEWTON_ITERS {
        let f = [end.0[0] - target[0], end.0[1] - target[1]];
        let miss = (f[0] * f[0] + f[1] * f[1]).sqrt();
        if miss < 0.3 * MISS_TOL {
            return Some((theta, s, miss));
        }
        let probe = endpoint(metric, from, theta + THETA_PROBE, s, h_fine).ok()?;
        let jt = [
            (probe.0[0] - end.0[0]) / THETA_PROBE,
            (probe.0[1] - end.0[1]) / THETA_PROBE,
        ];
        let w = end.1;
        let det = jt[0] * w[1] - jt[1] * w[0];
        if det.abs() < 1e-18 {
            return None;
        }
        let mut dtheta = ((-f[0]) * w[1] + f[1] * w[0]) / det;
        let mut ds = (jt[1] * f[0] - jt[0] * f[1]) / det;
        dtheta = dtheta.clamp(-0.5, 0.5);
        ds = ds.clamp(-0.25 * s_cap, 0.25 * s_cap);
        let mut accepted = None;
        for _ in 0..6 {
            let t_new = theta + dtheta;
            let s_new = (s + ds).clamp(1e-9, s_cap);
            if let Ok(e) = endpoint(metric, from, t_new, s_new, h_fine) {
                accepted = Some((t_new, s_new, e));
                break;
            }
            dtheta *= 0.5;
            ds *= 0.5;
        }
        let (t_new, s_new, e) = accepted?;
        theta = t_new;
        s = s_new;
        end = e;
    }
    let f = [end.0[0] - target[0], end.0[1] - target[1]];
    let miss = (f[0] * f[0] + f[1] * f[1]).sqrt();
    if miss <= MISS_TOL {
        Some((theta, s, miss))
    } else {
        None
    }
}

/// Shoot geodesics from one point to many targets, sharing the sweep.
pub fn shoot_many(
    metric: &ChartMetric,
    from: [f64; 2],
    targets: &[[f64; 2]],
) -> Result<Vec<Shot>> {
    if !metric.contains(from) {
        return Err(Error::invalid("shooting origin outside the chart domain"));
    }
    if targets.is_empty() {
        return Err(Error::invalid("shooting needs at least one target"));
    }
    let mut seg = Vec::with_capacity(targets.len());
    let mut s_max = 0.0f64;
    for t in targets {
        if !metric.contains(*t) {
            return Err(Error::invalid(format!(
                "shooting target ({}, {}) outside the chart domain",
                t[0], t[1]
            )));
        }
        let l = chart_segment_length(metric, from, *t)?;
        s_max = s_max.max(l);
        seg.push(l);
    }
    let s_max = 1.05 * s_max.max(1e-6) + 1e-3;
    let s_cap = 1.6 * s_max;
    let h_fine = s_max / FINE_STEPS as f64;
    let m_from = metric.metric_at(from)?;
    let best = sweep_candidates(metric, from, targets, s_max)?;
    let mut out = Vec::with_capacity(targets.len());
    for (ti, t) in targets.iter().enumerate() {
        if (t[0] - from[0]).abs() < 1e-12 && (t[1] - from[1]).abs() < 1e-12 {
            out.push(Shot {
                length: 0.0,
                initial_velocity: [0.0, 0.0],
                miss: 0.0,
            });
            continue;
        }
        let (theta0, s0, d2) = best[ti];
        let refined = if d2.is_finite() {
            newton_refine(metric, from, *t, theta0, s0, h_fine, s_cap)
        } else {
            None
        }
        .or_else(|| {
            // Fall back to the straight chart line as the initial guess.
            let line_theta = (t[1] - from[1]).atan2(t[0] - from[0]);
            newton_refine(metric, from, *t, line_theta, seg[ti], h_fine, s_cap)
        });
        match refined {
            Some((theta, s, miss)) => {
                let dir = [theta.cos(), theta.sin()];
                let nrm = m_from.norm(dir);
                out.push(Shot {
                    length: s,
                    initial_velocity: [dir[0] / nrm, dir[1] / nrm],
                    miss,
                });
            }
            None => {
                return Err(Error::NoGeodesicInChart {
                    from_u0: from[0],
                    from_u1: from[1],
                    to_u0: t[0],
                    to_u1: t[1],
                });
            }
        }
    }
    Ok(out)
}

/// Shoot the geodesic from a to b.
pub fn shoot(metric: &ChartMetric, a: [f64; 2], b: [f64; 2]) -> Result<Shot> {
    Ok(shoot_many(metric, a, &[b])?.pop().expect("one target in, one shot out"))
}

/// Geodesic distance between two chart points.
pub fn chart_distance(metric: &ChartMetric, a: [f64; 2], b: [f64; 2]) -> Result<f64> {
    Ok(shoot(metric, a, b)?.length)
}

/// Endpoints of n unit-speed geodesics of length r fanned uniformly in
/// chart angle around a center: a geodesic circle, traced counterclockwise
/// and closed in chart coordinates.
pub fn geodesic_circle(
    metric: &ChartMetric,
    center: [f64; 2],
    r: f64,
    n: usize,
) -> Result<Vec<[f64; 2]>> {
    if !metric.contains(center) {
        return Err(Error::invalid("circle center outside the chart domain"));
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::invalid("circle radius must be positive"));
    }
    if n < 4 {
        return Err(Error::invalid("circle needs at least 4 rays"));
    }
    let h = r / 128.0;
    let mut points = Vec::with_capacity(n);
    for j in 0..n {
        let theta = TAU * j as f64 / n as f64;
        let (p, _) = endpoint(metric, center, theta, r, h)?;
        points.push(p);
    }
    Ok(points)
}
