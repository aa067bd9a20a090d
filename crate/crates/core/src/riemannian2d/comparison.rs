//! Comparison checks on chart metrics: curve turning, hinge triangles, and
//! ball rolling under a variable curvature floor.
//!
//! Curves are closed polylines in chart coordinates, sampled uniformly in
//! their parameter and traced counterclockwise; derivatives come from
//! central differences of neighboring samples, so every estimate here is
//! second order in the sample spacing.

use serde::Serialize;

use super::geodesic::{integrate_geodesic, shoot, shoot_many};
use super::metric::{
    christoffel, require_curvature_floor, ChartMetric, CurvatureBand, MetricAt, REGION_GRID,
};
use crate::error::{Error, Result};
use crate::model_space::{characteristic_radius, side_from_sides_angle};
use crate::numerics::safe_acos;

fn central_diffs(samples: &[[f64; 2]], idx: usize) -> ([f64; 2], [f64; 2]) {
    let n = samples.len();
    let p = samples[idx];
    let prev = samples[(idx + n - 1) % n];
    let next = samples[(idx + 1) % n];
    let d1 = [(next[0] - prev[0]) / 2.0, (next[1] - prev[1]) / 2.0];
    let d2 = [
        next[0] - 2.0 * p[0] + prev[0],
        next[1] - 2.0 * p[1] + prev[1],
    ];
    (d1, d2)
}

/// Unit vector metrically orthogonal to d1, on its left in chart
/// orientation. For a counterclockwise curve this is the inward side.
fn left_unit_normal(m: &MetricAt, d1: [f64; 2]) -> [f64; 2] {
    let omega = [
        m.g[0][0] * d1[0] + m.g[0][1] * d1[1],
        m.g[1][0] * d1[0] + m.g[1][1] * d1[1],
    ];
    let raw = [-omega[1], omega[0]];
    let nrm = m.norm(raw);
    [raw[0] / nrm, raw[1] / nrm]
}

/// Geodesic curvature of a closed sample curve at one sample, with respect
/// to the left (inward, for counterclockwise curves) unit normal.
pub fn geodesic_curvature(metric: &ChartMetric, samples: &[[f64; 2]], idx: usize) -> Result<f64> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::invalid("geodesic curvature needs at least 4 samples"));
    }
    if idx >= n {
        return Err(Error::invalid("curve sample index out of range"));
    }
    let p = samples[idx];
    let (d1, d2) = central_diffs(samples, idx);
    let m = metric.metric_at(p)?;
    let speed2 = m.inner(d1, d1);
    if !speed2.is_finite() || speed2 < 1e-16 {
        return Err(Error::ImmersionFailure { u0: p[0], u1: p[1] });
    }
    let gamma = christoffel(metric, p)?;
    let mut acc = d2;
    for (k, a) in acc.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                *a += gamma[k][i][j] * d1[i] * d1[j];
            }
        }
    }
    let normal = left_unit_normal(&m, d1);
    Ok(m.inner(acc, normal) / speed2)
}

/// Unit inward normal of a counterclockwise closed chart curve at one
/// sample.
pub fn inward_normal(metric: &ChartMetric, samples: &[[f64; 2]], idx: usize) -> Result<[f64; 2]> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::invalid("inward normal needs at least 4 samples"));
    }
    if idx >= n {
        return Err(Error::invalid("curve sample index out of range"));
    }
    let p = samples[idx];
    let (d1, _) = central_diffs(samples, idx);
    let m = metric.metric_at(p)?;
    if m.inner(d1, d1) < 1e-16 {
        return Err(Error::ImmersionFailure { u0: p[0], u1: p[1] });
    }
    Ok(left_unit_normal(&m, d1))
}

/// Verdict of scanning a closed curve's geodesic curvature against a
/// convexity constant.
#[derive(Clone, Debug, Serialize)]
pub struct CurveCertification {
    pub lambda: f64,
    pub tol: f64,
    pub min_kg: f64,
    pub argmin_index: usize,
    pub pass: bool,
}

impl CurveCertification {
    pub fn margin(&self) -> f64 {
        self.min_kg - self.lambda
    }
}

/// Scan every sample of a closed counterclockwise curve and certify
/// geodesic curvature >= lambda - tol.
pub fn certify_curve_lambda_convex(
    metric: &ChartMetric,
    samples: &[[f64; 2]],
    lambda: f64,
    tol: f64,
) -> Result<CurveCertification> {
    if samples.len() < 4 {
        return Err(Error::invalid("curve certification needs at least 4 samples"));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::invalid("lambda must be positive"));
    }
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::invalid("tolerance must be nonnegative"));
    }
    let mut min_kg = f64::INFINITY;
    let mut argmin_index = 0;
    for idx in 0..samples.len() {
        let kg = geodesic_curvature(metric, samples, idx)?;
        if kg < min_kg {
            min_kg = kg;
            argmin_index = idx;
        }
    }
    Ok(CurveCertification {
        lambda,
        tol,
        min_kg,
        argmin_index,
        pass: min_kg >= lambda - tol,
    })
}

fn padded_bbox(points: &[[f64; 2]], pad_fraction: f64, pad_floor: f64) -> [[f64; 2]; 2] {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for ax in 0..2 {
            lo[ax] = lo[ax].min(p[ax]);
            hi[ax] = hi[ax].max(p[ax]);
        }
    }
    let diag = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
    let pad = pad_fraction * diag + pad_floor;
    [
        [lo[0] - pad, hi[0] + pad],
        [lo[1] - pad, hi[1] + pad],
    ]
}

/// Hinge comparison of one triangle against the model space of curvature c.
#[derive(Clone, Debug, Serialize)]
pub struct ToponogovReport {
    /// |xy|, |xz|, |yz|.
    pub sides: [f64; 3],
    /// Angle at the first vertex, between the geodesics to the other two.
    pub angle: f64,
    /// Third side of the comparison hinge in the model space.
    pub model_side: f64,
    /// model_side - |yz|; nonnegative when the curvature floor holds.
    pub margin: f64,
    pub floor: CurvatureBand,
    pub pass: bool,
}

/// Certify K >= c - tol on a neighborhood of the triangle, then compare the
/// hinge at the first vertex against the model space: the chart's third
/// side must not exceed the model third side by more than tol.
pub fn toponogov_check(
    metric: &ChartMetric,
    c: f64,
    tri: [[f64; 2]; 3],
    tol: f64,
) -> Result<ToponogovReport> {
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::invalid("tolerance must be nonnegative"));
    }
    for v in tri {
        if !metric.contains(v) {
            return Err(Error::invalid(format!(
                "triangle vertex ({}, {}) outside the chart domain",
                v[0], v[1]
            )));
        }
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let sep = ((tri[a][0] - tri[b][0]).powi(2) + (tri[a][1] - tri[b][1]).powi(2)).sqrt();
        if sep < 1e-9 {
            return Err(Error::invalid("degenerate triangle: coincident vertices"));
        }
    }
    let region = padded_bbox(&tri, 0.25, 0.02);
    let floor = require_curvature_floor(metric, region, c, tol, REGION_GRID)?;
    let xy = shoot(metric, tri[0], tri[1])?;
    let xz = shoot(metric, tri[0], tri[2])?;
    let yz = shoot(metric, tri[1], tri[2])?;
    let m = metric.metric_at(tri[0])?;
    let angle = safe_acos(m.inner(xy.initial_velocity, xz.initial_velocity));
    let model_side = side_from_sides_angle(c, xy.length, xz.length, angle)?;
    let margin = model_side - yz.length;
    Ok(ToponogovReport {
        sides: [xy.length, xz.length, yz.length],
        angle,
        model_side,
        margin,
        floor,
        pass: margin >= -tol,
    })
}

/// One rolled ball on a chart curve.
#[derive(Clone, Debug, Serialize)]
pub struct RollCheck2d {
    pub seed_index: usize,
    /// Ball center: the inward normal geodesic's endpoint at depth
    /// r_lambda.
    pub center: [f64; 2],
    /// Minimum of r_lambda - d(center, q) over all curve samples q.
    pub min_margin: f64,
    pub argmin_index: usize,
    pub pass: bool,
}

/// Ball rolling on a chart metric with a curvature floor.
#[derive(Clone, Debug, Serialize)]
pub struct Rolling2dReport {
    pub lambda: f64,
    pub tol: f64,
    pub r_lambda: f64,
    pub curve: CurveCertification,
    pub floor: CurvatureBand,
    pub checks: Vec<RollCheck2d>,
    pub min_margin: f64,
    pub pass: bool,
}

/// Verify that the ball of the sphere radius for lambda encloses the curve
/// when tangent from inside at each seed sample.
///
/// The curve must be closed, counterclockwise, and uniformly sampled. It is
/// certified lambda-convex through its geodesic curvature, the ambient
/// curvature floor K >= c - tol is certified on a padded bounding box, and
/// then for every seed the ball center is found by following the inward
/// normal geodesic for the sphere radius and every sample's distance to the
/// center is compared against that radius.
pub fn verify_ball_rolling_2d(
    metric: &ChartMetric,
    c: f64,
    samples: &[[f64; 2]],
    lambda: f64,
    seeds: &[usize],
    tol: f64,
) -> Result<Rolling2dReport> {
    if samples.len() < 8 {
        return Err(Error::invalid("rolling needs at least 8 boundary samples"));
    }
    if seeds.is_empty() {
        return Err(Error::invalid("rolling needs at least one seed"));
    }
    for &s in seeds {
        if s >= samples.len() {
            return Err(Error::invalid(format!("seed index {s} out of range")));
        }
    }
    let curve = certify_curve_lambda_convex(metric, samples, lambda, tol)?;
    if !curve.pass {
        return Err(Error::NotCertified {
            reason: format!(
                "curve min geodesic curvature {:.6} at sample {} is below lambda = {lambda}",
                curve.min_kg, curve.argmin_index
            ),
        });
    }
    let region = padded_bbox(samples, 0.1, 0.05);
    let floor = require_curvature_floor(metric, region, c, tol, REGION_GRID)?;
    let r_lambda = characteristic_radius(c, lambda)?;
    let mut checks = Vec::with_capacity(seeds.len());
    let mut min_margin = f64::INFINITY;
    for &seed in seeds {
        let normal = inward_normal(metric, samples, seed)?;
        let path = integrate_geodesic(metric, samples[seed], normal, r_lambda, r_lambda / 256.0)?;
        let center = path.last().expect("path has at least the start state").u;
        let shots = shoot_many(metric, center, samples)?;
        let mut seed_min = f64::INFINITY;
        let mut argmin_index = 0;
        for (i, shot) in shots.iter().enumerate() {
            let margin = r_lambda - shot.length;
            if margin < seed_min {
                seed_min = margin;
                argmin_index = i;
            }
        }
        min_margin = min_margin.min(seed_min);
        checks.push(RollCheck2d {
            seed_index: seed,
            center,
            min_margin: seed_min,
            argmin_index,
            pass: seed_min >= -tol,
        });
    }
    let pass = checks.iter().all(|ch| ch.pass);
    Ok(Rolling2dReport {
        lambda,
        tol,
        r_lambda,
        curve,
        floor,
        checks,
        min_margin,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::super::geodesic::geodesic_circle;
    use super::*;
    use crate::convex_body::{HarmonicTerm, Profile};

    // f(u) = sin u + 0.01 sin 3u on the band where K stays in [0.9, 1.1].
    fn perturbed_sphere() -> ChartMetric {
        let profile = Profile::Harmonics {
            base: 0.0,
            terms: vec![
                HarmonicTerm {
                    k: 1,
                    cos_amp: 0.0,
                    sin_amp: 1.0,
                },
                HarmonicTerm {
                    k: 3,
                    cos_amp: 0.0,
                    sin_amp: 0.01,
                },
            ],
        };
        ChartMetric::revolution(profile, [0.75, 2.39]).unwrap()
    }

    fn bumpy_revolution() -> ChartMetric {
        let profile = Profile::Harmonics {
            base: 0.0,
            terms: vec![
                HarmonicTerm {
                    k: 1,
                    cos_amp: 0.0,
                    sin_amp: 1.0,
                },
                HarmonicTerm {
                    k: 3,
                    cos_amp: 0.0,
                    sin_amp: 0.1,
                },
            ],
        };
        ChartMetric::revolution(profile, [0.2, 2.9]).unwrap()
    }

    fn chart_circle(center: [f64; 2], r: f64, n: usize) -> Vec<[f64; 2]> {
        (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                [center[0] + r * t.cos(), center[1] + r * t.sin()]
            })
            .collect()
    }

    #[test]
    fn geodesic_paths_have_zero_turning() {
        let m = bumpy_revolution();
        let states = integrate_geodesic(&m, [1.3, 0.2], [0.4, 1.0], 1.2, 2e-3).unwrap();
        let samples: Vec<[f64; 2]> = states.iter().map(|st| st.u).collect();
        for idx in [150, 300, 450] {
            let kg = geodesic_curvature(&m, &samples, idx).unwrap();
            assert!(kg.abs() < 1e-5, "turning {kg} at index {idx}");
        }
    }

    #[test]
    fn circles_match_their_closed_form_turning() {
        let euclid = ChartMetric::euclidean();
        let circle = chart_circle([0.5, -0.2], 1.0, 4096);
        for idx in [0, 1000, 3000] {
            let kg = geodesic_curvature(&euclid, &circle, idx).unwrap();
            assert!((kg - 1.0).abs() < 1e-5, "flat circle turning {kg}");
        }

        // Coordinate circles wrap in v, so the seam samples are not chart
        // neighbors; probe interior indices only.
        let hyp = ChartMetric::hyperbolic(1.0).unwrap();
        let n = 2048;
        let ring: Vec<[f64; 2]> = (0..n).map(|j| [1.0, TAU * j as f64 / n as f64]).collect();
        for idx in [500, 1024] {
            let kg = geodesic_curvature(&hyp, &ring, idx).unwrap();
            assert!(
                (kg - 1.0f64.tanh().recip()).abs() < 1e-4,
                "hyperbolic circle turning {kg}"
            );
        }

        let sph = ChartMetric::sphere(1.0).unwrap();
        let ring: Vec<[f64; 2]> = (0..n).map(|j| [0.5, TAU * j as f64 / n as f64]).collect();
        let kg = geodesic_curvature(&sph, &ring, 700).unwrap();
        assert!(
            (kg - 0.5f64.tan().recip()).abs() < 1e-4,
            "spherical cap turning {kg}"
        );
    }

    #[test]
    fn convexity_certificates_bound_the_turning() {
        let m = ChartMetric::euclidean();
        let circle = chart_circle([0.0, 0.0], 1.0, 2048);
        let cert = certify_curve_lambda_convex(&m, &circle, 0.99, 1e-6).unwrap();
        assert!(cert.pass);
        assert!((cert.min_kg - 1.0).abs() < 1e-5);
        let cert = certify_curve_lambda_convex(&m, &circle, 1.01, 1e-6).unwrap();
        assert!(!cert.pass);
        assert!(cert.margin() < 0.0);
    }

    #[test]
    fn hinge_comparison_is_tight_on_model_charts() {
        let sph = ChartMetric::sphere(1.0).unwrap();
        let tri = [[0.9, 0.2], [1.4, 0.85], [0.65, 1.05]];
        let rep = toponogov_check(&sph, 1.0, tri, 1e-6).unwrap();
        assert!(rep.pass, "sphere hinge report {rep:?}");
        assert!(rep.margin.abs() < 1e-6, "sphere hinge margin {}", rep.margin);

        let hyp = ChartMetric::hyperbolic(1.0).unwrap();
        let tri = [[0.8, 0.1], [1.5, 0.7], [1.0, -0.5]];
        let rep = toponogov_check(&hyp, -1.0, tri, 1e-6).unwrap();
        assert!(rep.pass, "hyperbolic hinge report {rep:?}");
        assert!(
            rep.margin.abs() < 1e-6,
            "hyperbolic hinge margin {}",
            rep.margin
        );
    }

    #[test]
    fn extra_curvature_pays_positive_margin() {
        let sph = ChartMetric::sphere(1.0).unwrap();
        let tri = [[0.9, 0.2], [1.4, 0.85], [0.65, 1.05]];
        let rep = toponogov_check(&sph, 0.5, tri, 1e-6).unwrap();
        assert!(rep.pass);
        assert!(rep.margin > 1e-3, "expected slack, margin {}", rep.margin);
    }

    #[test]
    fn hinge_comparison_refuses_an_overstated_floor() {
        let sph = ChartMetric::sphere(1.0).unwrap();
        let tri = [[0.9, 0.2], [1.4, 0.85], [0.65, 1.05]];
        assert!(matches!(
            toponogov_check(&sph, 1.5, tri, 1e-6),
            Err(Error::SecLowerBoundViolated { min_k, claimed })
                if (min_k - 1.0).abs() < 1e-9 && claimed == 1.5
        ));
        assert!(toponogov_check(&sph, 1.0, [[0.9, 0.2], [0.9, 0.2], [1.0, 1.0]], 1e-6).is_err());
    }

    #[test]
    fn random_small_triangles_pass_on_the_perturbed_sphere() {
        let m = perturbed_sphere();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for case in 0..12 {
            let base: [f64; 2] = [rng.random_range(1.1..1.9), rng.random_range(-0.4..0.4)];
            let mut tri = [base, base, base];
            for v in 1..3 {
                loop {
                    let cand = [
                        base[0] + rng.random_range(-0.22..0.22),
                        base[1] + rng.random_range(-0.22..0.22),
                    ];
                    let ok = tri[..v].iter().all(|p| {
                        ((p[0] - cand[0]).powi(2) + (p[1] - cand[1]).powi(2)).sqrt() > 0.06
                    });
                    if ok {
                        tri[v] = cand;
                        break;
                    }
                }
            }
            let rep = toponogov_check(&m, 0.8, tri, 1e-6).unwrap();
            assert!(rep.pass, "case {case}: {rep:?}");
            assert!(rep.margin > 0.0, "case {case}: margin {}", rep.margin);
        }
    }

    #[test]
    fn ball_rolls_inside_the_sphere_cap() {
        // Circle of radius r on the round sphere: lambda = cot r makes the
        // rolled ball the cap itself, so every margin collapses to zero.
        let m = ChartMetric::sphere(1.0).unwrap();
        let samples = geodesic_circle(&m, [1.2, 0.1], 0.5, 256).unwrap();
        let lambda = 0.5f64.tan().recip();
        let report = verify_ball_rolling_2d(&m, 1.0, &samples, lambda, &[0, 97], 1e-2).unwrap();
        assert!(report.pass, "report {report:?}");
        assert!((report.r_lambda - 0.5).abs() < 1e-12);
        // Centers come from discrete normals, so tangency holds only to the
        // curve's O(h^2) sampling error.
        assert!(
            report.min_margin.abs() < 1e-4,
            "cap margins should vanish, min {}",
            report.min_margin
        );
        for check in &report.checks {
            assert!(check.pass);
            assert!((check.center[0] - 1.2).abs() < 1e-4);
            assert!((check.center[1] - 0.1).abs() < 1e-4);
        }
    }

    #[test]
    fn perturbed_sphere_oval_rolls() {
        let m = perturbed_sphere();
        let samples = geodesic_circle(&m, [PI / 2.0, 0.0], 0.35, 128).unwrap();
        let report = verify_ball_rolling_2d(&m, 0.9, &samples, 2.6, &[0, 41, 87], 1e-5).unwrap();
        assert!(report.pass, "report {report:?}");
        assert!((report.r_lambda - 0.368814).abs() < 1e-4);
        assert!(report.curve.margin() > 0.05, "thin certification margin");
        assert!(report.floor.min_k > 0.9);
        assert!(report.min_margin >= -1e-5);
        // Tangency at each seed keeps the minimum pinned near zero.
        assert!(report.min_margin < 1e-3, "min margin {}", report.min_margin);
    }

    #[test]
    fn rolling_refuses_an_overstated_ambient_floor() {
        let m = perturbed_sphere();
        let samples = geodesic_circle(&m, [PI / 2.0, 0.0], 0.35, 128).unwrap();
        assert!(matches!(
            verify_ball_rolling_2d(&m, 1.1, &samples, 2.6, &[0], 1e-5),
            Err(Error::SecLowerBoundViolated { claimed, .. }) if claimed == 1.1
        ));
    }

    #[test]
    fn rolling_refuses_an_uncertified_curve() {
        let m = perturbed_sphere();
        let samples = geodesic_circle(&m, [PI / 2.0, 0.0], 0.35, 128).unwrap();
        assert!(matches!(
            verify_ball_rolling_2d(&m, 0.9, &samples, 3.0, &[0], 1e-5),
            Err(Error::NotCertified { .. })
        ));
    }

    #[test]
    fn rolling_arguments_are_validated() {
        let m = ChartMetric::euclidean();
        let circle = chart_circle([0.0, 0.0], 1.0, 64);
        assert!(verify_ball_rolling_2d(&m, 0.0, &circle[..4], 0.9, &[0], 1e-6).is_err());
        assert!(verify_ball_rolling_2d(&m, 0.0, &circle, 0.9, &[], 1e-6).is_err());
        assert!(verify_ball_rolling_2d(&m, 0.0, &circle, 0.9, &[64], 1e-6).is_err());
        assert!(certify_curve_lambda_convex(&m, &circle, -1.0, 1e-6).is_err());
    }
}
