//! Two-dimensional Riemannian charts given by a metric oracle.
//!
//! A `ChartMetric` is a coordinate box together with g_ij(u), optionally the
//! coordinate derivatives of g and the Gaussian curvature in closed form.
//! Geodesics, distances, and the comparison checks consume the surface only
//! through this interface, so a metric can be supplied either with analytic
//! oracles or as a bare g closure with finite differences filling the gaps.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix3;
use serde::Serialize;

use crate::convex_body::Profile;
use crate::error::{Error, Result};

/// Finite-difference step for metric derivatives when no analytic oracle is
/// attached, and for the second derivatives inside the curvature formula.
pub const FD_STEP: f64 = 1e-4;

/// Smallest admissible eigenvalue of g. Below this the chart is treated as
/// degenerate rather than merely ill-conditioned.
pub const MIN_EIGENVALUE: f64 = 1e-10;

/// Default per-axis sample count for region curvature certification.
pub const REGION_GRID: usize = 256;

type GFn = Arc<dyn Fn([f64; 2]) -> [[f64; 2]; 2] + Send + Sync>;
/// dg[k][i][j] = d g_ij / d u_k.
type DgFn = Arc<dyn Fn([f64; 2]) -> [[[f64; 2]; 2]; 2] + Send + Sync>;
type KFn = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;

/// Metric oracle on a rectangular chart domain.
#[derive(Clone)]
pub struct ChartMetric {
    name: String,
    domain: [[f64; 2]; 2],
    g_fn: GFn,
    dg_fn: Option<DgFn>,
    k_fn: Option<KFn>,
    fd_step: f64,
}

impl fmt::Debug for ChartMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartMetric")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("analytic_dg", &self.dg_fn.is_some())
            .field("analytic_k", &self.k_fn.is_some())
            .finish()
    }
}

/// Validated metric data at one chart point.
#[derive(Clone, Copy, Debug)]
pub struct MetricAt {
    pub g: [[f64; 2]; 2],
    pub inv: [[f64; 2]; 2],
    pub det: f64,
}

impl MetricAt {
    pub fn inner(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let mut s = 0.0;
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                s += ai * self.g[i][j] * bj;
            }
        }
        s
    }

    pub fn norm(&self, a: [f64; 2]) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }
}

impl ChartMetric {
    /// Flat plane on a square box.
    pub fn euclidean() -> ChartMetric {
        ChartMetric {
            name: "euclidean".to_string(),
            domain: [[-8.0, 8.0], [-8.0, 8.0]],
            g_fn: Arc::new(|_| [[1.0, 0.0], [0.0, 1.0]]),
            dg_fn: Some(Arc::new(|_| [[[0.0; 2]; 2]; 2])),
            k_fn: Some(Arc::new(|_| 0.0)),
            fd_step: FD_STEP,
        }
    }

    /// Round sphere in geodesic polar coordinates around a pole: u is the
    /// arc distance from the pole, v the azimuth, g = du^2 + (R sin(u/R))^2
    /// dv^2. The box stops short of both poles, where the chart degenerates.
    pub fn sphere(radius: f64) -> Result<ChartMetric> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::invalid("sphere radius must be positive"));
        }
        let r = radius;
        let margin = 0.02 * r;
        Ok(ChartMetric {
            name: format!("sphere r={r}"),
            domain: [
                [margin, std::f64::consts::PI * r - margin],
                [-16.0, 16.0],
            ],
            g_fn: Arc::new(move |u| {
                let s = r * (u[0] / r).sin();
                [[1.0, 0.0], [0.0, s * s]]
            }),
            dg_fn: Some(Arc::new(move |u| {
                let mut d = [[[0.0; 2]; 2]; 2];
                d[0][1][1] = r * (2.0 * u[0] / r).sin();
                d
            })),
            k_fn: Some(Arc::new(move |_| 1.0 / (r * r))),
            fd_step: FD_STEP,
        })
    }

    /// Hyperbolic plane of curvature -kappa^2 in geodesic polar coordinates:
    /// g = du^2 + (sinh(kappa u)/kappa)^2 dv^2 on a box clear of the origin.
    pub fn hyperbolic(kappa: f64) -> Result<ChartMetric> {
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::invalid("hyperbolic kappa must be positive"));
        }
        Ok(ChartMetric {
            name: format!("hyperbolic kappa={kappa}"),
            domain: [[0.02, 8.0], [-16.0, 16.0]],
            g_fn: Arc::new(move |u| {
                let s = (kappa * u[0]).sinh() / kappa;
                [[1.0, 0.0], [0.0, s * s]]
            }),
            dg_fn: Some(Arc::new(move |u| {
                let mut d = [[[0.0; 2]; 2]; 2];
                d[0][1][1] = (2.0 * kappa * u[0]).sinh() / kappa;
                d
            })),
            k_fn: Some(Arc::new(move |_| -kappa * kappa)),
            fd_step: FD_STEP,
        })
    }

    /// Surface of revolution du^2 + f(u)^2 dv^2 with f given as a radial
    /// profile. The profile must stay positive on the u range.
    pub fn revolution(profile: Profile, u_range: [f64; 2]) -> Result<ChartMetric> {
        if !u_range[0].is_finite() || !u_range[1].is_finite() || u_range[0] >= u_range[1] {
            return Err(Error::invalid("revolution u range must be a finite interval"));
        }
        for i in 0..=512 {
            let u = u_range[0] + (u_range[1] - u_range[0]) * i as f64 / 512.0;
            let (f, _, _) = profile.eval(u);
            if !f.is_finite() || f <= 0.0 {
                return Err(Error::invalid(format!(
                    "revolution profile must be positive on the u range, f({u}) = {f}"
                )));
            }
        }
        let p1 = profile.clone();
        let p2 = profile.clone();
        let p3 = profile;
        Ok(ChartMetric {
            name: "revolution".to_string(),
            domain: [u_range, [-16.0, 16.0]],
            g_fn: Arc::new(move |u| {
                let (f, _, _) = p1.eval(u[0]);
                [[1.0, 0.0], [0.0, f * f]]
            }),
            dg_fn: Some(Arc::new(move |u| {
                let (f, f1, _) = p2.eval(u[0]);
                let mut d = [[[0.0; 2]; 2]; 2];
                d[0][1][1] = 2.0 * f * f1;
                d
            })),
            k_fn: Some(Arc::new(move |u| {
                let (f, _, f2) = p3.eval(u[0]);
                -f2 / f
            })),
            fd_step: FD_STEP,
        })
    }

    /// Metric from a bare g closure. All derivatives fall back to central
    /// finite differences with the default step, and there is no curvature
    /// oracle.
    pub fn custom(
        name: &str,
        g_fn: impl Fn([f64; 2]) -> [[f64; 2]; 2] + Send + Sync + 'static,
        domain: [[f64; 2]; 2],
    ) -> ChartMetric {
        ChartMetric {
            name: name.to_string(),
            domain,
            g_fn: Arc::new(g_fn),
            dg_fn: None,
            k_fn: None,
            fd_step: FD_STEP,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> [[f64; 2]; 2] {
        self.domain
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn contains(&self, u: [f64; 2]) -> bool {
        u[0].is_finite()
            && u[1].is_finite()
            && (self.domain[0][0]..=self.domain[0][1]).contains(&u[0])
            && (self.domain[1][0]..=self.domain[1][1]).contains(&u[1])
    }

    /// Raw metric oracle, no validation.
    pub fn g(&self, u: [f64; 2]) -> [[f64; 2]; 2] {
        (self.g_fn)(u)
    }

    /// Metric with inverse at u, after symmetrizing and checking positive
    /// definiteness.
    pub fn metric_at(&self, u: [f64; 2]) -> Result<MetricAt> {
        let raw = (self.g_fn)(u);
        let off = 0.5 * (raw[0][1] + raw[1][0]);
        let g = [[raw[0][0], off], [off, raw[1][1]]];
        let tr = g[0][0] + g[1][1];
        let det = g[0][0] * g[1][1] - off * off;
        let gap = ((g[0][0] - g[1][1]).powi(2) + 4.0 * off * off).max(0.0).sqrt();
        let min_eig = 0.5 * (tr - gap);
        if !min_eig.is_finite() || min_eig <= MIN_EIGENVALUE {
            return Err(Error::MetricNotPositiveDefinite {
                u0: u[0],
                u1: u[1],
                min_eig,
            });
        }
        let inv = [[g[1][1] / det, -off / det], [-off / det, g[0][0] / det]];
        Ok(MetricAt { g, inv, det })
    }

    /// First derivatives dg[k][i][j] = d g_ij / d u_k, analytic when the
    /// metric carries an oracle, central differences otherwise.
    pub fn dg(&self, u: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
        if let Some(dg) = &self.dg_fn {
            return dg(u);
        }
        let h = self.fd_step;
        let mut out = [[[0.0; 2]; 2]; 2];
        for k in 0..2 {
            let mut up = u;
            let mut dn = u;
            up[k] += h;
            dn[k] -= h;
            let gp = (self.g_fn)(up);
            let gm = (self.g_fn)(dn);
            for i in 0..2 {
                for j in 0..2 {
                    out[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
                }
            }
        }
        out
    }

    /// Closed-form Gaussian curvature, when the metric carries one.
    pub fn curvature_oracle(&self, u: [f64; 2]) -> Option<f64> {
        self.k_fn.as_ref().map(|k| k(u))
    }
}

/// Christoffel symbols of the second kind, gamma[k][i][j] = Gamma^k_ij.
pub fn christoffel(metric: &ChartMetric, u: [f64; 2]) -> Result<[[[f64; 2]; 2]; 2]> {
    let m = metric.metric_at(u)?;
    let dg = metric.dg(u);
    let mut out = [[[0.0; 2]; 2]; 2];
    for (k, out_k) in out.iter_mut().enumerate() {
        for (i, out_ki) in out_k.iter_mut().enumerate() {
            for (j, out_kij) in out_ki.iter_mut().enumerate() {
                let s = m.inv[k][0] * (dg[i][j][0] + dg[j][i][0] - dg[0][i][j])
                    + m.inv[k][1] * (dg[i][j][1] + dg[j][i][1] - dg[1][i][j]);
                *out_kij = 0.5 * s;
            }
        }
    }
    Ok(out)
}

/// Gaussian curvature from g alone via the Brioschi formula. Second
/// derivatives of g are central differences of `dg`, so the accuracy is set
/// by the finite-difference step even when first derivatives are analytic.
pub fn gaussian_curvature(metric: &ChartMetric, u: [f64; 2]) -> Result<f64> {
    let m = metric.metric_at(u)?;
    let d = metric.dg(u);
    let h = metric.fd_step();
    // d2[b][a][i][j] = d_b d_a g_ij
    let mut d2 = [[[[0.0; 2]; 2]; 2]; 2];
    for b in 0..2 {
        let mut up = u;
        let mut dn = u;
        up[b] += h;
        dn[b] -= h;
        let dp = metric.dg(up);
        let dm = metric.dg(dn);
        for a in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    d2[b][a][i][j] = (dp[a][i][j] - dm[a][i][j]) / (2.0 * h);
                }
            }
        }
    }
    let e = m.g[0][0];
    let f = m.g[0][1];
    let g = m.g[1][1];
    let e_u = d[0][0][0];
    let e_v = d[1][0][0];
    let f_u = d[0][0][1];
    let f_v = d[1][0][1];
    let g_u = d[0][1][1];
    let g_v = d[1][1][1];
    let e_vv = d2[1][1][0][0];
    let g_uu = d2[0][0][1][1];
    let f_uv = 0.5 * (d2[1][0][0][1] + d2[0][1][0][1]);
    let m1 = Matrix3::new(
        -0.5 * e_vv + f_uv - 0.5 * g_uu,
        0.5 * e_u,
        f_u - 0.5 * e_v,
        f_v - 0.5 * g_u,
        e,
        f,
        0.5 * g_v,
        f,
        g,
    );
    let m2 = Matrix3::new(0.0, 0.5 * e_v, 0.5 * g_u, 0.5 * e_v, e, f, 0.5 * g_u, f, g);
    let denom = e * g - f * f;
    Ok((m1.determinant() - m2.determinant()) / (denom * denom))
}

/// Result of sampling the Gaussian curvature over a region against a lower
/// bound, and optionally an upper one.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureBand {
    pub lo: f64,
    pub hi: Option<f64>,
    pub tol: f64,
    pub min_k: f64,
    pub max_k: f64,
    pub argmin: [f64; 2],
    pub argmax: [f64; 2],
    pub grid: usize,
    pub pass: bool,
}

/// Certify lo - tol <= K (<= hi + tol) on a region by dense grid sampling.
/// The region is clamped to the chart domain. The scan trusts the analytic
/// curvature oracle when the chart carries one and falls back to the
/// Brioschi evaluation otherwise.
pub fn certify_curvature_band(
    metric: &ChartMetric,
    region: [[f64; 2]; 2],
    lo: f64,
    hi: Option<f64>,
    tol: f64,
    grid: usize,
) -> Result<CurvatureBand> {
    if grid < 2 {
        return Err(Error::invalid("curvature band needs a grid of at least 2"));
    }
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::invalid("curvature band tolerance must be nonnegative"));
    }
    let dom = metric.domain();
    let mut clamped = [[0.0; 2]; 2];
    for (ax, cl) in clamped.iter_mut().enumerate() {
        cl[0] = region[ax][0].max(dom[ax][0]);
        cl[1] = region[ax][1].min(dom[ax][1]);
        if cl[0] >= cl[1] || cl[0].is_nan() || cl[1].is_nan() {
            return Err(Error::invalid(
                "curvature band region does not meet the chart domain",
            ));
        }
    }
    let mut min_k = f64::INFINITY;
    let mut max_k = f64::NEG_INFINITY;
    let mut argmin = [clamped[0][0], clamped[1][0]];
    let mut argmax = argmin;
    let steps = (grid - 1) as f64;
    for i in 0..grid {
        let u0 = clamped[0][0] + (clamped[0][1] - clamped[0][0]) * i as f64 / steps;
        for j in 0..grid {
            let u1 = clamped[1][0] + (clamped[1][1] - clamped[1][0]) * j as f64 / steps;
            let k = match metric.curvature_oracle([u0, u1]) {
                Some(k) => k,
                None => gaussian_curvature(metric, [u0, u1])?,
            };
            if k < min_k {
                min_k = k;
                argmin = [u0, u1];
            }
            if k > max_k {
                max_k = k;
                argmax = [u0, u1];
            }
        }
    }
    let pass = min_k >= lo - tol && hi.is_none_or(|h| max_k <= h + tol);
    Ok(CurvatureBand {
        lo,
        hi,
        tol,
        min_k,
        max_k,
        argmin,
        argmax,
        grid,
        pass,
    })
}

/// Curvature floor used as a hypothesis: error out when the sampled minimum
/// drops below the claim.
pub fn require_curvature_floor(
    metric: &ChartMetric,
    region: [[f64; 2]; 2],
    c: f64,
    tol: f64,
    grid: usize,
) -> Result<CurvatureBand> {
    let band = certify_curvature_band(metric, region, c, None, tol, grid)?;
    if !band.pass {
        return Err(Error::SecLowerBoundViolated {
            min_k: band.min_k,
            claimed: c,
        });
    }
    Ok(band)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::convex_body::HarmonicTerm;

    fn bumpy_profile() -> Profile {
        // f(u) = sin u + 0.1 sin 3u
        Profile::Harmonics {
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
        }
    }

    // f(u) = sin u + 0.01 sin 3u, restricted to the band where the
    // curvature (sin u + 0.09 sin 3u)/(sin u + 0.01 sin 3u) stays in
    // [0.9, 1.1].
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

    #[test]
    fn euclidean_christoffels_vanish() {
        let m = ChartMetric::euclidean();
        for u in [[0.0, 0.0], [1.0, -2.0], [3.5, 4.0]] {
            let gamma = christoffel(&m, u).unwrap();
            for plane in gamma.iter().flatten().flatten() {
                assert_eq!(*plane, 0.0);
            }
        }
    }

    #[test]
    fn revolution_christoffels_match_the_closed_form() {
        let m = ChartMetric::revolution(bumpy_profile(), [0.2, 2.9]).unwrap();
        for u0 in [0.4, 0.9, 1.3] {
            let (f, f1, _) = bumpy_profile().eval(u0);
            let gamma = christoffel(&m, [u0, 0.7]).unwrap();
            assert!((gamma[0][1][1] - (-f * f1)).abs() < 1e-12);
            assert!((gamma[1][0][1] - f1 / f).abs() < 1e-12);
            assert!((gamma[1][1][0] - f1 / f).abs() < 1e-12);
            for (k, i, j) in [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)] {
                assert!(gamma[k][i][j].abs() < 1e-12, "gamma[{k}][{i}][{j}]");
            }
        }
    }

    #[test]
    fn finite_differences_track_the_analytic_derivatives() {
        let analytic = ChartMetric::sphere(1.0).unwrap();
        let fd = ChartMetric::custom(
            "fd sphere",
            |u| {
                let s = u[0].sin();
                [[1.0, 0.0], [0.0, s * s]]
            },
            analytic.domain(),
        );
        let mut worst: f64 = 0.0;
        for i in 0..12 {
            let u0 = 0.3 + 2.5 * i as f64 / 11.0;
            for u1 in [-1.0, 0.4, 2.0] {
                let ga = christoffel(&analytic, [u0, u1]).unwrap();
                let gf = christoffel(&fd, [u0, u1]).unwrap();
                for k in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            worst = worst.max((ga[k][i][j] - gf[k][i][j]).abs());
                        }
                    }
                }
                let kf = gaussian_curvature(&fd, [u0, u1]).unwrap();
                assert!((kf - 1.0).abs() < 1e-6, "fd curvature {kf} at u = {u0}");
            }
        }
        assert!(worst < 1e-6, "worst christoffel gap {worst}");
    }

    #[test]
    fn model_chart_curvatures_are_constant() {
        let cases: Vec<(ChartMetric, f64, Vec<[f64; 2]>)> = vec![
            (
                ChartMetric::euclidean(),
                0.0,
                vec![[0.3, -2.0], [5.0, 5.0]],
            ),
            (
                ChartMetric::sphere(1.0).unwrap(),
                1.0,
                vec![[0.4, 0.0], [1.2, 2.0], [2.8, -1.0]],
            ),
            (
                ChartMetric::sphere(2.0).unwrap(),
                0.25,
                vec![[1.0, 0.5], [4.0, -3.0]],
            ),
            (
                ChartMetric::hyperbolic(1.0).unwrap(),
                -1.0,
                vec![[0.5, 1.0], [2.0, 0.0]],
            ),
            (
                ChartMetric::hyperbolic(2.0).unwrap(),
                -4.0,
                vec![[0.7, -0.3]],
            ),
        ];
        for (metric, expected, points) in &cases {
            for &u in points {
                let k = gaussian_curvature(metric, u).unwrap();
                assert!(
                    (k - expected).abs() < 5e-6,
                    "{}: K = {k}, expected {expected}",
                    metric.name()
                );
                assert_eq!(metric.curvature_oracle(u), Some(*expected));
            }
        }
    }

    #[test]
    fn revolution_curvature_matches_the_profile_oracle() {
        let profile = bumpy_profile();
        let m = ChartMetric::revolution(profile.clone(), [0.25, 2.85]).unwrap();
        for i in 0..20 {
            let u0 = 0.3 + 2.5 * i as f64 / 19.0;
            let (f, _, f2) = profile.eval(u0);
            let expected = -f2 / f;
            let k = gaussian_curvature(&m, [u0, 0.3]).unwrap();
            assert!(
                (k - expected).abs() < 1e-6,
                "K({u0}) = {k}, oracle {expected}"
            );
        }
    }

    #[test]
    fn degenerate_metrics_are_rejected() {
        let collapsed = ChartMetric::custom(
            "collapsed",
            |_| [[1.0, 0.0], [0.0, 0.0]],
            [[-1.0, 1.0], [-1.0, 1.0]],
        );
        assert!(matches!(
            collapsed.metric_at([0.0, 0.0]),
            Err(Error::MetricNotPositiveDefinite { .. })
        ));
        let indefinite = ChartMetric::custom(
            "indefinite",
            |_| [[1.0, 2.0], [2.0, 1.0]],
            [[-1.0, 1.0], [-1.0, 1.0]],
        );
        assert!(matches!(
            christoffel(&indefinite, [0.2, 0.2]),
            Err(Error::MetricNotPositiveDefinite { min_eig, .. }) if min_eig < 0.0
        ));
        assert!(ChartMetric::revolution(bumpy_profile(), [2.0, 4.0]).is_err());
    }

    #[test]
    fn curvature_band_certifies_the_perturbed_sphere() {
        let m = perturbed_sphere();
        // Region wider than the chart: the scan clamps to the domain box.
        let region = [[0.0, 10.0], [0.0, 2.0 * PI]];
        let band = certify_curvature_band(&m, region, 0.9, Some(1.1), 1e-6, 128).unwrap();
        assert!(band.pass, "band {band:?}");
        assert!(band.min_k > 0.9 && band.min_k < 0.93);
        assert!(band.max_k < 1.1 && band.max_k > 1.05);
        // The minimum sits at the equator u = pi/2 where sin 3u = -1.
        assert!((band.argmin[0] - PI / 2.0).abs() < 0.02);

        let failed = certify_curvature_band(&m, region, 1.0, None, 1e-6, 128).unwrap();
        assert!(!failed.pass);
        assert!(matches!(
            require_curvature_floor(&m, region, 1.0, 1e-6, 128),
            Err(Error::SecLowerBoundViolated { claimed, .. }) if claimed == 1.0
        ));
    }
}
