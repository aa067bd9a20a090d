//! Closed boundary hypersurfaces: charts, sampling grids, curvature and
//! convexity certification.

pub mod chart;
pub mod curvature;
pub mod generators;

use std::sync::Arc;

pub use chart::{Chart, ForceFiniteDifferences, FD_STEP};
pub use curvature::{
    certify_lambda_convex, chart_tangents, curvature_sample, first_fundamental_form,
    normal_curvature, second_fundamental_form, unit_inward_normal, Certification,
    CurvatureSample,
};
pub use generators::{
    make_ellipse_like, make_geodesic_sphere, make_radial_curve, make_revolution_body,
    make_two_ball_hull, HarmonicTerm, Profile,
};

use crate::error::{Error, Result};
use crate::model_space::{
    ball_volume, distance, log_map, unit_sphere_measure, Curvature, ModelPoint,
};
use crate::numerics::gauss_legendre_on;

/// Sampling grid layout over the chart domain.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    /// n equally spaced nodes including the lower endpoint (periodic axis).
    Uniform { n: usize },
    /// n midpoint nodes; never samples the interval endpoints.
    Midpoint { n: usize },
    /// Gauss-Legendre nodes in the first axis times midpoint nodes in the
    /// second (surfaces; keeps the poles unsampled).
    Product { n_theta: usize, n_psi: usize },
}

/// A closed hypersurface with its sampling grid and quadrature weights.
pub struct Body {
    chart: Arc<dyn Chart>,
    grid_spec: GridSpec,
    grid: Vec<[f64; 2]>,
    weights: Vec<f64>,
    name: &'static str,
}

impl std::fmt::Debug for Body {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Body")
            .field("name", &self.name)
            .field("curvature", &self.chart.curvature())
            .field("dim", &self.chart.dim())
            .field("grid_spec", &self.grid_spec)
            .field("nodes", &self.grid.len())
            .finish()
    }
}

impl Body {
    /// Build the grid and verify the immersion property at every node.
    pub fn new(chart: Arc<dyn Chart>, grid_spec: GridSpec, name: &'static str) -> Result<Body> {
        let expect_surface = matches!(grid_spec, GridSpec::Product { .. });
        if expect_surface != (chart.dim() == 3) {
            return Err(Error::invalid(
                "grid layout does not match the chart dimension",
            ));
        }
        let (grid, weights) = build_grid(chart.as_ref(), &grid_spec)?;
        for &u in &grid {
            curvature::chart_tangents(chart.as_ref(), u)?;
        }
        Ok(Body {
            chart,
            grid_spec,
            grid,
            weights,
            name,
        })
    }

    /// Shared handle to the chart, for building a second body over the same
    /// surface with a different grid.
    pub fn chart_arc(&self) -> Arc<dyn Chart> {
        Arc::clone(&self.chart)
    }

    pub fn chart(&self) -> &dyn Chart {
        self.chart.as_ref()
    }
    pub fn curvature(&self) -> Curvature {
        self.chart.curvature()
    }
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }
    pub fn grid(&self) -> &[[f64; 2]] {
        &self.grid
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn name(&self) -> &'static str {
        self.name
    }
    pub fn len(&self) -> usize {
        self.grid.len()
    }
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
    pub fn point_at(&self, k: usize) -> ModelPoint {
        self.chart.point(self.grid[k])
    }

    /// The same surface with the grid refined by an integer factor per axis;
    /// used for quadrature convergence estimates.
    pub fn resample(&self, factor: usize) -> Result<Body> {
        if factor == 0 {
            return Err(Error::invalid("resample factor must be positive"));
        }
        let spec = match self.grid_spec {
            GridSpec::Uniform { n } => GridSpec::Uniform { n: n * factor },
            GridSpec::Midpoint { n } => GridSpec::Midpoint { n: n * factor },
            GridSpec::Product { n_theta, n_psi } => GridSpec::Product {
                n_theta: n_theta * factor,
                n_psi: n_psi * factor,
            },
        };
        Body::new(self.chart.clone(), spec, self.name)
    }

    /// Total boundary measure (length for m = 2, area for m = 3) by grid
    /// quadrature of the metric volume element.
    pub fn boundary_measure(&self) -> Result<f64> {
        let c = self.curvature();
        let mut total = 0.0;
        for (k, &u) in self.grid.iter().enumerate() {
            let tangents = curvature::chart_tangents(self.chart(), u)?;
            let element = if self.dim() == 2 {
                c.norm(tangents[0].as_slice())
            } else {
                let g00 = c.form(tangents[0].as_slice(), tangents[0].as_slice());
                let g01 = c.form(tangents[0].as_slice(), tangents[1].as_slice());
                let g11 = c.form(tangents[1].as_slice(), tangents[1].as_slice());
                (g00 * g11 - g01 * g01).max(0.0).sqrt()
            };
            total += self.weights[k] * element;
        }
        Ok(total)
    }

    /// Volume of the enclosed region, integrating the radial volume profile
    /// over directions at the interior witness (the surface is star-shaped
    /// around it for every generated body).
    pub fn enclosed_volume(&self) -> Result<f64> {
        let c = self.curvature();
        let o = self.chart.interior_witness();
        let frame = o.tangent_basis();
        // Radial volume accumulated to distance t: the ball volume divided
        // by the full solid angle.
        let solid_angle = unit_sphere_measure(self.dim() - 1);
        let radial =
            |t: f64| -> Result<f64> { Ok(ball_volume(c.value(), self.dim(), t)? / solid_angle) };
        let h = 1e-5;

        if self.dim() == 2 {
            let angle_of = |u: f64| -> Result<f64> {
                let q = self.chart.point([u, 0.0]);
                let v = log_map(&o, &q)?;
                let x = c.form(v.vec().as_slice(), frame[0].as_slice());
                let y = c.form(v.vec().as_slice(), frame[1].as_slice());
                Ok(y.atan2(x))
            };
            let mut total = 0.0;
            for (k, &u) in self.grid.iter().enumerate() {
                let q = self.chart.point(u);
                let t = distance(&o, &q)?;
                let mut dtheta = angle_of(u[0] + h)? - angle_of(u[0] - h)?;
                while dtheta > std::f64::consts::PI {
                    dtheta -= 2.0 * std::f64::consts::PI;
                }
                while dtheta < -std::f64::consts::PI {
                    dtheta += 2.0 * std::f64::consts::PI;
                }
                total += self.weights[k] * (dtheta / (2.0 * h)) * radial(t)?;
            }
            Ok(total.abs())
        } else {
            let dir_of = |u: [f64; 2]| -> Result<[f64; 3]> {
                let q = self.chart.point(u);
                let v = log_map(&o, &q)?;
                let mut d = [0.0; 3];
                for (i, f) in frame.iter().enumerate() {
                    d[i] = c.form(v.vec().as_slice(), f.as_slice());
                }
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                Ok([d[0] / n, d[1] / n, d[2] / n])
            };
            let mut total = 0.0;
            for (k, &u) in self.grid.iter().enumerate() {
                let q = self.chart.point(u);
                let t = distance(&o, &q)?;
                let dp = dir_of([u[0] + h, u[1]])?;
                let dm = dir_of([u[0] - h, u[1]])?;
                let ep = dir_of([u[0], u[1] + h])?;
                let em = dir_of([u[0], u[1] - h])?;
                let d1 = [
                    (dp[0] - dm[0]) / (2.0 * h),
                    (dp[1] - dm[1]) / (2.0 * h),
                    (dp[2] - dm[2]) / (2.0 * h),
                ];
                let d2 = [
                    (ep[0] - em[0]) / (2.0 * h),
                    (ep[1] - em[1]) / (2.0 * h),
                    (ep[2] - em[2]) / (2.0 * h),
                ];
                let cross = [
                    d1[1] * d2[2] - d1[2] * d2[1],
                    d1[2] * d2[0] - d1[0] * d2[2],
                    d1[0] * d2[1] - d1[1] * d2[0],
                ];
                let jac = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
                total += self.weights[k] * jac * radial(t)?;
            }
            Ok(total)
        }
    }
}

fn build_grid(chart: &dyn Chart, spec: &GridSpec) -> Result<(Vec<[f64; 2]>, Vec<f64>)> {
    let dom = chart.domain();
    match *spec {
        GridSpec::Uniform { n } => {
            if n < 4 {
                return Err(Error::invalid("grid needs at least 4 nodes"));
            }
            let (lo, hi) = (dom[0][0], dom[0][1]);
            let du = (hi - lo) / n as f64;
            let grid = (0..n).map(|k| [lo + k as f64 * du, 0.0]).collect();
            Ok((grid, vec![du; n]))
        }
        GridSpec::Midpoint { n } => {
            if n < 4 {
                return Err(Error::invalid("grid needs at least 4 nodes"));
            }
            let (lo, hi) = (dom[0][0], dom[0][1]);
            let du = (hi - lo) / n as f64;
            let grid = (0..n)
                .map(|k| [lo + (k as f64 + 0.5) * du, 0.0])
                .collect();
            Ok((grid, vec![du; n]))
        }
        GridSpec::Product { n_theta, n_psi } => {
            if n_theta < 4 || n_psi < 4 {
                return Err(Error::invalid("grid needs at least 4 nodes per axis"));
            }
            let (tn, tw) = gauss_legendre_on(n_theta, dom[0][0], dom[0][1]);
            let (lo, hi) = (dom[1][0], dom[1][1]);
            let dpsi = (hi - lo) / n_psi as f64;
            let mut grid = Vec::with_capacity(n_theta * n_psi);
            let mut weights = Vec::with_capacity(n_theta * n_psi);
            for (i, &theta) in tn.iter().enumerate() {
                for j in 0..n_psi {
                    grid.push([theta, lo + (j as f64 + 0.5) * dpsi]);
                    weights.push(tw[i] * dpsi);
                }
            }
            Ok((grid, weights))
        }
    }
}
