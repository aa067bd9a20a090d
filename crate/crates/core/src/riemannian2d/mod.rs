//! Surfaces given as a metric tensor on a rectangular coordinate chart.
//!
//! Everything here is numerical: curvature comes from the metric through
//! the Brioschi formula (or an analytic oracle when the chart carries one),
//! geodesics from Runge-Kutta integration of the geodesic equation, and
//! point-to-point distances from a shooting solver. Boundary curves are
//! closed counterclockwise sample polylines. The comparison layer certifies
//! curvature floors by dense sampling and turns the constant-curvature
//! rolling and hinge statements into checks against those floors.
//!
//! Charts cannot see past their own domain, so all results are relative to
//! the chart: a "no geodesic" error means no connecting geodesic stays
//! inside the rectangle, not that none exists on the underlying surface.

mod comparison;
mod geodesic;
mod metric;

pub use comparison::{
    certify_curve_lambda_convex, geodesic_curvature, inward_normal, toponogov_check,
    verify_ball_rolling_2d, CurveCertification, RollCheck2d, Rolling2dReport, ToponogovReport,
};
pub use geodesic::{
    chart_distance, geodesic_circle, integrate_geodesic, shoot, shoot_many, GeodesicState, Shot,
    MISS_TOL, SWEEP_DIRECTIONS,
};
pub use metric::{
    certify_curvature_band, christoffel, gaussian_curvature, require_curvature_floor, ChartMetric,
    CurvatureBand, MetricAt, FD_STEP, MIN_EIGENVALUE, REGION_GRID,
};
