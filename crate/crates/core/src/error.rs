//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The generalized cotangent is only defined for t > 0 (and t < pi/sqrt(c)
    /// for positive curvature).
    #[error("outside cotangent domain: t = {t}, curvature = {curvature}")]
    OutsideCotangentDomain { t: f64, curvature: f64 },

    /// No sphere of normal curvature lambda exists in the model space:
    /// lambda must be positive, and must exceed sqrt(-c) when c < 0.
    #[error("sphere constraints violated: lambda = {lambda}, curvature = {curvature}")]
    SphereConstraints { lambda: f64, curvature: f64 },

    /// Log map (or a distance-based construction) requested at or beyond the
    /// cut locus of a positively curved model space.
    #[error("at cut locus: distance {distance} with curvature {curvature}")]
    AtCutLocus { distance: f64, curvature: f64 },

    /// Triangle sides/angle do not satisfy the model-space existence
    /// conditions (triangle inequality, perimeter bound for c > 0).
    #[error("not a valid triangle: {reason}")]
    InvalidTriangle { reason: String },

    /// Two points or vectors from different model spaces were combined.
    #[error("mismatched curvature: {left} vs {right}")]
    MismatchedCurvature { left: f64, right: f64 },

    /// Coordinates do not satisfy the defining constraint of the model space.
    #[error("model constraint violated: {reason}")]
    ConstraintViolated { reason: String },

    /// Chart derivative vectors are linearly dependent at a grid point.
    #[error("immersion failure at parameter ({u0}, {u1})")]
    ImmersionFailure { u0: f64, u1: f64 },

    /// An operation that needs a lambda-convexity certificate was called
    /// without one, or with a failed one.
    #[error("body not certified lambda-convex: {reason}")]
    NotCertified { reason: String },

    /// Trajectory integration started where the boundary-distance gradient
    /// vanishes (radial angle below the floor), so the field is undefined.
    #[error("stiff trajectory: phi = {phi} at start (floor {floor})")]
    StiffTrajectory { phi: f64, floor: f64 },

    /// Comparison radial angle requested outside the chord range [d, 2R - d].
    #[error("outside sphere chord range: t = {t}, valid range [{lo}, {hi}]")]
    OutsideChordRange { t: f64, lo: f64, hi: f64 },

    /// Two-ball hull construction with overlapping balls.
    #[error("balls not disjoint: separation = {separation}, need > {needed}")]
    BallsNotDisjoint { separation: f64, needed: f64 },

    /// Busemann machinery is only available in negatively curved model spaces.
    #[error("Busemann requires negative curvature: got {curvature}")]
    BusemannNeedsNegativeCurvature { curvature: f64 },

    /// Horoball rolling requires lambda >= sqrt(-c).
    #[error("horoball constraints violated: lambda = {lambda}, need >= {needed}")]
    HoroballConstraints { lambda: f64, needed: f64 },

    /// Geodesic boundary-value shooting did not converge inside the chart.
    #[error("no geodesic found in chart: from ({from_u0}, {from_u1}) to ({to_u0}, {to_u1})")]
    NoGeodesicInChart {
        from_u0: f64,
        from_u1: f64,
        to_u0: f64,
        to_u1: f64,
    },

    /// Sampled Gaussian curvature drops below the claimed lower bound.
    #[error("hypothesis sec >= c violated on region: min K = {min_k} < {claimed}")]
    SecLowerBoundViolated { min_k: f64, claimed: f64 },

    /// Chart metric is not positive definite at a sample point.
    #[error("metric not positive definite at ({u0}, {u1}): min eigenvalue {min_eig}")]
    MetricNotPositiveDefinite { u0: f64, u1: f64, min_eig: f64 },

    /// Quadrature refinement did not settle within the requested tolerance.
    #[error("quadrature non-convergence: Richardson estimate {estimate} > {tol}")]
    QuadratureNonConvergence { estimate: f64, tol: f64 },

    /// Radial angle is undefined when the origin coincides with the boundary
    /// point.
    #[error("coincident points: radial angle undefined")]
    CoincidentPoints,

    /// Generic invalid-input condition with context.
    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },

    /// Scenario parsing / IO problems in the harness.
    #[error("scenario error: {reason}")]
    Scenario { reason: String },

    #[error("io error: {reason}")]
    Io { reason: String },
}

impl Error {
    pub fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            reason: reason.into(),
        }
    }

    pub fn scenario(reason: impl Into<String>) -> Self {
        Error::Scenario {
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io {
            reason: e.to_string(),
        }
    }
}
