//! Scenario files: the JSON description of one verification run.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::convex_body::{
    make_ellipse_like, make_geodesic_sphere, make_radial_curve, make_revolution_body,
    make_two_ball_hull, Body, Profile,
};
use crate::error::{Error, Result};
use crate::model_space::Curvature;
use crate::riemannian2d::ChartMetric;
use crate::rolling::ContactConfiguration;

/// Which verification family the scenario exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    /// Ball rolling, diameter, volume, and contact classification.
    Rolling,
    /// Radial angle comparison against the reference sphere.
    Rac,
    /// Flow-line curvature identity along boundary trajectories.
    Liouville,
    /// Horoball rolling and Busemann agreement (c < 0).
    Horoball,
    /// Chart-metric surface checks: curvature band, curve convexity,
    /// rolling, hinge comparison.
    Riemannian2d,
    /// Two-ball hull penetration probe.
    Counterexample,
}

impl ModuleKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModuleKind::Rolling => "rolling",
            ModuleKind::Rac => "rac",
            ModuleKind::Liouville => "liouville",
            ModuleKind::Horoball => "horoball",
            ModuleKind::Riemannian2d => "riemannian2d",
            ModuleKind::Counterexample => "counterexample",
        }
    }
}

/// Boundary generator for model-space bodies.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    GeodesicSphere { m: usize, r: f64 },
    Ellipse { axes: [f64; 2] },
    RadialCurve { profile: Profile },
    RevolutionBody { profile: Profile },
    TwoBallHull { r: f64, separation: f64 },
}

impl BodySpec {
    pub fn build(&self, c: Curvature, n: usize) -> Result<Body> {
        match self {
            BodySpec::GeodesicSphere { m, r } => {
                let center = crate::model_space::ModelPoint::base(c, *m);
                make_geodesic_sphere(c, *m, &center, *r, n)
            }
            BodySpec::Ellipse { axes } => make_ellipse_like(c, *axes, n),
            BodySpec::RadialCurve { profile } => make_radial_curve(c, profile.clone(), n),
            BodySpec::RevolutionBody { profile } => make_revolution_body(c, profile.clone(), n),
            BodySpec::TwoBallHull { r, separation } => {
                make_two_ball_hull(c, *r, *separation, 0.0, n)
            }
        }
    }
}

/// Chart metric for riemannian2d scenarios.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Euclidean,
    Sphere { radius: f64 },
    Hyperbolic { kappa: f64 },
    Revolution { profile: Profile, u_range: [f64; 2] },
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<ChartMetric> {
        match self {
            SurfaceSpec::Euclidean => Ok(ChartMetric::euclidean()),
            SurfaceSpec::Sphere { radius } => ChartMetric::sphere(*radius),
            SurfaceSpec::Hyperbolic { kappa } => ChartMetric::hyperbolic(*kappa),
            SurfaceSpec::Revolution { profile, u_range } => {
                ChartMetric::revolution(profile.clone(), *u_range)
            }
        }
    }
}

/// Where the rolled balls (or trajectory starts) are seeded. `count` draws
/// chart parameters from the scenario's id-derived generator, so repeated
/// runs see identical seeds; `list` pins them explicitly.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    Count { count: usize },
    List { list: Vec<[f64; 2]> },
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::Count { count: 8 }
    }
}

/// Check tolerances, every one overridable per scenario or from the
/// command line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Containment margins (rolling, horoball, diameter).
    pub inclusion: f64,
    /// Differential identity residuals.
    pub residual: f64,
    /// Agreement between independent evaluations of the same quantity.
    pub agreement: f64,
    /// Relative quadrature refinement error.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            inclusion: 1e-6,
            residual: 1e-4,
            agreement: 1e-6,
            quadrature: 1e-8,
        }
    }
}

impl Tolerances {
    /// Apply one `key=value` override; unknown keys are refused by name.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::scenario(format!(
                "tolerance {key} must be nonnegative, got {value}"
            )));
        }
        match key {
            "inclusion" => self.inclusion = value,
            "residual" => self.residual = value,
            "agreement" => self.agreement = value,
            "quadrature" => self.quadrature = value,
            other => {
                return Err(Error::scenario(format!(
                    "unknown tolerance {other:?}; expected one of inclusion, residual, \
                     agreement, quadrature"
                )))
            }
        }
        Ok(())
    }
}

/// Parse a `key=value` tolerance override as accepted on the command line.
pub fn parse_tol_override(arg: &str) -> Result<(String, f64)> {
    let (key, value) = arg
        .split_once('=')
        .ok_or_else(|| Error::scenario(format!("tolerance override {arg:?} is not key=value")))?;
    let value: f64 = value
        .parse()
        .map_err(|_| Error::scenario(format!("tolerance override {arg:?} has a non-numeric value")))?;
    Ok((key.to_string(), value))
}

/// One verification run: which module, on what geometry, with what
/// tolerances. The file format is JSON with exactly these fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Unique name; orders suite output and seeds the run's generator.
    pub id: String,
    pub module: ModuleKind,
    /// Model-space curvature (a curvature floor for riemannian2d).
    pub curvature: f64,
    /// Convexity constant of the body or curve.
    pub lambda: f64,
    /// Boundary generator; required for every module except riemannian2d.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySpec>,
    /// Boundary grid resolution (sample count for riemannian2d curves).
    pub grid_n: usize,
    #[serde(default)]
    pub seeds: SeedSpec,
    /// Interior origin for rac/liouville, as tangent coordinates at the
    /// base point. Defaults to the base point itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_offset: Option<[f64; 2]>,
    /// Trajectory step for rac/liouville. Default 1e-3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// Chart metric; riemannian2d only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    /// Geodesic circle drawn on the surface; riemannian2d only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle_center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle_radius: Option<f64>,
    /// Random small hinge triangles to compare; riemannian2d only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangles: Option<usize>,
    /// Expected contact classification of the first rolled ball; adds a
    /// check when present (rolling only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_contact: Option<ContactConfiguration>,
    /// Whether the hull probe must detect penetration (counterexample
    /// only; default true).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_penetration: Option<bool>,
    /// Depth above which penetration counts as detected. Default 1e-3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penetration_threshold: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Scenario {
    /// Canonical byte encoding: compact JSON of the parsed value, so two
    /// formattings of the same scenario hash identically.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serialization cannot fail")
    }

    /// Hex SHA-256 of the canonical encoding.
    pub fn input_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Deterministic generator for everything random in the run, seeded
    /// from the id alone so reports are byte-identical across repeats.
    pub fn rng(&self) -> ChaCha8Rng {
        let digest = Sha256::digest(self.id.as_bytes());
        let mut word = [0u8; 8];
        word.copy_from_slice(&digest[..8]);
        ChaCha8Rng::seed_from_u64(u64::from_le_bytes(word))
    }

    pub fn curv(&self) -> Result<Curvature> {
        Curvature::new(self.curvature)
    }

    fn require<'a, T>(&self, field: &str, value: &'a Option<T>) -> Result<&'a T> {
        value.as_ref().ok_or_else(|| {
            Error::scenario(format!(
                "field {field:?} is required for module {:?}",
                self.module.name()
            ))
        })
    }

    fn refuse<T>(&self, field: &str, value: &Option<T>) -> Result<()> {
        if value.is_some() {
            return Err(Error::scenario(format!(
                "field {field:?} does not apply to module {:?}",
                self.module.name()
            )));
        }
        Ok(())
    }

    /// Structural validation beyond what serde can see: module-specific
    /// required and refused fields, positivity of sizes.
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::scenario("field \"id\" must be nonempty"));
        }
        if self
            .id
            .chars()
            .any(|ch| !ch.is_ascii_alphanumeric() && ch != '_' && ch != '-')
        {
            return Err(Error::scenario(format!(
                "field \"id\" must be alphanumeric with _ or -, got {:?}",
                self.id
            )));
        }
        if !self.curvature.is_finite() {
            return Err(Error::scenario("field \"curvature\" must be finite"));
        }
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(Error::scenario("field \"lambda\" must be positive"));
        }
        if self.grid_n < 8 {
            return Err(Error::scenario("field \"grid_n\" must be at least 8"));
        }
        if let SeedSpec::Count { count } = self.seeds {
            if count == 0 {
                return Err(Error::scenario("field \"seeds.count\" must be positive"));
            }
        }
        if let Some(step) = self.step {
            if !step.is_finite() || step <= 0.0 {
                return Err(Error::scenario("field \"step\" must be positive"));
            }
        }
        match self.module {
            ModuleKind::Riemannian2d => {
                self.require("surface", &self.surface)?;
                self.require("circle_center", &self.circle_center)?;
                let r = self.require("circle_radius", &self.circle_radius)?;
                if !r.is_finite() || *r <= 0.0 {
                    return Err(Error::scenario("field \"circle_radius\" must be positive"));
                }
                self.refuse("body", &self.body)?;
                self.refuse("origin_offset", &self.origin_offset)?;
                self.refuse("expect_contact", &self.expect_contact)?;
                self.refuse("expect_penetration", &self.expect_penetration)?;
            }
            ModuleKind::Counterexample => {
                let body = self.require("body", &self.body)?;
                if !matches!(body, BodySpec::TwoBallHull { .. }) {
                    return Err(Error::scenario(
                        "module \"counterexample\" needs a two_ball_hull body",
                    ));
                }
                self.refuse("surface", &self.surface)?;
                self.refuse("expect_contact", &self.expect_contact)?;
            }
            _ => {
                let body = self.require("body", &self.body)?;
                if matches!(body, BodySpec::TwoBallHull { .. })
                    && self.module != ModuleKind::Counterexample
                {
                    return Err(Error::scenario(
                        "two_ball_hull bodies only run under module \"counterexample\"",
                    ));
                }
                self.refuse("surface", &self.surface)?;
                self.refuse("circle_center", &self.circle_center)?;
                self.refuse("circle_radius", &self.circle_radius)?;
                self.refuse("triangles", &self.triangles)?;
                self.refuse("expect_penetration", &self.expect_penetration)?;
                if self.module != ModuleKind::Rolling {
                    self.refuse("expect_contact", &self.expect_contact)?;
                }
            }
        }
        Ok(())
    }

    /// Seed chart parameters for model-space modules. `count` seeds draw
    /// uniformly over the chart domain from the id-derived generator.
    pub fn seed_parameters(&self, body: &Body) -> Vec<[f64; 2]> {
        match &self.seeds {
            SeedSpec::List { list } => list.clone(),
            SeedSpec::Count { count } => {
                let mut rng = self.rng();
                let dom = body.chart().domain();
                let k = body.dim() - 1;
                (0..*count)
                    .map(|_| {
                        let mut u = [0.0; 2];
                        for (i, ui) in u.iter_mut().take(k).enumerate() {
                            *ui = rng.random_range(dom[i][0]..dom[i][1]);
                        }
                        u
                    })
                    .collect()
            }
        }
    }

    /// Seed sample indices for riemannian2d curves: `count` spreads evenly,
    /// a list takes each entry's first component as an index.
    pub fn seed_indices(&self, n: usize) -> Result<Vec<usize>> {
        match &self.seeds {
            SeedSpec::Count { count } => {
                let count = (*count).min(n);
                Ok((0..count).map(|j| j * n / count).collect())
            }
            SeedSpec::List { list } => list
                .iter()
                .map(|u| {
                    let idx = u[0];
                    if idx.fract() != 0.0 || idx < 0.0 || idx >= n as f64 {
                        return Err(Error::scenario(format!(
                            "seed index {idx} is not a sample index below {n}"
                        )));
                    }
                    Ok(idx as usize)
                })
                .collect(),
        }
    }
}

/// Parse a scenario from JSON text, reporting the field path of the first
/// offending value on failure.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::scenario(format!("{inner}"))
        } else {
            Error::scenario(format!("at {path}: {inner}"))
        }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Load and parse one scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        reason: format!("reading {}: {e}", path.display()),
    })?;
    parse_scenario(&text).map_err(|e| match e {
        Error::Scenario { reason } => {
            Error::scenario(format!("{}: {reason}", path.display()))
        }
        other => other,
    })
}
