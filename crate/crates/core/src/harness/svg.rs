//! SVG rendering of a run record. The record embeds its scenario, so the
//! geometry is recomputed deterministically here; the drawing needs no
//! state beyond the record file itself.
//!
//! Model bodies are projected to the plane: flat charts draw as-is,
//! spherical scenes orthographically onto the tangent plane at the pole,
//! hyperbolic scenes through the Poincare disk (scaled to radius 1/kappa
//! so lengths near the base point stay comparable). Chart surfaces draw in
//! chart coordinates. Plots are for m = 2 scenarios only.

use crate::convex_body::{certify_lambda_convex, make_two_ball_hull, Body};
use crate::error::{Error, Result};
use crate::horoball::{busemann_level_points, roll_horoball, RayOrientation};
use crate::model_space::{
    characteristic_radius, distance, exp_map, Curvature, ModelPoint, TangentVector,
};
use crate::radial_angle::{integrate_trajectory, Direction};
use crate::riemannian2d::{geodesic_circle, verify_ball_rolling_2d};
use crate::rolling::{counterexample_two_ball_hull, verify_ball_rolling};

use super::run::RunRecord;
use super::scenario::{BodySpec, ModuleKind, Scenario};

const SIDE: f64 = 800.0;
const TITLE_BAND: f64 = 40.0;
const MARGIN_FRACTION: f64 = 0.05;
const TRAJECTORY_POINT_BUDGET: usize = 400;

const BODY_COLOR: &str = "#1f77b4";
const BALL_COLOR: &str = "#d62728";
const CONTACT_COLOR: &str = "#2ca02c";
const ORIGIN_COLOR: &str = "#9467bd";
const TRAJECTORY_COLOR: &str = "#ff7f0e";
const LEVEL_COLOR: &str = "#8c564b";

struct Scene {
    paths: Vec<(Vec<[f64; 2]>, &'static str, bool)>,
    dots: Vec<([f64; 2], &'static str)>,
}

impl Scene {
    fn new() -> Self {
        Scene {
            paths: Vec::new(),
            dots: Vec::new(),
        }
    }

    fn path(&mut self, points: Vec<[f64; 2]>, color: &'static str, closed: bool) {
        if points.len() >= 2 {
            self.paths.push((points, color, closed));
        }
    }

    fn dot(&mut self, at: [f64; 2], color: &'static str) {
        self.dots.push((at, color));
    }
}

fn project(p: &ModelPoint) -> [f64; 2] {
    let c = p.curvature();
    let x = p.coords();
    if c.is_flat() {
        [x[0], x[1]]
    } else if c.is_spherical() {
        [x[1], x[2]]
    } else {
        let k = c.kappa();
        let denom = 1.0 + k * x[0];
        [x[1] / denom, x[2] / denom]
    }
}

fn projection_name(c: f64) -> &'static str {
    if c == 0.0 {
        "flat chart"
    } else if c > 0.0 {
        "orthographic"
    } else {
        "Poincare disk"
    }
}

fn body_outline(body: &Body) -> Vec<[f64; 2]> {
    (0..body.len()).map(|k| project(&body.point_at(k))).collect()
}

fn ball_outline(center: &ModelPoint, r: f64, n: usize) -> Result<Vec<[f64; 2]>> {
    let basis = center.tangent_basis();
    let mut points = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let v = &basis[0] * (r * theta.cos()) + &basis[1] * (r * theta.sin());
        let q = exp_map(&TangentVector::new(center.clone(), v)?)?;
        points.push(project(&q));
    }
    Ok(points)
}

fn downsample(points: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    if points.len() <= TRAJECTORY_POINT_BUDGET {
        return points;
    }
    let stride = points.len().div_ceil(TRAJECTORY_POINT_BUDGET);
    let mut kept: Vec<[f64; 2]> = points.iter().copied().step_by(stride).collect();
    if let Some(&last) = points.last() {
        if kept.last() != Some(&last) {
            kept.push(last);
        }
    }
    kept
}

fn origin_point(sc: &Scenario, c: Curvature, body: &Body) -> Result<ModelPoint> {
    let base = ModelPoint::base(c, body.dim());
    let Some(off) = sc.origin_offset else {
        return Ok(base);
    };
    if off.iter().all(|&a| a == 0.0) {
        return Ok(base);
    }
    let basis = base.tangent_basis();
    let v = &basis[0] * off[0] + &basis[1] * off[1];
    exp_map(&TangentVector::new(base, v)?)
}

fn model_scene(sc: &Scenario, c: Curvature, scene: &mut Scene) -> Result<()> {
    let tol = sc.tolerances;
    let body = sc
        .body
        .as_ref()
        .expect("validated scenario has a body")
        .build(c, sc.grid_n)?;
    if body.dim() != 2 {
        return Err(Error::invalid("plots are drawn for m = 2 scenarios"));
    }
    scene.path(body_outline(&body), BODY_COLOR, true);
    match sc.module {
        ModuleKind::Rolling => {
            let cert = certify_lambda_convex(&body, sc.lambda, tol.inclusion)?;
            cert.require()?;
            let seeds = sc.seed_parameters(&body);
            let results = verify_ball_rolling(&body, &cert, &seeds[..1], tol.inclusion)?;
            let roll = &results[0];
            scene.path(ball_outline(&roll.center, roll.r_lambda, 128)?, BALL_COLOR, false);
            scene.dot(project(&body.chart().point(roll.seed)), ORIGIN_COLOR);
            for &idx in &roll.contact_set {
                scene.dot(project(&body.point_at(idx)), CONTACT_COLOR);
            }
        }
        ModuleKind::Rac | ModuleKind::Liouville => {
            let p = origin_point(sc, c, &body)?;
            scene.dot(project(&p), ORIGIN_COLOR);
            let step = sc.step.unwrap_or(1e-3);
            for &seed in &sc.seed_parameters(&body) {
                let traj =
                    match integrate_trajectory(&body, &p, seed, Direction::IncreasingT, step) {
                        Ok(traj) => traj,
                        Err(Error::StiffTrajectory { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                let points = traj
                    .samples
                    .iter()
                    .map(|s| project(&body.chart().point(s.u)))
                    .collect();
                scene.path(downsample(points), TRAJECTORY_COLOR, false);
            }
        }
        ModuleKind::Horoball => {
            let cert = certify_lambda_convex(&body, sc.lambda, tol.inclusion)?;
            cert.require()?;
            let seeds = sc.seed_parameters(&body);
            let roll = roll_horoball(&body, &cert, seeds[0], RayOrientation::Inward, tol.inclusion)?;
            let mut extent = 0.0f64;
            for k in 0..body.len() {
                extent = extent.max(distance(roll.ray.base(), &body.point_at(k))?);
            }
            let level = busemann_level_points(&roll.ray, 0.0, 2.0 * extent.max(1.0), 129)?;
            scene.path(level.iter().map(project).collect(), LEVEL_COLOR, false);
            let mut ray_points = Vec::new();
            for k in 0..=16 {
                ray_points.push(project(&roll.ray.point_at(extent * k as f64 / 16.0)?));
            }
            scene.path(ray_points, ORIGIN_COLOR, false);
            scene.dot(project(roll.ray.base()), ORIGIN_COLOR);
        }
        ModuleKind::Counterexample => {
            let Some(BodySpec::TwoBallHull { r, separation }) = sc.body else {
                unreachable!("validated counterexample scenario has a hull body");
            };
            let probe = counterexample_two_ball_hull(
                c,
                r,
                separation,
                sc.grid_n,
                sc.penetration_threshold.unwrap_or(super::run::PENETRATION_THRESHOLD),
            )?;
            scene.path(ball_outline(&probe.center, probe.r, 128)?, BALL_COLOR, false);
            scene.dot(project(&body.chart().point(probe.tangent_point)), ORIGIN_COLOR);
            scene.dot(project(&body.point_at(probe.argmax_index)), CONTACT_COLOR);
        }
        ModuleKind::Riemannian2d => unreachable!("chart scenarios have no model body"),
    }
    Ok(())
}

fn chart_scene(sc: &Scenario, scene: &mut Scene) -> Result<()> {
    let tol = sc.tolerances;
    let metric = sc
        .surface
        .as_ref()
        .expect("validated scenario has a surface")
        .build()?;
    let center = sc.circle_center.expect("validated scenario has a center");
    let radius = sc.circle_radius.expect("validated scenario has a radius");
    let samples = geodesic_circle(&metric, center, radius, sc.grid_n)?;
    scene.path(samples.clone(), BODY_COLOR, true);
    let r_lambda = characteristic_radius(sc.curvature, sc.lambda)?;
    let seeds = sc.seed_indices(sc.grid_n)?;
    // A record can legitimately describe a failing scenario; the curve
    // still deserves a picture, so the rolled ball is best-effort.
    if let Ok(report) = verify_ball_rolling_2d(
        &metric,
        sc.curvature,
        &samples,
        sc.lambda,
        &seeds[..1.min(seeds.len())],
        tol.inclusion,
    ) {
        for check in &report.checks {
            scene.dot(check.center, ORIGIN_COLOR);
            let outline = geodesic_circle(&metric, check.center, r_lambda, 96)?;
            scene.path(outline, BALL_COLOR, true);
        }
    }
    Ok(())
}

/// Render the record to a standalone SVG document.
pub fn render_svg(record: &RunRecord) -> Result<String> {
    let sc = &record.scenario;
    sc.validate()?;
    let c = sc.curv()?;
    let mut scene = Scene::new();
    match sc.module {
        ModuleKind::Riemannian2d => chart_scene(sc, &mut scene)?,
        _ => model_scene(sc, c, &mut scene)?,
    }

    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut touch = |p: &[f64; 2]| {
        for ax in 0..2 {
            lo[ax] = lo[ax].min(p[ax]);
            hi[ax] = hi[ax].max(p[ax]);
        }
    };
    for (points, _, _) in &scene.paths {
        points.iter().for_each(&mut touch);
    }
    for (at, _) in &scene.dots {
        touch(at);
    }
    if !lo.iter().chain(hi.iter()).all(|v| v.is_finite()) {
        return Err(Error::invalid("nothing to draw for this record"));
    }
    let span = [hi[0] - lo[0], hi[1] - lo[1]];
    let scale = SIDE * (1.0 - 2.0 * MARGIN_FRACTION) / span[0].max(span[1]).max(1e-9);
    let height = SIDE + TITLE_BAND;
    let to_px = |p: &[f64; 2]| {
        let x = (SIDE - scale * span[0]) / 2.0 + scale * (p[0] - lo[0]);
        let y = height - ((SIDE - scale * span[1]) / 2.0 + scale * (p[1] - lo[1]));
        [x, y]
    };

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIDE} {height}\" \
         width=\"{SIDE}\" height=\"{height}\">\n\
         <rect width=\"{SIDE}\" height=\"{height}\" fill=\"#ffffff\"/>\n\
         <text x=\"16\" y=\"26\" font-family=\"monospace\" font-size=\"16\" fill=\"#333333\">\
         {} ({}, {}, curvature {}, lambda {})</text>\n",
        record.scenario_id,
        sc.module.name(),
        if sc.module == ModuleKind::Riemannian2d {
            "chart coordinates"
        } else {
            projection_name(sc.curvature)
        },
        sc.curvature,
        sc.lambda,
    );
    for (points, color, closed) in &scene.paths {
        let coords: Vec<String> = points
            .iter()
            .map(|p| {
                let [x, y] = to_px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        out.push_str(&format!(
            "<{} points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            if *closed { "polygon" } else { "polyline" },
            coords.join(" "),
            color,
        ));
    }
    for (at, color) in &scene.dots {
        let [x, y] = to_px(at);
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"/>\n",
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::run::run_scenario;
    use super::super::scenario::parse_scenario;
    use super::*;

    fn record_for(json: &str) -> RunRecord {
        run_scenario(&parse_scenario(json).unwrap()).unwrap().record
    }

    #[test]
    fn every_module_family_renders() {
        let rolling = record_for(
            r#"{
                "id": "disk_plot",
                "module": "rolling",
                "curvature": 0.0,
                "lambda": 1.0,
                "body": {"kind": "geodesic_sphere", "m": 2, "r": 1.0},
                "grid_n": 64,
                "seeds": {"count": 2}
            }"#,
        );
        let svg = render_svg(&rolling).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains(BALL_COLOR));
        assert_eq!(svg, render_svg(&rolling).unwrap(), "plots are deterministic");

        let hyperbolic = record_for(
            r#"{
                "id": "horoball_plot",
                "module": "horoball",
                "curvature": -1.0,
                "lambda": 1.3,
                "body": {"kind": "geodesic_sphere", "m": 2, "r": 1.0},
                "grid_n": 48,
                "seeds": {"count": 1}
            }"#,
        );
        let svg = render_svg(&hyperbolic).unwrap();
        assert!(svg.contains(LEVEL_COLOR), "horocycle level set is drawn");
        assert!(svg.contains("Poincare disk"));

        let flow = record_for(
            r#"{
                "id": "flow_plot",
                "module": "liouville",
                "curvature": 0.0,
                "lambda": 1.0,
                "body": {"kind": "geodesic_sphere", "m": 2, "r": 1.0},
                "grid_n": 32,
                "seeds": {"count": 2},
                "origin_offset": [0.3, 0.0]
            }"#,
        );
        let svg = render_svg(&flow).unwrap();
        assert!(svg.contains(TRAJECTORY_COLOR));

        let hull = record_for(
            r#"{
                "id": "hull_plot",
                "module": "counterexample",
                "curvature": -1.0,
                "lambda": 2.0,
                "body": {"kind": "two_ball_hull", "r": 0.5493061443340549, "separation": 1.6479184330021648},
                "grid_n": 96
            }"#,
        );
        assert!(render_svg(&hull).unwrap().contains(CONTACT_COLOR));

        let chart = record_for(
            r#"{
                "id": "chart_plot",
                "module": "riemannian2d",
                "curvature": 0.0,
                "lambda": 0.9,
                "surface": {"kind": "euclidean"},
                "circle_center": [0.0, 0.0],
                "circle_radius": 1.0,
                "grid_n": 48,
                "seeds": {"count": 1}
            }"#,
        );
        let svg = render_svg(&chart).unwrap();
        assert!(svg.contains("chart coordinates"));
        assert!(svg.contains(BALL_COLOR), "the rolled ball is drawn");
    }

    #[test]
    fn three_dimensional_records_refuse_to_plot() {
        let record = record_for(
            r#"{
                "id": "round_ball",
                "module": "rolling",
                "curvature": 0.0,
                "lambda": 1.0,
                "body": {"kind": "geodesic_sphere", "m": 3, "r": 1.0},
                "grid_n": 12,
                "seeds": {"count": 1}
            }"#,
        );
        let err = render_svg(&record).unwrap_err();
        assert!(err.to_string().contains("m = 2"));
    }
}
