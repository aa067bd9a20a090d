//! Scenario execution: dispatch to the verification modules, collect
//! checks into a persistable record, and build CSV sidecars.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::scenario::{BodySpec, ModuleKind, Scenario};
use crate::convex_body::{certify_lambda_convex, Body};
use crate::error::{Error, Result};
use crate::horoball::{
    busemann_by_limit, busemann_closed_form, roll_horoball, verify_horoball_rolling,
    RayOrientation,
};
use crate::model_space::{
    characteristic_radius, distance, exp_map, Curvature, ModelPoint, TangentVector,
};
use crate::radial_angle::{
    comparison_radial_angle, integrate_trajectory, liouville_residual,
    monotonicity_certificate, rac_check, radial_angle, Direction,
};
use crate::riemannian2d::{
    certify_curvature_band, certify_curve_lambda_convex, geodesic_circle, geodesic_curvature,
    toponogov_check, verify_ball_rolling_2d, ChartMetric, REGION_GRID,
};
use crate::rolling::{
    counterexample_two_ball_hull, rigidity_probe, verify_ball_rolling, verify_diameter,
    verify_volume, CheckVerdict, VerificationReport,
};

/// Default penetration depth above which the hull probe reports detection.
pub const PENETRATION_THRESHOLD: f64 = 1e-3;

/// Negative Busemann value the reversed-ray control must reach.
pub const REVERSED_RAY_FLOOR: f64 = -1e-2;

/// Horizon and doubling steps for the Busemann limit agreement check.
pub const BUSEMANN_T_MAX: f64 = 30.0;
pub const BUSEMANN_STEPS: usize = 8;

/// Grid points sampled by the Busemann agreement check.
const AGREEMENT_POINTS: usize = 100;

/// One persisted run: the scenario echo, its hash, and the report.
/// Everything in here is deterministic given the scenario and toolkit
/// version; wall-clock time lives outside the record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub record_version: u32,
    pub toolkit_version: String,
    pub scenario_id: String,
    /// SHA-256 of the scenario's canonical JSON.
    pub input_hash: String,
    /// None unless explicitly stamped; stamping forfeits byte-identical
    /// reruns.
    pub timestamp: Option<String>,
    pub scenario: Scenario,
    pub report: VerificationReport,
}

/// A named CSV emitted next to the record.
#[derive(Clone, Debug)]
pub struct Sidecar {
    pub name: String,
    pub contents: String,
}

/// Result of running one scenario in process.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub record: RunRecord,
    /// Measured wall time; reported in tables, never persisted.
    pub runtime_seconds: f64,
    pub sidecars: Vec<Sidecar>,
}

impl RunOutcome {
    pub fn all_pass(&self) -> bool {
        !self.record.report.checks.is_empty()
            && self.record.report.checks.iter().all(|c| c.pass)
    }

    /// Smallest margin across checks; the suite's "how close was it".
    pub fn worst_margin(&self) -> f64 {
        self.record
            .report
            .checks
            .iter()
            .map(|c| c.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

struct Checks(Vec<CheckVerdict>);

impl Checks {
    fn push(&mut self, name: &str, pass: bool, margin: f64, tolerance: f64) {
        self.0.push(CheckVerdict {
            name: name.to_string(),
            pass,
            margin,
            tolerance,
        });
    }
}

fn origin_point(c: Curvature, m: usize, offset: Option<[f64; 2]>) -> Result<ModelPoint> {
    let base = ModelPoint::base(c, m);
    let Some(off) = offset else {
        return Ok(base);
    };
    if off.iter().all(|&a| a == 0.0) {
        return Ok(base);
    }
    let basis = base.tangent_basis();
    let mut v = basis[0].clone() * 0.0;
    for (i, &a) in off.iter().enumerate().take(basis.len()) {
        v += &basis[i] * a;
    }
    exp_map(&TangentVector::new(base, v)?)
}

fn csv_header(columns: &[&str]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    out
}

/// Run one scenario to a record plus sidecars. Check failures produce a
/// failing record; only malformed scenarios and breakdowns of the
/// verification machinery itself surface as errors.
pub fn run_scenario(sc: &Scenario) -> Result<RunOutcome> {
    sc.validate()?;
    let started = Instant::now();
    let c = sc.curv()?;
    let r_lambda = characteristic_radius(sc.curvature, sc.lambda)?;
    let mut checks = Checks(Vec::new());
    let mut sidecars = Vec::new();
    match sc.module {
        ModuleKind::Rolling => run_rolling(sc, c, &mut checks, &mut sidecars)?,
        ModuleKind::Rac => run_rac(sc, c, &mut checks, &mut sidecars)?,
        ModuleKind::Liouville => run_liouville(sc, c, &mut checks, &mut sidecars)?,
        ModuleKind::Horoball => run_horoball(sc, c, &mut checks, &mut sidecars)?,
        ModuleKind::Riemannian2d => run_riemannian2d(sc, &mut checks, &mut sidecars)?,
        ModuleKind::Counterexample => run_counterexample(sc, c, &mut checks, &mut sidecars)?,
    }
    let report = VerificationReport {
        scenario: sc.id.clone(),
        curvature: sc.curvature,
        lambda: sc.lambda,
        r_lambda,
        checks: checks.0,
        // Kept at zero so records stay byte-identical across reruns; wall
        // time is reported alongside, not inside, the record.
        runtime_seconds: 0.0,
    };
    Ok(RunOutcome {
        record: RunRecord {
            record_version: 1,
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario_id: sc.id.clone(),
            input_hash: sc.input_hash(),
            timestamp: None,
            scenario: sc.clone(),
            report,
        },
        runtime_seconds: started.elapsed().as_secs_f64(),
        sidecars,
    })
}

fn build_body(sc: &Scenario, c: Curvature) -> Result<Body> {
    sc.body
        .as_ref()
        .expect("validated scenario has a body")
        .build(c, sc.grid_n)
}

fn run_rolling(
    sc: &Scenario,
    c: Curvature,
    checks: &mut Checks,
    sidecars: &mut Vec<Sidecar>,
) -> Result<()> {
    let tol = sc.tolerances;
    let body = build_body(sc, c)?;
    let cert = certify_lambda_convex(&body, sc.lambda, tol.inclusion)?;
    checks.push("lambda_certificate", cert.pass, cert.margin(), tol.inclusion);
    if !cert.pass {
        return Ok(());
    }
    let seeds = sc.seed_parameters(&body);
    let results = verify_ball_rolling(&body, &cert, &seeds, tol.inclusion)?;
    let min_margin = results
        .iter()
        .map(|r| r.min_margin)
        .fold(f64::INFINITY, f64::min);
    checks.push(
        "ball_containment",
        results.iter().all(|r| r.pass),
        min_margin,
        tol.inclusion,
    );
    let diameter = verify_diameter(&body, &cert, tol.inclusion)?;
    checks.push("diameter_bound", diameter.pass, diameter.margin, tol.inclusion);
    let volume = verify_volume(&body, &cert, tol.quadrature)?;
    checks.push(
        "volume_bound",
        volume.volume <= volume.volume_bound * (1.0 + tol.quadrature),
        (volume.volume_bound - volume.volume) / volume.volume_bound,
        tol.quadrature,
    );
    checks.push(
        "boundary_bound",
        volume.boundary <= volume.boundary_bound * (1.0 + tol.quadrature),
        (volume.boundary_bound - volume.boundary) / volume.boundary_bound,
        tol.quadrature,
    );
    if let Some(expected) = sc.expect_contact {
        let probe = rigidity_probe(&body, &results[0], tol.agreement)?;
        checks.push(
            "contact_configuration",
            probe == expected,
            results[0].contact_set.len() as f64,
            0.0,
        );
    }

    let mut csv = csv_header(&["index", "u0", "u1", "margin"]);
    for (idx, &u) in body.grid().iter().enumerate() {
        let worst = results
            .iter()
            .map(|r| r.margins[idx])
            .fold(f64::INFINITY, f64::min);
        csv.push_str(&format!("{idx},{},{},{worst}\n", u[0], u[1]));
    }
    sidecars.push(Sidecar {
        name: format!("{}_margins.csv", sc.id),
        contents: csv,
    });
    Ok(())
}

fn run_rac(
    sc: &Scenario,
    c: Curvature,
    checks: &mut Checks,
    sidecars: &mut Vec<Sidecar>,
) -> Result<()> {
    let tol = sc.tolerances;
    let body = build_body(sc, c)?;
    let cert = certify_lambda_convex(&body, sc.lambda, tol.inclusion)?;
    checks.push("lambda_certificate", cert.pass, cert.margin(), tol.inclusion);
    if !cert.pass {
        return Ok(());
    }
    let p = origin_point(c, body.dim(), sc.origin_offset)?;
    let rac = rac_check(&body, &cert, &p, tol.agreement)?;
    checks.push("angle_comparison", rac.pass, -rac.max_violation, tol.agreement);

    let step = sc.step.unwrap_or(1e-3);
    let mut min_slope = f64::INFINITY;
    let mut integrated = 0usize;
    for &seed in &sc.seed_parameters(&body) {
        let traj = match integrate_trajectory(&body, &p, seed, Direction::IncreasingT, step) {
            Ok(traj) => traj,
            // A seed can land where the tangential gradient vanishes; the
            // flow is undefined there, not wrong.
            Err(Error::StiffTrajectory { .. }) => continue,
            Err(e) => return Err(e),
        };
        min_slope = min_slope.min(monotonicity_certificate(&traj, sc.curvature, sc.lambda, rac.d)?);
        integrated += 1;
    }
    if integrated == 0 {
        return Err(Error::invalid(
            "every trajectory seed starts below the radial angle floor",
        ));
    }
    checks.push(
        "comparison_monotone",
        min_slope >= -tol.agreement,
        min_slope,
        tol.agreement,
    );

    let hi = 2.0 * rac.r_lambda - rac.d;
    let mut csv = csv_header(&["index", "t", "phi", "phi_comparison"]);
    for (idx, &u) in body.grid().iter().enumerate() {
        let t = distance(&p, &body.point_at(idx))?.max(rac.d);
        if t > hi {
            continue;
        }
        let phi = radial_angle(&body, &p, u)?;
        let phi_ref = comparison_radial_angle(sc.curvature, sc.lambda, rac.d, t)?;
        csv.push_str(&format!("{idx},{t},{phi},{phi_ref}\n"));
    }
    sidecars.push(Sidecar {
        name: format!("{}_angles.csv", sc.id),
        contents: csv,
    });
    Ok(())
}

fn run_liouville(
    sc: &Scenario,
    c: Curvature,
    checks: &mut Checks,
    sidecars: &mut Vec<Sidecar>,
) -> Result<()> {
    let tol = sc.tolerances;
    let body = build_body(sc, c)?;
    let p = origin_point(c, body.dim(), sc.origin_offset)?;
    let step = sc.step.unwrap_or(1e-3);
    let mut worst = 0.0f64;
    let mut worst_halved = 0.0f64;
    let mut integrated = 0usize;
    for (k, &seed) in sc.seed_parameters(&body).iter().enumerate() {
        let traj = match integrate_trajectory(&body, &p, seed, Direction::IncreasingT, step) {
            Ok(traj) => traj,
            Err(Error::StiffTrajectory { .. }) => continue,
            Err(e) => return Err(e),
        };
        worst = worst.max(liouville_residual(&traj, &body, &p)?);
        let halved = integrate_trajectory(&body, &p, seed, Direction::IncreasingT, step / 2.0)?;
        worst_halved = worst_halved.max(liouville_residual(&halved, &body, &p)?);
        sidecars.push(Sidecar {
            name: format!("{}_trajectory_{k}.csv", sc.id),
            contents: traj.csv(&body),
        });
        integrated += 1;
    }
    if integrated == 0 {
        return Err(Error::invalid(
            "every trajectory seed starts below the radial angle floor",
        ));
    }
    checks.push(
        "flow_identity",
        worst <= tol.residual,
        tol.residual - worst,
        tol.residual,
    );
    // Centered differences converge at second order, so halving the step
    // must shrink the residual markedly unless it already sits at roundoff.
    let (refined_pass, ratio) = if worst_halved < 1e-12 {
        (true, f64::INFINITY)
    } else {
        (worst_halved <= worst / 1.8, worst / worst_halved)
    };
    checks.push(
        "residual_refinement",
        refined_pass,
        if ratio.is_finite() { ratio - 1.8 } else { 1.0 },
        0.0,
    );
    Ok(())
}

fn run_horoball(
    sc: &Scenario,
    c: Curvature,
    checks: &mut Checks,
    sidecars: &mut Vec<Sidecar>,
) -> Result<()> {
    let tol = sc.tolerances;
    let body = build_body(sc, c)?;
    let cert = certify_lambda_convex(&body, sc.lambda, tol.inclusion)?;
    checks.push("lambda_certificate", cert.pass, cert.margin(), tol.inclusion);
    if !cert.pass {
        return Ok(());
    }
    let seeds = sc.seed_parameters(&body);
    let results = verify_horoball_rolling(&body, &cert, &seeds, tol.inclusion)?;
    let min_value = results
        .iter()
        .map(|r| r.min_value)
        .fold(f64::INFINITY, f64::min);
    checks.push(
        "horoball_containment",
        results.iter().all(|r| r.pass),
        min_value,
        tol.inclusion,
    );
    let mut seed_level = 0.0f64;
    for res in &results {
        let at_seed = busemann_closed_form(&res.ray, &body.chart().point(res.seed))?;
        seed_level = seed_level.max(at_seed.abs());
    }
    checks.push(
        "seed_on_level",
        seed_level <= tol.agreement,
        tol.agreement - seed_level,
        tol.agreement,
    );
    let reversed = roll_horoball(&body, &cert, seeds[0], RayOrientation::Outward, tol.inclusion)?;
    checks.push(
        "reversed_ray_fails",
        reversed.min_value < REVERSED_RAY_FLOOR,
        REVERSED_RAY_FLOOR - reversed.min_value,
        0.0,
    );

    let mut rng = sc.rng();
    let mut agreement = 0.0f64;
    let ray = &results[0].ray;
    for _ in 0..AGREEMENT_POINTS.min(body.len()) {
        let idx = rng.random_range(0..body.len());
        let q = body.point_at(idx);
        let limit = busemann_by_limit(ray, &q, BUSEMANN_T_MAX, BUSEMANN_STEPS)?;
        agreement = agreement.max((limit.value - busemann_closed_form(ray, &q)?).abs());
    }
    checks.push(
        "busemann_agreement",
        agreement <= tol.agreement,
        tol.agreement - agreement,
        tol.agreement,
    );

    let mut csv = csv_header(&["index", "u0", "u1", "busemann"]);
    for (idx, &u) in body.grid().iter().enumerate() {
        let worst = results
            .iter()
            .map(|r| r.values[idx])
            .fold(f64::INFINITY, f64::min);
        csv.push_str(&format!("{idx},{},{},{worst}\n", u[0], u[1]));
    }
    sidecars.push(Sidecar {
        name: format!("{}_busemann.csv", sc.id),
        contents: csv,
    });
    Ok(())
}

fn run_counterexample(
    sc: &Scenario,
    c: Curvature,
    checks: &mut Checks,
    sidecars: &mut Vec<Sidecar>,
) -> Result<()> {
    let tol = sc.tolerances;
    let Some(BodySpec::TwoBallHull { r, separation }) = sc.body else {
        unreachable!("validated counterexample scenario has a hull body");
    };
    let threshold = sc.penetration_threshold.unwrap_or(PENETRATION_THRESHOLD);
    let probe = counterexample_two_ball_hull(c, r, separation, sc.grid_n, threshold)?;
    if sc.expect_penetration.unwrap_or(true) {
        checks.push(
            "penetration_detected",
            probe.confirmed,
            probe.penetration - threshold,
            0.0,
        );
    } else {
        checks.push(
            "no_penetration",
            probe.penetration <= tol.inclusion,
            tol.inclusion - probe.penetration,
            tol.inclusion,
        );
    }

    let body = crate::convex_body::make_two_ball_hull(c, r, separation, 0.0, sc.grid_n)?;
    let mut csv = csv_header(&["index", "u0", "u1", "depth"]);
    for (idx, &u) in body.grid().iter().enumerate() {
        let depth = r - distance(&probe.center, &body.point_at(idx))?;
        csv.push_str(&format!("{idx},{},{},{depth}\n", u[0], u[1]));
    }
    sidecars.push(Sidecar {
        name: format!("{}_depth.csv", sc.id),
        contents: csv,
    });
    Ok(())
}

fn sample_bbox(samples: &[[f64; 2]]) -> [[f64; 2]; 2] {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for s in samples {
        for ax in 0..2 {
            lo[ax] = lo[ax].min(s[ax]);
            hi[ax] = hi[ax].max(s[ax]);
        }
    }
    [[lo[0], hi[0]], [lo[1], hi[1]]]
}

/// Random small triangles inside the middle of the sample bounding box;
/// the box is a chart rectangle, so every vertex stays in the domain.
fn sample_triangles(
    sc: &Scenario,
    samples: &[[f64; 2]],
    count: usize,
) -> Result<Vec<[[f64; 2]; 3]>> {
    let bbox = sample_bbox(samples);
    let span = [bbox[0][1] - bbox[0][0], bbox[1][1] - bbox[1][0]];
    let sep = 0.05 * span[0].min(span[1]);
    let mut rng = sc.rng();
    let mut triangles = Vec::with_capacity(count);
    for _ in 0..count {
        let base = [
            rng.random_range(bbox[0][0] + 0.25 * span[0]..bbox[0][1] - 0.25 * span[0]),
            rng.random_range(bbox[1][0] + 0.25 * span[1]..bbox[1][1] - 0.25 * span[1]),
        ];
        let mut tri = [base, base, base];
        for v in 1..3 {
            let mut placed = false;
            for _ in 0..200 {
                let cand = [
                    base[0] + rng.random_range(-0.25 * span[0]..0.25 * span[0]),
                    base[1] + rng.random_range(-0.25 * span[1]..0.25 * span[1]),
                ];
                if tri[..v]
                    .iter()
                    .all(|p| ((p[0] - cand[0]).powi(2) + (p[1] - cand[1]).powi(2)).sqrt() > sep)
                {
                    tri[v] = cand;
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(Error::invalid("could not separate triangle vertices"));
            }
        }
        triangles.push(tri);
    }
    Ok(triangles)
}

fn run_riemannian2d(
    sc: &Scenario,
    checks: &mut Checks,
    sidecars: &mut Vec<Sidecar>,
) -> Result<()> {
    let tol = sc.tolerances;
    let metric: ChartMetric = sc
        .surface
        .as_ref()
        .expect("validated scenario has a surface")
        .build()?;
    let center = sc.circle_center.expect("validated scenario has a center");
    let radius = sc.circle_radius.expect("validated scenario has a radius");
    let samples = geodesic_circle(&metric, center, radius, sc.grid_n)?;

    let bbox = sample_bbox(&samples);
    let diag = ((bbox[0][1] - bbox[0][0]).powi(2) + (bbox[1][1] - bbox[1][0]).powi(2)).sqrt();
    let pad = 0.1 * diag + 0.05;
    let region = [
        [bbox[0][0] - pad, bbox[0][1] + pad],
        [bbox[1][0] - pad, bbox[1][1] + pad],
    ];
    let band = certify_curvature_band(&metric, region, sc.curvature, None, tol.inclusion, REGION_GRID)?;
    checks.push(
        "curvature_floor",
        band.pass,
        band.min_k - sc.curvature,
        tol.inclusion,
    );
    let curve = certify_curve_lambda_convex(&metric, &samples, sc.lambda, tol.inclusion)?;
    checks.push("curve_certificate", curve.pass, curve.margin(), tol.inclusion);
    if band.pass && curve.pass {
        let seeds = sc.seed_indices(sc.grid_n)?;
        let roll = verify_ball_rolling_2d(
            &metric,
            sc.curvature,
            &samples,
            sc.lambda,
            &seeds,
            tol.inclusion,
        )?;
        checks.push("ball_containment", roll.pass, roll.min_margin, tol.inclusion);
        if let Some(count) = sc.triangles {
            let mut min_margin = f64::INFINITY;
            let mut all = true;
            for tri in sample_triangles(sc, &samples, count)? {
                let hinge = toponogov_check(&metric, sc.curvature, tri, tol.inclusion)?;
                min_margin = min_margin.min(hinge.margin);
                all &= hinge.pass;
            }
            checks.push("hinge_comparison", all, min_margin, tol.inclusion);
        }
    }

    let mut csv = csv_header(&["index", "u0", "u1", "turning"]);
    for (idx, s) in samples.iter().enumerate() {
        let kg = geodesic_curvature(&metric, &samples, idx)?;
        csv.push_str(&format!("{idx},{},{},{kg}\n", s[0], s[1]));
    }
    sidecars.push(Sidecar {
        name: format!("{}_turning.csv", sc.id),
        contents: csv,
    });
    Ok(())
}

/// Write the record (pretty JSON) and every sidecar into `dir`, creating
/// it if needed. Returns the written paths, record first.
pub fn write_outcome(outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(1 + outcome.sidecars.len());
    let record_path = dir.join(format!("{}.json", outcome.record.scenario_id));
    let mut text = serde_json::to_string_pretty(&outcome.record)
        .map_err(|e| Error::scenario(format!("serializing record: {e}")))?;
    text.push('\n');
    std::fs::write(&record_path, text)?;
    paths.push(record_path);
    for sidecar in &outcome.sidecars {
        let path = dir.join(&sidecar.name);
        std::fs::write(&path, &sidecar.contents)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Human-readable per-check report for one outcome.
pub fn render_report(outcome: &RunOutcome) -> String {
    let record = &outcome.record;
    let mut out = format!(
        "scenario {} (module {}, curvature {}, lambda {})\ninput hash {}\n",
        record.scenario_id,
        record.scenario.module.name(),
        record.report.curvature,
        record.report.lambda,
        record.input_hash,
    );
    for check in &record.report.checks {
        out.push_str(&format!(
            "{} {:<24} margin {:+.6e}  (tolerance {:.1e})\n",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.margin,
            check.tolerance,
        ));
    }
    out.push_str(&format!(
        "verdict: {} ({} checks, {:.2} s)\n",
        if outcome.all_pass() { "PASS" } else { "FAIL" },
        record.report.checks.len(),
        outcome.runtime_seconds,
    ));
    out
}

/// Parse a run record file (as written by [`write_outcome`]).
pub fn load_record(path: &Path) -> Result<RunRecord> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        reason: format!("reading {}: {e}", path.display()),
    })?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        Error::scenario(format!("{}: at {}: {}", path.display(), e.path(), e.inner()))
    })
}

#[cfg(test)]
mod tests {
    use super::super::scenario::{parse_scenario, SeedSpec, SurfaceSpec};
    use super::*;

    fn flat_disk() -> Scenario {
        parse_scenario(
            r#"{
                "id": "flat_disk",
                "module": "rolling",
                "curvature": 0.0,
                "lambda": 1.0,
                "body": {"kind": "geodesic_sphere", "m": 2, "r": 1.0},
                "grid_n": 64,
                "seeds": {"count": 2},
                "expect_contact": "surrounding"
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn the_unit_disk_rolls_its_own_ball() {
        let outcome = run_scenario(&flat_disk()).unwrap();
        assert!(outcome.all_pass(), "{}", render_report(&outcome));
        let names: Vec<&str> = outcome
            .record
            .report
            .checks
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(
            names,
            [
                "lambda_certificate",
                "ball_containment",
                "diameter_bound",
                "volume_bound",
                "boundary_bound",
                "contact_configuration"
            ]
        );
        assert_eq!(outcome.record.report.r_lambda, 1.0);
        assert_eq!(outcome.sidecars.len(), 1);
        assert!(outcome.sidecars[0].contents.starts_with("index,u0,u1,margin\n"));
        assert_eq!(outcome.sidecars[0].contents.lines().count(), 65);
        assert!(outcome.worst_margin() <= 1e-9, "disk margins are tight");
    }

    #[test]
    fn records_are_byte_identical_across_reruns() {
        let sc = flat_disk();
        let a = run_scenario(&sc).unwrap();
        let b = run_scenario(&sc).unwrap();
        assert_eq!(
            serde_json::to_string(&a.record).unwrap(),
            serde_json::to_string(&b.record).unwrap()
        );
        assert_eq!(a.sidecars[0].contents, b.sidecars[0].contents);
        assert_eq!(a.record.report.runtime_seconds, 0.0);
        assert!(a.record.timestamp.is_none());
    }

    #[test]
    fn failed_certificates_fail_without_breaking_the_run() {
        let mut sc = flat_disk();
        sc.lambda = 1.5;
        sc.expect_contact = None;
        let outcome = run_scenario(&sc).unwrap();
        assert!(!outcome.all_pass());
        assert_eq!(outcome.record.report.checks.len(), 1);
        assert_eq!(outcome.record.report.checks[0].name, "lambda_certificate");
        assert!(outcome.record.report.checks[0].margin < 0.0);
    }

    #[test]
    fn rac_and_liouville_pass_on_the_offset_disk() {
        let rac = parse_scenario(
            r#"{
                "id": "offset_disk_rac",
                "module": "rac",
                "curvature": 0.0,
                "lambda": 1.0,
                "body": {"kind": "geodesic_sphere", "m": 2, "r": 1.0},
                "grid_n": 64,
                "seeds": {"count": 2},
                "origin_offset": [0.3, 0.0]
            }"#,
        )
        .unwrap();
        let outcome = run_scenario(&rac).unwrap();
        assert!(outcome.all_pass(), "{}", render_report(&outcome));
        assert!(outcome.sidecars[0].contents.starts_with("index,t,phi,phi_comparison\n"));

        let liouville = parse_scenario(
            r#"{
                "id": "offset_disk_flow",
                "module": "liouville",
                "curvature": 0.0,
                "lambda": 1.0,
                "body": {"kind": "geodesic_sphere", "m": 2, "r": 1.0},
                "grid_n": 64,
                "seeds": {"count": 2},
                "origin_offset": [0.3, 0.0]
            }"#,
        )
        .unwrap();
        let outcome = run_scenario(&liouville).unwrap();
        assert!(outcome.all_pass(), "{}", render_report(&outcome));
        let refinement = outcome
            .record
            .report
            .checks
            .iter()
            .find(|c| c.name == "residual_refinement")
            .unwrap();
        assert!(refinement.pass);
        assert!(!outcome.sidecars.is_empty());
        assert!(outcome.sidecars[0].name.contains("trajectory"));
    }

    #[test]
    fn horoball_scenarios_run_every_control() {
        let sc = parse_scenario(
            r#"{
                "id": "hyperbolic_circle",
                "module": "horoball",
                "curvature": -1.0,
                "lambda": 1.3,
                "body": {"kind": "geodesic_sphere", "m": 2, "r": 1.0},
                "grid_n": 64,
                "seeds": {"count": 2}
            }"#,
        )
        .unwrap();
        let outcome = run_scenario(&sc).unwrap();
        assert!(outcome.all_pass(), "{}", render_report(&outcome));
        let names: Vec<&str> = outcome
            .record
            .report
            .checks
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(
            names,
            [
                "lambda_certificate",
                "horoball_containment",
                "seed_on_level",
                "reversed_ray_fails",
                "busemann_agreement"
            ]
        );
    }

    #[test]
    fn hull_probes_detect_and_clear_penetration() {
        let hyperbolic = parse_scenario(
            r#"{
                "id": "hull_probe",
                "module": "counterexample",
                "curvature": -1.0,
                "lambda": 2.0,
                "body": {"kind": "two_ball_hull", "r": 0.5493061443340549, "separation": 1.6479184330021648},
                "grid_n": 128
            }"#,
        )
        .unwrap();
        let outcome = run_scenario(&hyperbolic).unwrap();
        assert!(outcome.all_pass(), "{}", render_report(&outcome));
        assert_eq!(outcome.record.report.checks[0].name, "penetration_detected");

        let flat = parse_scenario(
            r#"{
                "id": "stadium_control",
                "module": "counterexample",
                "curvature": 0.0,
                "lambda": 2.0,
                "body": {"kind": "two_ball_hull", "r": 0.5, "separation": 1.5},
                "grid_n": 128,
                "expect_penetration": false
            }"#,
        )
        .unwrap();
        let outcome = run_scenario(&flat).unwrap();
        assert!(outcome.all_pass(), "{}", render_report(&outcome));
        assert_eq!(outcome.record.report.checks[0].name, "no_penetration");
    }

    #[test]
    fn chart_surface_scenarios_certify_and_roll() {
        let sc = parse_scenario(
            r#"{
                "id": "flat_chart_circle",
                "module": "riemannian2d",
                "curvature": 0.0,
                "lambda": 0.9,
                "surface": {"kind": "euclidean"},
                "circle_center": [0.0, 0.0],
                "circle_radius": 1.0,
                "grid_n": 96,
                "seeds": {"count": 2},
                "triangles": 2
            }"#,
        )
        .unwrap();
        let outcome = run_scenario(&sc).unwrap();
        assert!(outcome.all_pass(), "{}", render_report(&outcome));
        let names: Vec<&str> = outcome
            .record
            .report
            .checks
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(
            names,
            ["curvature_floor", "curve_certificate", "ball_containment", "hinge_comparison"]
        );
        assert!(outcome.sidecars[0].contents.starts_with("index,u0,u1,turning\n"));
    }

    #[test]
    fn records_round_trip_through_files() {
        let sc = flat_disk();
        let outcome = run_scenario(&sc).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = write_outcome(&outcome, dir.path()).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths[0].ends_with("flat_disk.json"));
        let loaded = load_record(&paths[0]).unwrap();
        assert_eq!(loaded.scenario_id, "flat_disk");
        assert_eq!(loaded.input_hash, sc.input_hash());
        assert_eq!(
            serde_json::to_string(&loaded).unwrap(),
            serde_json::to_string(&outcome.record).unwrap()
        );
    }

    #[test]
    fn seed_lists_and_surface_variants_are_exercised() {
        let mut sc = flat_disk();
        sc.expect_contact = None;
        sc.seeds = SeedSpec::List {
            list: vec![[0.25, 0.0], [3.0, 0.0]],
        };
        let outcome = run_scenario(&sc).unwrap();
        assert!(outcome.all_pass());

        for surface in [
            SurfaceSpec::Sphere { radius: 1.0 },
            SurfaceSpec::Hyperbolic { kappa: 1.0 },
        ] {
            assert!(surface.build().is_ok());
        }
    }
}
