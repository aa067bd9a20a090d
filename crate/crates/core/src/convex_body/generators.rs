//! Built-in body generators.
//!
//! All curved charts share one ambient recipe: a point at geodesic polar
//! coordinates (rho, direction) around a center x0 with orthonormal tangent
//! frame {e_i} has ambient coordinates
//!
//! ```text
//! P = cn_c(rho) x0 + sn_c(rho) u,   u = sum_i dir_i e_i,
//! ```
//!
//! which also covers c = 0 (cn = 1, sn = rho, x0 the affine center). The
//! derivative formulas below follow from cn' = -c sn and sn' = cn.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::chart::Chart;
use super::{Body, GridSpec};
use crate::error::{Error, Result};
use crate::model_space::{cn, sn, Curvature, ModelPoint};

/// One Fourier term of a radial profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub k: u32,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

/// Radial profile rho(theta) with analytic first and second derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    /// Constant radius: geodesic spheres.
    Constant { r: f64 },
    /// base + sum of a_k cos(k theta) + b_k sin(k theta).
    Harmonics {
        base: f64,
        terms: Vec<HarmonicTerm>,
    },
    /// Polar radius of the ellipse x^2/a^2 + y^2/b^2 = 1.
    EllipsePolar { a: f64, b: f64 },
}

impl Profile {
    /// (rho, rho', rho'') at theta.
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        match self {
            Profile::Constant { r } => (*r, 0.0, 0.0),
            Profile::Harmonics { base, terms } => {
                let mut f = *base;
                let mut f1 = 0.0;
                let mut f2 = 0.0;
                for t in terms {
                    let k = t.k as f64;
                    let (s, c) = (k * theta).sin_cos();
                    f += t.cos_amp * c + t.sin_amp * s;
                    f1 += k * (-t.cos_amp * s + t.sin_amp * c);
                    f2 += k * k * (-t.cos_amp * c - t.sin_amp * s);
                }
                (f, f1, f2)
            }
            Profile::EllipsePolar { a, b } => {
                let (a2, b2) = (a * a, b * b);
                let st = theta.sin();
                let g = b2 + (a2 - b2) * st * st;
                let g1 = (a2 - b2) * (2.0 * theta).sin();
                let g2 = 2.0 * (a2 - b2) * (2.0 * theta).cos();
                let ab = a * b;
                let gm = g.powf(-1.5);
                let rho = ab / g.sqrt();
                let rho1 = -0.5 * ab * gm * g1;
                let rho2 = 0.75 * ab * g.powf(-2.5) * g1 * g1 - 0.5 * ab * gm * g2;
                (rho, rho1, rho2)
            }
        }
    }
}

/// Closed curve at radial distance rho(theta) from a center point.
pub struct RadialCurve {
    curvature: Curvature,
    center: ModelPoint,
    frame: Vec<DVector<f64>>,
    profile: Profile,
}

impl RadialCurve {
    fn new(curvature: Curvature, center: ModelPoint, profile: Profile) -> Self {
        let frame = center.tangent_basis();
        RadialCurve {
            curvature,
            center,
            frame,
            profile,
        }
    }

    /// u, u', u'' as ambient vectors for the planar direction field.
    fn direction(&self, theta: f64) -> (DVector<f64>, DVector<f64>) {
        let (s, c) = theta.sin_cos();
        let u = &self.frame[0] * c + &self.frame[1] * s;
        let u1 = &self.frame[0] * (-s) + &self.frame[1] * c;
        (u, u1)
    }
}

impl Chart for RadialCurve {
    fn curvature(&self) -> Curvature {
        self.curvature
    }
    fn dim(&self) -> usize {
        2
    }
    fn point(&self, u: [f64; 2]) -> ModelPoint {
        let (rho, _, _) = self.profile.eval(u[0]);
        let c = self.curvature.value();
        let (dir, _) = self.direction(u[0]);
        let coords = self.center.coords() * cn(c, rho) + dir * sn(c, rho);
        ModelPoint::project(self.curvature, coords).expect("radial chart stays on the model space")
    }
    fn domain(&self) -> [[f64; 2]; 2] {
        [[0.0, 2.0 * PI], [0.0, 0.0]]
    }
    fn periodic(&self, axis: usize) -> bool {
        axis == 0
    }
    fn interior_witness(&self) -> ModelPoint {
        self.center.clone()
    }
    fn d1(&self, u: [f64; 2], _i: usize) -> DVector<f64> {
        let (rho, rho1, _) = self.profile.eval(u[0]);
        let c = self.curvature.value();
        let (s, co) = (sn(c, rho), cn(c, rho));
        let (dir, dir1) = self.direction(u[0]);
        (self.center.coords() * (-c * s) + &dir * co) * rho1 + dir1 * s
    }
    fn d2(&self, u: [f64; 2], _i: usize, _j: usize) -> DVector<f64> {
        let (rho, rho1, rho2) = self.profile.eval(u[0]);
        let c = self.curvature.value();
        let (s, co) = (sn(c, rho), cn(c, rho));
        let (dir, dir1) = self.direction(u[0]);
        let x0 = self.center.coords();
        (x0 * (-c * s) + &dir * co) * rho2
            + (x0 * co + &dir * s) * (-c * rho1 * rho1)
            + dir1 * (2.0 * rho1 * co)
            + dir * (-s)
    }
}

/// Surface of revolution at radial distance rho(theta) from a center, where
/// theta is the polar angle and psi the rotation angle.
pub struct RevolutionSurface {
    curvature: Curvature,
    center: ModelPoint,
    frame: Vec<DVector<f64>>,
    profile: Profile,
}

impl RevolutionSurface {
    fn new(curvature: Curvature, center: ModelPoint, profile: Profile) -> Self {
        let frame = center.tangent_basis();
        RevolutionSurface {
            curvature,
            center,
            frame,
            profile,
        }
    }

    fn dir(&self, theta: f64, psi: f64) -> DVector<f64> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = psi.sin_cos();
        &self.frame[0] * (st * cp) + &self.frame[1] * (st * sp) + &self.frame[2] * ct
    }
    fn dir_theta(&self, theta: f64, psi: f64) -> DVector<f64> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = psi.sin_cos();
        &self.frame[0] * (ct * cp) + &self.frame[1] * (ct * sp) + &self.frame[2] * (-st)
    }
    fn dir_psi(&self, theta: f64, psi: f64) -> DVector<f64> {
        let st = theta.sin();
        let (sp, cp) = psi.sin_cos();
        &self.frame[0] * (-st * sp) + &self.frame[1] * (st * cp)
    }
}

impl Chart for RevolutionSurface {
    fn curvature(&self) -> Curvature {
        self.curvature
    }
    fn dim(&self) -> usize {
        3
    }
    fn point(&self, u: [f64; 2]) -> ModelPoint {
        let (rho, _, _) = self.profile.eval(u[0]);
        let c = self.curvature.value();
        let coords = self.center.coords() * cn(c, rho) + self.dir(u[0], u[1]) * sn(c, rho);
        ModelPoint::project(self.curvature, coords)
            .expect("revolution chart stays on the model space")
    }
    fn domain(&self) -> [[f64; 2]; 2] {
        [[0.0, PI], [0.0, 2.0 * PI]]
    }
    fn periodic(&self, axis: usize) -> bool {
        axis == 1
    }
    fn interior_witness(&self) -> ModelPoint {
        self.center.clone()
    }
    fn d1(&self, u: [f64; 2], i: usize) -> DVector<f64> {
        let (rho, rho1, _) = self.profile.eval(u[0]);
        let c = self.curvature.value();
        let (s, co) = (sn(c, rho), cn(c, rho));
        if i == 0 {
            (self.center.coords() * (-c * s) + self.dir(u[0], u[1]) * co) * rho1
                + self.dir_theta(u[0], u[1]) * s
        } else {
            self.dir_psi(u[0], u[1]) * s
        }
    }
    fn d2(&self, u: [f64; 2], i: usize, j: usize) -> DVector<f64> {
        let (rho, rho1, rho2) = self.profile.eval(u[0]);
        let c = self.curvature.value();
        let (s, co) = (sn(c, rho), cn(c, rho));
        let (theta, psi) = (u[0], u[1]);
        let x0 = self.center.coords();
        match (i.min(j), i.max(j)) {
            (0, 0) => {
                let dir = self.dir(theta, psi);
                (x0 * (-c * s) + &dir * co) * rho2
                    + (x0 * co + &dir * s) * (-c * rho1 * rho1)
                    + self.dir_theta(theta, psi) * (2.0 * rho1 * co)
                    + dir * (-s)
            }
            (0, 1) => {
                // d/dtheta of dir_psi: differentiate (-st*sp, st*cp) in theta.
                let ct = theta.cos();
                let (sp, cp) = psi.sin_cos();
                let dir_tp = &self.frame[0] * (-ct * sp) + &self.frame[1] * (ct * cp);
                self.dir_psi(theta, psi) * (rho1 * co) + dir_tp * s
            }
            _ => {
                let st = theta.sin();
                let (sp, cp) = psi.sin_cos();
                let dir_pp = &self.frame[0] * (-st * cp) + &self.frame[1] * (-st * sp);
                dir_pp * s
            }
        }
    }
}

/// The exact ellipse x^2/a^2 + y^2/b^2 = 1 in the Euclidean plane.
pub struct FlatEllipse {
    a: f64,
    b: f64,
}

impl Chart for FlatEllipse {
    fn curvature(&self) -> Curvature {
        Curvature::new(0.0).unwrap()
    }
    fn dim(&self) -> usize {
        2
    }
    fn point(&self, u: [f64; 2]) -> ModelPoint {
        let (s, c) = u[0].sin_cos();
        ModelPoint::new(self.curvature(), vec![self.a * c, self.b * s])
            .expect("flat points are unconstrained")
    }
    fn domain(&self) -> [[f64; 2]; 2] {
        [[0.0, 2.0 * PI], [0.0, 0.0]]
    }
    fn periodic(&self, axis: usize) -> bool {
        axis == 0
    }
    fn interior_witness(&self) -> ModelPoint {
        ModelPoint::new(self.curvature(), vec![0.0, 0.0]).unwrap()
    }
    fn d1(&self, u: [f64; 2], _i: usize) -> DVector<f64> {
        let (s, c) = u[0].sin_cos();
        DVector::from_vec(vec![-self.a * s, self.b * c])
    }
    fn d2(&self, u: [f64; 2], _i: usize, _j: usize) -> DVector<f64> {
        let (s, c) = u[0].sin_cos();
        DVector::from_vec(vec![-self.a * c, -self.b * s])
    }
}

/// Boundary of the convex hull of two disjoint balls of equal radius with
/// centers on a common geodesic, symmetric about the base point. Curvature
/// c <= 0. Four pieces on u in [0,1), counterclockwise:
///
///   [0, 1/4)   arc around the right center,
///   [1/4, 1/2) upper tangent geodesic segment (midpoint at u = 3/8),
///   [1/2, 3/4) arc around the left center,
///   [3/4, 1)   lower tangent geodesic segment.
///
/// The boundary is C^1 at the junctions; `smoothing` > 0 blends the
/// adjacent pieces over a window of that arclength half-width with a C^2
/// weight, making the curve C^2 (derivatives then come from the default
/// finite-difference oracles).
pub struct TwoBallHull {
    curvature: Curvature,
    /// Hatted data: all lengths multiplied by kappa (c < 0), or the plain
    /// lengths for c = 0.
    r_h: f64,
    s_h: f64,
    h_h: f64,
    t_h: f64,
    alpha2: f64,
    smoothing: f64,
    /// u-halfwidth of the blend window on each piece's side.
    window_u: [f64; 4],
}

impl TwoBallHull {
    fn new(curvature: Curvature, r: f64, separation: f64, smoothing: f64) -> Result<Self> {
        if curvature.value() > 0.0 {
            return Err(Error::invalid(
                "two-ball hull is defined for nonpositive curvature",
            ));
        }
        if r <= 0.0 {
            return Err(Error::invalid("ball radius must be positive"));
        }
        if separation <= 2.0 * r {
            return Err(Error::BallsNotDisjoint {
                separation,
                needed: 2.0 * r,
            });
        }
        let flat = curvature.is_flat();
        let k = if flat { 1.0 } else { curvature.kappa() };
        let (r_h, s_h) = (k * r, k * separation);
        let (h_h, t_h, alpha2) = if flat {
            (r_h, s_h / 2.0, PI / 2.0)
        } else {
            let h = (r_h.sinh() / (s_h / 2.0).cosh()).asinh();
            let t = ((s_h / 2.0).tanh() / h.cosh()).atanh();
            // Tangency direction seen from the right center.
            let q = [t.cosh() * h.cosh(), t.sinh(), t.cosh() * h.sinh()];
            let e1 = [(s_h / 2.0).sinh(), (s_h / 2.0).cosh(), 0.0];
            let cos_a = (-q[0] * e1[0] + q[1] * e1[1]) / r_h.sinh();
            let sin_a = q[2] / r_h.sinh();
            (h, t, sin_a.atan2(cos_a))
        };
        // Arclengths of one arc and one segment (unhatted).
        let arc_len = if flat {
            2.0 * alpha2 * r
        } else {
            2.0 * alpha2 * r_h.sinh() / k
        };
        let seg_len = 2.0 * t_h / k;
        let max_smoothing = 0.2 * arc_len.min(seg_len);
        if smoothing < 0.0 || smoothing >= max_smoothing {
            return Err(Error::invalid(format!(
                "smoothing must lie in [0, {max_smoothing:.6})"
            )));
        }
        let window = |len: f64| smoothing / (4.0 * len);
        let window_u = [
            window(arc_len),
            window(seg_len),
            window(arc_len),
            window(seg_len),
        ];
        Ok(TwoBallHull {
            curvature,
            r_h,
            s_h,
            h_h,
            t_h,
            alpha2,
            smoothing,
            window_u,
        })
    }

    /// Hatted coordinates of the unsmoothed piece at local parameter v
    /// (extends smoothly outside [0,1)). Returns (coords, d/dv, d2/dv2).
    fn piece(&self, piece: usize, v: f64) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let flat = self.curvature.is_flat();
        match piece {
            0 | 2 => {
                let alpha = -self.alpha2 + 2.0 * self.alpha2 * if piece == 0 { v } else { 1.0 - v };
                let da = 2.0 * self.alpha2 * if piece == 0 { 1.0 } else { -1.0 };
                let (sa, ca) = alpha.sin_cos();
                let (mut p, mut p1, mut p2) = if flat {
                    let o = [self.s_h / 2.0, 0.0];
                    (
                        DVector::from_vec(vec![o[0] + self.r_h * ca, o[1] + self.r_h * sa]),
                        DVector::from_vec(vec![-self.r_h * sa * da, self.r_h * ca * da]),
                        DVector::from_vec(vec![
                            -self.r_h * ca * da * da,
                            -self.r_h * sa * da * da,
                        ]),
                    )
                } else {
                    // Center, axis tangent and vertical tangent of the right
                    // ball in hyperboloid coordinates (hatted lengths).
                    let (sh, ch) = ((self.s_h / 2.0).sinh(), (self.s_h / 2.0).cosh());
                    let o = [ch, sh, 0.0];
                    let e1 = [sh, ch, 0.0];
                    let e2 = [0.0, 0.0, 1.0];
                    let (cr, sr) = (self.r_h.cosh(), self.r_h.sinh());
                    let combine = |w_o: f64, w_c: f64, w_s: f64| {
                        DVector::from_vec(vec![
                            w_o * o[0] + w_c * e1[0] + w_s * e2[0],
                            w_o * o[1] + w_c * e1[1] + w_s * e2[1],
                            w_o * o[2] + w_c * e1[2] + w_s * e2[2],
                        ])
                    };
                    (
                        combine(cr, sr * ca, sr * sa),
                        combine(0.0, -sr * sa * da, sr * ca * da),
                        combine(0.0, -sr * ca * da * da, -sr * sa * da * da),
                    )
                };
                if piece == 2 {
                    // Mirror across the symmetry axis between the centers.
                    let idx = if flat { 0 } else { 1 };
                    p[idx] = -p[idx];
                    p1[idx] = -p1[idx];
                    p2[idx] = -p2[idx];
                }
                (p, p1, p2)
            }
            _ => {
                let t = if piece == 1 {
                    self.t_h * (1.0 - 2.0 * v)
                } else {
                    self.t_h * (2.0 * v - 1.0)
                };
                let dt = 2.0 * self.t_h * if piece == 1 { -1.0 } else { 1.0 };
                let upper = piece == 1;
                if flat {
                    let y = if upper { self.r_h } else { -self.r_h };
                    (
                        DVector::from_vec(vec![t, y]),
                        DVector::from_vec(vec![dt, 0.0]),
                        DVector::from_vec(vec![0.0, 0.0]),
                    )
                } else {
                    let (st, ct) = (t.sinh(), t.cosh());
                    let (sh, ch) = (self.h_h.sinh(), self.h_h.cosh());
                    let z = if upper { 1.0 } else { -1.0 };
                    let p = DVector::from_vec(vec![ct * ch, st, z * ct * sh]);
                    let p1 = DVector::from_vec(vec![st * ch * dt, ct * dt, z * st * sh * dt]);
                    // Geodesics through the origin plane: second derivative
                    // is the position itself (times dt^2).
                    let p2 = &p * (dt * dt);
                    (p, p1, p2)
                }
            }
        }
    }

    /// Raw (unblended) evaluation at global parameter u, choosing the piece
    /// by index with v possibly outside [0,1) for extension.
    fn eval_piece_at(&self, piece: usize, u: f64) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let mut v = 4.0 * u - piece as f64;
        while v > 2.0 {
            v -= 4.0;
        }
        while v < -2.0 {
            v += 4.0;
        }
        self.piece(piece, v)
    }

    /// Blend weight and bracketing pieces if u falls in a smoothing window;
    /// None outside all windows.
    fn blend(&self, u: f64) -> Option<(usize, usize, f64)> {
        if self.smoothing == 0.0 {
            return None;
        }
        for j in 0..4 {
            let junction = j as f64 * 0.25;
            let before = (j + 3) % 4;
            let after = j;
            let wb = self.window_u[before];
            let wa = self.window_u[after];
            let mut d = u - junction;
            if d > 0.5 {
                d -= 1.0;
            }
            if d < -0.5 {
                d += 1.0;
            }
            if d >= -wb && d <= wa {
                let x = (d + wb) / (wb + wa);
                // C^2 smoothstep.
                let w = x * x * x * (6.0 * x * x - 15.0 * x + 10.0);
                return Some((before, after, w));
            }
        }
        None
    }

    fn scale_down(&self, v: DVector<f64>) -> DVector<f64> {
        if self.curvature.is_flat() {
            v
        } else {
            v / self.curvature.kappa()
        }
    }
}

impl Chart for TwoBallHull {
    fn curvature(&self) -> Curvature {
        self.curvature
    }
    fn dim(&self) -> usize {
        2
    }
    fn point(&self, u: [f64; 2]) -> ModelPoint {
        let uu = u[0].rem_euclid(1.0);
        let coords = if let Some((before, after, w)) = self.blend(uu) {
            let (pb, _, _) = self.eval_piece_at(before, uu);
            let (pa, _, _) = self.eval_piece_at(after, uu);
            pb * (1.0 - w) + pa * w
        } else {
            let piece = ((uu * 4.0).floor() as usize).min(3);
            self.eval_piece_at(piece, uu).0
        };
        ModelPoint::project(self.curvature, self.scale_down(coords))
            .expect("hull pieces stay on the model space")
    }
    fn domain(&self) -> [[f64; 2]; 2] {
        [[0.0, 1.0], [0.0, 0.0]]
    }
    fn periodic(&self, axis: usize) -> bool {
        axis == 0
    }
    fn interior_witness(&self) -> ModelPoint {
        ModelPoint::base(self.curvature, 2)
    }
    fn d1(&self, u: [f64; 2], i: usize) -> DVector<f64> {
        let uu = u[0].rem_euclid(1.0);
        if self.blend(uu).is_some() {
            // Blended region: fall back to finite differences on point().
            return fd_d1(self, u, i);
        }
        let piece = ((uu * 4.0).floor() as usize).min(3);
        let (_, p1, _) = self.eval_piece_at(piece, uu);
        self.scale_down(p1 * 4.0)
    }
    fn d2(&self, u: [f64; 2], i: usize, j: usize) -> DVector<f64> {
        let uu = u[0].rem_euclid(1.0);
        if self.blend(uu).is_some() {
            return fd_d2(self, u, i, j);
        }
        let piece = ((uu * 4.0).floor() as usize).min(3);
        let (_, _, p2) = self.eval_piece_at(piece, uu);
        self.scale_down(p2 * 16.0)
    }
}

/// Central finite difference of the chart point, mirroring the trait
/// defaults for use inside override implementations.
fn fd_d1(chart: &dyn Chart, u: [f64; 2], i: usize) -> DVector<f64> {
    let h = super::chart::FD_STEP;
    let mut up = u;
    let mut um = u;
    up[i] += h;
    um[i] -= h;
    (chart.point(up).coords() - chart.point(um).coords()) / (2.0 * h)
}

fn fd_d2(chart: &dyn Chart, u: [f64; 2], i: usize, j: usize) -> DVector<f64> {
    let h = super::chart::FD_STEP;
    if i == j {
        let mut up = u;
        let mut um = u;
        up[i] += h;
        um[i] -= h;
        let center = chart.point(u).coords().clone();
        (chart.point(up).coords() + chart.point(um).coords() - center * 2.0) / (h * h)
    } else {
        let mut pp = u;
        let mut pm = u;
        let mut mp = u;
        let mut mm = u;
        pp[i] += h;
        pp[j] += h;
        pm[i] += h;
        pm[j] -= h;
        mp[i] -= h;
        mp[j] += h;
        mm[i] -= h;
        mm[j] -= h;
        (chart.point(pp).coords() - chart.point(pm).coords() - chart.point(mp).coords()
            + chart.point(mm).coords())
            / (4.0 * h * h)
    }
}

fn validate_profile(c: Curvature, profile: &Profile) -> Result<()> {
    let bound = if c.value() > 0.0 {
        PI / (2.0 * c.kappa())
    } else {
        f64::INFINITY
    };
    for k in 0..4096 {
        let theta = 2.0 * PI * k as f64 / 4096.0;
        let (rho, _, _) = profile.eval(theta);
        if rho <= 0.0 {
            return Err(Error::invalid(format!(
                "radial profile not positive at theta = {theta:.4}: rho = {rho:.4}"
            )));
        }
        if rho >= bound {
            return Err(Error::invalid(format!(
                "radial profile reaches {rho:.4} >= pi/(2 kappa) = {bound:.4}; \
                 the body would leave the convex hemisphere"
            )));
        }
    }
    Ok(())
}

/// Geodesic sphere of radius r about a center point; m = 2 or 3.
pub fn make_geodesic_sphere(
    c: Curvature,
    m: usize,
    center: &ModelPoint,
    r: f64,
    n: usize,
) -> Result<Body> {
    if r <= 0.0 {
        return Err(Error::invalid("sphere radius must be positive"));
    }
    if c.value() > 0.0 && r >= PI / (2.0 * c.kappa()) {
        return Err(Error::invalid(
            "convex geodesic sphere needs r < pi/(2 kappa)",
        ));
    }
    c.same(&center.curvature())?;
    let profile = Profile::Constant { r };
    match m {
        2 => Body::new(
            Arc::new(RadialCurve::new(c, center.clone(), profile)),
            GridSpec::Uniform { n },
            "geodesic_sphere",
        ),
        3 => Body::new(
            Arc::new(RevolutionSurface::new(c, center.clone(), profile)),
            GridSpec::Product {
                n_theta: n,
                n_psi: n + n % 2,
            },
            "geodesic_sphere",
        ),
        _ => Err(Error::invalid("supported dimensions are 2 and 3")),
    }
}

/// Ellipse with semi-axes (a, b): exact in the plane, the polar-radius
/// analogue on curved model spaces.
pub fn make_ellipse_like(c: Curvature, axes: [f64; 2], n: usize) -> Result<Body> {
    let [a, b] = axes;
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::invalid("ellipse axes must be positive"));
    }
    if c.is_flat() {
        Body::new(
            Arc::new(FlatEllipse { a, b }),
            GridSpec::Uniform { n },
            "ellipse",
        )
    } else {
        let profile = Profile::EllipsePolar { a, b };
        validate_profile(c, &profile)?;
        Body::new(
            Arc::new(RadialCurve::new(c, ModelPoint::base(c, 2), profile)),
            GridSpec::Uniform { n },
            "ellipse_like",
        )
    }
}

/// Closed curve rho(theta) around the base point.
pub fn make_radial_curve(c: Curvature, profile: Profile, n: usize) -> Result<Body> {
    validate_profile(c, &profile)?;
    Body::new(
        Arc::new(RadialCurve::new(c, ModelPoint::base(c, 2), profile)),
        GridSpec::Uniform { n },
        "radial_curve",
    )
}

/// Surface of revolution rho(theta) around the base point (m = 3).
pub fn make_revolution_body(c: Curvature, profile: Profile, n: usize) -> Result<Body> {
    validate_profile(c, &profile)?;
    Body::new(
        Arc::new(RevolutionSurface::new(c, ModelPoint::base(c, 3), profile)),
        GridSpec::Product {
            n_theta: n,
            n_psi: n + n % 2,
        },
        "revolution_body",
    )
}

/// Convex hull of two balls of radius r with centers `separation` apart,
/// c <= 0. The grid is a midpoint grid (n rounded up to a multiple of 4)
/// so that the C^1 junctions are never sampled.
pub fn make_two_ball_hull(
    c: Curvature,
    r: f64,
    separation: f64,
    smoothing: f64,
    n: usize,
) -> Result<Body> {
    let chart = TwoBallHull::new(c, r, separation, smoothing)?;
    let n4 = n.div_ceil(4) * 4;
    Body::new(Arc::new(chart), GridSpec::Midpoint { n: n4 }, "two_ball_hull")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_body::curvature::unit_inward_normal;
    use crate::model_space::distance;
    use approx::assert_relative_eq;

    fn curv(c: f64) -> Curvature {
        Curvature::new(c).unwrap()
    }

    fn fd_profile(profile: &Profile, theta: f64) -> (f64, f64) {
        let h = 1e-5;
        let (fp, _, _) = profile.eval(theta + h);
        let (fm, _, _) = profile.eval(theta - h);
        let (f0, _, _) = profile.eval(theta);
        ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
    }

    #[test]
    fn profile_derivatives_match_finite_differences() {
        let profiles = vec![
            Profile::Constant { r: 0.8 },
            Profile::Harmonics {
                base: 1.0,
                terms: vec![
                    HarmonicTerm { k: 2, cos_amp: 0.1, sin_amp: 0.02 },
                    HarmonicTerm { k: 5, cos_amp: 0.0, sin_amp: 0.03 },
                ],
            },
            Profile::EllipsePolar { a: 2.0, b: 1.0 },
        ];
        for profile in &profiles {
            for k in 0..12 {
                let theta = k as f64 * 0.55;
                let (_, d1, d2) = profile.eval(theta);
                let (fd1, fd2) = fd_profile(profile, theta);
                assert_relative_eq!(d1, fd1, epsilon = 1e-8, max_relative = 1e-8);
                assert!((d2 - fd2).abs() < 1e-5, "{d2} vs {fd2}");
            }
        }
    }

    fn check_chart_derivatives(chart: &dyn Chart, us: &[[f64; 2]]) {
        for &u in us {
            for axis in 0..chart.dim() - 1 {
                let analytic = chart.d1(u, axis);
                let numeric = fd_d1(chart, u, axis);
                let scale = numeric.norm().max(1.0);
                assert!(
                    (&analytic - &numeric).norm() < 5e-6 * scale,
                    "d1 axis {axis} at {u:?}: {analytic:?} vs {numeric:?}"
                );
                for other in axis..chart.dim() - 1 {
                    let analytic = chart.d2(u, axis, other);
                    let numeric = fd_d2(chart, u, axis, other);
                    let scale = numeric.norm().max(1.0);
                    assert!(
                        (&analytic - &numeric).norm() < 5e-5 * scale,
                        "d2 ({axis},{other}) at {u:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn radial_curve_analytic_derivatives() {
        for &c in &[-1.0, 0.0, 1.0] {
            let profile = Profile::Harmonics {
                base: 0.7,
                terms: vec![HarmonicTerm { k: 3, cos_amp: 0.05, sin_amp: 0.01 }],
            };
            let body = make_radial_curve(curv(c), profile, 8).unwrap();
            let us: Vec<[f64; 2]> = (0..8).map(|k| [k as f64 * 0.7901, 0.0]).collect();
            check_chart_derivatives(body.chart(), &us);
        }
    }

    #[test]
    fn revolution_surface_analytic_derivatives() {
        for &c in &[-1.0, 0.0, 1.0] {
            let profile = Profile::Harmonics {
                base: 0.7,
                terms: vec![HarmonicTerm { k: 2, cos_amp: 0.04, sin_amp: 0.0 }],
            };
            let body = make_revolution_body(curv(c), profile, 8).unwrap();
            let us: Vec<[f64; 2]> = (1..7)
                .flat_map(|i| (0..4).map(move |j| [i as f64 * 0.41, j as f64 * 1.3]))
                .collect();
            check_chart_derivatives(body.chart(), &us);
        }
    }

    #[test]
    fn flat_ellipse_analytic_derivatives() {
        let body = make_ellipse_like(curv(0.0), [2.0, 1.0], 8).unwrap();
        let us: Vec<[f64; 2]> = (0..8).map(|k| [k as f64 * 0.7901, 0.0]).collect();
        check_chart_derivatives(body.chart(), &us);
    }

    #[test]
    fn geodesic_sphere_points_sit_at_radius() {
        for &c in &[-1.0, 0.0, 1.0] {
            for &m in &[2usize, 3] {
                let center = ModelPoint::base(curv(c), m);
                let body = make_geodesic_sphere(curv(c), m, &center, 0.85, 12).unwrap();
                for k in 0..body.len() {
                    let p = body.point_at(k);
                    assert_relative_eq!(
                        distance(&p, &center).unwrap(),
                        0.85,
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn sphere_radius_bounds_enforced() {
        let center2 = ModelPoint::base(curv(4.0), 2);
        // pi/(2*kappa) = pi/4 for c = 4.
        assert!(make_geodesic_sphere(curv(4.0), 2, &center2, 0.8, 12).is_err());
        assert!(make_geodesic_sphere(curv(4.0), 2, &center2, 0.7, 12).is_ok());
        let center0 = ModelPoint::base(curv(0.0), 2);
        assert!(make_geodesic_sphere(curv(0.0), 2, &center0, -0.1, 12).is_err());
    }

    #[test]
    fn hull_junctions_are_continuous() {
        let body = make_two_ball_hull(curv(-1.0), 0.5, 1.6, 0.0, 64).unwrap();
        let chart = body.chart();
        let eps = 1e-9;
        for &j in &[0.25, 0.5, 0.75] {
            let before = chart.point([j - eps, 0.0]);
            let after = chart.point([j + eps, 0.0]);
            assert!(
                distance(&before, &after).unwrap() < 1e-7,
                "position jump at u = {j}"
            );
            let db = chart.d1([j - eps, 0.0], 0);
            let da = chart.d1([j + eps, 0.0], 0);
            let tb = &db / db.norm();
            let ta = &da / da.norm();
            assert!((&tb - &ta).norm() < 1e-6, "tangent direction jump at u = {j}");
        }
    }

    #[test]
    fn hull_tangency_points_sit_on_both_balls() {
        let c = curv(-1.0);
        let (r, s) = (0.5, 1.6);
        let body = make_two_ball_hull(c, r, s, 0.0, 64).unwrap();
        let chart = body.chart();
        let base = ModelPoint::base(c, 2);
        let e1 = base.tangent_basis()[0].clone();
        let right = crate::model_space::exp_map(
            &crate::model_space::TangentVector::new(base.clone(), e1.clone() * (s / 2.0)).unwrap(),
        )
        .unwrap();
        let left = crate::model_space::exp_map(
            &crate::model_space::TangentVector::new(base, e1 * (-s / 2.0)).unwrap(),
        )
        .unwrap();
        // u = 1/4 is the junction between the right arc and the upper segment;
        // it must lie at distance r from the right center and further from the left.
        let p = chart.point([0.25, 0.0]);
        assert_relative_eq!(distance(&p, &right).unwrap(), r, epsilon = 1e-12);
        assert!(distance(&p, &left).unwrap() > r + 0.1);
        // The right arc midpoint u = 1/8 is the far right point of the hull.
        let apex = chart.point([0.125, 0.0]);
        assert_relative_eq!(distance(&apex, &right).unwrap(), r, epsilon = 1e-12);
    }

    #[test]
    fn flat_hull_is_a_stadium() {
        let (r, s) = (0.5, 1.6);
        let body = make_two_ball_hull(curv(0.0), r, s, 0.0, 64).unwrap();
        let chart = body.chart();
        let apex = chart.point([0.125, 0.0]);
        assert_relative_eq!(apex.coords()[0], s / 2.0 + r, epsilon = 1e-12);
        assert_relative_eq!(apex.coords()[1], 0.0, epsilon = 1e-12);
        let top = chart.point([0.375, 0.0]);
        assert_relative_eq!(top.coords()[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(top.coords()[1], r, epsilon = 1e-12);
    }

    #[test]
    fn hull_rejects_overlapping_balls() {
        let err = make_two_ball_hull(curv(-1.0), 0.5, 0.9, 0.0, 64).unwrap_err();
        match err {
            Error::BallsNotDisjoint { separation, needed } => {
                assert_relative_eq!(separation, 0.9);
                assert_relative_eq!(needed, 1.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(make_two_ball_hull(curv(1.0), 0.5, 1.6, 0.0, 64).is_err());
    }

    #[test]
    fn smoothed_hull_still_closes_up_and_points_inward() {
        let body = make_two_ball_hull(curv(-1.0), 0.5, 1.6, 0.02, 64).unwrap();
        let chart = body.chart();
        let w = chart.interior_witness();
        for &j in &[0.25, 0.5, 0.75] {
            let before = chart.point([j - 1e-9, 0.0]);
            let after = chart.point([j + 1e-9, 0.0]);
            assert!(distance(&before, &after).unwrap() < 1e-7);
        }
        for &u in body.grid().iter().step_by(3) {
            let nu = unit_inward_normal(chart, u).unwrap();
            let fwd = crate::model_space::exp_map(&nu.scaled(1e-3)).unwrap();
            let bwd = crate::model_space::exp_map(&nu.scaled(-1e-3)).unwrap();
            assert!(distance(&fwd, &w).unwrap() < distance(&bwd, &w).unwrap());
        }
    }

    #[test]
    fn profile_validation_rejects_nonpositive_and_oversized() {
        let spiky = Profile::Harmonics {
            base: 0.5,
            terms: vec![HarmonicTerm { k: 1, cos_amp: 0.6, sin_amp: 0.0 }],
        };
        assert!(make_radial_curve(curv(0.0), spiky, 16).is_err());
        let too_big = Profile::Constant { r: 1.6 };
        // pi/(2*kappa) ~ 1.5708 for c = 1; radius 1.6 exceeds it.
        assert!(make_radial_curve(curv(1.0), too_big, 16).is_err());
        assert!(make_radial_curve(curv(-1.0), Profile::Constant { r: 1.6 }, 16).is_ok());
    }

    #[test]
    fn profile_serde_roundtrip() {
        let profile = Profile::Harmonics {
            base: 1.0,
            terms: vec![HarmonicTerm { k: 4, cos_amp: -0.02, sin_amp: 0.07 }],
        };
        let text = serde_json::to_string(&profile).unwrap();
        let back: Profile = serde_json::from_str(&text).unwrap();
        let (a, b, c) = profile.eval(1.234);
        let (x, y, z) = back.eval(1.234);
        assert_eq!((a, b, c), (x, y, z));
    }
}
