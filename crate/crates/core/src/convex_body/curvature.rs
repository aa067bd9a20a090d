//! Normals, second fundamental form and convexity certification.

use nalgebra::{DMatrix, DVector};

use super::chart::Chart;
use super::Body;
use crate::error::{Error, Result};
use crate::model_space::{log_map, ModelPoint, TangentVector};
use crate::numerics::generalized_eigen_2x2;

/// Tangent vectors below this norm (relative to the chart scale) mean the
/// chart fails to be an immersion at the point.
const IMMERSION_TOL: f64 = 1e-8;

/// Pointwise curvature data at one boundary sample.
#[derive(Clone, Debug)]
pub struct CurvatureSample {
    pub point: ModelPoint,
    pub inward_normal: TangentVector,
    /// Principal curvatures with respect to the inward normal, ascending.
    pub shape_eigenvalues: Vec<f64>,
    pub kappa_min: f64,
}

/// Outcome of a grid convexity certification.
#[derive(Clone, Debug)]
pub struct Certification {
    pub lambda: f64,
    pub tol: f64,
    pub min_kappa: f64,
    /// Grid index attaining the minimum (first attaining it on ties).
    pub argmin_index: usize,
    pub argmin: CurvatureSample,
    pub pass: bool,
}

impl Certification {
    /// Signed slack of the certificate: min curvature minus lambda.
    pub fn margin(&self) -> f64 {
        self.min_kappa - self.lambda
    }

    /// Error unless the certificate passed; verifiers gate on this so a
    /// failed certification can never be silently rolled.
    pub fn require(&self) -> Result<()> {
        if self.pass {
            return Ok(());
        }
        Err(Error::NotCertified {
            reason: format!(
                "certificate for lambda = {} failed with margin {:e}",
                self.lambda,
                self.margin()
            ),
        })
    }
}

/// The chart tangent vectors at u, checked for linear independence.
pub fn chart_tangents(chart: &dyn Chart, u: [f64; 2]) -> Result<Vec<DVector<f64>>> {
    let m = chart.dim();
    let c = chart.curvature();
    let tangents: Vec<DVector<f64>> = (0..m - 1).map(|i| chart.d1(u, i)).collect();
    // Gram determinant under the ambient form, scaled to be unit-free.
    let mut scale: f64 = 0.0;
    for t in &tangents {
        scale = scale.max(c.form(t.as_slice(), t.as_slice()).abs());
    }
    let degenerate = if m == 2 {
        scale < IMMERSION_TOL * IMMERSION_TOL
    } else {
        let g00 = c.form(tangents[0].as_slice(), tangents[0].as_slice());
        let g01 = c.form(tangents[0].as_slice(), tangents[1].as_slice());
        let g11 = c.form(tangents[1].as_slice(), tangents[1].as_slice());
        let det = g00 * g11 - g01 * g01;
        scale < IMMERSION_TOL * IMMERSION_TOL || det < IMMERSION_TOL * scale * scale
    };
    if degenerate {
        return Err(Error::ImmersionFailure { u0: u[0], u1: u[1] });
    }
    Ok(tangents)
}

/// First fundamental form G_ij at u in the chart basis.
pub fn first_fundamental_form(chart: &dyn Chart, u: [f64; 2]) -> Result<DMatrix<f64>> {
    let tangents = chart_tangents(chart, u)?;
    let c = chart.curvature();
    let k = tangents.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = c.form(tangents[i].as_slice(), tangents[j].as_slice());
        }
    }
    Ok(g)
}

/// Unit normal at chart(u) pointing into the bounded component.
///
/// The vector is orthogonal to the chart tangents and to the position
/// vector (so it is tangent to the model space), with the sign fixed so
/// that the geodesic toward the interior witness leaves on the normal's
/// side.
pub fn unit_inward_normal(chart: &dyn Chart, u: [f64; 2]) -> Result<TangentVector> {
    let p = chart.point(u);
    let c = chart.curvature();
    let tangents = chart_tangents(chart, u)?;

    // Orthonormalize the chart tangents.
    let mut frame: Vec<DVector<f64>> = Vec::with_capacity(tangents.len());
    for t in &tangents {
        let mut v = t.clone();
        for f in &frame {
            let coef = c.form(v.as_slice(), f.as_slice());
            v -= f * coef;
        }
        let n = c.norm(v.as_slice());
        if n < IMMERSION_TOL {
            return Err(Error::ImmersionFailure { u0: u[0], u1: u[1] });
        }
        frame.push(v / n);
    }

    // Complete the frame within the tangent space of the model space: the
    // residual of largest norm among the projected ambient basis vectors.
    let mut best: Option<DVector<f64>> = None;
    let mut best_norm = 0.0;
    for b in p.tangent_basis() {
        let mut v = b;
        for f in &frame {
            let coef = c.form(v.as_slice(), f.as_slice());
            v -= f * coef;
        }
        let n = c.norm(v.as_slice());
        if n > best_norm {
            best_norm = n;
            best = Some(v);
        }
    }
    let candidate = best.filter(|_| best_norm > IMMERSION_TOL).ok_or(
        Error::ImmersionFailure { u0: u[0], u1: u[1] },
    )?;
    let nu = TangentVector::new(p.clone(), candidate / best_norm)?;

    // Orient toward the interior witness: the geodesic p -> witness must
    // make an acute angle with the normal.
    let w = chart.interior_witness();
    let toward = log_map(&p, &w)?;
    let side = c.form(nu.vec().as_slice(), toward.vec().as_slice());
    if side >= 0.0 {
        Ok(nu)
    } else {
        Ok(nu.scaled(-1.0))
    }
}

/// Second fundamental form B_ij at u in the chart basis, with respect to
/// the inward normal.
///
/// B_ij is the ambient form of the second chart derivative against the
/// normal; the normal is orthogonal to the position vector, so the ambient
/// second derivative needs no curvature correction.
pub fn second_fundamental_form(chart: &dyn Chart, u: [f64; 2]) -> Result<DMatrix<f64>> {
    let nu = unit_inward_normal(chart, u)?;
    let c = chart.curvature();
    let k = chart.dim() - 1;
    let mut b = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            b[(i, j)] = c.form(chart.d2(u, i, j).as_slice(), nu.vec().as_slice());
        }
    }
    if k == 2 {
        let other = c.form(chart.d2(u, 1, 0).as_slice(), nu.vec().as_slice());
        let scale = 1.0 + b[(0, 1)].abs();
        if (b[(0, 1)] - other).abs() > 1e-8 * scale {
            return Err(Error::invalid(format!(
                "second fundamental form not symmetric: {} vs {}",
                b[(0, 1)],
                other
            )));
        }
        b[(1, 0)] = 0.5 * (b[(0, 1)] + other);
        b[(0, 1)] = b[(1, 0)];
    }
    Ok(b)
}

/// Normal curvature at u in the chart direction w: the Rayleigh quotient of
/// the second fundamental form against the first.
pub fn normal_curvature(chart: &dyn Chart, u: [f64; 2], w: &[f64]) -> Result<f64> {
    let k = chart.dim() - 1;
    if w.len() != k {
        return Err(Error::invalid(format!(
            "direction has {} components, chart has {} parameters",
            w.len(),
            k
        )));
    }
    let wnorm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if wnorm == 0.0 {
        return Err(Error::invalid("normal curvature of the zero direction"));
    }
    let b = second_fundamental_form(chart, u)?;
    let g = first_fundamental_form(chart, u)?;
    let quad = |m: &DMatrix<f64>| -> f64 {
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += w[i] * m[(i, j)] * w[j];
            }
        }
        s
    };
    Ok(quad(&b) / quad(&g))
}

/// Full curvature data at one parameter value.
pub fn curvature_sample(chart: &dyn Chart, u: [f64; 2]) -> Result<CurvatureSample> {
    let point = chart.point(u);
    let inward_normal = unit_inward_normal(chart, u)?;
    let b = second_fundamental_form(chart, u)?;
    let g = first_fundamental_form(chart, u)?;
    let shape_eigenvalues = if chart.dim() == 2 {
        vec![b[(0, 0)] / g[(0, 0)]]
    } else {
        let eig = generalized_eigen_2x2(
            &[[b[(0, 0)], b[(0, 1)]], [b[(1, 0)], b[(1, 1)]]],
            &[[g[(0, 0)], g[(0, 1)]], [g[(1, 0)], g[(1, 1)]]],
        );
        vec![eig[0], eig[1]]
    };
    let kappa_min = shape_eigenvalues[0];
    Ok(CurvatureSample {
        point,
        inward_normal,
        shape_eigenvalues,
        kappa_min,
    })
}

/// Certify that all normal curvatures over the body's grid are at least
/// lambda - tol. The verdict never errors; genuine evaluation failures
/// (immersion breakdown) do. Tie-breaking on the argmin: smallest grid
/// index wins.
pub fn certify_lambda_convex(body: &Body, lambda: f64, tol: f64) -> Result<Certification> {
    if body.grid().is_empty() {
        return Err(Error::invalid("certification needs a nonempty grid"));
    }
    let mut min_kappa = f64::INFINITY;
    let mut argmin_index = 0;
    for (k, &u) in body.grid().iter().enumerate() {
        let b = second_fundamental_form(body.chart(), u)?;
        let g = first_fundamental_form(body.chart(), u)?;
        let kappa = if body.dim() == 2 {
            b[(0, 0)] / g[(0, 0)]
        } else {
            generalized_eigen_2x2(
                &[[b[(0, 0)], b[(0, 1)]], [b[(1, 0)], b[(1, 1)]]],
                &[[g[(0, 0)], g[(0, 1)]], [g[(1, 0)], g[(1, 1)]]],
            )[0]
        };
        if kappa < min_kappa {
            min_kappa = kappa;
            argmin_index = k;
        }
    }
    let argmin = curvature_sample(body.chart(), body.grid()[argmin_index])?;
    Ok(Certification {
        lambda,
        tol,
        min_kappa,
        argmin_index,
        argmin,
        pass: min_kappa >= lambda - tol,
    })
}
