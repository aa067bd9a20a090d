//! Parametric chart abstraction for boundary hypersurfaces.

use nalgebra::DVector;

use crate::model_space::{Curvature, ModelPoint};

/// Central finite-difference step used by the default derivative oracles.
pub const FD_STEP: f64 = 1e-4;

/// A parametric chart for a closed hypersurface in a model space.
///
/// The surface has m - 1 parameters (m = 2 or 3); parameters are passed as
/// a `[f64; 2]` with the second entry ignored for curves. Implementors
/// provide the point evaluation and may override the derivative oracles
/// with analytic formulas; the defaults are central finite differences of
/// step [`FD_STEP`] on the ambient coordinates.
pub trait Chart: Send + Sync {
    fn curvature(&self) -> Curvature;

    /// Manifold dimension m of the ambient model space (2 or 3). The chart
    /// parameter count is m - 1.
    fn dim(&self) -> usize;

    /// Evaluate the chart. Must return a point on the model space for every
    /// parameter value in the domain.
    fn point(&self, u: [f64; 2]) -> ModelPoint;

    /// Parameter domain, one (lo, hi) pair per parameter axis.
    fn domain(&self) -> [[f64; 2]; 2];

    /// Whether parameter axis `i` wraps around (hi identified with lo).
    fn periodic(&self, axis: usize) -> bool;

    /// A designated point in the bounded component enclosed by the surface,
    /// used to orient the inward normal.
    fn interior_witness(&self) -> ModelPoint;

    /// First parameter derivative of the ambient coordinates.
    fn d1(&self, u: [f64; 2], i: usize) -> DVector<f64> {
        let mut up = u;
        let mut um = u;
        up[i] += FD_STEP;
        um[i] -= FD_STEP;
        (self.point(up).coords() - self.point(um).coords()) / (2.0 * FD_STEP)
    }

    /// Second parameter derivative of the ambient coordinates.
    fn d2(&self, u: [f64; 2], i: usize, j: usize) -> DVector<f64> {
        let h = FD_STEP;
        if i == j {
            let mut up = u;
            let mut um = u;
            up[i] += h;
            um[i] -= h;
            let center = self.point(u).coords().clone();
            (self.point(up).coords() + self.point(um).coords() - center * 2.0) / (h * h)
        } else {
            let mut upp = u;
            let mut upm = u;
            let mut ump = u;
            let mut umm = u;
            upp[i] += h;
            upp[j] += h;
            upm[i] += h;
            upm[j] -= h;
            ump[i] -= h;
            ump[j] += h;
            umm[i] -= h;
            umm[j] -= h;
            (self.point(upp).coords() - self.point(upm).coords() - self.point(ump).coords()
                + self.point(umm).coords())
                / (4.0 * h * h)
        }
    }
}

/// Adapter that hides a chart's analytic derivatives, forcing the default
/// finite-difference oracles. Used to cross-check analytic formulas.
pub struct ForceFiniteDifferences<C: Chart>(pub C);

impl<C: Chart> Chart for ForceFiniteDifferences<C> {
    fn curvature(&self) -> Curvature {
        self.0.curvature()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn point(&self, u: [f64; 2]) -> ModelPoint {
        self.0.point(u)
    }
    fn domain(&self) -> [[f64; 2]; 2] {
        self.0.domain()
    }
    fn periodic(&self, axis: usize) -> bool {
        self.0.periodic(axis)
    }
    fn interior_witness(&self) -> ModelPoint {
        self.0.interior_witness()
    }
    // d1/d2 intentionally not forwarded.
}
