//! Numerical comparison-geometry toolkit.
//!
//! The crate implements the three constant-curvature model spaces (sphere,
//! Euclidean space, hyperbolic space) together with the machinery needed to
//! verify rolling-ball statements for lambda-convex bodies:
//!
//! - [`model_space`]: points, tangent vectors, exp/log maps, distances,
//!   generalized trigonometric functions and triangle solvers.
//! - [`convex_body`]: immersed boundary charts, second fundamental forms and
//!   lambda-convexity certification, plus body generators.

pub mod convex_body;
pub mod error;
pub mod harness;
pub mod horoball;
pub mod model_space;
pub mod numerics;
pub mod radial_angle;
pub mod riemannian2d;
pub mod rolling;

pub use error::{Error, Result};
