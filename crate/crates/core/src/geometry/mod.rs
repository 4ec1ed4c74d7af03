//! Domains on the three constant-curvature space forms and their intrinsic
//! geometric constants.
//!
//! Hyperbolic domains live in the upper half-plane model and spherical
//! domains in stereographic coordinates; both models are conformal, so
//! corner angles are read off Euclidean tangent vectors.

mod arc;
mod constants;
mod domain;
mod point;
pub mod quadrature;
mod shapes;

pub use arc::{ArcKind, Bc, BoundaryArc};
pub use constants::{
    corner_constant_c1, corner_phi, curvature_integral, geometric_constants, intrinsic_length, GeometricConstants,
};
pub use domain::{Corner, CornerType, Domain, SpaceForm};
pub use point::{orient2d, Point2};
pub use shapes::{
    disc, hyperbolic_disc, hyperbolic_triangle, polygon, polygon_with_holes, regular_polygon, regular_star,
    spherical_disc, spherical_triangle, triangle_from_angles, HyperbolicTriangleSpec, SphericalTriangleSpec, Triangle,
};
