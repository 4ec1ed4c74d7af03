use std::f64::consts::PI;

use super::{quadrature, ArcKind, Bc, CornerType, Domain, SpaceForm};
use crate::{Error, Result};

/// Corner contribution `(1/24)(pi/theta - theta/pi)` to the constant term.
pub fn corner_phi(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Domain(format!("corner angle {theta} must be positive")));
    }
    Ok((PI / theta - theta / PI) / 24.0)
}

/// Sum of corner contributions. A corner whose two sides carry different
/// boundary conditions contributes `phi(2 theta) - phi(theta)`.
pub fn corner_constant_c1(corners: &[(f64, CornerType)]) -> Result<f64> {
    corners.iter().try_fold(0.0, |acc, &(theta, kind)| {
        let term = match kind {
            CornerType::SameBc => corner_phi(theta)?,
            CornerType::MixedBc => corner_phi(2.0 * theta)? - corner_phi(theta)?,
        };
        Ok(acc + term)
    })
}

/// Intrinsic geometric data of a domain and the derived constant term
/// `C = C1 + C2 + C3` of the refined counting function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricConstants {
    pub area: f64,
    pub perimeter_dirichlet: f64,
    pub perimeter_neumann: f64,
    pub euler_characteristic: i64,
    /// Integral of the geodesic curvature of the boundary, seen from the domain.
    pub boundary_curvature_integral: f64,
    /// Sum of `pi - theta_j` over all corners.
    pub corner_turning: f64,
    pub gauss_curvature: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c: f64,
}

impl GeometricConstants {
    pub fn perimeter(&self) -> f64 {
        self.perimeter_dirichlet + self.perimeter_neumann
    }

    /// `A K2 + int K1 + sum(pi - theta) - 2 pi chi`; zero up to rounding.
    pub fn gauss_bonnet_residual(&self) -> f64 {
        self.area * self.gauss_curvature + self.boundary_curvature_integral + self.corner_turning
            - 2.0 * PI * self.euler_characteristic as f64
    }

    pub fn gauss_bonnet_relative_error(&self) -> f64 {
        self.gauss_bonnet_residual().abs() / (1.0 + (2.0 * PI * self.euler_characteristic as f64).abs())
    }
}

const ABS_TOL: f64 = 1e-15;
const REL_TOL: f64 = 1e-14;

fn arc_integral<F: Fn(f64) -> f64>(f: F, what: &'static str) -> Result<f64> {
    // Four fixed panels keep long arcs well resolved before adaptation.
    let mut total = 0.0;
    for k in 0..4 {
        let a = k as f64 / 4.0;
        total += quadrature::integrate(&f, a, a + 0.25, ABS_TOL, REL_TOL, what)?;
    }
    Ok(total)
}

/// Intrinsic length of an arc.
pub fn intrinsic_length(space: SpaceForm, arc: &ArcKind) -> Result<f64> {
    if space == SpaceForm::Euclidean {
        return Ok(arc.euclidean_length());
    }
    arc_integral(
        |s| space.length_factor(arc.point_at(s)) * arc.derivative_at(s).norm(),
        "arc length",
    )
}

/// Integral of the geodesic curvature (toward the left of travel) along an arc.
pub fn curvature_integral(space: SpaceForm, arc: &ArcKind) -> Result<f64> {
    let kappa = arc.left_curvature();
    if space == SpaceForm::Euclidean {
        return Ok(kappa * arc.euclidean_length());
    }
    // k_g ds = (kappa - grad(phi) . n_left) |dz| for the metric e^{2 phi} |dz|^2.
    arc_integral(
        |s| {
            let d = arc.derivative_at(s);
            let speed = d.norm();
            let n_left = d.perp() * (1.0 / speed);
            (kappa - space.log_factor_gradient(arc.point_at(s)).dot(n_left)) * speed
        },
        "boundary curvature",
    )
}

fn area_contribution(space: SpaceForm, arc: &ArcKind) -> Result<f64> {
    if space == SpaceForm::Euclidean {
        if let ArcKind::Segment { from, to } = *arc {
            return Ok(0.5 * from.cross(to));
        }
    }
    arc_integral(|s| space.area_form(arc.point_at(s), arc.derivative_at(s)), "area")
}

/// Area, perimeters, curvature integrals and the constant `C` of a domain.
pub fn geometric_constants(domain: &Domain) -> Result<GeometricConstants> {
    let space = domain.space();
    let mut area = 0.0;
    let mut p_d = 0.0;
    let mut p_n = 0.0;
    let mut k1 = 0.0;
    for arc in domain.arcs() {
        area += area_contribution(space, &arc.kind)?;
        let len = intrinsic_length(space, &arc.kind)?;
        match arc.bc {
            Bc::Dirichlet => p_d += len,
            Bc::Neumann => p_n += len,
        }
        if !arc.is_geodesic() {
            k1 += curvature_integral(space, &arc.kind)?;
        }
    }
    if !(area > 0.0) {
        return Err(Error::Construction(format!("domain area {area} is not positive")));
    }
    let corners: Vec<(f64, CornerType)> = domain.corners().iter().map(|c| (c.angle, c.kind)).collect();
    let corner_turning = corners.iter().map(|(t, _)| PI - t).sum();
    let c1 = corner_constant_c1(&corners)?;
    let c2 = k1 / (12.0 * PI);
    let gauss_curvature = space.curvature();
    let c3 = area * gauss_curvature / (12.0 * PI);
    Ok(GeometricConstants {
        area,
        perimeter_dirichlet: p_d,
        perimeter_neumann: p_n,
        euler_characteristic: domain.euler_characteristic(),
        boundary_curvature_integral: k1,
        corner_turning,
        gauss_curvature,
        c1,
        c2,
        c3,
        c: c1 + c2 + c3,
    })
}
