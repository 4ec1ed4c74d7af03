use std::f64::consts::{PI, TAU};

use super::Point2;
use crate::{Error, Result};

/// Boundary condition carried by one boundary arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl Bc {
    pub fn code(self) -> &'static str {
        match self {
            Bc::Dirichlet => "D",
            Bc::Neumann => "N",
        }
    }

    pub fn from_code(code: &str) -> Option<Bc> {
        match code {
            "D" | "d" => Some(Bc::Dirichlet),
            "N" | "n" => Some(Bc::Neumann),
            _ => None,
        }
    }
}

/// Shape of a boundary arc in model coordinates, parametrized by `s` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcKind {
    Segment {
        from: Point2,
        to: Point2,
    },
    /// Circle arc starting at polar angle `start_angle` about `center`;
    /// `sweep > 0` runs counterclockwise.
    Circle {
        center: Point2,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl ArcKind {
    pub fn segment(from: Point2, to: Point2) -> ArcKind {
        ArcKind::Segment { from, to }
    }

    /// Arc of the circle `(center, radius)` from `from` to `to`, turning
    /// counterclockwise when `ccw`.
    pub fn circle_between(center: Point2, radius: f64, from: Point2, to: Point2, ccw: bool) -> ArcKind {
        let start_angle = (from.y - center.y).atan2(from.x - center.x);
        let end_angle = (to.y - center.y).atan2(to.x - center.x);
        let mut sweep = (end_angle - start_angle).rem_euclid(TAU);
        if !ccw {
            sweep -= TAU;
        }
        if sweep == 0.0 || sweep.abs() == TAU {
            sweep = if ccw { TAU } else { -TAU };
        }
        ArcKind::Circle {
            center,
            radius,
            start_angle,
            sweep,
        }
    }

    pub fn full_circle(center: Point2, radius: f64) -> ArcKind {
        ArcKind::Circle {
            center,
            radius,
            start_angle: 0.0,
            sweep: TAU,
        }
    }

    /// The arc through three points; a segment when they are (nearly) collinear.
    pub fn through_points(from: Point2, via: Point2, to: Point2) -> Result<ArcKind> {
        let scale = from.distance(to).max(from.distance(via)).max(via.distance(to));
        if scale == 0.0 {
            return Err(Error::Construction("degenerate arc through coincident points".into()));
        }
        let d = 2.0 * super::orient2d(from, via, to);
        if d.abs() <= 1e-13 * scale * scale {
            return Ok(ArcKind::segment(from, to));
        }
        let b = via - from;
        let c = to - from;
        let ux = (c.y * b.norm_sq() - b.y * c.norm_sq()) / d;
        let uy = (b.x * c.norm_sq() - c.x * b.norm_sq()) / d;
        let center = from + Point2::new(ux, uy);
        let radius = (from - center).norm();
        Ok(ArcKind::circle_between(center, radius, from, to, d > 0.0))
    }

    pub fn point_at(&self, s: f64) -> Point2 {
        match *self {
            ArcKind::Segment { from, to } => from + (to - from) * s,
            ArcKind::Circle {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Point2::from_polar(radius, start_angle + s * sweep),
        }
    }

    /// Derivative of `point_at` with respect to the parameter.
    pub fn derivative_at(&self, s: f64) -> Point2 {
        match *self {
            ArcKind::Segment { from, to } => to - from,
            ArcKind::Circle {
                radius,
                start_angle,
                sweep,
                ..
            } => Point2::from_polar(radius * sweep, start_angle + s * sweep).perp(),
        }
    }

    pub fn start(&self) -> Point2 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point2 {
        match *self {
            ArcKind::Segment { to, .. } => to,
            _ => self.point_at(1.0),
        }
    }

    pub fn start_tangent(&self) -> Point2 {
        let d = self.derivative_at(0.0);
        d * (1.0 / d.norm())
    }

    pub fn end_tangent(&self) -> Point2 {
        let d = self.derivative_at(1.0);
        d * (1.0 / d.norm())
    }

    pub fn euclidean_length(&self) -> f64 {
        match *self {
            ArcKind::Segment { from, to } => from.distance(to),
            ArcKind::Circle { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Euclidean curvature measured toward the left of the direction of travel.
    pub fn left_curvature(&self) -> f64 {
        match *self {
            ArcKind::Segment { .. } => 0.0,
            ArcKind::Circle { radius, sweep, .. } => sweep.signum() / radius,
        }
    }

    pub fn reversed(&self) -> ArcKind {
        match *self {
            ArcKind::Segment { from, to } => ArcKind::Segment { from: to, to: from },
            ArcKind::Circle {
                center,
                radius,
                start_angle,
                sweep,
            } => ArcKind::Circle {
                center,
                radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Nearest point on the arc's supporting line or circle.
    pub fn project(&self, p: Point2) -> Point2 {
        match *self {
            ArcKind::Segment { from, to } => {
                let d = to - from;
                let s = (p - from).dot(d) / d.norm_sq();
                from + d * s
            }
            ArcKind::Circle { center, radius, .. } => {
                let r = p - center;
                center + r * (radius / r.norm())
            }
        }
    }

    /// Distance from `p` to the supporting line or circle.
    pub fn support_distance(&self, p: Point2) -> f64 {
        p.distance(self.project(p))
    }

    /// Polyline through the arc with `n` chords (endpoints included).
    pub fn sample(&self, n: usize) -> Vec<Point2> {
        let n = n.max(1);
        let mut pts: Vec<Point2> = (0..n).map(|i| self.point_at(i as f64 / n as f64)).collect();
        pts.push(self.end());
        pts
    }

    /// Chord count used when sampling for geometric tests.
    pub(crate) fn natural_chords(&self) -> usize {
        match *self {
            ArcKind::Segment { .. } => 1,
            ArcKind::Circle { sweep, .. } => ((sweep.abs() / (PI / 48.0)).ceil() as usize).max(4),
        }
    }
}

/// One smooth piece of a domain boundary together with its boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryArc {
    pub kind: ArcKind,
    pub bc: Bc,
    pub(crate) geodesic: bool,
}

impl BoundaryArc {
    pub fn new(kind: ArcKind, bc: Bc) -> Self {
        BoundaryArc {
            kind,
            bc,
            geodesic: false,
        }
    }

    /// Whether the arc is a geodesic of the domain's space form (set when the
    /// arc becomes part of a [`super::Domain`]).
    pub fn is_geodesic(&self) -> bool {
        self.geodesic
    }

    pub fn reversed(&self) -> Self {
        BoundaryArc {
            kind: self.kind.reversed(),
            ..*self
        }
    }
}
