use std::f64::consts::PI;

use super::{orient2d, ArcKind, Bc, BoundaryArc, Point2};
use crate::{Error, Result};

/// Simply connected model of constant curvature, with unit length scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceForm {
    /// Flat plane, metric `|dz|^2`.
    Euclidean,
    /// Upper half-plane, metric `|dz|^2 / y^2`.
    Hyperbolic,
    /// Unit sphere seen through stereographic projection, metric
    /// `(4 / (x^2 + y^2 + 4))^2 |dz|^2`.
    Spherical,
}

impl SpaceForm {
    pub fn curvature(self) -> f64 {
        match self {
            SpaceForm::Euclidean => 0.0,
            SpaceForm::Hyperbolic => -1.0,
            SpaceForm::Spherical => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceForm::Euclidean => "euclidean",
            SpaceForm::Hyperbolic => "hyperbolic",
            SpaceForm::Spherical => "spherical",
        }
    }

    pub fn from_name(name: &str) -> Option<SpaceForm> {
        match name.to_ascii_lowercase().as_str() {
            "euclidean" | "flat" => Some(SpaceForm::Euclidean),
            "hyperbolic" => Some(SpaceForm::Hyperbolic),
            "spherical" => Some(SpaceForm::Spherical),
            _ => None,
        }
    }

    /// Conformal length factor `e^phi` with `ds = e^phi |dz|`.
    pub fn length_factor(self, p: Point2) -> f64 {
        match self {
            SpaceForm::Euclidean => 1.0,
            SpaceForm::Hyperbolic => 1.0 / p.y,
            SpaceForm::Spherical => 4.0 / (p.norm_sq() + 4.0),
        }
    }

    /// Area density `e^{2 phi}`; this is the mass-matrix weight.
    pub fn area_weight(self, p: Point2) -> f64 {
        let f = self.length_factor(p);
        f * f
    }

    /// Gradient of `phi = log(length_factor)`.
    pub fn log_factor_gradient(self, p: Point2) -> Point2 {
        match self {
            SpaceForm::Euclidean => Point2::default(),
            SpaceForm::Hyperbolic => Point2::new(0.0, -1.0 / p.y),
            SpaceForm::Spherical => p * (-2.0 / (p.norm_sq() + 4.0)),
        }
    }

    /// One-form whose boundary integral over a positively oriented loop is
    /// the enclosed intrinsic area.
    pub(crate) fn area_form(self, p: Point2, dp: Point2) -> f64 {
        match self {
            SpaceForm::Euclidean => 0.5 * p.cross(dp),
            SpaceForm::Hyperbolic => dp.x / p.y,
            SpaceForm::Spherical => 2.0 * p.cross(dp) / (p.norm_sq() + 4.0),
        }
    }

    pub(crate) fn admits(self, p: Point2) -> bool {
        match self {
            SpaceForm::Hyperbolic => p.y > 0.0 && p.y.is_finite() && p.x.is_finite(),
            _ => p.x.is_finite() && p.y.is_finite(),
        }
    }

    pub fn is_geodesic(self, arc: &ArcKind) -> bool {
        const EPS: f64 = 1e-10;
        match (self, *arc) {
            (SpaceForm::Euclidean, ArcKind::Segment { .. }) => true,
            (SpaceForm::Euclidean, ArcKind::Circle { .. }) => false,
            (SpaceForm::Hyperbolic, ArcKind::Segment { from, to }) => {
                (from.x - to.x).abs() <= EPS * (1.0 + from.x.abs())
            }
            (SpaceForm::Hyperbolic, ArcKind::Circle { center, .. }) => center.y.abs() <= EPS * (1.0 + center.x.abs()),
            (SpaceForm::Spherical, ArcKind::Segment { from, to }) => {
                from.cross(to).abs() <= EPS * (1.0 + from.norm() * to.norm())
            }
            (SpaceForm::Spherical, ArcKind::Circle { center, radius, .. }) => {
                (radius * radius - center.norm_sq() - 4.0).abs() <= EPS * (1.0 + radius * radius)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerType {
    SameBc,
    MixedBc,
}

/// A junction between consecutive arcs of one boundary loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    pub point: Point2,
    /// Interior angle seen from the domain, in `(0, 2 pi)`.
    pub angle: f64,
    pub kind: CornerType,
    pub loop_index: usize,
    /// Flat arc ids (see [`Domain::arcs`]) of the incoming and outgoing arcs.
    pub arc_in: usize,
    pub arc_out: usize,
}

/// A bounded region of a space form, bounded by closed loops of line and
/// circle arcs in model coordinates.
///
/// The outer loop runs counterclockwise and holes run clockwise, so the
/// domain always lies to the left of the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    space: SpaceForm,
    loops: Vec<Vec<BoundaryArc>>,
    corners: Vec<Corner>,
}

fn loop_signed_area(arcs: &[BoundaryArc]) -> f64 {
    arcs.iter()
        .map(|arc| match arc.kind {
            ArcKind::Segment { from, to } => 0.5 * from.cross(to),
            ArcKind::Circle {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let u0 = Point2::from_polar(1.0, start_angle);
                let u1 = Point2::from_polar(1.0, start_angle + sweep);
                0.5 * (radius * center.cross(u1 - u0) + radius * radius * sweep)
            }
        })
        .sum()
}

fn segments_touch(a0: Point2, a1: Point2, b0: Point2, b1: Point2, eps: f64) -> bool {
    let d1 = orient2d(b0, b1, a0);
    let d2 = orient2d(b0, b1, a1);
    let d3 = orient2d(a0, a1, b0);
    let d4 = orient2d(a0, a1, b1);
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)) {
        return true;
    }
    let on = |p: Point2, q0: Point2, q1: Point2, d: f64| {
        d.abs() <= eps
            && p.x >= q0.x.min(q1.x) - eps.sqrt()
            && p.x <= q0.x.max(q1.x) + eps.sqrt()
            && p.y >= q0.y.min(q1.y) - eps.sqrt()
            && p.y <= q0.y.max(q1.y) + eps.sqrt()
    };
    on(a0, b0, b1, d1) || on(a1, b0, b1, d2) || on(b0, a0, a1, d3) || on(b1, a0, a1, d4)
}

impl Domain {
    /// Validates the loops and derives the corner structure. Loops with the
    /// wrong orientation are reversed.
    pub fn new(space: SpaceForm, outer: Vec<BoundaryArc>, holes: Vec<Vec<BoundaryArc>>) -> Result<Domain> {
        let mut loops = Vec::with_capacity(1 + holes.len());
        loops.push(outer);
        loops.extend(holes);

        let scale = loops
            .iter()
            .flatten()
            .flat_map(|a| [a.kind.start(), a.kind.end()])
            .map(|p| p.norm())
            .fold(1.0_f64, f64::max);

        for (li, arcs) in loops.iter_mut().enumerate() {
            if arcs.is_empty() {
                return Err(Error::Construction(format!("boundary loop {li} has no arcs")));
            }
            for arc in arcs.iter_mut() {
                if let ArcKind::Circle { radius, .. } = arc.kind {
                    if !(radius > 0.0 && radius.is_finite()) {
                        return Err(Error::Construction(format!("circle arc with radius {radius}")));
                    }
                }
                let len = arc.kind.euclidean_length();
                if !(len > 1e-14 * scale && len.is_finite()) {
                    return Err(Error::Construction("degenerate boundary arc".into()));
                }
                for p in arc.kind.sample(arc.kind.natural_chords()) {
                    if !space.admits(p) {
                        return Err(Error::Construction(format!(
                            "arc point ({}, {}) lies outside the {} model",
                            p.x,
                            p.y,
                            space.name()
                        )));
                    }
                }
                arc.geodesic = space.is_geodesic(&arc.kind);
            }
            for i in 0..arcs.len() {
                let end = arcs[i].kind.end();
                let next = arcs[(i + 1) % arcs.len()].kind.start();
                if end.distance(next) > 1e-12 * scale {
                    return Err(Error::Construction(format!(
                        "loop {li} is not closed between arcs {i} and {}: gap {:e}",
                        (i + 1) % arcs.len(),
                        end.distance(next)
                    )));
                }
            }
            let signed = loop_signed_area(arcs);
            if signed == 0.0 {
                return Err(Error::Construction(format!("loop {li} encloses no area")));
            }
            let want_positive = li == 0;
            if (signed > 0.0) != want_positive {
                arcs.reverse();
                for arc in arcs.iter_mut() {
                    *arc = arc.reversed();
                }
            }
        }

        Self::check_simple(&loops, scale)?;

        let mut corners = Vec::new();
        let mut offset = 0;
        for (li, arcs) in loops.iter().enumerate() {
            let n = arcs.len();
            for i in 0..n {
                let prev = (i + n - 1) % n;
                let t_in = arcs[prev].kind.end_tangent();
                let t_out = arcs[i].kind.start_tangent();
                let turn = t_in.cross(t_out).atan2(t_in.dot(t_out));
                let angle = PI - turn;
                if !(angle > 1e-10 && angle < 2.0 * PI - 1e-10) {
                    return Err(Error::Construction(format!("cusp at loop {li}, arc {i}")));
                }
                let kind = if arcs[prev].bc == arcs[i].bc {
                    CornerType::SameBc
                } else {
                    CornerType::MixedBc
                };
                corners.push(Corner {
                    point: arcs[i].kind.start(),
                    angle,
                    kind,
                    loop_index: li,
                    arc_in: offset + prev,
                    arc_out: offset + i,
                });
            }
            offset += n;
        }

        // Holes must sit inside the outer loop.
        for (li, arcs) in loops.iter().enumerate().skip(1) {
            let p = arcs[0].kind.start();
            if winding_number(&loops[0], p) == 0 {
                return Err(Error::Construction(format!("hole {li} lies outside the outer loop")));
            }
        }

        Ok(Domain { space, loops, corners })
    }

    fn check_simple(loops: &[Vec<BoundaryArc>], scale: f64) -> Result<()> {
        // (loop, index within loop, a, b)
        let mut chords: Vec<(usize, usize, Point2, Point2)> = Vec::new();
        let mut lengths = Vec::new();
        for (li, arcs) in loops.iter().enumerate() {
            let mut k = 0;
            for arc in arcs {
                let pts = arc.kind.sample(arc.kind.natural_chords());
                for w in pts.windows(2) {
                    chords.push((li, k, w[0], w[1]));
                    k += 1;
                }
            }
            lengths.push(k);
        }
        let eps = 1e-12 * scale * scale;
        for i in 0..chords.len() {
            for j in (i + 1)..chords.len() {
                let (li, ki, a0, a1) = chords[i];
                let (lj, kj, b0, b1) = chords[j];
                if li == lj {
                    let n = lengths[li];
                    if (ki + 1) % n == kj || (kj + 1) % n == ki {
                        continue;
                    }
                }
                if segments_touch(a0, a1, b0, b1, eps) {
                    return Err(Error::Construction(format!(
                        "boundary self-intersects near ({:.6}, {:.6})",
                        a0.x, a0.y
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> SpaceForm {
        self.space
    }

    pub fn outer(&self) -> &[BoundaryArc] {
        &self.loops[0]
    }

    pub fn holes(&self) -> &[Vec<BoundaryArc>] {
        &self.loops[1..]
    }

    pub fn loops(&self) -> &[Vec<BoundaryArc>] {
        &self.loops
    }

    /// All arcs, outer loop first, indexed by their flat arc id.
    pub fn arcs(&self) -> impl Iterator<Item = &BoundaryArc> + '_ {
        self.loops.iter().flatten()
    }

    pub fn arc_count(&self) -> usize {
        self.loops.iter().map(Vec::len).sum()
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn euler_characteristic(&self) -> i64 {
        1 - self.holes().len() as i64
    }

    /// Largest distance between boundary sample points, in model coordinates.
    pub fn model_diameter(&self) -> f64 {
        let pts: Vec<Point2> = self
            .arcs()
            .flat_map(|a| a.kind.sample(a.kind.natural_chords()))
            .collect();
        let mut d: f64 = 0.0;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                d = d.max(p.distance(*q));
            }
        }
        d
    }

    /// Even-odd containment of a model point.
    pub fn contains(&self, p: Point2) -> bool {
        self.loops.iter().map(|l| winding_number(l, p)).sum::<i64>() != 0
    }

    /// Translates every arc by `offset` (Euclidean isometry for flat domains).
    pub fn translated(&self, offset: Point2) -> Result<Domain> {
        let shift = |arc: &BoundaryArc| {
            let kind = match arc.kind {
                ArcKind::Segment { from, to } => ArcKind::Segment {
                    from: from + offset,
                    to: to + offset,
                },
                ArcKind::Circle {
                    center,
                    radius,
                    start_angle,
                    sweep,
                } => ArcKind::Circle {
                    center: center + offset,
                    radius,
                    start_angle,
                    sweep,
                },
            };
            BoundaryArc::new(kind, arc.bc)
        };
        let outer = self.loops[0].iter().map(shift).collect();
        let holes = self.loops[1..].iter().map(|l| l.iter().map(shift).collect()).collect();
        Domain::new(self.space, outer, holes)
    }

    /// Same domain with each loop starting at a different arc.
    pub fn rotated_arc_order(&self, by: usize) -> Result<Domain> {
        let rot = |l: &Vec<BoundaryArc>| {
            let mut l = l.clone();
            let k = by % l.len();
            l.rotate_left(k);
            l
        };
        Domain::new(
            self.space,
            rot(&self.loops[0]),
            self.loops[1..].iter().map(rot).collect(),
        )
    }

    /// Boundary condition of each arc in flat-id order.
    pub fn bc_map(&self) -> Vec<Bc> {
        self.arcs().map(|a| a.bc).collect()
    }
}

/// Winding number of a closed arc loop around `p` (via a fine polyline).
fn winding_number(arcs: &[BoundaryArc], p: Point2) -> i64 {
    let mut angle = 0.0;
    for arc in arcs {
        let pts = arc.kind.sample(arc.kind.natural_chords() * 4);
        for w in pts.windows(2) {
            let a = w[0] - p;
            let b = w[1] - p;
            angle += a.cross(b).atan2(a.dot(b));
        }
    }
    (angle / (2.0 * PI)).round() as i64
}
