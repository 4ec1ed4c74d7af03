//! Constructors for the standard domain families.

use std::f64::consts::PI;

use super::{geometric_constants, ArcKind, Bc, BoundaryArc, Domain, GeometricConstants, Point2, SpaceForm};
use crate::{Error, Result};

fn expand_bcs(bcs: &[Bc], n: usize, what: &str) -> Result<Vec<Bc>> {
    match bcs.len() {
        1 => Ok(vec![bcs[0]; n]),
        k if k == n => Ok(bcs.to_vec()),
        k => Err(Error::Construction(format!(
            "{what}: {k} boundary conditions for {n} sides"
        ))),
    }
}

fn polygon_loop(vertices: &[Point2], bcs: &[Bc], what: &str) -> Result<Vec<BoundaryArc>> {
    if vertices.len() < 3 {
        return Err(Error::Construction(format!(
            "{what}: a polygon needs at least 3 vertices"
        )));
    }
    let bcs = expand_bcs(bcs, vertices.len(), what)?;
    Ok((0..vertices.len())
        .map(|i| {
            BoundaryArc::new(
                ArcKind::segment(vertices[i], vertices[(i + 1) % vertices.len()]),
                bcs[i],
            )
        })
        .collect())
}

/// Polygon with straight sides; side `i` joins vertex `i` to vertex `i + 1`.
/// `bcs` holds one entry per side, or a single entry for all sides.
pub fn polygon(space: SpaceForm, vertices: &[Point2], bcs: &[Bc]) -> Result<Domain> {
    Domain::new(space, polygon_loop(vertices, bcs, "outer loop")?, Vec::new())
}

pub fn polygon_with_holes(
    space: SpaceForm,
    outer: &[Point2],
    outer_bcs: &[Bc],
    holes: &[(Vec<Point2>, Vec<Bc>)],
) -> Result<Domain> {
    let outer = polygon_loop(outer, outer_bcs, "outer loop")?;
    let holes = holes
        .iter()
        .map(|(v, b)| polygon_loop(v, b, "hole"))
        .collect::<Result<Vec<_>>>()?;
    Domain::new(space, outer, holes)
}

/// Region bounded by a single model-coordinate circle.
pub fn disc(space: SpaceForm, center: Point2, radius: f64, bc: Bc) -> Result<Domain> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("disc radius {radius} must be positive")));
    }
    Domain::new(
        space,
        vec![BoundaryArc::new(ArcKind::full_circle(center, radius), bc)],
        Vec::new(),
    )
}

/// Regular Euclidean `sides`-gon centered at the origin with one vertex on the positive x-axis.
pub fn regular_polygon(sides: usize, circumradius: f64, bc: Bc) -> Result<Domain> {
    let vertices: Vec<Point2> = (0..sides)
        .map(|k| Point2::from_polar(circumradius, 2.0 * PI * k as f64 / sides as f64))
        .collect();
    polygon(SpaceForm::Euclidean, &vertices, &[bc])
}

/// Star polygon alternating between `outer_radius` tips and `inner_radius` notches.
pub fn regular_star(points: usize, outer_radius: f64, inner_radius: f64, bc: Bc) -> Result<Domain> {
    let vertices: Vec<Point2> = (0..2 * points)
        .map(|k| {
            let r = if k % 2 == 0 { outer_radius } else { inner_radius };
            Point2::from_polar(r, PI * k as f64 / points as f64)
        })
        .collect();
    polygon(SpaceForm::Euclidean, &vertices, &[bc])
}

/// Flat triangle on the base `(0,0)-(base,0)` with the given angles at the two base vertices.
pub fn triangle_from_angles(angle0: f64, angle1: f64, base: f64, bcs: &[Bc]) -> Result<Domain> {
    if !(angle0 > 0.0 && angle1 > 0.0 && angle0 + angle1 < PI) {
        return Err(Error::Construction(
            "triangle angles must be positive with sum below pi".into(),
        ));
    }
    // Law of sines for the side adjacent to the first base vertex.
    let side = base * angle1.sin() / (angle0 + angle1).sin();
    let apex = Point2::from_polar(side, angle0);
    polygon(
        SpaceForm::Euclidean,
        &[Point2::new(0.0, 0.0), Point2::new(base, 0.0), apex],
        bcs,
    )
}

fn circle_intersections(c1: Point2, r1: f64, c2: Point2, r2: f64) -> Vec<Point2> {
    let d = c1.distance(c2);
    if d == 0.0 || d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let dir = (c2 - c1) * (1.0 / d);
    let base = c1 + dir * a;
    vec![base + dir.perp() * h, base - dir.perp() * h]
}

/// Arc of a circle between two points that stays in the closed upper half-plane.
fn upper_arc(center: Point2, radius: f64, from: Point2, to: Point2) -> Result<ArcKind> {
    let tol = -1e-12 * (1.0 + center.norm() + radius);
    for ccw in [true, false] {
        let arc = ArcKind::circle_between(center, radius, from, to, ccw);
        if arc.sample(256).iter().all(|p| p.y >= tol) {
            return Ok(arc);
        }
    }
    Err(Error::Construction(
        "no circle arc joins the vertices inside the upper half-plane".into(),
    ))
}

fn vertex_angles(domain: &Domain, vertices: &[Point2; 3]) -> Result<[f64; 3]> {
    let mut out = [f64::NAN; 3];
    for (slot, v) in out.iter_mut().zip(vertices) {
        let scale = 1e-9 * (1.0 + v.norm());
        *slot = domain
            .corners()
            .iter()
            .find(|c| c.point.distance(*v) <= scale)
            .map(|c| c.angle)
            .ok_or_else(|| Error::Construction("triangle vertex is not a boundary corner".into()))?;
    }
    Ok(out)
}

fn check_close(what: &str, got: f64, want: f64, tol: f64) -> Result<()> {
    if (got - want).abs() > tol * (1.0 + want.abs()) {
        return Err(Error::Construction(format!(
            "{what}: computed {got} disagrees with closed form {want}"
        )));
    }
    Ok(())
}

/// Geodesic triangle of the upper half-plane with one side on the y-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HyperbolicTriangleSpec {
    /// Sides on the circles `y^2 + (x - a_j)^2 = r_j^2`; the third side lies on the y-axis.
    Circles { a1: f64, r1: f64, a2: f64, r2: f64 },
    /// Interior angles at the vertices `(0, y1)`, `(0, y2)` and `(x3, y3)`.
    Angles([f64; 3]),
}

/// A constructed triangle together with its classical invariants.
#[derive(Debug, Clone)]
pub struct Triangle {
    pub domain: Domain,
    pub constants: GeometricConstants,
    pub vertices: [Point2; 3],
    /// Interior angle at each vertex.
    pub angles: [f64; 3],
    /// Intrinsic length of the side opposite each vertex.
    pub side_lengths: [f64; 3],
}

fn opposite_lengths(domain: &Domain, vertices: &[Point2; 3]) -> Result<[f64; 3]> {
    let mut out = [f64::NAN; 3];
    for arc in domain.arcs() {
        let (a, b) = (arc.kind.start(), arc.kind.end());
        let len = super::intrinsic_length(domain.space(), &arc.kind)?;
        for (i, slot) in out.iter_mut().enumerate() {
            let v = vertices[i];
            let tol = 1e-9 * (1.0 + v.norm());
            if a.distance(v) > tol && b.distance(v) > tol {
                *slot = len;
            }
        }
    }
    Ok(out)
}

/// Builds a hyperbolic triangle and checks it against the angle-defect area
/// and the hyperbolic law of cosines.
pub fn hyperbolic_triangle(spec: HyperbolicTriangleSpec, bcs: &[Bc]) -> Result<Triangle> {
    let (a1, r1, a2, r2) = match spec {
        HyperbolicTriangleSpec::Circles { a1, r1, a2, r2 } => (a1, r1, a2, r2),
        HyperbolicTriangleSpec::Angles(alpha) => {
            let [al1, al2, al3] = alpha;
            if !(alpha.iter().all(|&a| a > 0.0) && al1 + al2 + al3 < PI) {
                return Err(Error::Construction(
                    "hyperbolic triangle angles must be positive with sum below pi".into(),
                ));
            }
            let y1 = 1.0;
            let cosh_l3 = (al1.cos() * al2.cos() + al3.cos()) / (al1.sin() * al2.sin());
            let y2 = y1 * cosh_l3.acosh().exp();
            let r1 = y1 / al1.sin();
            let r2 = y2 / al2.sin();
            (r1 * al1.cos(), r1, -r2 * al2.cos(), r2)
        }
    };
    if !(r1 > a1.abs() && r2 > a2.abs()) {
        return Err(Error::Construction(
            "each boundary circle must cross the positive y-axis".into(),
        ));
    }
    if a1 == a2 {
        return Err(Error::Construction("boundary circles are concentric".into()));
    }
    let y1 = (r1 * r1 - a1 * a1).sqrt();
    let y2 = (r2 * r2 - a2 * a2).sqrt();
    let x3 = (r2 * r2 - r1 * r1 - a2 * a2 + a1 * a1) / (2.0 * (a1 - a2));
    let y3_sq = r1 * r1 - (x3 - a1) * (x3 - a1);
    if !(y3_sq > 0.0) {
        return Err(Error::Construction(
            "boundary circles do not meet in the upper half-plane".into(),
        ));
    }
    let y3 = y3_sq.sqrt();
    let residual = ((x3 - a2) * (x3 - a2) + y3 * y3 - r2 * r2).abs();
    if residual > 1e-9 * (1.0 + r2 * r2) {
        return Err(Error::Construction(format!(
            "third vertex misses circle 2 by {residual:e}"
        )));
    }
    let p1 = Point2::new(0.0, y1);
    let p2 = Point2::new(0.0, y2);
    let p3 = Point2::new(x3, y3);
    let bcs = expand_bcs(bcs, 3, "hyperbolic triangle")?;
    let c1 = Point2::new(a1, 0.0);
    let c2 = Point2::new(a2, 0.0);
    let outer = vec![
        BoundaryArc::new(ArcKind::segment(p1, p2), bcs[0]),
        BoundaryArc::new(upper_arc(c2, r2, p2, p3)?, bcs[1]),
        BoundaryArc::new(upper_arc(c1, r1, p3, p1)?, bcs[2]),
    ];
    let domain = Domain::new(SpaceForm::Hyperbolic, outer, Vec::new())?;
    let constants = geometric_constants(&domain)?;
    let vertices = [p1, p2, p3];
    let angles = vertex_angles(&domain, &vertices)?;
    let side_lengths = opposite_lengths(&domain, &vertices)?;

    check_close("hyperbolic area", constants.area, PI - angles.iter().sum::<f64>(), 1e-9)?;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let cosh_l = (angles[j].cos() * angles[k].cos() + angles[i].cos()) / (angles[j].sin() * angles[k].sin());
        check_close("hyperbolic side length", side_lengths[i], cosh_l.acosh(), 1e-9)?;
    }
    Ok(Triangle {
        domain,
        constants,
        vertices,
        angles,
        side_lengths,
    })
}

/// Disc of hyperbolic radius `radius` centred at the model point `(0, e^R)`.
pub fn hyperbolic_disc(radius: f64, bc: Bc) -> Result<(Domain, GeometricConstants)> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("hyperbolic radius {radius} must be positive")));
    }
    let center = Point2::new(0.0, radius.exp() * radius.cosh());
    let model_radius = radius.exp() * radius.sinh();
    let domain = disc(SpaceForm::Hyperbolic, center, model_radius, bc)?;
    let constants = geometric_constants(&domain)?;
    check_close(
        "hyperbolic disc area",
        constants.area,
        4.0 * PI * (radius / 2.0).sinh().powi(2),
        1e-9,
    )?;
    check_close(
        "hyperbolic disc perimeter",
        constants.perimeter(),
        2.0 * PI * radius.sinh(),
        1e-9,
    )?;
    Ok((domain, constants))
}

/// Geodesic triangle on the unit sphere, in stereographic coordinates, with
/// one side on the u-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphericalTriangleSpec {
    /// Sides on the projected great circles
    /// `(u - t_j sin b_j)^2 + (v + t_j cos b_j)^2 = t_j^2 + 4`.
    Circles { t1: f64, beta1: f64, t2: f64, beta2: f64 },
    /// Interior angles; the first two vertices lie on the u-axis.
    Angles([f64; 3]),
}

type Vec3 = [f64; 3];

fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn lin3(a: f64, x: Vec3, b: f64, y: Vec3) -> Vec3 {
    [a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]]
}

fn normalize3(a: Vec3) -> Vec3 {
    let n = dot3(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Stereographic image of a unit vector measured from the sphere's centre
/// `(0, 0, 1)`, projecting from `(0, 0, 2)`.
fn project(s: Vec3) -> Result<Point2> {
    let denom = 1.0 - s[2];
    if denom < 1e-9 {
        return Err(Error::Construction(
            "spherical domain reaches the projection point".into(),
        ));
    }
    Ok(Point2::new(2.0 * s[0] / denom, 2.0 * s[1] / denom))
}

fn great_circle_arc(a: Vec3, b: Vec3) -> Result<ArcKind> {
    let mid = normalize3(lin3(1.0, a, 1.0, b));
    ArcKind::through_points(project(a)?, project(mid)?, project(b)?)
}

fn law_of_cosines_sphere(i: f64, j: f64, k: f64) -> f64 {
    (i.cos() + j.cos() * k.cos()) / (j.sin() * k.sin())
}

fn finish_spherical(outer: Vec<BoundaryArc>, vertices: [Point2; 3]) -> Result<Triangle> {
    let domain = Domain::new(SpaceForm::Spherical, outer, Vec::new())?;
    let constants = geometric_constants(&domain)?;
    let angles = vertex_angles(&domain, &vertices)?;
    let side_lengths = opposite_lengths(&domain, &vertices)?;
    check_close("spherical area", constants.area, angles.iter().sum::<f64>() - PI, 1e-9)?;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let c = law_of_cosines_sphere(angles[i], angles[j], angles[k]).clamp(-1.0, 1.0);
        check_close("spherical side length", side_lengths[i], c.acos(), 1e-9)?;
    }
    Ok(Triangle {
        domain,
        constants,
        vertices,
        angles,
        side_lengths,
    })
}

pub fn spherical_triangle(spec: SphericalTriangleSpec, bcs: &[Bc]) -> Result<Triangle> {
    let bcs = expand_bcs(bcs, 3, "spherical triangle")?;
    match spec {
        SphericalTriangleSpec::Angles(alpha) => {
            let [a1, a2, a3] = alpha;
            let valid = alpha.iter().all(|&a| a > 0.0 && a < PI)
                && a1 + a2 + a3 > PI
                && (0..3).all(|i| {
                    let c = law_of_cosines_sphere(alpha[i], alpha[(i + 1) % 3], alpha[(i + 2) % 3]);
                    c > -1.0 && c < 1.0
                });
            if !valid {
                return Err(Error::Construction("angles do not form a spherical triangle".into()));
            }
            let l3 = law_of_cosines_sphere(a3, a1, a2).acos();
            let l2 = law_of_cosines_sphere(a2, a3, a1).acos();
            let h = 0.5 * l3;
            let v1 = [-h.sin(), 0.0, -h.cos()];
            let v2 = [h.sin(), 0.0, -h.cos()];
            let t12 = normalize3(lin3(1.0, v2, -dot3(v1, v2), v1));
            let mut binormal = cross3(v1, t12);
            if binormal[1] < 0.0 {
                binormal = lin3(-1.0, binormal, 0.0, binormal);
            }
            let dir = lin3(a1.cos(), t12, a1.sin(), binormal);
            let v3 = lin3(l2.cos(), v1, l2.sin(), dir);
            let p = [project(v1)?, project(v2)?, project(v3)?];
            let outer = vec![
                BoundaryArc::new(ArcKind::segment(p[0], p[1]), bcs[0]),
                BoundaryArc::new(great_circle_arc(v2, v3)?, bcs[1]),
                BoundaryArc::new(great_circle_arc(v3, v1)?, bcs[2]),
            ];
            finish_spherical(outer, p)
        }
        SphericalTriangleSpec::Circles { t1, beta1, t2, beta2 } => {
            let center = |t: f64, b: f64| Point2::new(t * b.sin(), -t * b.cos());
            let axis_root = |t: f64, b: f64| t * b.sin() + (t * t * b.sin().powi(2) + 4.0).sqrt();
            let (c1, c2) = (center(t1, beta1), center(t2, beta2));
            let (r1, r2) = ((t1 * t1 + 4.0).sqrt(), (t2 * t2 + 4.0).sqrt());
            let (u1, u2) = (axis_root(t1, beta1), axis_root(t2, beta2));
            if !(u1 < u2) {
                return Err(Error::Construction(format!(
                    "u-axis vertices must satisfy u1 < u2 (got {u1}, {u2})"
                )));
            }
            let p1 = Point2::new(u1, 0.0);
            let p2 = Point2::new(u2, 0.0);
            let mut last_err = Error::Construction("projected circles do not meet above the u-axis".into());
            for p3 in circle_intersections(c1, r1, c2, r2).into_iter().filter(|p| p.y > 0.0) {
                let attempt = (|| {
                    let outer = vec![
                        BoundaryArc::new(ArcKind::segment(p1, p2), bcs[0]),
                        BoundaryArc::new(upper_arc(c2, r2, p2, p3)?, bcs[1]),
                        BoundaryArc::new(upper_arc(c1, r1, p3, p1)?, bcs[2]),
                    ];
                    finish_spherical(outer, [p1, p2, p3])
                })();
                match attempt {
                    Ok(t) => return Ok(t),
                    Err(e) => last_err = e,
                }
            }
            Err(last_err)
        }
    }
}

/// Disc of geodesic radius `radius` about the south pole.
pub fn spherical_disc(radius: f64, bc: Bc) -> Result<(Domain, GeometricConstants)> {
    if !(radius > 0.0 && radius < PI) {
        return Err(Error::Domain(format!("spherical radius {radius} must lie in (0, pi)")));
    }
    let domain = disc(SpaceForm::Spherical, Point2::default(), 2.0 * (radius / 2.0).tan(), bc)?;
    let constants = geometric_constants(&domain)?;
    check_close(
        "spherical disc area",
        constants.area,
        4.0 * PI * (radius / 2.0).sin().powi(2),
        1e-9,
    )?;
    check_close(
        "spherical disc perimeter",
        constants.perimeter(),
        2.0 * PI * radius.sin(),
        1e-9,
    )?;
    Ok((domain, constants))
}
