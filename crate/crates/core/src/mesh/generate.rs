use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2 as SPoint, RefinementParameters, Triangulation};

use super::{BoundaryEdge, Mesh};
use crate::geometry::{ArcKind, Domain, Point2};
use crate::{Error, Result};

/// Quality targets for the initial triangulation.
#[derive(Debug, Clone, Copy)]
pub struct MeshOptions {
    pub target_h: f64,
    pub min_angle_deg: f64,
    /// Largest angle a single boundary chord may subtend on a circular arc.
    pub max_chord_sweep: f64,
}

impl MeshOptions {
    pub fn new(target_h: f64) -> Self {
        MeshOptions {
            target_h,
            min_angle_deg: 20.0,
            max_chord_sweep: PI / 12.0,
        }
    }
}

/// Default mesh size: a fifth of the model diameter, shrunk for thin
/// domains to twice the area over the perimeter.
pub fn default_target_h(domain: &Domain) -> f64 {
    let (mut area, mut perimeter) = (0.0, 0.0);
    for arc in domain.arcs() {
        let pts: Vec<Point2> = (0..=16).map(|i| arc.kind.point_at(i as f64 / 16.0)).collect();
        for w in pts.windows(2) {
            area += 0.5 * (w[0].x * w[1].y - w[1].x * w[0].y);
        }
        perimeter += arc.kind.euclidean_length();
    }
    (0.2 * domain.model_diameter()).min(2.0 * area / perimeter)
}

pub fn triangulate(domain: &Domain, target_h: f64) -> Result<Mesh> {
    triangulate_with(domain, MeshOptions::new(target_h))
}

struct Chord {
    a: Point2,
    b: Point2,
    arc: usize,
}

pub fn triangulate_with(domain: &Domain, opts: MeshOptions) -> Result<Mesh> {
    let h = opts.target_h;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument(format!("target_h must be positive, got {h}")));
    }
    let arcs: Vec<_> = domain.arcs().copied().collect();

    // Boundary polyline: one vertex list per loop, chords tagged by arc.
    let mut points: Vec<Point2> = Vec::new();
    let mut chords: Vec<Chord> = Vec::new();
    let mut constraints: Vec<(usize, usize)> = Vec::new();
    let mut arc_id = 0;
    let mut sharp: Vec<(Point2, f64)> = Vec::new();
    for lp in domain.loops() {
        let first = points.len();
        for arc in lp {
            let mut n = (arc.kind.euclidean_length() / (0.9 * h)).ceil() as usize;
            if let ArcKind::Circle { sweep, .. } = arc.kind {
                n = n.max((sweep.abs() / opts.max_chord_sweep).ceil() as usize);
            }
            let n = n.max(1);
            let start = points.len();
            for i in 0..n {
                points.push(arc.kind.point_at(i as f64 / n as f64));
            }
            for i in 0..n {
                let a = start + i;
                let b = if i + 1 < n { a + 1 } else { usize::MAX };
                constraints.push((a, b));
                chords.push(Chord {
                    a: points[a],
                    b: if i + 1 < n { points[a + 1] } else { arc.kind.end() },
                    arc: arc_id,
                });
            }
            arc_id += 1;
        }
        // Close the loop: the last chord of each arc ends at the next arc's start vertex.
        let len = points.len();
        for c in constraints.iter_mut().filter(|c| c.1 == usize::MAX) {
            c.1 = if c.0 + 1 < len { c.0 + 1 } else { first };
        }
        sharp.extend(sharp_corners(&points[first..], 2.0 * opts.min_angle_deg.to_radians()));
    }

    let diam = domain.model_diameter();
    let mut max_area = 0.35 * h * h;
    let mut best_angle = 0.0f64;
    for attempt in 0..12 {
        let angle_limit = if attempt < 6 { 28.0 } else { 25.0 };
        let mesh = build(&points, &constraints, &chords, &arcs, angle_limit, max_area, diam)?;
        let (worst, ok) = angle_quality(&mesh, &sharp, opts.min_angle_deg, h);
        best_angle = best_angle.max(worst);
        if mesh.max_edge_length() <= h && ok {
            mesh.validate()?;
            return Ok(mesh);
        }
        max_area *= 0.6;
    }
    Err(Error::MeshQuality {
        min_angle_deg: best_angle,
    })
}

/// Vertices of a closed polyline (domain on its left) whose interior angle
/// is below `limit`, with that angle.
fn sharp_corners(pts: &[Point2], limit: f64) -> Vec<(Point2, f64)> {
    let n = pts.len();
    (0..n)
        .filter_map(|i| {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            let (u, v) = (b - a, c - b);
            let interior = PI - (u.x * v.y - u.y * v.x).atan2(u.x * v.x + u.y * v.y);
            (interior < limit).then_some((b, interior))
        })
        .collect()
}

/// Smallest angle in degrees over triangles away from sharp corners, and
/// whether every triangle meets its bound. A triangle with a vertex within
/// `reach` of a sharp corner of angle α only needs min(target, α/2).
fn angle_quality(mesh: &Mesh, sharp: &[(Point2, f64)], target: f64, reach: f64) -> (f64, bool) {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for t in 0..mesh.triangle_count() {
        let pts = mesh.triangle_points(t);
        let angle = super::triangle_min_angle(pts).to_degrees();
        let corner = sharp
            .iter()
            .filter(|(c, _)| pts.iter().any(|p| p.distance(*c) < reach))
            .map(|&(_, a)| a)
            .fold(f64::INFINITY, f64::min);
        if corner.is_finite() {
            ok &= angle >= target.min(0.5 * corner.to_degrees());
        } else {
            worst = worst.min(angle);
            ok &= angle >= target;
        }
    }
    (worst, ok)
}

fn build(
    points: &[Point2],
    constraints: &[(usize, usize)],
    chords: &[Chord],
    arcs: &[crate::geometry::BoundaryArc],
    angle_limit: f64,
    max_area: f64,
    diam: f64,
) -> Result<Mesh> {
    let mut cdt: ConstrainedDelaunayTriangulation<SPoint<f64>> = ConstrainedDelaunayTriangulation::new();
    let mut handles = Vec::with_capacity(points.len());
    for p in points {
        let hnd = cdt
            .insert(SPoint::new(p.x, p.y))
            .map_err(|e| Error::Mesh(format!("cannot insert boundary vertex: {e:?}")))?;
        handles.push(hnd);
    }
    for &(a, b) in constraints {
        if cdt.add_constraint(handles[a], handles[b]) {
            continue;
        }
        if !cdt.can_add_constraint(handles[a], handles[b]) && !is_constraint(&cdt, handles[a], handles[b]) {
            return Err(Error::Mesh("boundary chords intersect".into()));
        }
    }
    let params = RefinementParameters::<f64>::new()
        .with_angle_limit(AngleLimit::from_deg(angle_limit))
        .with_max_allowed_area(max_area)
        .with_max_additional_vertices(2_000_000)
        .exclude_outer_faces(true);
    let result = cdt.refine(params);
    let excluded: HashSet<_> = result.excluded_faces.iter().copied().collect();

    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut boundary = Vec::new();
    let mut vid = |v: spade::handles::FixedVertexHandle, pos: SPoint<f64>, vertices: &mut Vec<Point2>| {
        *index.entry(v.index()).or_insert_with(|| {
            vertices.push(Point2::new(pos.x, pos.y));
            vertices.len() - 1
        })
    };
    let inside = |f: spade::handles::FaceHandle<spade::handles::PossiblyOuterTag, _, _, _, _>| {
        f.as_inner().map(|i| !excluded.contains(&i.fix())).unwrap_or(false)
    };
    for face in cdt.inner_faces() {
        if excluded.contains(&face.fix()) {
            continue;
        }
        let vs = face.vertices();
        let mut tri = [0usize; 3];
        for k in 0..3 {
            tri[k] = vid(vs[k].fix(), vs[k].position(), &mut vertices);
        }
        triangles.push(tri);
        for e in face.adjacent_edges() {
            if inside(e.rev().face()) {
                continue;
            }
            let [p, q] = e.vertices();
            let a = vid(p.fix(), p.position(), &mut vertices);
            let b = vid(q.fix(), q.position(), &mut vertices);
            boundary.push([a, b]);
        }
    }
    if triangles.is_empty() {
        return Err(Error::Mesh("triangulation has no interior faces".into()));
    }

    let tol = 1e-9 * (1.0 + diam);
    let mut boundary_edges = Vec::with_capacity(boundary.len());
    for [a, b] in boundary {
        let (pa, pb) = (vertices[a], vertices[b]);
        let chord = chords
            .iter()
            .find(|c| segment_distance(pa, c.a, c.b) <= tol && segment_distance(pb, c.a, c.b) <= tol)
            .ok_or_else(|| Error::Mesh("boundary edge does not lie on an input chord".into()))?;
        boundary_edges.push(BoundaryEdge {
            vertices: [a, b],
            arc: chord.arc,
            bc: arcs[chord.arc].bc,
        });
    }
    // Steiner points on circle chords move radially onto the circle.
    for e in &boundary_edges {
        if let ArcKind::Circle { .. } = arcs[e.arc].kind {
            for v in e.vertices {
                vertices[v] = arcs[e.arc].kind.project(vertices[v]);
            }
        }
    }
    let mesh = Mesh {
        vertices,
        triangles,
        boundary_edges,
        arcs: arcs.to_vec(),
        level: 0,
    };
    if (0..mesh.triangles.len()).any(|t| mesh.signed_area(t) <= 0.0) {
        return Err(Error::Mesh("snapping boundary vertices inverted a triangle".into()));
    }
    Ok(mesh)
}

fn is_constraint(
    cdt: &ConstrainedDelaunayTriangulation<SPoint<f64>>,
    a: spade::handles::FixedVertexHandle,
    b: spade::handles::FixedVertexHandle,
) -> bool {
    cdt.get_edge_from_neighbors(a, b)
        .map(|e| e.is_constraint_edge())
        .unwrap_or(false)
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let s = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
    p.distance(a + d * s)
}
