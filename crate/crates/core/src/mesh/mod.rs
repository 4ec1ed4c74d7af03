//! Conforming triangulations in model coordinates and their uniform
//! refinement.

mod generate;
mod io;
mod refine;

use std::collections::HashMap;

use crate::geometry::{orient2d, ArcKind, Bc, BoundaryArc, Point2};
use crate::{Error, Result};

pub use generate::{default_target_h, triangulate, triangulate_with, MeshOptions};
pub use refine::refine;

/// A boundary edge, oriented with the domain on its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub arc: usize,
    pub bc: Bc,
}

/// Triangle mesh with counterclockwise triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point2>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Boundary arcs indexed by flat arc id.
    pub arcs: Vec<BoundaryArc>,
    pub level: usize,
}

/// Tolerance for "vertex lies on its arc".
pub const ON_ARC_TOL: f64 = 1e-10;

impl Mesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Unique undirected edges in first-appearance order.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for t in &self.triangles {
            for k in 0..3 {
                let e = edge_key(t[k], t[(k + 1) % 3]);
                if seen.insert(e, out.len()).is_none() {
                    out.push([e.0, e.1]);
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    pub fn triangle_points(&self, t: usize) -> [Point2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Twice the signed area would be `orient2d`; this is the area itself.
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * orient2d(a, b, c)
    }

    /// Sum of triangle areas in model coordinates.
    pub fn model_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    pub fn min_angle_deg(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| triangle_min_angle(self.triangle_points(t)))
            .fold(f64::INFINITY, f64::min)
            .to_degrees()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&[a, b]| self.vertices[a].distance(self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Marks vertices that lie on some boundary edge.
    pub fn boundary_vertex_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in &self.boundary_edges {
            flags[e.vertices[0]] = true;
            flags[e.vertices[1]] = true;
        }
        flags
    }

    /// Marks vertices touching at least one boundary edge with the given bc.
    pub fn vertices_with_bc(&self, bc: Bc) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in self.boundary_edges.iter().filter(|e| e.bc == bc) {
            flags[e.vertices[0]] = true;
            flags[e.vertices[1]] = true;
        }
        flags
    }

    /// Checks orientation, edge-manifoldness, boundary closure and that
    /// boundary vertices sit on their arcs.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        for (i, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::Mesh(format!("triangle {i} references a missing vertex")));
            }
            if self.signed_area(i) <= 0.0 {
                return Err(Error::Mesh(format!("triangle {i} is not counterclockwise")));
            }
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *directed.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        let mut open = HashMap::new();
        for (&(a, b), &count) in &directed {
            if count > 1 {
                return Err(Error::Mesh(format!("edge ({a}, {b}) is used twice in one direction")));
            }
            if !directed.contains_key(&(b, a)) {
                open.insert((a, b), ());
            }
        }
        if open.len() != self.boundary_edges.len() {
            return Err(Error::Mesh(format!(
                "{} open edges but {} boundary edges",
                open.len(),
                self.boundary_edges.len()
            )));
        }
        let mut out_degree = vec![0usize; n];
        let mut in_degree = vec![0usize; n];
        for e in &self.boundary_edges {
            let [a, b] = e.vertices;
            if open.remove(&(a, b)).is_none() {
                return Err(Error::Mesh(format!(
                    "boundary edge ({a}, {b}) is not an open mesh edge"
                )));
            }
            let arc = self
                .arcs
                .get(e.arc)
                .ok_or_else(|| Error::Mesh(format!("boundary edge ({a}, {b}) references arc {}", e.arc)))?;
            if arc.bc != e.bc {
                return Err(Error::Mesh(format!(
                    "boundary edge ({a}, {b}) disagrees with its arc's bc"
                )));
            }
            let scale = 1.0 + arc_scale(&arc.kind);
            for v in [a, b] {
                let d = arc.kind.support_distance(self.vertices[v]);
                if d > ON_ARC_TOL * scale {
                    return Err(Error::Mesh(format!("vertex {v} is {d:e} off arc {}", e.arc)));
                }
            }
            out_degree[a] += 1;
            in_degree[b] += 1;
        }
        if (0..n).any(|v| out_degree[v] != in_degree[v] || out_degree[v] > 1) {
            return Err(Error::Mesh("boundary edges do not form closed simple loops".into()));
        }
        Ok(())
    }
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn arc_scale(kind: &ArcKind) -> f64 {
    match *kind {
        ArcKind::Segment { from, to } => from.norm().max(to.norm()),
        ArcKind::Circle { center, radius, .. } => center.norm() + radius,
    }
}

pub(crate) fn triangle_min_angle([a, b, c]: [Point2; 3]) -> f64 {
    let angle = |p: Point2, q: Point2, r: Point2| {
        let u = q - p;
        let v = r - p;
        u.cross(v).abs().atan2(u.dot(v))
    };
    angle(a, b, c).min(angle(b, c, a)).min(angle(c, a, b))
}

#[cfg(test)]
mod tests;
