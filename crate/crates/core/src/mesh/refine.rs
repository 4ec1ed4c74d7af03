use std::collections::HashMap;

use super::{edge_key, BoundaryEdge, Mesh};
use crate::geometry::ArcKind;

/// Red refinement: every triangle splits into four through its edge
/// midpoints. New vertices are numbered after the old ones in the order
/// their parent edges first appear in the triangle list.
pub fn refine(mesh: &Mesh) -> Mesh {
    let mut vertices = mesh.vertices.clone();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::with_capacity(mesh.triangles.len() * 2);
    for t in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = edge_key(t[k], t[(k + 1) % 3]);
            midpoint.entry((a, b)).or_insert_with(|| {
                vertices.push(vertices[a].midpoint(vertices[b]));
                vertices.len() - 1
            });
        }
    }

    let mut boundary_edges = Vec::with_capacity(mesh.boundary_edges.len() * 2);
    for e in &mesh.boundary_edges {
        let [a, b] = e.vertices;
        let m = midpoint[&edge_key(a, b)];
        if let ArcKind::Circle { .. } = mesh.arcs[e.arc].kind {
            vertices[m] = mesh.arcs[e.arc].kind.project(vertices[m]);
        }
        boundary_edges.push(BoundaryEdge { vertices: [a, m], ..*e });
        boundary_edges.push(BoundaryEdge { vertices: [m, b], ..*e });
    }

    let mut triangles = Vec::with_capacity(mesh.triangles.len() * 4);
    for &[a, b, c] in &mesh.triangles {
        let ab = midpoint[&edge_key(a, b)];
        let bc = midpoint[&edge_key(b, c)];
        let ca = midpoint[&edge_key(c, a)];
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }

    Mesh {
        vertices,
        triangles,
        boundary_edges,
        arcs: mesh.arcs.clone(),
        level: mesh.level + 1,
    }
}
