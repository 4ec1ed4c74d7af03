use std::f64::consts::PI;

use super::*;
use crate::geometry::{self, Bc, Domain, Point2, SpaceForm};

fn unit_square(bc: Bc) -> Domain {
    geometry::polygon(
        SpaceForm::Euclidean,
        &[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ],
        &[bc],
    )
    .unwrap()
}

fn unit_disc() -> Domain {
    geometry::disc(SpaceForm::Euclidean, Point2::new(0.0, 0.0), 1.0, Bc::Dirichlet).unwrap()
}

fn between_triangles() -> Domain {
    let tri = |s: f64| -> Vec<Point2> {
        let r = s / 3f64.sqrt();
        (0..3)
            .map(|k| Point2::from_polar(r, PI / 2.0 + 2.0 * PI * k as f64 / 3.0))
            .collect()
    };
    geometry::polygon_with_holes(
        SpaceForm::Euclidean,
        &tri(1.0),
        &[Bc::Dirichlet],
        &[(tri(0.5), vec![Bc::Dirichlet])],
    )
    .unwrap()
}

#[test]
fn square_coarse_mesh() {
    let m = triangulate(&unit_square(Bc::Dirichlet), 1.0).unwrap();
    m.validate().unwrap();
    assert!(m.triangle_count() >= 2);
    let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    for (x, y) in corners {
        assert!(m.vertices.iter().any(|p| p.x == x && p.y == y));
    }
    assert!((m.model_area() - 1.0).abs() < 1e-14);
    assert_eq!(m.euler_characteristic(), 1);
}

#[test]
fn quality_bounds_hold() {
    for h in [0.5, 0.2, 0.1] {
        let m = triangulate(&unit_square(Bc::Neumann), h).unwrap();
        assert!(m.max_edge_length() <= h);
        assert!(m.min_angle_deg() >= 20.0);
    }
}

#[test]
fn disc_vertices_snap_to_circle() {
    let m = triangulate(&unit_disc(), 0.5).unwrap();
    m.validate().unwrap();
    let flags = m.boundary_vertex_flags();
    for (p, on) in m.vertices.iter().zip(flags) {
        if on {
            assert!((p.x * p.x + p.y * p.y - 1.0).abs() < 1e-10);
        }
    }
    let r = refine(&m);
    for e in &r.boundary_edges {
        for v in e.vertices {
            let p = r.vertices[v];
            assert!((p.x * p.x + p.y * p.y - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn hole_gives_zero_euler_characteristic() {
    let m = triangulate(&between_triangles(), 0.1).unwrap();
    m.validate().unwrap();
    assert_eq!(m.euler_characteristic(), 0);
    let area = 3f64.sqrt() / 4.0 * (1.0 - 0.25);
    assert!((m.model_area() - area).abs() < 1e-13);
    assert!(m.triangles.iter().all(|t| {
        let c = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) * (1.0 / 3.0);
        between_triangles().contains(c)
    }));
}

#[test]
fn refinement_bookkeeping() {
    let m = triangulate(&between_triangles(), 0.15).unwrap();
    let r = refine(&m);
    r.validate().unwrap();
    assert_eq!(r.triangle_count(), 4 * m.triangle_count());
    assert_eq!(r.vertex_count(), m.vertex_count() + m.edge_count());
    assert_eq!(r.level, m.level + 1);
    assert_eq!(&r.vertices[..m.vertex_count()], &m.vertices[..]);
    assert_eq!(r.boundary_edges.len(), 2 * m.boundary_edges.len());
    assert_eq!(r.euler_characteristic(), m.euler_characteristic());
}

#[test]
fn refinement_is_deterministic() {
    let m = triangulate(&unit_disc(), 0.4).unwrap();
    assert_eq!(refine(&m), refine(&m.clone()));
}

#[test]
fn disc_area_error_decreases() {
    let mut m = triangulate(&unit_disc(), 0.5).unwrap();
    let mut prev = (PI - m.model_area()).abs();
    for _ in 0..4 {
        m = refine(&m);
        let err = (PI - m.model_area()).abs();
        assert!(err < prev / 2.0, "{err} vs {prev}");
        prev = err;
    }
}

#[test]
fn text_round_trip_is_exact() {
    let m = refine(&triangulate(&unit_disc(), 0.7).unwrap());
    let text = m.to_text();
    let back = Mesh::from_text(&text).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.to_text(), text);
}

#[test]
fn malformed_text_is_rejected() {
    let m = triangulate(&unit_square(Bc::Dirichlet), 1.0).unwrap();
    let text = m.to_text();
    assert!(Mesh::from_text(&text.replacen("weyl-mesh 1", "mesh", 1)).is_err());
    let truncated: String = text.lines().take(8).collect::<Vec<_>>().join("\n");
    assert!(Mesh::from_text(&truncated).is_err());
}

#[test]
fn validate_catches_flipped_triangle() {
    let mut m = triangulate(&unit_square(Bc::Dirichlet), 1.0).unwrap();
    m.triangles[0].swap(0, 1);
    assert!(m.validate().is_err());
}

#[test]
fn hyperbolic_mesh_stays_in_upper_half_plane() {
    let t = geometry::hyperbolic_triangle(
        geometry::HyperbolicTriangleSpec::Angles([PI / 4.0; 3]),
        &[Bc::Dirichlet],
    )
    .unwrap();
    let m = triangulate(&t.domain, default_target_h(&t.domain)).unwrap();
    m.validate().unwrap();
    assert!(m.vertices.iter().all(|p| p.y > 0.0));
}

#[test]
fn rejects_bad_target() {
    assert!(triangulate(&unit_disc(), 0.0).is_err());
    assert!(triangulate(&unit_disc(), f64::NAN).is_err());
}

#[test]
fn sharp_input_corner_is_meshed() {
    // Interior angle of about 18.2 degrees at the second vertex.
    let d = geometry::polygon(
        SpaceForm::Euclidean,
        &[
            Point2::new(0.0, 0.0),
            Point2::new(3f64.sqrt(), -0.5),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 1.0),
        ],
        &[Bc::Dirichlet],
    )
    .unwrap();
    let h = default_target_h(&d);
    let m = triangulate(&d, h).unwrap();
    m.validate().unwrap();
    assert!(m.max_edge_length() <= h);
    assert!(m.min_angle_deg() >= 9.0);
}

#[test]
fn thin_domain_default_size_leaves_free_nodes() {
    let d = between_triangles();
    let m = triangulate(&d, default_target_h(&d)).unwrap();
    let flags = m.boundary_vertex_flags();
    assert!(flags.iter().any(|on| !on));
}
