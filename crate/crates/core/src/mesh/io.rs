//! Plain-text mesh format.
//!
//! ```text
//! weyl-mesh 1
//! level <L>
//! arcs <n>
//! <id> segment <x0> <y0> <x1> <y1> <bc> <geodesic>
//! <id> circle <cx> <cy> <radius> <start_angle> <sweep> <bc> <geodesic>
//! vertices <n>
//! <id> <x> <y>
//! triangles <n>
//! <id> <v0> <v1> <v2>
//! boundary_edges <n>
//! <id> <from> <to> <arc> <bc>
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a written mesh
//! gives back identical bits. `bc` is `D` or `N`, `geodesic` is 0 or 1.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{BoundaryEdge, Mesh};
use crate::geometry::{ArcKind, Bc, BoundaryArc, Point2};
use crate::{Error, Result};

const MAGIC: &str = "weyl-mesh 1";

impl Mesh {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "level {}", self.level);
        let _ = writeln!(s, "arcs {}", self.arcs.len());
        for (i, arc) in self.arcs.iter().enumerate() {
            let g = u8::from(arc.geodesic);
            let bc = arc.bc.code();
            match arc.kind {
                ArcKind::Segment { from, to } => {
                    let _ = writeln!(
                        s,
                        "{i} segment {:?} {:?} {:?} {:?} {bc} {g}",
                        from.x, from.y, to.x, to.y
                    );
                }
                ArcKind::Circle {
                    center,
                    radius,
                    start_angle,
                    sweep,
                } => {
                    let _ = writeln!(
                        s,
                        "{i} circle {:?} {:?} {radius:?} {start_angle:?} {sweep:?} {bc} {g}",
                        center.x, center.y
                    );
                }
            }
        }
        let _ = writeln!(s, "vertices {}", self.vertices.len());
        for (i, p) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "{i} {:?} {:?}", p.x, p.y);
        }
        let _ = writeln!(s, "triangles {}", self.triangles.len());
        for (i, t) in self.triangles.iter().enumerate() {
            let _ = writeln!(s, "{i} {} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "boundary_edges {}", self.boundary_edges.len());
        for (i, e) in self.boundary_edges.iter().enumerate() {
            let _ = writeln!(s, "{i} {} {} {} {}", e.vertices[0], e.vertices[1], e.arc, e.bc.code());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Mesh> {
        let mut lines = Lines {
            inner: text.lines().enumerate(),
        };
        let (n, head) = lines.next_line()?;
        if head.trim() != MAGIC {
            return Err(Error::parse(n, format!("expected '{MAGIC}'")));
        }
        let level = lines.header("level")?;
        let arc_count = lines.header("arcs")?;
        let mut arcs = Vec::with_capacity(arc_count);
        for i in 0..arc_count {
            let (n, f) = lines.row(i)?;
            let kind = match f.first().copied() {
                Some("segment") if f.len() == 7 => ArcKind::Segment {
                    from: Point2::new(num(n, f[1])?, num(n, f[2])?),
                    to: Point2::new(num(n, f[3])?, num(n, f[4])?),
                },
                Some("circle") if f.len() == 8 => ArcKind::Circle {
                    center: Point2::new(num(n, f[1])?, num(n, f[2])?),
                    radius: num(n, f[3])?,
                    start_angle: num(n, f[4])?,
                    sweep: num(n, f[5])?,
                },
                _ => return Err(Error::parse(n, "malformed arc row")),
            };
            let bc = bc(n, f[f.len() - 2])?;
            let geodesic = match f[f.len() - 1] {
                "0" => false,
                "1" => true,
                _ => return Err(Error::parse(n, "geodesic flag must be 0 or 1")),
            };
            arcs.push(BoundaryArc { kind, bc, geodesic });
        }
        let vertex_count = lines.header("vertices")?;
        let mut vertices = Vec::with_capacity(vertex_count);
        for i in 0..vertex_count {
            let (n, f) = lines.row(i)?;
            if f.len() != 2 {
                return Err(Error::parse(n, "vertex rows have 3 columns"));
            }
            vertices.push(Point2::new(num(n, f[0])?, num(n, f[1])?));
        }
        let triangle_count = lines.header("triangles")?;
        let mut triangles = Vec::with_capacity(triangle_count);
        for i in 0..triangle_count {
            let (n, f) = lines.row(i)?;
            if f.len() != 3 {
                return Err(Error::parse(n, "triangle rows have 4 columns"));
            }
            triangles.push([num(n, f[0])?, num(n, f[1])?, num(n, f[2])?]);
        }
        let edge_count = lines.header("boundary_edges")?;
        let mut boundary_edges = Vec::with_capacity(edge_count);
        for i in 0..edge_count {
            let (n, f) = lines.row(i)?;
            if f.len() != 4 {
                return Err(Error::parse(n, "boundary edge rows have 5 columns"));
            }
            boundary_edges.push(BoundaryEdge {
                vertices: [num(n, f[0])?, num(n, f[1])?],
                arc: num(n, f[2])?,
                bc: bc(n, f[3])?,
            });
        }
        let mesh = Mesh {
            vertices,
            triangles,
            boundary_edges,
            arcs,
            level,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Mesh> {
        Mesh::from_text(&std::fs::read_to_string(path)?)
    }
}

struct Lines<'a, I: Iterator<Item = (usize, &'a str)>> {
    inner: I,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Lines<'a, I> {
    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        loop {
            match self.inner.next() {
                Some((_, l)) if l.trim().is_empty() => continue,
                Some((i, l)) => return Ok((i + 1, l)),
                None => return Err(Error::parse(0, "unexpected end of mesh file")),
            }
        }
    }

    fn header(&mut self, name: &str) -> Result<usize> {
        let (n, l) = self.next_line()?;
        let mut f = l.split_whitespace();
        if f.next() != Some(name) {
            return Err(Error::parse(n, format!("expected '{name} <count>'")));
        }
        let count = f.next().ok_or_else(|| Error::parse(n, "missing count"))?;
        num(n, count)
    }

    /// Splits a table row and checks its leading id.
    fn row(&mut self, expected: usize) -> Result<(usize, Vec<&'a str>)> {
        let (n, l) = self.next_line()?;
        let mut f: Vec<&str> = l.split_whitespace().collect();
        if f.is_empty() || num::<usize>(n, f[0])? != expected {
            return Err(Error::parse(n, format!("expected row {expected}")));
        }
        f.remove(0);
        Ok((n, f))
    }
}

fn num<T: FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::parse(line, format!("cannot parse '{s}'")))
}

fn bc(line: usize, s: &str) -> Result<Bc> {
    Bc::from_code(s).ok_or_else(|| Error::parse(line, format!("unknown boundary condition '{s}'")))
}
