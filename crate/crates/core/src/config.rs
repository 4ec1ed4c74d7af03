//! TOML domain descriptions.
//!
//! ```toml
//! name = "right isosceles triangle"
//! space = "euclidean"
//! shape = "polygon"
//! vertices = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
//! bc = "D"
//! oracle = "right-isosceles"
//! ```
//!
//! Angles are radians when given as numbers; strings such as `"pi/4"`,
//! `"2pi/3"` or `"90deg"` are also accepted. See the README for the keys
//! each shape takes.

use std::f64::consts::PI;
use std::path::Path;

use toml::{Table, Value};

use crate::exact::OracleCase;
use crate::geometry::{
    self, geometric_constants, Bc, Domain, GeometricConstants, HyperbolicTriangleSpec, Point2, SpaceForm,
    SphericalTriangleSpec,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Polygon {
        vertices: Vec<Point2>,
    },
    PolygonWithHoles {
        vertices: Vec<Point2>,
        holes: Vec<(Vec<Point2>, Vec<Bc>)>,
    },
    Disc {
        center: Point2,
        radius: f64,
    },
    RegularPolygon {
        sides: usize,
        circumradius: f64,
    },
    RegularStar {
        points: usize,
        outer_radius: f64,
        inner_radius: f64,
    },
    Triangle {
        angles: [f64; 2],
        base: f64,
    },
    HyperbolicTriangle(HyperbolicTriangleSpec),
    HyperbolicDisc {
        radius: f64,
    },
    SphericalTriangle(SphericalTriangleSpec),
    SphericalDisc {
        radius: f64,
    },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Polygon { .. } => "polygon",
            Shape::PolygonWithHoles { .. } => "polygon_with_holes",
            Shape::Disc { .. } => "disc",
            Shape::RegularPolygon { .. } => "regular_polygon",
            Shape::RegularStar { .. } => "regular_star",
            Shape::Triangle { .. } => "triangle",
            Shape::HyperbolicTriangle(_) => "hyperbolic_triangle",
            Shape::HyperbolicDisc { .. } => "hyperbolic_disc",
            Shape::SphericalTriangle(_) => "spherical_triangle",
            Shape::SphericalDisc { .. } => "spherical_disc",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainConfig {
    pub name: Option<String>,
    pub space: SpaceForm,
    pub shape: Shape,
    /// One entry per outer boundary arc, or a single entry for all of them.
    pub bc: Vec<Bc>,
    pub oracle: Option<OracleCase>,
    /// Initial mesh size; defaults to a fifth of the model diameter.
    pub mesh_size: Option<f64>,
}

/// A constructed domain with its invariants.
#[derive(Debug, Clone)]
pub struct BuiltDomain {
    pub domain: Domain,
    pub constants: GeometricConstants,
}

const COMMON_KEYS: [&str; 6] = ["name", "space", "shape", "bc", "oracle", "mesh_size"];

fn shape_keys(shape: &str) -> Option<&'static [&'static str]> {
    Some(match shape {
        "polygon" => &["vertices"],
        "polygon_with_holes" => &["vertices", "holes"],
        "disc" => &["center", "radius"],
        "regular_polygon" => &["sides", "circumradius"],
        "regular_star" => &["points", "outer_radius", "inner_radius"],
        "triangle" => &["angles", "base"],
        "hyperbolic_triangle" | "spherical_triangle" => &["angles", "circles"],
        "hyperbolic_disc" | "spherical_disc" => &["radius"],
        _ => return None,
    })
}

const SHAPES: &str = "polygon, polygon_with_holes, disc, regular_polygon, regular_star, triangle, \
                      hyperbolic_triangle, hyperbolic_disc, spherical_triangle, spherical_disc";

fn get<'a>(t: &'a Table, key: &str) -> Result<&'a Value> {
    t.get(key).ok_or_else(|| Error::config(key, "missing"))
}

fn as_f64(v: &Value, key: &str) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::config(key, format!("expected a number, found {}", v.type_str()))),
    }
}

fn positive(t: &Table, key: &str) -> Result<f64> {
    let x = as_f64(get(t, key)?, key)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::config(key, format!("must be positive, got {x}")));
    }
    Ok(x)
}

fn count(t: &Table, key: &str, min: i64) -> Result<usize> {
    match get(t, key)? {
        Value::Integer(i) if *i >= min => Ok(*i as usize),
        Value::Integer(i) => Err(Error::config(key, format!("must be at least {min}, got {i}"))),
        v => Err(Error::config(
            key,
            format!("expected an integer, found {}", v.type_str()),
        )),
    }
}

/// `"pi/4"`, `"2pi/3"`, `"-pi"`, `"90deg"`, or a plain number.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(deg) = s.strip_suffix("deg") {
        return deg.parse::<f64>().ok().map(f64::to_radians);
    }
    if let Some(at) = s.find("pi") {
        let coef = match &s[..at] {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.strip_suffix('*').unwrap_or(c).parse::<f64>().ok()?,
        };
        let rest = &s[at + 2..];
        let denom = if rest.is_empty() {
            1.0
        } else {
            rest.strip_prefix('/')?.parse::<f64>().ok()?
        };
        return Some(coef * PI / denom);
    }
    s.parse().ok()
}

fn angle(v: &Value, key: &str) -> Result<f64> {
    match v {
        Value::String(s) => parse_angle(s).ok_or_else(|| Error::config(key, format!("cannot read angle `{s}`"))),
        _ => as_f64(v, key),
    }
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::config(key, format!("expected an array, found {}", v.type_str())))
}

fn angles<const N: usize>(t: &Table, key: &str) -> Result<[f64; N]> {
    let items = array(get(t, key)?, key)?;
    if items.len() != N {
        return Err(Error::config(
            key,
            format!("expected {N} angles, found {}", items.len()),
        ));
    }
    let mut out = [0.0; N];
    for (slot, v) in out.iter_mut().zip(items) {
        *slot = angle(v, key)?;
    }
    Ok(out)
}

fn point(v: &Value, key: &str) -> Result<Point2> {
    let xy = array(v, key)?;
    if xy.len() != 2 {
        return Err(Error::config(key, "a point is a pair [x, y]"));
    }
    Ok(Point2::new(as_f64(&xy[0], key)?, as_f64(&xy[1], key)?))
}

fn points(v: &Value, key: &str) -> Result<Vec<Point2>> {
    array(v, key)?.iter().map(|p| point(p, key)).collect()
}

fn bcs(v: &Value, key: &str) -> Result<Vec<Bc>> {
    let one = |s: &str| {
        Bc::from_code(s).ok_or_else(|| Error::config(key, format!("unknown condition `{s}`; use \"D\" or \"N\"")))
    };
    match v {
        Value::String(s) => Ok(vec![one(s)?]),
        Value::Array(items) => {
            if items.is_empty() {
                return Err(Error::config(key, "empty list"));
            }
            items
                .iter()
                .map(|i| {
                    i.as_str()
                        .ok_or_else(|| Error::config(key, "entries must be \"D\" or \"N\""))
                        .and_then(one)
                })
                .collect()
        }
        _ => Err(Error::config(key, "expected \"D\", \"N\" or a list of them")),
    }
}

fn sub_table(t: &Table, key: &str, fields: &[&str]) -> Result<Vec<f64>> {
    let sub = get(t, key)?
        .as_table()
        .ok_or_else(|| Error::config(key, "expected a table"))?;
    if let Some(extra) = sub.keys().find(|k| !fields.contains(&k.as_str())) {
        return Err(Error::config(format!("{key}.{extra}"), "unknown key"));
    }
    fields
        .iter()
        .map(|f| {
            let path = format!("{key}.{f}");
            angle(sub.get(*f).ok_or_else(|| Error::config(&path, "missing"))?, &path)
        })
        .collect()
}

fn one_of_angles_or_circles(t: &Table) -> Result<bool> {
    match (t.contains_key("angles"), t.contains_key("circles")) {
        (true, false) => Ok(true),
        (false, true) => Ok(false),
        (true, true) => Err(Error::config("circles", "give either `angles` or `circles`, not both")),
        (false, false) => Err(Error::config("angles", "missing (or give `circles`)")),
    }
}

impl DomainConfig {
    pub fn from_toml_str(text: &str) -> Result<DomainConfig> {
        let t: Table = text.parse().map_err(|e: toml::de::Error| {
            let key = e
                .span()
                .map(|s| format!("byte {}", s.start))
                .unwrap_or_else(|| "document".into());
            Error::config(key, e.message().to_string())
        })?;
        Self::from_table(&t)
    }

    pub fn from_path(path: &Path) -> Result<DomainConfig> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn from_table(t: &Table) -> Result<DomainConfig> {
        let shape_name = get(t, "shape")?
            .as_str()
            .ok_or_else(|| Error::config("shape", "expected a string"))?;
        let keys = shape_keys(shape_name)
            .ok_or_else(|| Error::config("shape", format!("unknown shape `{shape_name}`; valid shapes: {SHAPES}")))?;
        if let Some(extra) = t
            .keys()
            .find(|k| !COMMON_KEYS.contains(&k.as_str()) && !keys.contains(&k.as_str()))
        {
            return Err(Error::config(extra, format!("not a key of shape `{shape_name}`")));
        }

        let implied = match shape_name {
            "hyperbolic_triangle" | "hyperbolic_disc" => Some(SpaceForm::Hyperbolic),
            "spherical_triangle" | "spherical_disc" => Some(SpaceForm::Spherical),
            "regular_polygon" | "regular_star" | "triangle" => Some(SpaceForm::Euclidean),
            _ => None,
        };
        let space = match t.get("space") {
            Some(v) => {
                let s = v.as_str().ok_or_else(|| Error::config("space", "expected a string"))?;
                let space = SpaceForm::from_name(s).ok_or_else(|| {
                    Error::config(
                        "space",
                        format!("unknown space `{s}`; use euclidean, hyperbolic or spherical"),
                    )
                })?;
                if let Some(need) = implied.filter(|&need| need != space) {
                    return Err(Error::config(
                        "space",
                        format!("shape `{shape_name}` requires space `{}`", need.name()),
                    ));
                }
                space
            }
            None => implied.ok_or_else(|| Error::config("space", "missing"))?,
        };

        let shape = match shape_name {
            "polygon" => Shape::Polygon {
                vertices: points(get(t, "vertices")?, "vertices")?,
            },
            "polygon_with_holes" => {
                let vertices = points(get(t, "vertices")?, "vertices")?;
                let mut holes = Vec::new();
                for (i, h) in array(get(t, "holes")?, "holes")?.iter().enumerate() {
                    let key = format!("holes[{i}]");
                    let h = h.as_table().ok_or_else(|| Error::config(&key, "expected a table"))?;
                    if let Some(extra) = h.keys().find(|k| *k != "vertices" && *k != "bc") {
                        return Err(Error::config(format!("{key}.{extra}"), "unknown key"));
                    }
                    let vk = format!("{key}.vertices");
                    let bk = format!("{key}.bc");
                    let v = points(h.get("vertices").ok_or_else(|| Error::config(&vk, "missing"))?, &vk)?;
                    let b = bcs(h.get("bc").ok_or_else(|| Error::config(&bk, "missing"))?, &bk)?;
                    holes.push((v, b));
                }
                Shape::PolygonWithHoles { vertices, holes }
            }
            "disc" => Shape::Disc {
                center: match t.get("center") {
                    Some(v) => point(v, "center")?,
                    None => Point2::default(),
                },
                radius: positive(t, "radius")?,
            },
            "regular_polygon" => Shape::RegularPolygon {
                sides: count(t, "sides", 3)?,
                circumradius: positive(t, "circumradius")?,
            },
            "regular_star" => Shape::RegularStar {
                points: count(t, "points", 2)?,
                outer_radius: positive(t, "outer_radius")?,
                inner_radius: positive(t, "inner_radius")?,
            },
            "triangle" => Shape::Triangle {
                angles: angles::<2>(t, "angles")?,
                base: match t.get("base") {
                    Some(_) => positive(t, "base")?,
                    None => 1.0,
                },
            },
            "hyperbolic_triangle" => Shape::HyperbolicTriangle(if one_of_angles_or_circles(t)? {
                HyperbolicTriangleSpec::Angles(angles::<3>(t, "angles")?)
            } else {
                let c = sub_table(t, "circles", &["a1", "r1", "a2", "r2"])?;
                HyperbolicTriangleSpec::Circles {
                    a1: c[0],
                    r1: c[1],
                    a2: c[2],
                    r2: c[3],
                }
            }),
            "spherical_triangle" => Shape::SphericalTriangle(if one_of_angles_or_circles(t)? {
                SphericalTriangleSpec::Angles(angles::<3>(t, "angles")?)
            } else {
                let c = sub_table(t, "circles", &["t1", "beta1", "t2", "beta2"])?;
                SphericalTriangleSpec::Circles {
                    t1: c[0],
                    beta1: c[1],
                    t2: c[2],
                    beta2: c[3],
                }
            }),
            "hyperbolic_disc" => Shape::HyperbolicDisc {
                radius: positive(t, "radius")?,
            },
            "spherical_disc" => Shape::SphericalDisc {
                radius: match angle(get(t, "radius")?, "radius")? {
                    r if r > 0.0 && r.is_finite() => r,
                    r => return Err(Error::config("radius", format!("must be positive, got {r}"))),
                },
            },
            _ => unreachable!(),
        };

        let bc = bcs(get(t, "bc")?, "bc")?;
        let single_arc = matches!(
            shape,
            Shape::Disc { .. } | Shape::HyperbolicDisc { .. } | Shape::SphericalDisc { .. }
        );
        if single_arc && bc.len() != 1 {
            return Err(Error::config("bc", "a disc has a single boundary arc"));
        }
        let sides = match &shape {
            Shape::Polygon { vertices } | Shape::PolygonWithHoles { vertices, .. } => Some(vertices.len()),
            Shape::Triangle { .. } | Shape::HyperbolicTriangle(_) | Shape::SphericalTriangle(_) => Some(3),
            _ => None,
        };
        if let Some(n) = sides.filter(|&n| bc.len() != 1 && bc.len() != n) {
            return Err(Error::config("bc", format!("{} conditions for {n} sides", bc.len())));
        }
        let name = match t.get("name") {
            Some(v) => Some(
                v.as_str()
                    .ok_or_else(|| Error::config("name", "expected a string"))?
                    .to_string(),
            ),
            None => None,
        };
        let oracle = match t.get("oracle") {
            Some(v) => {
                let s = v.as_str().ok_or_else(|| Error::config("oracle", "expected a string"))?;
                Some(OracleCase::from_name(s).map_err(|e| Error::config("oracle", e.to_string()))?)
            }
            None => None,
        };
        let mesh_size = match t.get("mesh_size") {
            Some(_) => Some(positive(t, "mesh_size")?),
            None => None,
        };
        Ok(DomainConfig {
            name,
            space,
            shape,
            bc,
            oracle,
            mesh_size,
        })
    }

    pub fn display_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{} {}", self.space.name(), self.shape.name()))
    }

    pub fn build(&self) -> Result<BuiltDomain> {
        let bc0 = self.bc[0];
        let plain = |domain: Domain| -> Result<BuiltDomain> {
            let constants = geometric_constants(&domain)?;
            Ok(BuiltDomain { domain, constants })
        };
        match &self.shape {
            Shape::Polygon { vertices } => plain(geometry::polygon(self.space, vertices, &self.bc)?),
            Shape::PolygonWithHoles { vertices, holes } => {
                plain(geometry::polygon_with_holes(self.space, vertices, &self.bc, holes)?)
            }
            Shape::Disc { center, radius } => plain(geometry::disc(self.space, *center, *radius, bc0)?),
            Shape::RegularPolygon { sides, circumradius } => {
                self.uniform_bc()?;
                plain(geometry::regular_polygon(*sides, *circumradius, bc0)?)
            }
            Shape::RegularStar {
                points,
                outer_radius,
                inner_radius,
            } => {
                self.uniform_bc()?;
                plain(geometry::regular_star(*points, *outer_radius, *inner_radius, bc0)?)
            }
            Shape::Triangle { angles, base } => {
                plain(geometry::triangle_from_angles(angles[0], angles[1], *base, &self.bc)?)
            }
            Shape::HyperbolicTriangle(spec) => {
                let t = geometry::hyperbolic_triangle(*spec, &self.bc)?;
                Ok(BuiltDomain {
                    domain: t.domain,
                    constants: t.constants,
                })
            }
            Shape::SphericalTriangle(spec) => {
                let t = geometry::spherical_triangle(*spec, &self.bc)?;
                Ok(BuiltDomain {
                    domain: t.domain,
                    constants: t.constants,
                })
            }
            Shape::HyperbolicDisc { radius } => {
                let (domain, constants) = geometry::hyperbolic_disc(*radius, bc0)?;
                Ok(BuiltDomain { domain, constants })
            }
            Shape::SphericalDisc { radius } => {
                let (domain, constants) = geometry::spherical_disc(*radius, bc0)?;
                Ok(BuiltDomain { domain, constants })
            }
        }
    }

    fn uniform_bc(&self) -> Result<()> {
        if self.bc.iter().any(|&b| b != self.bc[0]) {
            return Err(Error::config(
                "bc",
                format!("shape `{}` takes a single condition", self.shape.name()),
            ));
        }
        Ok(())
    }
}
