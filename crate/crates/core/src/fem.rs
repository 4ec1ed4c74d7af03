//! P1 finite elements for the weighted pencil −Δu = λ w u in model
//! coordinates.

use crate::geometry::{Bc, Point2, SpaceForm};
use crate::mesh::Mesh;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Conformal mass weight of a space form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConformalWeight {
    pub space: SpaceForm,
}

impl ConformalWeight {
    pub fn new(space: SpaceForm) -> Self {
        ConformalWeight { space }
    }

    pub fn eval(&self, p: Point2) -> f64 {
        self.space.area_weight(p)
    }
}

/// Discrete pencil (K, M) on the free nodes.
#[derive(Debug, Clone)]
pub struct EigenProblem {
    pub k: CsrMatrix,
    pub m: CsrMatrix,
    /// Matrix index of each mesh vertex, `None` for eliminated nodes.
    pub free_node_map: Vec<Option<usize>>,
    /// Mesh vertex of each matrix index.
    pub free_nodes: Vec<usize>,
    pub num_constrained: usize,
    /// Refinement level of the source mesh.
    pub level: usize,
}

impl EigenProblem {
    pub fn dimension(&self) -> usize {
        self.free_nodes.len()
    }

    /// Scatters a free-node vector back onto all mesh vertices (zero on
    /// eliminated nodes).
    pub fn expand(&self, v: &[f64]) -> Vec<f64> {
        self.free_node_map
            .iter()
            .map(|i| i.map(|i| v[i]).unwrap_or(0.0))
            .collect()
    }
}

pub fn constrained_dimension(problem: &EigenProblem) -> usize {
    problem.dimension()
}

/// Marks the vertices eliminated by Dirichlet conditions: every vertex on a
/// boundary edge whose arc is Dirichlet, including mixed corners.
pub fn dirichlet_nodes(mesh: &Mesh, bc_map: &[Bc]) -> Result<Vec<bool>> {
    if bc_map.len() != mesh.arcs.len() {
        return Err(Error::Assembly(format!(
            "bc map has {} entries for {} arcs",
            bc_map.len(),
            mesh.arcs.len()
        )));
    }
    let mut fixed = vec![false; mesh.vertices.len()];
    for e in &mesh.boundary_edges {
        if bc_map[e.arc] == Bc::Dirichlet {
            fixed[e.vertices[0]] = true;
            fixed[e.vertices[1]] = true;
        }
    }
    Ok(fixed)
}

/// Element stiffness and mass matrices (upper triangles mirrored).
fn element_matrices(p: [Point2; 3], weight: &ConformalWeight) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let e = [p[2] - p[1], p[0] - p[2], p[1] - p[0]];
    let area = 0.5 * e[2].cross(-e[1]);
    // w at the midpoint of the edge opposite vertex i
    let w = [
        weight.eval(p[1].midpoint(p[2])),
        weight.eval(p[2].midpoint(p[0])),
        weight.eval(p[0].midpoint(p[1])),
    ];
    let c = area / 12.0;
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            k[i][j] = e[i].dot(e[j]) / (4.0 * area);
            m[i][j] = if i == j {
                c * (w[(i + 1) % 3] + w[(i + 2) % 3])
            } else {
                c * w[3 - i - j]
            };
            k[j][i] = k[i][j];
            m[j][i] = m[i][j];
        }
    }
    (k, m)
}

/// Assembles stiffness and weighted mass matrices and eliminates Dirichlet
/// nodes.
pub fn assemble(mesh: &Mesh, weight: ConformalWeight, bc_map: &[Bc]) -> Result<EigenProblem> {
    if weight.space == SpaceForm::Hyperbolic {
        if let Some(v) = mesh.vertices.iter().position(|p| p.y <= 0.0) {
            return Err(Error::Assembly(format!(
                "hyperbolic mesh vertex {v} has y = {} <= 0",
                mesh.vertices[v].y
            )));
        }
    }
    let fixed = dirichlet_nodes(mesh, bc_map)?;
    let mut free_node_map = vec![None; mesh.vertices.len()];
    let mut free_nodes = Vec::new();
    for (v, &f) in fixed.iter().enumerate() {
        if !f {
            free_node_map[v] = Some(free_nodes.len());
            free_nodes.push(v);
        }
    }
    let n = free_nodes.len();
    if n == 0 {
        return Err(Error::Assembly(
            "no free nodes remain after Dirichlet elimination".into(),
        ));
    }

    let mut kt = Vec::with_capacity(mesh.triangles.len() * 9);
    let mut mt = Vec::with_capacity(mesh.triangles.len() * 9);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let (ke, me) = element_matrices(mesh.triangle_points(t), &weight);
        for i in 0..3 {
            let Some(gi) = free_node_map[tri[i]] else { continue };
            for j in 0..3 {
                let Some(gj) = free_node_map[tri[j]] else { continue };
                kt.push((gi, gj, ke[i][j]));
                mt.push((gi, gj, me[i][j]));
            }
        }
    }
    Ok(EigenProblem {
        k: CsrMatrix::from_triplets(n, n, kt),
        m: CsrMatrix::from_triplets(n, n, mt),
        free_node_map,
        free_nodes,
        num_constrained: mesh.vertices.len() - n,
        level: mesh.level,
    })
}

/// Midpoint-rule value of ∫ w over the mesh.
pub fn weighted_area(mesh: &Mesh, weight: ConformalWeight) -> f64 {
    (0..mesh.triangles.len())
        .map(|t| {
            let [a, b, c] = mesh.triangle_points(t);
            let s = weight.eval(a.midpoint(b)) + weight.eval(b.midpoint(c)) + weight.eval(c.midpoint(a));
            mesh.signed_area(t) * s / 3.0
        })
        .sum()
}
