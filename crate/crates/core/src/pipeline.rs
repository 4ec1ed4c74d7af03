//! Mesh, assemble, solve and extrapolate over a refinement sequence.

use crate::eigensolve::{extrapolate_spectrum, solve_lowest, ExtrapolatedSpectrum, SpectrumSlice};
use crate::fem::{assemble, ConformalWeight};
use crate::geometry::Domain;
use crate::mesh::{default_target_h, refine, triangulate, Mesh};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    /// Number of uniform refinements after the initial mesh.
    pub refinements: usize,
    pub num_eigs: usize,
    pub tol: f64,
    /// Initial mesh size; `None` uses the default for the domain.
    pub mesh_size: Option<f64>,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            refinements: 5,
            num_eigs: 150,
            tol: 1e-9,
            mesh_size: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub vertices: usize,
    pub triangles: usize,
    pub unknowns: usize,
}

#[derive(Debug, Clone)]
pub struct RefinementRun {
    /// One slice per level; coarse levels may hold fewer than `num_eigs` values.
    pub levels: Vec<SpectrumSlice>,
    pub stats: Vec<LevelStats>,
    pub extrapolated: ExtrapolatedSpectrum,
}

fn at_level(level: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtLevel {
        level,
        source: Box::new(e),
    }
}

/// The mesh sequence: the initial triangulation followed by `refinements`
/// uniform refinements.
pub fn mesh_sequence(domain: &Domain, mesh_size: Option<f64>, refinements: usize) -> Result<Vec<Mesh>> {
    let h = mesh_size.unwrap_or_else(|| default_target_h(domain));
    let mut meshes = vec![triangulate(domain, h)?];
    for _ in 0..refinements {
        let next = refine(meshes.last().unwrap());
        meshes.push(next);
    }
    Ok(meshes)
}

pub fn run_refinements(domain: &Domain, settings: RunSettings) -> Result<RefinementRun> {
    run_refinements_with(domain, settings, |_| {})
}

/// Like [`run_refinements`], reporting each level as it is set up.
pub fn run_refinements_with(
    domain: &Domain,
    settings: RunSettings,
    mut progress: impl FnMut(&LevelStats),
) -> Result<RefinementRun> {
    if settings.refinements < 2 {
        return Err(Error::InvalidArgument("need ≥ 2 refinements for extrapolation".into()));
    }
    if settings.num_eigs == 0 {
        return Err(Error::InvalidArgument("need at least one eigenvalue".into()));
    }
    let weight = ConformalWeight::new(domain.space());
    let bc_map = domain.bc_map();
    let meshes = mesh_sequence(domain, settings.mesh_size, settings.refinements)?;
    let mut levels = Vec::with_capacity(meshes.len());
    let mut stats = Vec::with_capacity(meshes.len());
    let last = meshes.len() - 1;
    for (level, mesh) in meshes.iter().enumerate() {
        let problem = assemble(mesh, weight, &bc_map).map_err(at_level(level))?;
        let s = LevelStats {
            level,
            vertices: mesh.vertex_count(),
            triangles: mesh.triangle_count(),
            unknowns: problem.dimension(),
        };
        progress(&s);
        stats.push(s);
        let want = settings.num_eigs.min(problem.dimension());
        if level + 2 >= last && want < settings.num_eigs {
            return Err(at_level(level)(Error::InvalidArgument(format!(
                "only {} unknowns for {} eigenvalues; add refinements or shrink the mesh size",
                problem.dimension(),
                settings.num_eigs
            ))));
        }
        let slice = if want == 0 {
            SpectrumSlice {
                eigenvalues: Vec::new(),
                level,
                residual_norms: Vec::new(),
            }
        } else {
            let mut s = solve_lowest(&problem, want, settings.tol).map_err(at_level(level))?;
            s.level = level;
            s
        };
        levels.push(slice);
    }
    let extrapolated = extrapolate_spectrum(&levels)?;
    Ok(RefinementRun {
        levels,
        stats,
        extrapolated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{polygon, Bc, Point2, SpaceForm};
    use std::f64::consts::PI;

    fn square() -> Domain {
        let v = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        polygon(SpaceForm::Euclidean, &v, &[Bc::Dirichlet]).unwrap()
    }

    #[test]
    fn square_run_extrapolates() {
        let settings = RunSettings {
            refinements: 3,
            num_eigs: 4,
            ..RunSettings::default()
        };
        let mut seen = Vec::new();
        let run = run_refinements_with(&square(), settings, |s| seen.push(s.level)).unwrap();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        assert_eq!(run.levels.len(), 4);
        assert!(run.stats.windows(2).all(|w| w[1].triangles == 4 * w[0].triangles));
        let want = [2.0, 5.0, 5.0, 8.0].map(|q| q * PI * PI);
        for (p, w) in run.extrapolated.predicted.iter().zip(want) {
            assert!((p - w).abs() < 0.02 * w, "{p} vs {w}");
        }
        for (p, w) in run.levels[3].eigenvalues.iter().zip(want) {
            assert!(*p > w);
        }
    }

    #[test]
    fn too_few_refinements() {
        let settings = RunSettings {
            refinements: 1,
            ..RunSettings::default()
        };
        let e = run_refinements(&square(), settings).unwrap_err();
        assert!(e.to_string().contains("need ≥ 2 refinements for extrapolation"));
    }

    #[test]
    fn too_many_eigenvalues_names_the_level() {
        let settings = RunSettings {
            refinements: 2,
            num_eigs: 5000,
            ..RunSettings::default()
        };
        match run_refinements(&square(), settings) {
            Err(Error::AtLevel { level, .. }) => assert_eq!(level, 0),
            other => panic!("{other:?}"),
        }
    }
}
