//! Python bindings: domain configs, meshing, the refinement pipeline, exact
//! spectra and the counting-function analysis.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use weyl_core::analysis::{self, AnalysisOptions, RefinedCountParams};
use weyl_core::config::{BuiltDomain, DomainConfig};
use weyl_core::exact::{oracle_spectrum, OracleCase};
use weyl_core::pipeline::{mesh_sequence, run_refinements, RunSettings};
use weyl_core::spectrum_file::SpectrumFile;

fn value_err(e: weyl_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: weyl_core::Error) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A domain built from a TOML config.
#[pyclass(frozen, module = "weyl")]
pub struct Domain {
    config: DomainConfig,
    built: BuiltDomain,
}

impl Domain {
    fn from_config(config: DomainConfig) -> PyResult<Domain> {
        let built = config.build().map_err(value_err)?;
        Ok(Domain { config, built })
    }

    fn params(&self) -> RefinedCountParams {
        RefinedCountParams::from_constants(&self.built.constants)
    }
}

#[pymethods]
impl Domain {
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Domain> {
        Domain::from_config(DomainConfig::from_toml_str(text).map_err(value_err)?)
    }

    #[staticmethod]
    fn from_path(path: PathBuf) -> PyResult<Domain> {
        Domain::from_config(DomainConfig::from_path(&path).map_err(value_err)?)
    }

    #[getter]
    fn name(&self) -> String {
        self.config.display_name()
    }

    #[getter]
    fn space(&self) -> &'static str {
        self.built.domain.space().name()
    }

    #[getter]
    fn oracle(&self) -> Option<&'static str> {
        self.config.oracle.map(|c| c.name())
    }

    /// Area, perimeters, Euler characteristic, constant term and the
    /// Gauss-Bonnet residual.
    fn constants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let k = &self.built.constants;
        let d = PyDict::new(py);
        d.set_item("area", k.area)?;
        d.set_item("perimeter_dirichlet", k.perimeter_dirichlet)?;
        d.set_item("perimeter_neumann", k.perimeter_neumann)?;
        d.set_item("euler_characteristic", k.euler_characteristic)?;
        d.set_item("gauss_curvature", k.gauss_curvature)?;
        d.set_item("c1", k.c1)?;
        d.set_item("c2", k.c2)?;
        d.set_item("c3", k.c3)?;
        d.set_item("c", k.c)?;
        d.set_item("gauss_bonnet_residual", k.gauss_bonnet_residual())?;
        Ok(d)
    }

    /// Vertices and triangles of the initial mesh after `refinements`
    /// uniform refinements.
    #[pyo3(signature = (refinements = 0, mesh_size = None))]
    fn mesh<'py>(&self, py: Python<'py>, refinements: usize, mesh_size: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let size = mesh_size.or(self.config.mesh_size);
        let meshes = py
            .detach(|| mesh_sequence(&self.built.domain, size, refinements))
            .map_err(runtime_err)?;
        let m = meshes.last().unwrap();
        let d = PyDict::new(py);
        d.set_item("vertices", m.vertices.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>())?;
        d.set_item("triangles", m.triangles.clone())?;
        d.set_item("level", m.level)?;
        Ok(d)
    }

    /// Solves every refinement level and extrapolates.
    #[pyo3(signature = (refinements = 5, num_eigs = 150, tol = 1e-9))]
    fn solve(&self, py: Python<'_>, refinements: usize, num_eigs: usize, tol: f64) -> PyResult<Spectrum> {
        let settings = RunSettings {
            refinements,
            num_eigs,
            tol,
            mesh_size: self.config.mesh_size,
        };
        let run = py
            .detach(|| run_refinements(&self.built.domain, settings))
            .map_err(runtime_err)?;
        let file = SpectrumFile::from_run(Some(self.config.display_name()), &run.levels, &run.extrapolated);
        Ok(Spectrum::from_file(&file))
    }

    /// Graph series of the counting-function remainder for a spectrum.
    #[pyo3(signature = (eigenvalues, samples = 4096, plain_spherical_mean = false))]
    fn analyze(&self, eigenvalues: Vec<f64>, samples: usize, plain_spherical_mean: bool) -> PyResult<Vec<Graph>> {
        let series = analysis::graph_series(
            &eigenvalues,
            &self.params(),
            self.built.domain.space(),
            AnalysisOptions {
                samples,
                spherical_plain_mean: plain_spherical_mean,
            },
        )
        .map_err(value_err)?;
        Ok(series
            .graphs
            .into_iter()
            .map(|g| Graph {
                number: g.number,
                title: g.title,
                x: g.x,
                y: g.y,
                sqrt_axis: g.sqrt_axis,
            })
            .collect())
    }

    /// Three-term refined count at `t`.
    fn refined_count(&self, t: f64) -> f64 {
        analysis::refined_count(&self.params(), t)
    }

    /// Time average of the remainder over `(0, t]`.
    fn average_error(&self, eigenvalues: Vec<f64>, t: f64) -> PyResult<f64> {
        analysis::average_error(&eigenvalues, &self.params(), t).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Domain({:?}, {})", self.config.display_name(), self.space())
    }
}

/// Extrapolated eigenvalues with the raw values of each level.
#[pyclass(frozen, get_all, module = "weyl")]
pub struct Spectrum {
    name: Option<String>,
    levels: Vec<usize>,
    level_values: Vec<Vec<Option<f64>>>,
    predicted: Vec<f64>,
    ratio: Vec<f64>,
    trusted: Vec<bool>,
}

impl Spectrum {
    fn from_file(f: &SpectrumFile) -> Spectrum {
        Spectrum {
            name: f.name.clone(),
            levels: f.levels.clone(),
            level_values: f.rows.iter().map(|r| r.level_values.clone()).collect(),
            predicted: f.predicted(),
            ratio: f.rows.iter().map(|r| r.ratio).collect(),
            trusted: f.rows.iter().map(|r| r.trusted).collect(),
        }
    }

    fn to_file(&self) -> SpectrumFile {
        SpectrumFile {
            name: self.name.clone(),
            levels: self.levels.clone(),
            rows: (0..self.predicted.len())
                .map(|i| weyl_core::spectrum_file::SpectrumRow {
                    level_values: self.level_values[i].clone(),
                    predicted: self.predicted[i],
                    ratio: self.ratio[i],
                    trusted: self.trusted[i],
                })
                .collect(),
        }
    }
}

#[pymethods]
impl Spectrum {
    /// Leading run of trusted eigenvalues.
    fn trusted_prefix(&self) -> Vec<f64> {
        self.to_file().trusted_prefix()
    }

    fn to_text(&self) -> String {
        self.to_file().to_text()
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Spectrum> {
        Ok(Spectrum::from_file(&SpectrumFile::from_text(text).map_err(value_err)?))
    }

    fn __len__(&self) -> usize {
        self.predicted.len()
    }
}

#[pyclass(frozen, get_all, module = "weyl")]
pub struct Graph {
    number: usize,
    title: String,
    x: Vec<f64>,
    y: Vec<f64>,
    sqrt_axis: bool,
}

/// Closed-form spectrum of one of the classical test domains.
#[pyfunction]
fn exact_spectrum(case: &str, count: usize) -> PyResult<Vec<f64>> {
    let case = OracleCase::from_name(case).map_err(value_err)?;
    Ok(oracle_spectrum(case, count).eigenvalues)
}

/// Three-level extrapolation; returns the prediction and convergence ratio.
#[pyfunction]
fn extrapolate(x4: f64, x5: f64, x6: f64) -> (f64, f64) {
    weyl_core::eigensolve::extrapolate(x4, x5, x6)
}

/// Number of eigenvalues at most `t`.
#[pyfunction]
fn counting_function(eigenvalues: Vec<f64>, t: f64) -> usize {
    analysis::counting_function(&eigenvalues, t)
}

/// Consecutive differences, their empirical CDF and a histogram.
#[pyfunction]
fn gap_stats<'py>(py: Python<'py>, eigenvalues: Vec<f64>, bin_width: f64) -> PyResult<Bound<'py, PyDict>> {
    let g = analysis::gap_stats(&eigenvalues, bin_width).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("differences", g.differences)?;
    d.set_item("cdf", g.cdf)?;
    d.set_item("bin_width", g.bin_width)?;
    d.set_item("histogram", g.histogram)?;
    Ok(d)
}

#[pymodule]
fn weyl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Domain>()?;
    m.add_class::<Spectrum>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(exact_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(extrapolate, m)?)?;
    m.add_function(wrap_pyfunction!(counting_function, m)?)?;
    m.add_function(wrap_pyfunction!(gap_stats, m)?)?;
    Ok(())
}
