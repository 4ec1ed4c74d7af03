//! Counting function, refined Weyl prediction, averaged error and the
//! derived graph series.

mod gaps;

use std::f64::consts::PI;

pub use gaps::{gap_stats, GapStats};

use crate::geometry::{GeometricConstants, SpaceForm};
use crate::{Error, Result};

/// Coefficients of Ñ(t) = leading·t + half_order·√t + constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedCountParams {
    pub leading: f64,
    pub half_order: f64,
    pub constant: f64,
}

impl RefinedCountParams {
    pub fn new(leading: f64, half_order: f64, constant: f64) -> Self {
        RefinedCountParams {
            leading,
            half_order,
            constant,
        }
    }

    pub fn from_constants(g: &GeometricConstants) -> Self {
        RefinedCountParams {
            leading: g.area / (4.0 * PI),
            half_order: (g.perimeter_neumann - g.perimeter_dirichlet) / (4.0 * PI),
            constant: g.c,
        }
    }

    /// ∫₀ᵗ Ñ(s) ds.
    pub fn integral(&self, t: f64) -> f64 {
        self.leading * t * t / 2.0 + self.half_order * (2.0 / 3.0) * t * t.sqrt() + self.constant * t
    }
}

/// N(t) = #{λ_j ≤ t} for an ascending spectrum.
pub fn counting_function(spectrum: &[f64], t: f64) -> usize {
    spectrum.partition_point(|&l| l <= t)
}

pub fn refined_count(params: &RefinedCountParams, t: f64) -> f64 {
    params.leading * t + params.half_order * t.max(0.0).sqrt() + params.constant
}

/// A(t) = (1/t) ∫₀ᵗ (N − Ñ), in closed form.
pub fn average_error(spectrum: &[f64], params: &RefinedCountParams, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("average error needs t > 0, got {t}")));
    }
    Ok(SpectrumIndex::new(spectrum).average_error(params, t))
}

/// Ascending spectrum with prefix sums for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct SpectrumIndex {
    values: Vec<f64>,
    prefix: Vec<f64>,
}

impl SpectrumIndex {
    pub fn new(spectrum: &[f64]) -> Self {
        let mut prefix = Vec::with_capacity(spectrum.len() + 1);
        prefix.push(0.0);
        let mut s = 0.0;
        for &l in spectrum {
            s += l;
            prefix.push(s);
        }
        SpectrumIndex {
            values: spectrum.to_vec(),
            prefix,
        }
    }

    pub fn count(&self, t: f64) -> usize {
        counting_function(&self.values, t)
    }

    /// D(t) = N(t) − Ñ(t).
    pub fn error(&self, params: &RefinedCountParams, t: f64) -> f64 {
        self.count(t) as f64 - refined_count(params, t)
    }

    /// ∫₀ᵗ N(s) ds = Σ_{λ ≤ t} (t − λ).
    pub fn count_integral(&self, t: f64) -> f64 {
        let n = self.count(t);
        n as f64 * t - self.prefix[n]
    }

    pub fn average_error(&self, params: &RefinedCountParams, t: f64) -> f64 {
        (self.count_integral(t) - params.integral(t)) / t
    }
}

/// One plotted curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    /// Display position, starting at 1.
    pub number: usize,
    pub title: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Whether the horizontal axis is √t rather than t.
    pub sqrt_axis: bool,
}

impl Graph {
    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.x.last()?, *self.y.last()?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSeries {
    pub graphs: Vec<Graph>,
    pub t_max: f64,
    /// Start of the running mean, on the √t axis.
    pub a: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub samples: usize,
    /// For spherical domains, average A(s²) instead of s^{1/2}A(s²) in the
    /// running mean.
    pub spherical_plain_mean: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            samples: 4096,
            spherical_plain_mean: false,
        }
    }
}

fn uniform(end: f64, samples: usize) -> Vec<f64> {
    (1..=samples).map(|i| end * i as f64 / samples as f64).collect()
}

/// Graph set for one spectrum: six graphs for flat and hyperbolic domains,
/// five for spherical ones.
pub fn graph_series(
    spectrum: &[f64],
    params: &RefinedCountParams,
    space: SpaceForm,
    opts: AnalysisOptions,
) -> Result<AnalysisSeries> {
    if spectrum.is_empty() {
        return Err(Error::InvalidArgument("graph series needs a nonempty spectrum".into()));
    }
    if opts.samples < 64 {
        return Err(Error::InvalidArgument(format!(
            "need at least 64 samples, got {}",
            opts.samples
        )));
    }
    if spectrum.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("spectrum must be ascending".into()));
    }
    let idx = SpectrumIndex::new(spectrum);
    let t_max = *spectrum.last().unwrap();
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument("largest eigenvalue must be positive".into()));
    }
    let root = t_max.sqrt();
    let a = root / 4.0;

    let mut t_grid = uniform(t_max, opts.samples);
    for &l in spectrum {
        if l > 0.0 {
            t_grid.push(l);
            let before = l.next_down();
            if before > 0.0 {
                t_grid.push(before);
            }
        }
    }
    t_grid.sort_by(f64::total_cmp);
    t_grid.dedup();
    let tau_grid = uniform(root, opts.samples);

    let avg = |t: f64| idx.average_error(params, t);
    let graph = |number: usize, title: &str, x: &[f64], f: &dyn Fn(f64) -> f64, sqrt_axis: bool| Graph {
        number,
        title: title.to_string(),
        x: x.to_vec(),
        y: x.iter().map(|&t| f(t)).collect(),
        sqrt_axis,
    };

    let spherical = space == SpaceForm::Spherical;
    let mut graphs = vec![
        graph(1, "N(t)", &t_grid, &|t| idx.count(t) as f64, false),
        graph(2, "D(t)", &t_grid, &|t| idx.error(params, t), false),
        graph(3, "A(t)", &t_grid, &avg, false),
    ];
    let integrand: Box<dyn Fn(f64) -> f64> = if spherical {
        graphs.push(graph(4, "A(t^2)", &tau_grid, &|t| avg(t * t), true));
        if opts.spherical_plain_mean {
            Box::new(|s: f64| avg(s * s))
        } else {
            Box::new(|s: f64| s.sqrt() * avg(s * s))
        }
    } else {
        graphs.push(graph(4, "t^(1/4) A(t)", &t_grid, &|t| t.powf(0.25) * avg(t), false));
        graphs.push(graph(
            5,
            "t^(1/4) A(t^2)",
            &tau_grid,
            &|t| t.powf(0.25) * avg(t * t),
            true,
        ));
        Box::new(|s: f64| s.sqrt() * avg(s * s))
    };
    let mean = running_mean(&*integrand, a, &tau_grid, 8);
    let title = if spherical && opts.spherical_plain_mean {
        "running mean of A(s^2)"
    } else {
        "running mean of s^(1/2) A(s^2)"
    };
    graphs.push(Graph {
        number: graphs.len() + 1,
        title: title.to_string(),
        x: mean.0,
        y: mean.1,
        sqrt_axis: true,
    });
    Ok(AnalysisSeries { graphs, t_max, a })
}

/// (1/(τ − a)) ∫ₐ^τ f for every grid point τ > a, by the composite
/// trapezoid rule on the grid refined `refine` times.
fn running_mean(f: &dyn Fn(f64) -> f64, a: f64, grid: &[f64], refine: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut integral = 0.0;
    let mut left = a;
    let mut f_left = f(a);
    for &tau in grid.iter().filter(|&&t| t > a) {
        let h = (tau - left) / refine as f64;
        for i in 1..=refine {
            let x = if i == refine { tau } else { left + h * i as f64 };
            let fx = f(x);
            integral += 0.5 * h * (f_left + fx);
            f_left = fx;
        }
        left = tau;
        xs.push(tau);
        ys.push(integral / (tau - a));
    }
    (xs, ys)
}

#[cfg(test)]
mod tests;
