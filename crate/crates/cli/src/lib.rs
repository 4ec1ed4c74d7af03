//! Subcommands of the `weyl` binary.

pub mod svg;
pub mod table;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use weyl_core::analysis::{gap_stats, graph_series, AnalysisOptions, AnalysisSeries, RefinedCountParams};
use weyl_core::config::{BuiltDomain, DomainConfig};
use weyl_core::exact::{oracle_spectrum, OracleCase};
use weyl_core::geometry::SpaceForm;
use weyl_core::pipeline::{run_refinements_with, RunSettings};
use weyl_core::spectrum_file::SpectrumFile;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_ANALYSIS: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

type CliResult<T> = Result<T, CliError>;

fn fail(code: i32, context: impl fmt::Display) -> impl FnOnce(weyl_core::Error) -> CliError {
    let context = context.to_string();
    move |e| CliError {
        code,
        message: if context.is_empty() {
            e.to_string()
        } else {
            format!("{context}: {e}")
        },
    }
}

fn io_fail(code: i32, path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError {
        code,
        message: format!("{}: {e}", path.display()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "weyl",
    version,
    about = "Laplacian spectra on constant-curvature domains and refined Weyl-law checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mesh, solve each refinement level and extrapolate.
    Solve(SolveArgs),
    /// Graph series and gap statistics for a spectrum file.
    Analyze(AnalyzeArgs),
    /// Write a closed-form spectrum.
    Exact(ExactArgs),
    /// Consecutive-difference statistics of a spectrum file.
    Gaps(GapsArgs),
    /// Solve and analyze one or more domains.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolveOpts {
    /// Uniform refinements after the initial mesh.
    #[arg(long, default_value_t = 5)]
    pub refinements: usize,
    /// Number of eigenvalues per level.
    #[arg(short = 'm', long = "num-eigs", default_value_t = 150)]
    pub num_eigs: usize,
    /// Relative residual tolerance of the eigensolver.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeOpts {
    /// Samples per graph grid.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    /// Skip SVG output.
    #[arg(long)]
    pub no_svg: bool,
    /// Skip gap statistics.
    #[arg(long)]
    pub no_gaps: bool,
    /// Use every eigenvalue, not only the trusted prefix.
    #[arg(long)]
    pub all: bool,
    /// Analyze the oracle spectrum named in the domain config instead.
    #[arg(long)]
    pub use_oracle: bool,
    /// Eigenvalue count taken from the oracle with --use-oracle.
    #[arg(long, default_value_t = 600)]
    pub oracle_count: usize,
    /// Spherical running mean of A(s^2) rather than s^(1/2) A(s^2).
    #[arg(long)]
    pub plain_spherical_mean: bool,
    /// Histogram bin width; defaults to a tenth of the mean difference.
    #[arg(long)]
    pub bin_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Domain config (TOML).
    pub config: PathBuf,
    #[command(flatten)]
    pub opts: SolveOpts,
    /// Output directory.
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
    /// Suppress progress and table output.
    #[arg(short, long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Spectrum file written by `solve` or `exact`, or a CSV with an eigenvalue column.
    pub spectrum: PathBuf,
    /// Domain config giving the geometric constants.
    #[arg(short, long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub opts: AnalyzeOpts,
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// right-isosceles, equilateral, disc-d, disc-n, spherical-right-triangle or hemisphere.
    pub case: String,
    /// Number of eigenvalues.
    pub count: usize,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    pub spectrum: PathBuf,
    #[arg(long)]
    pub bin_width: Option<f64>,
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub no_svg: bool,
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Domain configs; each gets its own subdirectory named after the file.
    #[arg(required = true)]
    pub configs: Vec<PathBuf>,
    #[command(flatten)]
    pub solve: SolveOpts,
    #[command(flatten)]
    pub analyze: AnalyzeOpts,
    /// Domains processed concurrently.
    #[arg(short, long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
    #[arg(short, long)]
    pub quiet: bool,
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve(a) => {
            let cfg = load_config(&a.config)?;
            solve(&cfg, &a.opts, &a.out, a.quiet).map(|_| ())
        }
        Command::Analyze(a) => {
            let cfg = load_config(&a.config)?;
            let file = load_spectrum(&a.spectrum)?;
            analyze(&cfg, &file, &a.opts, &a.out)
        }
        Command::Exact(a) => exact(&a),
        Command::Gaps(a) => {
            let file = load_spectrum(&a.spectrum)?;
            let values = if a.all { file.predicted() } else { file.trusted_prefix() };
            fs::create_dir_all(&a.out).map_err(io_fail(EXIT_ANALYSIS, &a.out))?;
            write_gaps(&values, a.bin_width, !a.no_svg, &a.out)
        }
        Command::Report(a) => report(&a),
    }
}

pub struct LoadedConfig {
    pub config: DomainConfig,
    pub built: BuiltDomain,
}

pub fn load_config(path: &Path) -> CliResult<LoadedConfig> {
    let context = path.display().to_string();
    let config = DomainConfig::from_path(path).map_err(fail(EXIT_CONFIG, &context))?;
    let built = config.build().map_err(fail(EXIT_CONFIG, &context))?;
    Ok(LoadedConfig { config, built })
}

/// Spectrum file, or CSV whose last numeric-headed column is `eigenvalue`
/// or `predicted` (a single unnamed column also works).
pub fn load_spectrum(path: &Path) -> CliResult<SpectrumFile> {
    let text = fs::read_to_string(path).map_err(io_fail(EXIT_ANALYSIS, path))?;
    let context = path.display().to_string();
    if text.starts_with("# weyl-spectrum") {
        return SpectrumFile::from_text(&text).map_err(fail(EXIT_ANALYSIS, &context));
    }
    spectrum_from_csv(&text).map_err(|(line, msg)| CliError {
        code: EXIT_ANALYSIS,
        message: format!("{context}: line {line}: {msg}"),
    })
}

fn spectrum_from_csv(text: &str) -> Result<SpectrumFile, (usize, String)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or((1, "empty file".to_string()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = cols
        .iter()
        .position(|c| *c == "eigenvalue" || *c == "predicted")
        .ok_or((1, "no `eigenvalue` or `predicted` column".to_string()))?;
    let trusted_col = cols.iter().position(|c| *c == "trusted");
    let mut rows = Vec::new();
    for (i, line) in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != cols.len() {
            return Err((i + 1, format!("expected {} fields, found {}", cols.len(), f.len())));
        }
        let v: f64 = f[col]
            .parse()
            .map_err(|_| (i + 1, format!("bad eigenvalue `{}`", f[col])))?;
        let trusted = match trusted_col.map(|c| f[c]) {
            None | Some("yes") | Some("true") => true,
            Some("no") | Some("false") => false,
            Some(other) => return Err((i + 1, format!("bad trusted flag `{other}`"))),
        };
        if rows
            .last()
            .is_some_and(|r: &weyl_core::spectrum_file::SpectrumRow| v < r.predicted)
        {
            return Err((i + 1, "eigenvalues must be ascending".to_string()));
        }
        rows.push(weyl_core::spectrum_file::SpectrumRow {
            level_values: Vec::new(),
            predicted: v,
            ratio: 0.0,
            trusted,
        });
    }
    Ok(SpectrumFile {
        name: None,
        levels: Vec::new(),
        rows,
    })
}

fn write(path: &Path, contents: &str, code: i32) -> CliResult<()> {
    fs::write(path, contents).map_err(io_fail(code, path))
}

fn unit_of(cfg: &DomainConfig) -> (f64, &'static str) {
    match cfg.oracle {
        Some(OracleCase::RightIsosceles) => (OracleCase::RightIsosceles.unit(), "pi^2"),
        Some(OracleCase::Equilateral) => (OracleCase::Equilateral.unit(), "(4 pi/3)^2"),
        _ => (1.0, "1"),
    }
}

/// Runs the refinement sequence and writes `spectrum.txt`, `spectrum.csv`
/// and `table.txt` into `out`.
pub fn solve(cfg: &LoadedConfig, opts: &SolveOpts, out: &Path, quiet: bool) -> CliResult<SpectrumFile> {
    if opts.refinements < 2 {
        return Err(CliError {
            code: EXIT_CONFIG,
            message: "need ≥ 2 refinements for extrapolation".into(),
        });
    }
    if opts.num_eigs == 0 {
        return Err(CliError {
            code: EXIT_CONFIG,
            message: "num-eigs must be at least 1".into(),
        });
    }
    if !(opts.tol > 0.0 && opts.tol <= 1e-6) {
        return Err(CliError {
            code: EXIT_CONFIG,
            message: format!("tolerance {} outside (0, 1e-6]", opts.tol),
        });
    }
    let name = cfg.config.display_name();
    let settings = RunSettings {
        refinements: opts.refinements,
        num_eigs: opts.num_eigs,
        tol: opts.tol,
        mesh_size: cfg.config.mesh_size,
    };
    let run = run_refinements_with(&cfg.built.domain, settings, |s| {
        if !quiet {
            eprintln!(
                "{name}: level {} with {} vertices, {} triangles, {} unknowns",
                s.level, s.vertices, s.triangles, s.unknowns
            );
        }
    })
    .map_err(fail(EXIT_SOLVER, &name))?;
    let file = SpectrumFile::from_run(Some(name.clone()), &run.levels, &run.extrapolated);

    fs::create_dir_all(out).map_err(io_fail(EXIT_SOLVER, out))?;
    file.write_to(&out.join("spectrum.txt"))
        .map_err(fail(EXIT_SOLVER, ""))?;
    write(&out.join("spectrum.csv"), &spectrum_csv(&file), EXIT_SOLVER)?;
    let truth = cfg.config.oracle.map(|c| oracle_spectrum(c, file.len()).eigenvalues);
    let (unit, unit_name) = unit_of(&cfg.config);
    let table = table::format_table(&file, unit, unit_name, truth.as_deref(), file.len());
    write(&out.join("table.txt"), &table, EXIT_SOLVER)?;
    if !quiet {
        let short = table::format_table(&file, unit, unit_name, truth.as_deref(), 20);
        println!("{name}\n{short}");
    }
    Ok(file)
}

fn spectrum_csv(file: &SpectrumFile) -> String {
    let mut s = String::from("index,eigenvalue,ratio,trusted\n");
    for (i, r) in file.rows.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            r.predicted,
            r.ratio,
            if r.trusted { "yes" } else { "no" }
        ));
    }
    s
}

fn series_csv(x_name: &str, x: &[f64], y: &[f64]) -> String {
    let mut s = format!("{x_name},value\n");
    for (a, b) in x.iter().zip(y) {
        s.push_str(&format!("{a},{b}\n"));
    }
    s
}

/// Graph CSVs (`graphN.csv`), their SVGs and gap statistics.
pub fn analyze(cfg: &LoadedConfig, file: &SpectrumFile, opts: &AnalyzeOpts, out: &Path) -> CliResult<()> {
    let values = if opts.use_oracle {
        let case = cfg.config.oracle.ok_or_else(|| CliError {
            code: EXIT_CONFIG,
            message: "--use-oracle needs an `oracle` key in the domain config".into(),
        })?;
        oracle_spectrum(case, opts.oracle_count).eigenvalues
    } else if opts.all {
        file.predicted()
    } else {
        file.trusted_prefix()
    };
    if values.is_empty() {
        return Err(CliError {
            code: EXIT_ANALYSIS,
            message: "no trusted eigenvalues to analyze (pass --all to use every eigenvalue)".into(),
        });
    }
    let params = RefinedCountParams::from_constants(&cfg.built.constants);
    let space = cfg.built.domain.space();
    let series = graph_series(
        &values,
        &params,
        space,
        AnalysisOptions {
            samples: opts.samples,
            spherical_plain_mean: opts.plain_spherical_mean,
        },
    )
    .map_err(fail(EXIT_ANALYSIS, "analysis"))?;
    fs::create_dir_all(out).map_err(io_fail(EXIT_ANALYSIS, out))?;
    write_series(&series, space, !opts.no_svg, out)?;
    if !opts.no_gaps && values.len() >= 2 {
        write_gaps(&values, opts.bin_width, !opts.no_svg, out)?;
    }
    Ok(())
}

fn write_series(series: &AnalysisSeries, space: SpaceForm, svg_out: bool, out: &Path) -> CliResult<()> {
    for g in &series.graphs {
        let x_name = if g.sqrt_axis { "sqrt_t" } else { "t" };
        write(
            &out.join(format!("graph{}.csv", g.number)),
            &series_csv(x_name, &g.x, &g.y),
            EXIT_ANALYSIS,
        )?;
        if svg_out {
            let title = format!("Graph {}: {} ({})", g.number, g.title, space.name());
            let plot = svg::Plot {
                title: &title,
                x_label: if g.sqrt_axis { "sqrt(t)" } else { "t" },
                y_label: &g.title,
                x: &g.x,
                y: &g.y,
                bar_width: None,
            };
            write(
                &out.join(format!("graph{}.svg", g.number)),
                &svg::render(&plot),
                EXIT_ANALYSIS,
            )?;
        }
    }
    Ok(())
}

fn write_gaps(values: &[f64], bin_width: Option<f64>, svg_out: bool, out: &Path) -> CliResult<()> {
    if values.len() < 2 {
        return Err(CliError {
            code: EXIT_ANALYSIS,
            message: "gap statistics need at least two eigenvalues".into(),
        });
    }
    let mean = (values[values.len() - 1] - values[0]) / (values.len() - 1) as f64;
    let w = bin_width.unwrap_or(if mean > 0.0 { mean / 10.0 } else { 1.0 });
    let g = gap_stats(values, w).map_err(fail(EXIT_ANALYSIS, "gap statistics"))?;
    let (cx, cy): (Vec<f64>, Vec<f64>) = g.cdf.iter().copied().unzip();
    let mut cdf = String::from("d,cdf\n");
    for (d, c) in &g.cdf {
        cdf.push_str(&format!("{d},{c}\n"));
    }
    write(&out.join("gaps_cdf.csv"), &cdf, EXIT_ANALYSIS)?;
    let lefts: Vec<f64> = (0..g.histogram.len()).map(|k| k as f64 * w).collect();
    let mut hist = String::from("bin_left,count\n");
    for (l, c) in lefts.iter().zip(&g.histogram) {
        hist.push_str(&format!("{l},{c}\n"));
    }
    write(&out.join("gaps_hist.csv"), &hist, EXIT_ANALYSIS)?;
    if svg_out {
        // Step outline of the empirical CDF.
        let mut sx = vec![0.0];
        let mut sy = vec![0.0];
        let mut prev = 0.0;
        for (&d, &c) in cx.iter().zip(&cy) {
            sx.extend([d, d]);
            sy.extend([prev, c]);
            prev = c;
        }
        let plot = svg::Plot {
            title: "Differences of consecutive eigenvalues: fraction <= d",
            x_label: "d",
            y_label: "fraction",
            x: &sx,
            y: &sy,
            bar_width: None,
        };
        write(&out.join("gaps_cdf.svg"), &svg::render(&plot), EXIT_ANALYSIS)?;
        let counts: Vec<f64> = g.histogram.iter().map(|&c| c as f64).collect();
        let plot = svg::Plot {
            title: "Histogram of consecutive differences",
            x_label: "d",
            y_label: "count",
            x: &lefts,
            y: &counts,
            bar_width: Some(w),
        };
        write(&out.join("gaps_hist.svg"), &svg::render(&plot), EXIT_ANALYSIS)?;
    }
    Ok(())
}

fn exact(a: &ExactArgs) -> CliResult<()> {
    let case = OracleCase::from_name(&a.case).map_err(fail(EXIT_CONFIG, ""))?;
    if a.count == 0 {
        return Err(CliError {
            code: EXIT_CONFIG,
            message: "count must be at least 1".into(),
        });
    }
    let text = SpectrumFile::from_oracle(&oracle_spectrum(case, a.count)).to_text();
    match &a.out {
        Some(p) => write(p, &text, EXIT_CONFIG),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(a: &ReportArgs) -> CliResult<()> {
    let mut stems = std::collections::BTreeSet::new();
    for c in &a.configs {
        let stem = c
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if !stems.insert(stem.clone()) {
            return Err(CliError {
                code: EXIT_CONFIG,
                message: format!("two configs share the output name `{stem}`"),
            });
        }
    }
    let loaded = a
        .configs
        .iter()
        .map(|c| load_config(c))
        .collect::<CliResult<Vec<_>>>()?;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CliResult<()>>>> = Mutex::new((0..loaded.len()).map(|_| None).collect());
    let one = |i: usize| -> CliResult<()> {
        let stem = a.configs[i].file_stem().unwrap().to_string_lossy().into_owned();
        let dir = a.out.join(stem);
        let file = solve(&loaded[i], &a.solve, &dir, a.quiet)?;
        analyze(&loaded[i], &file, &a.analyze, &dir)
    };
    std::thread::scope(|s| {
        for _ in 0..a.jobs.clamp(1, loaded.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= loaded.len() {
                    break;
                }
                let r = one(i);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    // First failure in argument order decides the exit code.
    let mut first = None;
    for (i, r) in results.into_inner().unwrap().into_iter().enumerate() {
        if let Some(Err(e)) = r {
            eprintln!("{}: {e}", a.configs[i].display());
            first.get_or_insert(e);
        }
    }
    first.map_or(Ok(()), Err)
}
