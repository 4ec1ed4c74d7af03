//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use weyl_core::analysis::{graph_series, AnalysisOptions, AnalysisSeries, RefinedCountParams};
use weyl_core::config::{BuiltDomain, DomainConfig};
use weyl_core::eigensolve::{extrapolate, solve_lowest};
use weyl_core::exact::{disc_spectrum, hemisphere_spectrum, oracle_spectrum, OracleCase};
use weyl_core::fem::{assemble, ConformalWeight};
use weyl_core::geometry::{
    self, geometric_constants, Bc, HyperbolicTriangleSpec, Point2, SpaceForm, SphericalTriangleSpec,
};
use weyl_core::pipeline::{mesh_sequence, run_refinements, RunSettings};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn build(name: &str) -> BuiltDomain {
    DomainConfig::from_path(&config_path(name)).unwrap().build().unwrap()
}

fn extrapolated(name: &str, m: usize) -> Result<Vec<f64>, String> {
    let d = build(name);
    let run = run_refinements(
        &d.domain,
        RunSettings {
            refinements: 5,
            num_eigs: m,
            ..RunSettings::default()
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(run.extrapolated.predicted)
}

fn compare(got: &[f64], want: &[f64], unit: f64, tol: f64) -> Outcome {
    let worst = got
        .iter()
        .zip(want)
        .map(|(g, w)| (g / unit - w).abs())
        .fold(0.0, f64::max);
    let msg = format!("max deviation {worst:.2e} (tolerance {tol:.0e})");
    if got.len() >= want.len() && worst <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn table(config: &str, unit: f64, want: &[f64]) -> Outcome {
    let got = extrapolated(config, want.len())?;
    compare(&got, want, unit, 1e-2)
}

fn c1() -> Outcome {
    table(
        "right_isosceles.toml",
        PI * PI,
        &[5.0, 10.0, 13.0, 17.0, 20.0, 25.0, 26.0, 29.0, 34.0, 37.0],
    )
}

fn c2() -> Outcome {
    table(
        "equilateral.toml",
        (4.0 * PI / 3.0).powi(2),
        &[3.0, 7.0, 7.0, 12.0, 13.0, 13.0, 19.0, 19.0, 21.0, 21.0],
    )
}

fn c3() -> Outcome {
    table(
        "spherical_right_triangle.toml",
        1.0,
        &[12.0, 30.0, 30.0, 56.0, 56.0, 56.0, 90.0, 90.0, 90.0, 90.0],
    )
}

fn c4() -> Outcome {
    let fem = table(
        "hemisphere.toml",
        1.0,
        &[2.0, 6.0, 6.0, 12.0, 12.0, 12.0, 20.0, 20.0, 20.0, 20.0],
    );
    let o = hemisphere_spectrum(253).eigenvalues;
    let exact = o[251] == 506.0 && o[252] == 506.0;
    match fem {
        Ok(m) if exact => Ok(format!("{m}; oracle 252-253 = 506")),
        Ok(m) => Err(format!("{m}; oracle 252-253 = {}, {}", o[251], o[252])),
        Err(m) => Err(m),
    }
}

fn c5() -> Outcome {
    let (p, _) = extrapolate(10.99889, 10.99704, 10.99658);
    let msg = format!("prediction {p:.6}");
    if (p - 10.99643).abs() <= 5e-5 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c6() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (config, bc) in [
        ("disc_dirichlet.toml", Bc::Dirichlet),
        ("disc_neumann.toml", Bc::Neumann),
    ] {
        let got = extrapolated(config, 50)?;
        let want = disc_spectrum(50, bc).eigenvalues;
        let mut worst_rel = 0.0f64;
        for (g, w) in got.iter().zip(&want) {
            if *w == 0.0 {
                ok &= g.abs() <= 1e-6;
                notes.push(format!("zero mode {g:.1e}"));
            } else {
                worst_rel = worst_rel.max((g - w).abs() / w);
            }
        }
        ok &= got.len() >= 50 && worst_rel <= 2e-3;
        notes.push(format!("{bc:?}: max relative {worst_rel:.2e}"));
    }
    let msg = notes.join(", ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c7() -> Outcome {
    let mut cases: Vec<(String, f64, f64)> = Vec::new();
    for (cfg, want) in [
        ("disc_dirichlet.toml", 1.0 / 6.0),
        ("hyperbolic_disc_1.toml", 1.0 / 6.0),
        ("hyperbolic_disc_half.toml", 1.0 / 6.0),
        ("hemisphere.toml", 1.0 / 6.0),
        ("spherical_disc_quarter.toml", 1.0 / 6.0),
        ("pentagon.toml", 2.0 / 9.0),
        ("hexagon.toml", 5.0 / 24.0),
        ("star6.toml", 25.0 / 48.0),
    ] {
        cases.push((cfg.into(), build(cfg).constants.c, want));
    }
    for r in [0.1, 2.0, 4.0] {
        let (_, k) = geometry::hyperbolic_disc(r, Bc::Dirichlet).map_err(|e| e.to_string())?;
        cases.push((format!("hyperbolic disc R={r}"), k.c, 1.0 / 6.0));
    }
    let worst = cases.iter().map(|(_, g, w)| (g - w).abs()).fold(0.0, f64::max);
    let between = build("between_triangles.toml").constants.c;
    for (label, v) in [("1/5", 0.2), ("1/15", 1.0 / 15.0)] {
        println!(
            "INFO criterion 7: region between triangles C = {between:.12}, |C - {label}| = {:.1e}",
            (between - v).abs()
        );
    }
    let msg = format!("{} domains, max |C - closed form| = {worst:.1e}", cases.len());
    if worst <= 1e-12 {
        Ok(msg)
    } else {
        let bad: Vec<String> = cases
            .iter()
            .filter(|(_, g, w)| (g - w).abs() > 1e-12)
            .map(|(n, g, w)| format!("{n}: {g} vs {w}"))
            .collect();
        Err(format!("{msg}; {}", bad.join("; ")))
    }
}

fn oracle_series(case: OracleCase, count: usize) -> Result<AnalysisSeries, String> {
    let config = match case {
        OracleCase::RightIsosceles => "right_isosceles.toml",
        OracleCase::Equilateral => "equilateral.toml",
        OracleCase::DiscDirichlet => "disc_dirichlet.toml",
        OracleCase::DiscNeumann => "disc_neumann.toml",
        OracleCase::SphericalRightTriangle => "spherical_right_triangle.toml",
        OracleCase::Hemisphere => "hemisphere.toml",
    };
    let d = build(config);
    let values = oracle_spectrum(case, count).eigenvalues;
    graph_series(
        &values,
        &RefinedCountParams::from_constants(&d.constants),
        d.domain.space(),
        AnalysisOptions::default(),
    )
    .map_err(|e| e.to_string())
}

fn max_abs_where(x: &[f64], y: &[f64], keep: impl Fn(f64) -> bool) -> f64 {
    x.iter()
        .zip(y)
        .filter(|(x, _)| keep(**x))
        .map(|(_, y)| y.abs())
        .fold(0.0, f64::max)
}

fn c8() -> Outcome {
    let n = 600;
    let mut notes = Vec::new();
    let mut ok = true;
    for case in [
        OracleCase::RightIsosceles,
        OracleCase::Equilateral,
        OracleCase::DiscDirichlet,
    ] {
        let full = oracle_series(case, n)?;
        let quarter = oracle_series(case, n / 4)?;
        let g4 = &full.graphs[3];
        let half = 0.5 * full.t_max;
        let lower = max_abs_where(&g4.x, &g4.y, |t| t <= half);
        let upper = max_abs_where(&g4.x, &g4.y, |t| t > half);
        let end = full.graphs[5].last().unwrap().1;
        let end_q = quarter.graphs[5].last().unwrap().1;
        let pass = upper <= 2.0 * lower && end.abs() < 0.1 && end.abs() < end_q.abs();
        ok &= pass;
        notes.push(format!(
            "{}: upper/lower {:.2}, mean {end:.1e} vs {end_q:.1e}",
            case.name(),
            upper / lower
        ));
    }
    let msg = notes.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c9() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for case in [OracleCase::Hemisphere, OracleCase::SphericalRightTriangle] {
        let s = oracle_series(case, 600)?;
        let g = &s.graphs[3];
        let x_end = *g.x.last().unwrap();
        let global = max_abs_where(&g.x, &g.y, |_| true);
        let last = max_abs_where(&g.x, &g.y, |x| x >= 0.75 * x_end);
        ok &= last >= 0.5 * global;
        notes.push(format!("{}: last quarter / global {:.2}", case.name(), last / global));
    }
    let msg = notes.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn random_loop(rng: &mut StdRng, center: Point2, radius: f64, sides: usize) -> Vec<Point2> {
    let mut angles: Vec<f64> = (0..sides).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 0.05);
    angles
        .iter()
        .map(|&a| center + Point2::from_polar(radius * rng.random_range(0.5..1.0), a))
        .collect()
}

fn random_bcs(rng: &mut StdRng, n: usize) -> Vec<Bc> {
    (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                Bc::Dirichlet
            } else {
                Bc::Neumann
            }
        })
        .collect()
}

fn c10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..20 {
        let constants = match i % 10 {
            0 | 1 => {
                let v = random_loop(&mut rng, Point2::new(0.0, 0.0), 1.0, 5 + i % 4);
                let b = random_bcs(&mut rng, v.len());
                geometric_constants(&geometry::polygon(SpaceForm::Euclidean, &v, &b).map_err(|e| e.to_string())?)
            }
            2 => {
                let c = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let d = geometry::disc(SpaceForm::Euclidean, c, rng.random_range(0.2..3.0), Bc::Neumann);
                geometric_constants(&d.map_err(|e| e.to_string())?)
            }
            3 | 4 => {
                let v = random_loop(&mut rng, Point2::new(0.0, 2.0), 1.5, 6);
                let b = random_bcs(&mut rng, v.len());
                geometric_constants(&geometry::polygon(SpaceForm::Hyperbolic, &v, &b).map_err(|e| e.to_string())?)
            }
            5 => {
                let a = [
                    rng.random_range(0.1..1.0),
                    rng.random_range(0.1..1.0),
                    rng.random_range(0.1..1.0),
                ];
                let b = random_bcs(&mut rng, 3);
                Ok(geometry::hyperbolic_triangle(HyperbolicTriangleSpec::Angles(a), &b)
                    .map_err(|e| e.to_string())?
                    .constants)
            }
            6 => Ok(geometry::hyperbolic_disc(rng.random_range(0.1..4.0), Bc::Dirichlet)
                .map_err(|e| e.to_string())?
                .1),
            7 | 8 => {
                let v = random_loop(&mut rng, Point2::new(0.0, 0.0), 1.5, 7);
                let b = random_bcs(&mut rng, v.len());
                geometric_constants(&geometry::polygon(SpaceForm::Spherical, &v, &b).map_err(|e| e.to_string())?)
            }
            _ => {
                let a = [
                    rng.random_range(1.1..2.5),
                    rng.random_range(1.1..2.5),
                    rng.random_range(1.1..2.5),
                ];
                let b = random_bcs(&mut rng, 3);
                Ok(geometry::spherical_triangle(SphericalTriangleSpec::Angles(a), &b)
                    .map_err(|e| e.to_string())?
                    .constants)
            }
        }
        .map_err(|e| e.to_string())?;
        worst = worst.max(constants.gauss_bonnet_relative_error());
        count += 1;
    }
    let msg = format!("{count} domains, max relative residual {worst:.1e}");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c11() -> Outcome {
    let configs = [
        "right_isosceles.toml",
        "equilateral.toml",
        "triangle_dirichlet.toml",
        "triangle_neumann.toml",
        "triangle_mixed.toml",
        "arrowhead.toml",
        "between_triangles.toml",
        "pentagon.toml",
        "hexagon.toml",
        "star6.toml",
    ];
    let mut worst = f64::NEG_INFINITY;
    for cfg in configs {
        let d = build(cfg);
        let meshes = mesh_sequence(&d.domain, None, 4).map_err(|e| e.to_string())?;
        let mut prev: Option<Vec<f64>> = None;
        for mesh in &meshes {
            let p = assemble(mesh, ConformalWeight::new(SpaceForm::Euclidean), &d.domain.bc_map())
                .map_err(|e| e.to_string())?;
            let m = 10.min(p.dimension());
            let now = solve_lowest(&p, m, 1e-10).map_err(|e| e.to_string())?.eigenvalues;
            if let Some(prev) = &prev {
                for (a, b) in now.iter().zip(prev) {
                    // Rise relative to the coarse value, with slack for solver tolerance.
                    let rise = (a - b) / (1.0 + b.abs());
                    worst = worst.max(rise);
                    if rise > 1e-8 {
                        return Err(format!("{cfg}: level {} eigenvalue rose from {b} to {a}", mesh.level));
                    }
                }
            }
            prev = Some(now);
        }
    }
    Ok(format!("{} fixtures, largest relative rise {worst:.1e}", configs.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("right isosceles table", c1),
        ("equilateral table", c2),
        ("spherical right triangle table", c3),
        ("hemisphere table", c4),
        ("extrapolation", c5),
        ("disc oracle vs FEM", c6),
        ("constant term fixtures", c7),
        ("flat remainder properties", c8),
        ("spherical remainder does not decay", c9),
        ("Gauss-Bonnet", c10),
        ("Galerkin monotonicity", c11),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (r, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (r, secs))) in criteria.iter().zip(results).enumerate() {
        let (tag, msg) = match r {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} criterion {}: {name}: {msg} [{secs:.1}s]", i + 1);
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
