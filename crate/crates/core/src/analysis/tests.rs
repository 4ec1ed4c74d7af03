use super::*;
use crate::exact::{disc_spectrum, equilateral_spectrum, hemisphere_spectrum, oracle_spectrum, OracleCase};
use crate::geometry::{self, quadrature, Bc, SphericalTriangleSpec};
use proptest::prelude::*;

fn disc_params() -> RefinedCountParams {
    RefinedCountParams::new(0.25, -0.5, 1.0 / 6.0)
}

fn hemisphere_params() -> RefinedCountParams {
    RefinedCountParams::new(0.5, -0.5, 1.0 / 6.0)
}

fn params_for(case: OracleCase) -> RefinedCountParams {
    let s3 = 3f64.sqrt();
    let corner = |theta: f64| (PI / theta - theta / PI) / 24.0;
    match case {
        OracleCase::RightIsosceles => RefinedCountParams::new(
            0.5 / (4.0 * PI),
            -(2.0 + 2f64.sqrt()) / (4.0 * PI),
            corner(PI / 2.0) + 2.0 * corner(PI / 4.0),
        ),
        OracleCase::Equilateral => {
            RefinedCountParams::new(s3 / 4.0 / (4.0 * PI), -3.0 / (4.0 * PI), 3.0 * corner(PI / 3.0))
        }
        OracleCase::DiscDirichlet => disc_params(),
        OracleCase::DiscNeumann => RefinedCountParams::new(0.25, 0.5, 1.0 / 6.0),
        OracleCase::Hemisphere => hemisphere_params(),
        OracleCase::SphericalRightTriangle => {
            let t = geometry::spherical_triangle(SphericalTriangleSpec::Angles([PI / 2.0; 3]), &[Bc::Dirichlet]);
            RefinedCountParams::from_constants(&t.unwrap().constants)
        }
    }
}

#[test]
fn counting_examples() {
    let s = oracle_spectrum(OracleCase::RightIsosceles, 20).eigenvalues;
    assert_eq!(counting_function(&s, OracleCase::RightIsosceles.unit() * 20.0), 5);
    assert_eq!(counting_function(&s, 1.0), 0);
    assert_eq!(counting_function(&s, s[3]), 4);
    assert_eq!(counting_function(&s, s[3].next_down()), 3);
}

#[test]
fn refined_count_examples() {
    assert!((refined_count(&disc_params(), 4.0) - 1.0 / 6.0).abs() < 1e-15);
    assert!((refined_count(&hemisphere_params(), 4.0) - 7.0 / 6.0).abs() < 1e-15);
    assert_eq!(refined_count(&disc_params(), 0.0), 1.0 / 6.0);
}

#[test]
fn params_from_geometry() {
    let (d, g) = geometry::spherical_disc(PI / 2.0, Bc::Dirichlet).unwrap();
    assert_eq!(d.space(), SpaceForm::Spherical);
    let p = RefinedCountParams::from_constants(&g);
    let h = hemisphere_params();
    assert!((p.leading - h.leading).abs() < 1e-12);
    assert!((p.half_order - h.half_order).abs() < 1e-12);
    assert!((p.constant - h.constant).abs() < 1e-12);
}

#[test]
fn average_error_examples() {
    let p = RefinedCountParams::new(0.3, -0.7, 0.2);
    let t = 0.5;
    let a = average_error(&[1.0, 2.0], &p, t).unwrap();
    let expect = -(0.3 * t / 2.0 + 2.0 * -0.7 / 3.0 * t.sqrt() + 0.2);
    assert!((a - expect).abs() < 1e-15);
    let zero = RefinedCountParams::new(0.0, 0.0, 0.0);
    assert_eq!(average_error(&[1.0], &zero, 2.0).unwrap(), 0.5);
    assert!(average_error(&[1.0], &zero, 0.0).is_err());
    assert!(average_error(&[1.0], &zero, -1.0).is_err());
}

#[test]
fn disc_scaled_average_is_bounded() {
    let s = disc_spectrum(600, Bc::Dirichlet).eigenvalues;
    let idx = SpectrumIndex::new(&s);
    let top = s[599];
    for i in 1..=3000 {
        let t = top * i as f64 / 3000.0;
        let v = t.powf(0.25) * idx.average_error(&disc_params(), t);
        assert!(v.abs() <= 1.0, "t = {t}: {v}");
    }
}

#[test]
fn closed_form_matches_quadrature() {
    let s = equilateral_spectrum(40).eigenvalues;
    let p = params_for(OracleCase::Equilateral);
    let idx = SpectrumIndex::new(&s);
    for &t in &[s[0] * 0.5, s[7] + 0.3, s[20], s[39]] {
        let mut total = 0.0;
        let mut left = 0.0;
        let mut cuts: Vec<f64> = s.iter().copied().filter(|&l| l < t).collect();
        cuts.push(t);
        for c in cuts {
            if c > left {
                let mid_count = idx.count(0.5 * (left + c)) as f64;
                total +=
                    quadrature::integrate(|x| mid_count - refined_count(&p, x), left, c, 1e-13, 1e-13, "D").unwrap();
            }
            left = c;
        }
        let a = idx.average_error(&p, t);
        assert!((a - total / t).abs() < 1e-9 * (1.0 + a.abs()), "{a} vs {}", total / t);
    }
}

#[test]
fn error_has_no_linear_trend() {
    for case in [
        OracleCase::RightIsosceles,
        OracleCase::Equilateral,
        OracleCase::DiscDirichlet,
    ] {
        let s = oracle_spectrum(case, 800).eigenvalues;
        let p = params_for(case);
        let idx = SpectrumIndex::new(&s);
        let n = 4000;
        let ts: Vec<f64> = (1..=n).map(|i| s[799] * i as f64 / n as f64).collect();
        let ds: Vec<f64> = ts.iter().map(|&t| idx.error(&p, t)).collect();
        let mt = ts.iter().sum::<f64>() / n as f64;
        let md = ds.iter().sum::<f64>() / n as f64;
        let cov: f64 = ts.iter().zip(&ds).map(|(t, d)| (t - mt) * (d - md)).sum();
        let var: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
        let slope = cov / var;
        assert!(slope.abs() < 0.01 * p.leading, "{case}: slope {slope}");
    }
}

#[test]
fn flat_series_has_six_graphs() {
    let s = oracle_spectrum(OracleCase::RightIsosceles, 150).eigenvalues;
    let p = params_for(OracleCase::RightIsosceles);
    let series = graph_series(&s, &p, SpaceForm::Euclidean, AnalysisOptions::default()).unwrap();
    assert_eq!(series.graphs.len(), 6);
    assert_eq!(series.t_max, s[149]);
    assert!((series.a - s[149].sqrt() / 4.0).abs() < 1e-15);
    for g in &series.graphs[..4] {
        assert_eq!(*g.x.last().unwrap(), s[149]);
        assert!(g.x[0] > 0.0 && g.x.windows(2).all(|w| w[0] < w[1]));
    }
    assert!((series.graphs[4].x.last().unwrap() - s[149].sqrt()).abs() < 1e-12);
    let (_, end) = series.graphs[5].last().unwrap();
    assert!(end.abs() < 0.05, "graph 6 endpoint {end}");
}

#[test]
fn error_jumps_by_multiplicity() {
    let s = equilateral_spectrum(30).eigenvalues;
    let p = params_for(OracleCase::Equilateral);
    let series = graph_series(
        &s,
        &p,
        SpaceForm::Euclidean,
        AnalysisOptions {
            samples: 256,
            ..Default::default()
        },
    )
    .unwrap();
    let g = &series.graphs[1];
    let at = |t: f64| g.y[g.x.iter().position(|&x| x == t).unwrap()];
    // 7·unit is a double eigenvalue.
    let jump = at(s[1]) - at(s[1].next_down());
    assert!((jump - 2.0).abs() < 1e-9);
    let jump = at(s[0]) - at(s[0].next_down());
    assert!((jump - 1.0).abs() < 1e-9);
}

#[test]
fn spherical_series_has_five_graphs() {
    let s = hemisphere_spectrum(300).eigenvalues;
    let p = hemisphere_params();
    let series = graph_series(&s, &p, SpaceForm::Spherical, AnalysisOptions::default()).unwrap();
    assert_eq!(series.graphs.len(), 5);
    let g4 = &series.graphs[3];
    assert!(g4.sqrt_axis);
    let max = |ys: &[f64]| ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let n = g4.y.len();
    assert!(max(&g4.y[3 * n / 4..]) >= 0.5 * max(&g4.y));
    let alt = graph_series(
        &s,
        &p,
        SpaceForm::Spherical,
        AnalysisOptions {
            spherical_plain_mean: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_ne!(alt.graphs[4].y, series.graphs[4].y);
    assert_eq!(alt.graphs[3].y, series.graphs[3].y);
}

#[test]
fn graph_series_rejects_bad_input() {
    let p = disc_params();
    let o = AnalysisOptions::default();
    assert!(graph_series(&[], &p, SpaceForm::Euclidean, o).is_err());
    assert!(graph_series(&[2.0, 1.0], &p, SpaceForm::Euclidean, o).is_err());
    let few = AnalysisOptions { samples: 10, ..o };
    assert!(graph_series(&[1.0, 2.0], &p, SpaceForm::Euclidean, few).is_err());
}

#[test]
fn running_mean_shrinks_with_prefix() {
    for case in [
        OracleCase::RightIsosceles,
        OracleCase::Equilateral,
        OracleCase::DiscDirichlet,
    ] {
        let s = oracle_spectrum(case, 600).eigenvalues;
        let p = params_for(case);
        let end = |n: usize| {
            let g = graph_series(&s[..n], &p, SpaceForm::Euclidean, AnalysisOptions::default()).unwrap();
            g.graphs[5].last().unwrap().1
        };
        let (full, quarter) = (end(600), end(150));
        assert!(full.abs() < quarter.abs(), "{case}: {full} vs {quarter}");
    }
}

#[test]
fn gap_examples() {
    let g = gap_stats(&hemisphere_spectrum(10).eigenvalues, 1.0).unwrap();
    assert_eq!(g.differences, vec![4.0, 0.0, 6.0, 0.0, 0.0, 8.0, 0.0, 0.0, 0.0]);
    assert!((g.cdf_at(0.0) - 6.0 / 9.0).abs() < 1e-15);
    assert_eq!(g.cdf[0], (0.0, 6.0 / 9.0));
    assert_eq!(g.cdf.last().unwrap().1, 1.0);
    assert_eq!(g.histogram.len(), 9);
    assert_eq!(g.histogram[0], 6);
    assert_eq!(g.histogram[4] + g.histogram[6] + g.histogram[8], 3);

    let simple = gap_stats(&[1.0, 2.5, 4.0, 7.0], 0.5).unwrap();
    assert_eq!(simple.cdf_at(0.0f64.next_down()), 0.0);
    assert_eq!(simple.cdf_at(1.5), 2.0 / 3.0);
    assert!(gap_stats(&[1.0], 1.0).is_err());
    assert!(gap_stats(&[1.0, 2.0], 0.0).is_err());
}

#[test]
fn unsorted_input_is_sorted_for_gaps() {
    let g = gap_stats(&[3.0, 1.0, 2.0], 1.0).unwrap();
    assert_eq!(g.differences, vec![1.0, 1.0]);
}

proptest! {
    #[test]
    fn counting_is_monotone_and_right_continuous(
        mut s in prop::collection::vec(0.0f64..100.0, 1..40),
        t1 in 0.0f64..120.0,
        t2 in 0.0f64..120.0,
    ) {
        s.sort_by(f64::total_cmp);
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(counting_function(&s, lo) <= counting_function(&s, hi));
        for &l in &s {
            prop_assert!(counting_function(&s, l) > counting_function(&s, l.next_down()));
        }
    }

    #[test]
    fn gap_cdf_is_monotone(mut s in prop::collection::vec(0.0f64..50.0, 2..60), w in 0.1f64..5.0) {
        s.sort_by(f64::total_cmp);
        let g = gap_stats(&s, w).unwrap();
        prop_assert!(g.differences.iter().all(|&d| d >= 0.0));
        prop_assert!(g.cdf.windows(2).all(|p| p[0].0 < p[1].0 && p[0].1 < p[1].1));
        prop_assert_eq!(g.cdf.last().unwrap().1, 1.0);
        prop_assert_eq!(g.histogram.iter().sum::<usize>(), s.len() - 1);
    }

    #[test]
    fn average_error_matches_direct_sum(
        mut s in prop::collection::vec(0.1f64..30.0, 1..30),
        t in 0.05f64..35.0,
        l in 0.01f64..1.0,
        h in -1.0f64..1.0,
        c in -1.0f64..1.0,
    ) {
        s.sort_by(f64::total_cmp);
        let p = RefinedCountParams::new(l, h, c);
        let direct: f64 = s.iter().filter(|&&x| x <= t).map(|&x| t - x).sum::<f64>();
        let expect = (direct - (l * t * t / 2.0 + 2.0 * h / 3.0 * t.powf(1.5) + c * t)) / t;
        let got = average_error(&s, &p, t).unwrap();
        prop_assert!((got - expect).abs() < 1e-10 * (1.0 + expect.abs()));
    }
}
