use super::*;
use crate::geometry::Bc;

#[test]
fn right_isosceles_table_values() {
    assert_eq!(right_isosceles_units(10), vec![5, 10, 13, 17, 20, 25, 26, 29, 34, 37]);
    let s = right_isosceles_spectrum(1);
    assert!((s.eigenvalues[0] - 5.0 * PI * PI).abs() < 1e-12);
    let u = right_isosceles_units(140);
    let pos: Vec<usize> = (0..u.len()).filter(|&i| u[i] == 377).collect();
    assert_eq!(pos, vec![132, 133]);
}

#[test]
fn equilateral_table_values() {
    assert_eq!(equilateral_units(10), vec![3, 7, 7, 12, 13, 13, 19, 19, 21, 21]);
    let u = equilateral_units(125);
    let pos: Vec<usize> = (0..u.len()).filter(|&i| u[i] == 219).collect();
    assert_eq!(pos, vec![118, 119]);
    let s = equilateral_spectrum(3);
    assert!((s.eigenvalues[0] - 3.0 * (4.0 * PI / 3.0).powi(2)).abs() < 1e-12);
}

#[test]
fn disc_spectra() {
    let d = disc_spectrum(3, Bc::Dirichlet);
    assert!((d.eigenvalues[0] - 5.783185962946784).abs() < 1e-9);
    assert!((d.eigenvalues[1] - 14.681970642123893).abs() < 1e-9);
    assert_eq!(d.eigenvalues[1], d.eigenvalues[2]);
    let n = disc_spectrum(4, Bc::Neumann);
    assert_eq!(n.eigenvalues[0], 0.0);
    assert!((n.eigenvalues[1] - 1.8411837813406593f64.powi(2)).abs() < 1e-9);
    assert_eq!(n.eigenvalues[1], n.eigenvalues[2]);
    assert_eq!(n.case, OracleCase::DiscNeumann);
}

#[test]
fn disc_values_are_squared_zeros() {
    let d = disc_spectrum(660, Bc::Dirichlet);
    assert_eq!(d.eigenvalues.len(), 660);
    let top = d.eigenvalues[659];
    let mut expected = Vec::new();
    for k in 0..80 {
        for z in bessel_zeros_below(k, usize::MAX, top.sqrt() + 1e-9, false) {
            expected.push(z * z);
            if k > 0 {
                expected.push(z * z);
            }
        }
    }
    expected.sort_by(f64::total_cmp);
    assert_eq!(&expected[..660], &d.eigenvalues[..]);
}

#[test]
fn spherical_tables() {
    assert_eq!(
        spherical_right_triangle_spectrum(10).eigenvalues,
        vec![12.0, 30.0, 30.0, 56.0, 56.0, 56.0, 90.0, 90.0, 90.0, 90.0]
    );
    assert_eq!(
        hemisphere_spectrum(10).eigenvalues,
        vec![2.0, 6.0, 6.0, 12.0, 12.0, 12.0, 20.0, 20.0, 20.0, 20.0]
    );
    let h = hemisphere_spectrum(253);
    assert_eq!(h.eigenvalues[251], 506.0);
    assert_eq!(h.eigenvalues[252], 506.0);
    let s = spherical_right_triangle_spectrum(55);
    // Cumulative count through i = 10 is 55.
    assert_eq!(s.eigenvalues[54], (4 * 100 + 60 + 2) as f64);
}

#[test]
fn weyl_law_holds_for_oracles() {
    let sqrt3 = 3f64.sqrt();
    let cases = [
        (OracleCase::RightIsosceles, 0.5),
        (OracleCase::Equilateral, sqrt3 / 4.0),
        (OracleCase::DiscDirichlet, PI),
        (OracleCase::DiscNeumann, PI),
        (OracleCase::SphericalRightTriangle, PI / 2.0),
        (OracleCase::Hemisphere, 2.0 * PI),
    ];
    for (case, area) in cases {
        let s = oracle_spectrum(case, 2000);
        let t = *s.eigenvalues.last().unwrap();
        let n = s.eigenvalues.iter().filter(|&&l| l <= t).count() as f64;
        let rel = (n / t - area / (4.0 * PI)).abs() / (area / (4.0 * PI));
        assert!(rel < 0.05, "{case}: {rel}");
    }
}

#[test]
fn case_names_round_trip() {
    for c in OracleCase::ALL {
        assert_eq!(OracleCase::from_name(c.name()).unwrap(), c);
    }
    let err = OracleCase::from_name("square").unwrap_err().to_string();
    assert!(err.contains("hemisphere") && err.contains("disc-d"));
}

#[test]
fn subspectrum_scales_with_side() {
    let a = equilateral_subspectrum(1.0, 5);
    let b = equilateral_subspectrum(0.5, 5);
    for (x, y) in a.iter().zip(&b) {
        assert!((y - 4.0 * x).abs() < 1e-9 * y);
    }
    assert_eq!(a, equilateral_spectrum(5).eigenvalues);
}
