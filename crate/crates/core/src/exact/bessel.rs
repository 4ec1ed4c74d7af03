//! Integer-order Bessel functions of the first kind and their zeros.

use std::f64::consts::PI;

/// J_0(x), …, J_kmax(x) by Miller's backward recurrence, normalized with
/// J_0 + 2 Σ J_2m = 1.
pub fn bessel_j_sequence(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = (kmax as f64).max(ax);
    let mut start = (top + 30.0 + 12.0 * top.cbrt()).ceil() as usize;
    start += start % 2;
    let mut next = 0.0f64; // J_{j+1}
    let mut cur = 1e-300f64; // J_j
    let mut sum = 0.0;
    for j in (0..=start).rev() {
        if j <= kmax {
            out[j] = cur;
        }
        if j % 2 == 0 {
            sum += if j == 0 { cur } else { 2.0 * cur };
        }
        if j == 0 {
            break;
        }
        let prev = 2.0 * j as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            sum *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    for (k, v) in out.iter_mut().enumerate() {
        *v /= sum;
        if x < 0.0 && k % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

pub fn bessel_j(k: usize, x: f64) -> f64 {
    bessel_j_sequence(k, x)[k]
}

/// (J_k(x), J′_k(x)).
pub fn bessel_j_and_derivative(k: usize, x: f64) -> (f64, f64) {
    let s = bessel_j_sequence(k + 1, x);
    let d = if k == 0 { -s[1] } else { 0.5 * (s[k - 1] - s[k + 1]) };
    (s[k], d)
}

/// Value and slope of J_k or J′_k, whichever `derivative` selects.
fn target(k: usize, x: f64, derivative: bool) -> (f64, f64) {
    let (j, dj) = bessel_j_and_derivative(k, x);
    if derivative {
        let kk = (k * k) as f64;
        (dj, -dj / x - (1.0 - kk / (x * x)) * j)
    } else {
        (j, dj)
    }
}

/// Root of the selected function in a sign-changing bracket: bisection
/// down to a small bracket, then safeguarded Newton.
fn polish(k: usize, derivative: bool, mut lo: f64, mut hi: f64) -> f64 {
    let lo_negative = target(k, lo, derivative).0 < 0.0;
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        let fm = target(k, mid, derivative).0;
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..60 {
        let (v, dv) = target(k, x, derivative);
        if v == 0.0 {
            return x;
        }
        if (v < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let mut nx = x - v / dv;
        if !(nx > lo && nx < hi) {
            nx = 0.5 * (lo + hi);
        }
        if (nx - x).abs() <= 1e-15 * x.max(1.0) {
            return nx;
        }
        x = nx;
    }
    x
}

/// The first `count` positive zeros of J_k (or of J′_k, excluding the zero
/// at the origin), in increasing order.
pub fn bessel_zeros(k: usize, count: usize, derivative: bool) -> Vec<f64> {
    bessel_zeros_below(k, count, f64::INFINITY, derivative)
}

/// Positive zeros of J_k (or J′_k) below `limit`, at most `count` of them.
pub fn bessel_zeros_below(k: usize, count: usize, limit: f64, derivative: bool) -> Vec<f64> {
    let mut zeros = Vec::with_capacity(count.min(4096));
    let step = 0.5;
    let mut a = if k == 0 { 0.5 } else { k as f64 };
    let mut fa = target(k, a, derivative).0;
    while zeros.len() < count && a < limit {
        let b = a + step;
        let fb = target(k, b, derivative).0;
        if fa == 0.0 {
            zeros.push(a);
        } else if (fa < 0.0) != (fb < 0.0) {
            let z = polish(k, derivative, a, b);
            if z < limit {
                zeros.push(z);
            } else {
                break;
            }
        }
        a = b;
        fa = fb;
    }
    zeros
}

/// McMahon's large-zero expansion for the n-th zero of J_k or J′_k.
pub fn mcmahon_estimate(k: usize, n: usize, derivative: bool) -> f64 {
    let mu = 4.0 * (k * k) as f64;
    if derivative {
        let b = (n as f64 + 0.5 * k as f64 - 0.75) * PI;
        b - (mu + 3.0) / (8.0 * b) - 4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * (8.0 * b).powi(3))
    } else {
        let b = (n as f64 + 0.5 * k as f64 - 0.25) * PI;
        b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * b).powi(3))
    }
}

/// The n-th positive zero (n ≥ 1) of J_k, or of J′_k when `derivative`.
pub fn bessel_zero(k: usize, n: usize, derivative: bool) -> f64 {
    assert!(n >= 1, "zero index starts at 1");
    // Far from the turning point the expansion is accurate to well under
    // half the zero spacing, so a bracket around it holds exactly one zero.
    let b = (n as f64 + 0.5 * k as f64) * PI;
    if n > 50 && b > 8.0 * (k * k) as f64 + 100.0 {
        let seed = mcmahon_estimate(k, n, derivative);
        let (lo, hi) = (seed - 0.5, seed + 0.5);
        let (flo, fhi) = (target(k, lo, derivative).0, target(k, hi, derivative).0);
        if (flo < 0.0) != (fhi < 0.0) {
            return polish(k, derivative, lo, hi);
        }
    }
    bessel_zeros(k, n, derivative)[n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ascending power series; cancellation limits it to x ≲ 10.
    fn series_j(k: usize, x: f64) -> f64 {
        let h = 0.5 * x;
        let mut term = h.powi(k as i32) / (1..=k).map(|i| i as f64).product::<f64>();
        let mut sum = term;
        for m in 1..200 {
            term *= -h * h / (m as f64 * (m + k) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    }

    fn series_zero(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let flo = f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) < 0.0) == (flo < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn matches_power_series() {
        for k in 0..8 {
            for i in 1..=40 {
                let x = 0.25 * i as f64;
                let a = bessel_j(k, x);
                let b = series_j(k, x);
                assert!((a - b).abs() < 1e-12, "J_{k}({x}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn first_zeros_match_series_oracle() {
        let z = series_zero(|x| series_j(0, x), 2.0, 3.0);
        assert!((bessel_zero(0, 1, false) - z).abs() < 1e-12);
        assert!((bessel_zero(0, 1, false) - 2.4048255577).abs() < 1e-9);
        let dz = series_zero(|x| 0.5 * (series_j(0, x) - series_j(2, x)), 1.5, 2.5);
        assert!((bessel_zero(1, 1, true) - dz).abs() < 1e-12);
        assert!((bessel_zero(1, 1, true) - 1.8411837813).abs() < 1e-9);
        assert!((bessel_zero(0, 1, true) - 3.8317059702).abs() < 1e-9);
    }

    #[test]
    fn symmetric_in_sign_of_argument() {
        for k in 0..5 {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((bessel_j(k, -3.7) - s * bessel_j(k, 3.7)).abs() < 1e-15);
        }
    }

    #[test]
    fn large_argument_identity() {
        for &x in &[100.0f64, 1234.5, 9000.0] {
            let s = bessel_j_sequence(3, x);
            let asym = (2.0 / (PI * x)).sqrt() * (x - PI / 4.0).cos();
            assert!((s[0] - asym).abs() < 0.2 / x);
            assert!((bessel_j(1, x) - s[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_spacing_tends_to_pi() {
        let z = bessel_zeros(0, 200, false);
        assert!((z[199] - z[198] - PI).abs() < 1e-5);
        let far = bessel_zero(0, 3000, false);
        assert!((far - mcmahon_estimate(0, 3000, false)).abs() < 1e-9);
        assert!(bessel_j(0, far).abs() < 1e-12);
    }

    #[test]
    fn mcmahon_path_agrees_with_scan() {
        for (k, n, d) in [(0, 60, false), (2, 80, true), (5, 120, false)] {
            let a = bessel_zero(k, n, d);
            let b = bessel_zeros(k, n, d)[n - 1];
            assert!((a - b).abs() < 1e-10, "{k} {n} {d}: {a} vs {b}");
        }
    }

    #[test]
    fn zeros_interlace() {
        for k in 0..10 {
            let a = bessel_zeros(k, 8, false);
            let b = bessel_zeros(k + 1, 8, false);
            for n in 0..7 {
                assert!(a[n] < b[n] && b[n] < a[n + 1]);
            }
        }
    }

    #[test]
    fn high_order_zero_is_a_root() {
        let z = bessel_zero(200, 3, false);
        assert!(z > 200.0);
        let (j, dj) = bessel_j_and_derivative(200, z);
        assert!(j.abs() < 1e-12 * dj.abs().max(1.0));
    }
}
