//! Thick-restart Lanczos on the shift-inverted pencil, in the M inner
//! product.

use nalgebra::{DMatrix, SymmetricEigen};

use super::cholesky::EnvelopeCholesky;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// An eigenpair with M-normalized vector and relative residual.
#[derive(Debug, Clone)]
pub(crate) struct Pair {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub mx: Vec<f64>,
    pub residual: f64,
}

/// (K + τM)⁻¹ M, whose largest eigenvalues 1/(λ + τ) map to the smallest λ.
pub(crate) struct ShiftInvert<'a> {
    pub k: &'a CsrMatrix,
    pub m: &'a CsrMatrix,
    pub tau: f64,
    pub factor: EnvelopeCholesky,
}

impl<'a> ShiftInvert<'a> {
    /// Factors K + τM, growing τ when a pivot breaks down.
    pub fn new(k: &'a CsrMatrix, m: &'a CsrMatrix) -> Result<Self> {
        let n = k.nrows() as f64;
        let dk: f64 = k.diagonal().iter().sum();
        let dm: f64 = m.diagonal().iter().sum();
        let mut tau = dk / dm / n;
        if !(tau.is_finite() && tau > 0.0) {
            tau = 1.0;
        }
        let mut last = None;
        for _ in 0..6 {
            let a = CsrMatrix::linear_combination(1.0, k, tau, m);
            match EnvelopeCholesky::factor(&a) {
                Ok(factor) => return Ok(ShiftInvert { k, m, tau, factor }),
                Err(e) => last = Some(e),
            }
            tau *= 10.0;
        }
        Err(last.unwrap())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Deterministic pseudo-random vector in [-1, 1)^n.
fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed ^ 0x9E37_79B9_7F4A_7C15;
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
        })
        .collect()
}

/// Relative residual ‖Kx − λMx‖ / ‖Mx‖.
pub(crate) fn relative_residual(k: &CsrMatrix, x: &[f64], mx: &[f64], lambda: f64) -> f64 {
    let kx = k.mul_vec(x);
    let r: f64 = kx
        .iter()
        .zip(mx)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    r / norm(mx)
}

struct Basis<'l> {
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
    locked: &'l [Pair],
}

impl Basis<'_> {
    /// Two passes of modified Gram–Schmidt against the locked vectors and
    /// the first `len` basis vectors. Returns the basis coefficients.
    fn orthogonalize(&self, w: &mut [f64], len: usize) -> Vec<f64> {
        let mut coef = vec![0.0; len];
        for _ in 0..2 {
            for p in self.locked {
                let c = dot(&p.mx, w);
                axpy(-c, &p.x, w);
            }
            for ((k, mv), v) in coef.iter_mut().zip(&self.mv).zip(&self.v) {
                let c = dot(mv, w);
                *k += c;
                axpy(-c, v, w);
            }
        }
        coef
    }
}

/// Lowest `nev` eigenpairs of the pencil on the M-orthogonal complement of
/// `locked`.
pub(crate) fn lowest_pairs(
    op: &ShiftInvert,
    nev: usize,
    tol: f64,
    max_restarts: usize,
    locked: &[Pair],
    seed: u64,
) -> Result<Vec<Pair>> {
    let n = op.k.nrows();
    let room = n - locked.len();
    let ncv = room.min((2 * nev + 1).max(nev + 32));
    if ncv <= nev {
        return Err(Error::InvalidArgument(format!(
            "Lanczos needs more than {nev} free directions, have {room}"
        )));
    }
    let keep = (nev + (ncv - nev) / 2).min(ncv - 1);
    let mut basis = Basis {
        v: Vec::with_capacity(ncv),
        mv: Vec::with_capacity(ncv),
        locked,
    };
    let mut seed = seed;
    let mut fresh = |basis: &Basis, len: usize| -> Result<(Vec<f64>, Vec<f64>)> {
        for _ in 0..8 {
            let mut w = start_vector(n, seed);
            seed = seed.wrapping_add(1);
            basis.orthogonalize(&mut w, len);
            let mw = op.m.mul_vec(&w);
            let b = dot(&w, &mw).sqrt();
            if b > 1e-8 {
                return Ok((w.iter().map(|x| x / b).collect(), mw.iter().map(|x| x / b).collect()));
            }
        }
        Err(Error::InvalidArgument("cannot extend Krylov basis".into()))
    };
    let (v0, mv0) = fresh(&basis, 0)?;
    basis.v.push(v0);
    basis.mv.push(mv0);

    let mut t = DMatrix::<f64>::zeros(ncv, ncv);
    let mut start = 0;
    let mut threshold = tol;
    let mut best: Vec<Pair> = Vec::new();
    let mut w = vec![0.0; n];
    for _restart in 0..max_restarts {
        let mut next = (Vec::new(), Vec::new());
        let mut beta_last = 0.0;
        for j in start..ncv {
            op.factor.solve_into(&basis.mv[j], &mut w);
            let coef = basis.orthogonalize(&mut w, j + 1);
            for (i, &c) in coef.iter().enumerate() {
                t[(i, j)] = c;
                t[(j, i)] = c;
            }
            let mw = op.m.mul_vec(&w);
            let beta = dot(&w, &mw).max(0.0).sqrt();
            let scale = coef[j].abs().max(1e-300);
            let (vn, mvn, b) = if beta > 1e-12 * scale {
                (
                    w.iter().map(|x| x / beta).collect(),
                    mw.iter().map(|x| x / beta).collect(),
                    beta,
                )
            } else {
                let (a, b) = fresh(&basis, j + 1)?;
                (a, b, 0.0)
            };
            if j + 1 < ncv {
                basis.v.push(vn);
                basis.mv.push(mvn);
            } else {
                next = (vn, mvn);
                beta_last = b;
            }
        }

        let eig = SymmetricEigen::new(t.clone());
        let mut order: Vec<usize> = (0..ncv).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let theta = |i: usize| eig.eigenvalues[order[i]];
        let last_component = |i: usize| eig.eigenvectors[(ncv - 1, order[i])];

        let ritz = |i: usize| -> (Vec<f64>, Vec<f64>) {
            let mut x = vec![0.0; n];
            let mut mx = vec![0.0; n];
            for j in 0..ncv {
                let y = eig.eigenvectors[(j, order[i])];
                axpy(y, &basis.v[j], &mut x);
                axpy(y, &basis.mv[j], &mut mx);
            }
            (x, mx)
        };

        let candidates = (0..nev).all(|i| (beta_last * last_component(i)).abs() <= threshold * theta(i).abs());
        if candidates {
            let mut pairs = Vec::with_capacity(nev);
            for i in 0..nev {
                let (x, mx) = ritz(i);
                let lambda = 1.0 / theta(i) - op.tau;
                let residual = relative_residual(op.k, &x, &mx, lambda);
                pairs.push(Pair {
                    lambda,
                    x,
                    mx,
                    residual,
                });
            }
            if pairs.iter().all(|p| p.residual <= tol * p.lambda.abs().max(1.0)) {
                return Ok(pairs);
            }
            threshold = (threshold * 1e-2).max(1e-15);
            best = pairs;
        }

        // Thick restart on the `keep` largest Ritz values.
        let (mut nv, mut nmv) = (Vec::with_capacity(ncv), Vec::with_capacity(ncv));
        for i in 0..keep {
            let (x, mx) = ritz(i);
            nv.push(x);
            nmv.push(mx);
        }
        t.fill(0.0);
        for i in 0..keep {
            t[(i, i)] = theta(i);
            let s = beta_last * last_component(i);
            t[(i, keep)] = s;
            t[(keep, i)] = s;
        }
        nv.push(next.0);
        nmv.push(next.1);
        basis.v = nv;
        basis.mv = nmv;
        start = keep;
    }
    let converged: Vec<f64> = best
        .iter()
        .filter(|p| p.residual <= tol * p.lambda.abs().max(1.0))
        .map(|p| p.lambda)
        .collect();
    Err(Error::NoConvergence {
        requested: nev,
        converged: converged.len(),
        partial: converged,
    })
}
