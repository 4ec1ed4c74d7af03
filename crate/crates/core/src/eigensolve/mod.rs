//! Lowest eigenvalues of the pencil K v = λ M v and their extrapolation
//! across refinement levels.

mod cholesky;
mod extrapolate;
mod lanczos;

use nalgebra::{DMatrix, SymmetricEigen};

pub use cholesky::{negative_eigenvalue_count, rcm_ordering, EnvelopeCholesky};
pub use extrapolate::{
    extrapolate, extrapolate_spectrum, trusted, ExtrapolatedSpectrum, TRUST_MAX_JUMP, TRUST_MAX_RATIO,
};

use crate::fem::EigenProblem;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};
use lanczos::{lowest_pairs, relative_residual, Pair, ShiftInvert};

/// Sorted lowest eigenvalues of one refinement level.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSlice {
    pub eigenvalues: Vec<f64>,
    pub level: usize,
    /// ‖Kv − λMv‖ / ‖Mv‖ per eigenvalue.
    pub residual_norms: Vec<f64>,
}

impl SpectrumSlice {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_restarts: usize,
    /// Problems up to this size are solved densely.
    pub dense_limit: usize,
    /// Confirm via an LDLᵀ inertia count that no eigenvalue below the
    /// largest reported one was skipped.
    pub verify_count: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-9,
            max_restarts: 400,
            dense_limit: 400,
            verify_count: true,
        }
    }
}

/// Eigenpairs returned by [`solve_pencil`]; vectors are M-orthonormal.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

pub fn solve_lowest(problem: &EigenProblem, m: usize, tol: f64) -> Result<SpectrumSlice> {
    solve_lowest_with(
        problem,
        m,
        SolverOptions {
            tol,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_lowest_with(problem: &EigenProblem, m: usize, opts: SolverOptions) -> Result<SpectrumSlice> {
    let pairs = solve_pencil(&problem.k, &problem.m, m, opts)?;
    Ok(SpectrumSlice {
        eigenvalues: pairs.values,
        level: problem.level,
        residual_norms: pairs.residuals,
    })
}

/// The `m` smallest eigenpairs of K v = λ M v for symmetric K ⪰ 0, M ≻ 0.
/// Eigenvalues below `tol` in magnitude are reported as exactly 0.
pub fn solve_pencil(k: &CsrMatrix, mm: &CsrMatrix, m: usize, opts: SolverOptions) -> Result<Eigenpairs> {
    let n = k.nrows();
    if k.ncols() != n || mm.nrows() != n || mm.ncols() != n {
        return Err(Error::InvalidArgument(
            "pencil matrices must be square of equal size".into(),
        ));
    }
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "requested {m} eigenvalues of a pencil of size {n}"
        )));
    }
    if !(opts.tol > 0.0 && opts.tol <= 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {} outside (0, 1e-6]",
            opts.tol
        )));
    }
    let mut pairs = if n <= opts.dense_limit || 2 * (m + 2) > n {
        dense_pairs(k, mm, m)?
    } else {
        sparse_pairs(k, mm, m, opts)?
    };
    pairs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    for p in &mut pairs {
        if p.lambda.abs() < opts.tol {
            p.lambda = 0.0;
        }
    }
    if let Some(bad) = pairs.iter().find(|p| p.residual > opts.tol * p.lambda.abs().max(1.0)) {
        return Err(Error::NoConvergence {
            requested: m,
            converged: pairs
                .iter()
                .filter(|p| p.residual <= opts.tol * p.lambda.abs().max(1.0))
                .count(),
            partial: pairs.iter().map(|p| p.lambda).filter(|&l| l < bad.lambda).collect(),
        });
    }
    Ok(Eigenpairs {
        values: pairs.iter().map(|p| p.lambda).collect(),
        residuals: pairs.iter().map(|p| p.residual).collect(),
        vectors: pairs.into_iter().map(|p| p.x).collect(),
    })
}

fn sparse_pairs(k: &CsrMatrix, mm: &CsrMatrix, m: usize, opts: SolverOptions) -> Result<Vec<Pair>> {
    let op = ShiftInvert::new(k, mm)?;
    let mut pairs = lowest_pairs(&op, m, opts.tol, opts.max_restarts, &[], 1)?;
    if !opts.verify_count {
        return Ok(pairs);
    }
    for round in 0..4 {
        pairs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        pairs.truncate(m);
        let top = pairs[m - 1].lambda;
        let sigma = top + 1e-6 * top.abs().max(1.0);
        let shifted = CsrMatrix::linear_combination(1.0, k, -sigma, mm);
        let below = negative_eigenvalue_count(&shifted)?;
        let found = pairs.iter().filter(|p| p.lambda < sigma).count();
        if below <= found {
            return Ok(pairs);
        }
        // Some eigenvalues were skipped: search the complement of what we have.
        let missing = (below - found).min(k.nrows() - pairs.len());
        let extra = lowest_pairs(&op, missing, opts.tol, opts.max_restarts, &pairs, 100 + round)?;
        pairs.extend(extra);
    }
    Err(Error::NoConvergence {
        requested: m,
        converged: 0,
        partial: Vec::new(),
    })
}

fn dense_pairs(k: &CsrMatrix, mm: &CsrMatrix, m: usize) -> Result<Vec<Pair>> {
    let kd = k.to_dense();
    let md = mm.to_dense();
    let chol = md
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Factorization("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Factorization("singular mass factor".into()))?;
    let c = &linv * &kd * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt_inv: DMatrix<f64> = linv.transpose();
    let mut pairs = Vec::with_capacity(m);
    for &i in order.iter().take(m) {
        let x: Vec<f64> = (&lt_inv * eig.eigenvectors.column(i)).iter().copied().collect();
        let mx = mm.mul_vec(&x);
        let lambda = eig.eigenvalues[i];
        let residual = relative_residual(k, &x, &mx, lambda);
        pairs.push(Pair {
            lambda,
            x,
            mx,
            residual,
        });
    }
    Ok(pairs)
}
