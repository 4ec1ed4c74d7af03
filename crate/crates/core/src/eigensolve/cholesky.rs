//! Envelope (profile) Cholesky factorization under reverse Cuthill–McKee
//! ordering.

use std::collections::VecDeque;

use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Reverse Cuthill–McKee permutation of a structurally symmetric matrix.
/// `perm[new] = old`.
pub fn rcm_ordering(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).0.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut scratch = Vec::new();
    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).unwrap();
        let start = pseudo_peripheral(a, seed, &degree);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            scratch.clear();
            scratch.extend(a.row(v).0.iter().copied().filter(|&u| !visited[u]));
            scratch.sort_by_key(|&u| (degree[u], u));
            for &u in &scratch {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

/// BFS levels from `root`: (eccentricity, a minimum-degree node of the last level).
fn bfs_last_level(a: &CsrMatrix, root: usize, degree: &[usize]) -> (usize, usize) {
    let n = a.nrows();
    let mut level = vec![usize::MAX; n];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut last = root;
    while let Some(v) = queue.pop_front() {
        let l = level[v];
        if l > level[last] || (l == level[last] && (degree[v], v) < (degree[last], last)) {
            last = v;
        }
        for &u in a.row(v).0 {
            if level[u] == usize::MAX {
                level[u] = l + 1;
                queue.push_back(u);
            }
        }
    }
    (level[last], last)
}

fn pseudo_peripheral(a: &CsrMatrix, seed: usize, degree: &[usize]) -> usize {
    let mut root = seed;
    let (mut ecc, mut cand) = bfs_last_level(a, root, degree);
    for _ in 0..8 {
        let (e, c) = bfs_last_level(a, cand, degree);
        if e <= ecc {
            break;
        }
        root = cand;
        ecc = e;
        cand = c;
    }
    root
}

/// Row envelope of A(perm, perm): first column per row, row offsets and
/// the lower-triangular entries scattered into envelope storage.
fn envelope_layout(a: &CsrMatrix, perm: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    let n = a.nrows();
    let mut inv = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let mut first: Vec<usize> = (0..n).collect();
    for (new, &old) in perm.iter().enumerate() {
        for &c in a.row(old).0 {
            first[new] = first[new].min(inv[c]);
        }
    }
    let mut start = vec![0usize; n + 1];
    for i in 0..n {
        start[i + 1] = start[i] + (i - first[i] + 1);
    }
    let mut data = vec![0.0; start[n]];
    for (new, &old) in perm.iter().enumerate() {
        let (cols, vals) = a.row(old);
        for (&c, &v) in cols.iter().zip(vals) {
            let j = inv[c];
            if j <= new {
                data[start[new] + j - first[new]] = v;
            }
        }
    }
    (first, start, data)
}

/// Number of negative pivots in an unpivoted envelope LDLᵀ of a symmetric
/// matrix, which by Sylvester's law equals its number of negative
/// eigenvalues.
pub fn negative_eigenvalue_count(a: &CsrMatrix) -> Result<usize> {
    let n = a.nrows();
    let perm = rcm_ordering(a);
    let (first, start, mut data) = envelope_layout(a, &perm);
    let mut d = vec![0.0; n];
    let mut s = Vec::new();
    let mut negative = 0;
    for i in 0..n {
        let fi = first[i];
        let (done, row) = data.split_at_mut(start[i]);
        let row = &mut row[..i - fi + 1];
        // s_j = l_ij d_j, accumulated in place of the row
        s.clear();
        for j in fi..i {
            let fj = first[j];
            let k0 = fi.max(fj);
            let lj = &done[start[j]..start[j + 1]];
            let dot: f64 = s[k0 - fi..j - fi]
                .iter()
                .zip(&lj[k0 - fj..j - fj])
                .map(|(x, y): (&f64, &f64)| x * y)
                .sum();
            s.push(row[j - fi] - dot);
        }
        let mut di = row[i - fi];
        for (j, &sj) in (fi..i).zip(&s) {
            let l = sj / d[j];
            row[j - fi] = l;
            di -= sj * l;
        }
        if di == 0.0 || !di.is_finite() {
            return Err(Error::Factorization(format!("zero pivot at row {i} of {n}")));
        }
        row[i - fi] = 1.0;
        d[i] = di;
        if di < 0.0 {
            negative += 1;
        }
    }
    Ok(negative)
}

/// Lower-triangular factor L with A(perm, perm) = L Lᵀ, stored row by row
/// from each row's first nonzero column to the diagonal.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<EnvelopeCholesky> {
        let perm = rcm_ordering(a);
        Self::factor_with(a, perm)
    }

    pub fn factor_with(a: &CsrMatrix, perm: Vec<usize>) -> Result<EnvelopeCholesky> {
        let n = a.nrows();
        let (first, start, mut data) = envelope_layout(a, &perm);
        for i in 0..n {
            let fi = first[i];
            let (done, row) = data.split_at_mut(start[i]);
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let lj = &done[start[j]..start[j + 1]];
                let dot: f64 = row[k0 - fi..j - fi]
                    .iter()
                    .zip(&lj[k0 - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                row[j - fi] = (row[j - fi] - dot) / lj[j - fj];
            }
            let sq: f64 = row[..i - fi].iter().map(|x| x * x).sum();
            let d = row[i - fi] - sq;
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::Factorization(format!(
                    "nonpositive pivot {d:e} at row {i} of {n}"
                )));
            }
            row[i - fi] = d.sqrt();
        }
        Ok(EnvelopeCholesky {
            perm,
            first,
            start,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves A x = b.
    pub fn solve_into(&self, b: &[f64], x: &mut [f64]) {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (v, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *v -= l * yi;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; b.len()];
        self.solve_into(b, &mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    fn grid(nx: usize) -> CsrMatrix {
        let id = |i: usize, j: usize| i * nx + j;
        let mut t = Vec::new();
        for i in 0..nx {
            for j in 0..nx {
                t.push((id(i, j), id(i, j), 4.5));
                if i + 1 < nx {
                    t.push((id(i, j), id(i + 1, j), -1.0));
                    t.push((id(i + 1, j), id(i, j), -1.0));
                }
                if j + 1 < nx {
                    t.push((id(i, j), id(i, j + 1), -1.0));
                    t.push((id(i, j + 1), id(i, j), -1.0));
                }
            }
        }
        CsrMatrix::from_triplets(nx * nx, nx * nx, t)
    }

    #[test]
    fn solves_tridiagonal() {
        let a = laplacian_1d(50);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.mul_vec(&x);
        let f = EnvelopeCholesky::factor(&a).unwrap();
        let y = f.solve(&b);
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-10));
        assert!(f.envelope_size() <= 2 * 50);
    }

    #[test]
    fn solves_grid_with_rcm() {
        let a = grid(20);
        let x: Vec<f64> = (0..400).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
        let b = a.mul_vec(&x);
        let f = EnvelopeCholesky::factor(&a).unwrap();
        let y = f.solve(&b);
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-10));
        assert!(f.envelope_size() < 400 * 30);
    }

    #[test]
    fn rcm_is_a_permutation() {
        let a = grid(7);
        let mut p = rcm_ordering(&a);
        p.sort_unstable();
        assert_eq!(p, (0..49).collect::<Vec<_>>());
    }

    #[test]
    fn handles_disconnected_blocks() {
        let t = vec![(0, 0, 2.0), (1, 1, 3.0), (2, 2, 4.0), (1, 2, 1.0), (2, 1, 1.0)];
        let a = CsrMatrix::from_triplets(3, 3, t);
        let f = EnvelopeCholesky::factor(&a).unwrap();
        let y = f.solve(&[2.0, 4.0, 5.0]);
        assert!((y[0] - 1.0).abs() < 1e-14 && (y[1] - 1.0).abs() < 1e-14 && (y[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        let n = 40;
        let a = laplacian_1d(n);
        for sigma in [0.05, 0.7, 1.9, 3.3] {
            let shifted = CsrMatrix::linear_combination(1.0, &a, -sigma, &CsrMatrix::identity(n));
            let exact = (1..=n)
                .filter(|&k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos() < sigma)
                .count();
            assert_eq!(negative_eigenvalue_count(&shifted).unwrap(), exact);
        }
        assert_eq!(negative_eigenvalue_count(&grid(9)).unwrap(), 0);
    }

    #[test]
    fn indefinite_matrix_fails() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(matches!(EnvelopeCholesky::factor(&a), Err(Error::Factorization(_))));
    }
}
