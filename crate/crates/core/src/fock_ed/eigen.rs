use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sparse::SymmetricSparse;
use crate::error::{Error, Result};

/// Matrices up to this dimension are diagonalized densely.
pub const DENSE_THRESHOLD: usize = 512;

const DENSE_REFUSE: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenOptions {
    /// Residual target relative to `‖M‖_∞`.
    pub tol: f64,
    pub seed: u64,
    pub max_krylov: usize,
    pub max_restarts: usize,
    pub dense_threshold: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            seed: 0,
            max_krylov: 120,
            max_restarts: 400,
            dense_threshold: DENSE_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    /// Ascending, with multiplicity.
    pub values: Vec<f64>,
    /// `‖Mx - λx‖` for each returned pair.
    pub residuals: Vec<f64>,
    pub method: EigenMethod,
    pub seed: u64,
}

/// The `count` lowest eigenvalues of `m` (fewer if `m` is smaller).
pub fn lowest_eigenvalues(m: &SymmetricSparse, count: usize, opts: &EigenOptions) -> Result<EigenResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let count = count.min(m.dim());
    if count == 0 {
        return Ok(EigenResult {
            values: vec![],
            residuals: vec![],
            method: EigenMethod::Dense,
            seed: opts.seed,
        });
    }
    if m.dim() <= opts.dense_threshold {
        dense(m, count, opts.seed)
    } else {
        lanczos(m, count, opts)
    }
}

/// Smallest eigenvalue of a symmetric dense matrix.
pub fn min_eigenvalue_dense(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() > DENSE_REFUSE {
        return Err(Error::TooLarge(format!("dense diagonalization of dimension {}", m.nrows())));
    }
    if m.nrows() == 0 {
        return Err(Error::param("matrix", "empty"));
    }
    let eig = SymmetricEigen::new(m.clone());
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

fn dense(m: &SymmetricSparse, count: usize, seed: u64) -> Result<EigenResult> {
    let eig = SymmetricEigen::new(m.to_dense());
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut y = vec![0.0; m.dim()];
    for &i in order.iter().take(count) {
        let lambda = eig.eigenvalues[i];
        let x: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        m.matvec(&x, &mut y);
        values.push(lambda);
        residuals.push(residual_norm(&y, &x, lambda));
    }
    Ok(EigenResult {
        values,
        residuals,
        method: EigenMethod::Dense,
        seed,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual_norm(mx: &[f64], x: &[f64], lambda: f64) -> f64 {
    mx.iter().zip(x).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt()
}

/// Gram-Schmidt twice against every vector of every set.
fn orthogonalize(v: &mut [f64], sets: &[&[Vec<f64>]]) {
    for _ in 0..2 {
        for b in sets.iter().flat_map(|s| s.iter()) {
            let c = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Lanczos with full reorthogonalization. Eigenpairs are found one at a
/// time; each converged vector is locked and projected out of later runs,
/// so repeated eigenvalues are returned with their multiplicity.
fn lanczos(m: &SymmetricSparse, count: usize, opts: &EigenOptions) -> Result<EigenResult> {
    let n = m.dim();
    let scale = m.norm_estimate().max(f64::MIN_POSITIVE);
    let target = opts.tol * scale;
    let krylov = opts.max_krylov.clamp(2, n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut values = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut mx = vec![0.0; n];

    while locked.len() < count {
        let mut start: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        let mut best = f64::INFINITY;
        let mut converged = false;
        for _ in 0..opts.max_restarts {
            orthogonalize(&mut start, &[&locked]);
            let s = norm(&start);
            if s == 0.0 {
                start = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
                continue;
            }
            start.iter_mut().for_each(|x| *x /= s);

            let mut basis: Vec<Vec<f64>> = vec![start.clone()];
            let mut alpha = Vec::with_capacity(krylov);
            let mut beta: Vec<f64> = Vec::with_capacity(krylov);
            loop {
                let v = basis.last().unwrap();
                let mut w = vec![0.0; n];
                m.matvec(v, &mut w);
                alpha.push(dot(&w, v));
                orthogonalize(&mut w, &[&locked, &basis]);
                let b = norm(&w);
                if basis.len() >= krylov || b <= 1e-14 * scale {
                    break;
                }
                w.iter_mut().for_each(|x| *x /= b);
                beta.push(b);
                basis.push(w);
            }

            let k = alpha.len();
            let mut t = DMatrix::zeros(k, k);
            for i in 0..k {
                t[(i, i)] = alpha[i];
                if i + 1 < k {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (imin, &theta) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .unwrap();
            let y = eig.eigenvectors.column(imin);
            let mut x = vec![0.0; n];
            for (coef, v) in y.iter().zip(&basis) {
                x.iter_mut().zip(v).for_each(|(a, b)| *a += coef * b);
            }
            orthogonalize(&mut x, &[&locked]);
            let xn = norm(&x);
            x.iter_mut().for_each(|a| *a /= xn);
            m.matvec(&x, &mut mx);
            let r = residual_norm(&mx, &x, theta);
            best = best.min(r);
            if r <= target {
                values.push(theta);
                residuals.push(r);
                locked.push(x);
                converged = true;
                break;
            }
            start = x;
        }
        if !converged {
            let mut all = residuals.clone();
            all.push(best);
            return Err(Error::NoConvergence {
                iterations: opts.max_restarts,
                residuals: all,
            });
        }
    }

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(EigenResult {
        values: order.iter().map(|&i| values[i]).collect(),
        residuals: order.iter().map(|&i| residuals[i]).collect(),
        method: EigenMethod::Lanczos,
        seed: opts.seed,
    })
}
