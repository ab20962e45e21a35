//! Smallest eigenpairs of the generalized symmetric problem `K u = λ M u`.
//!
//! Two interchangeable paths:
//!
//! * dense: `M = L L^T`, reduce to the standard problem `L^{-1} K L^{-T}`,
//!   tridiagonalize and run implicit QL;
//! * subspace iteration: shift-invert block iteration with an envelope
//!   Cholesky factor of `K + s M` and Rayleigh-Ritz on the block.
//!
//! Both report relative residuals `‖A u − θ M u‖ / ((‖A‖ + |θ| ‖M‖) ‖u‖)`,
//! with infinity norms for the matrices, for the pencil actually solved:
//! `A = K + s M` and `θ = λ + s`, where `s` is the requested shift (zero by
//! default).

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{
    backward_substitute_transposed, cholesky, dot, forward_substitute, norm2, symmetric_eigen,
    SquareMatrix,
};
use crate::sparse::{EnvelopeCholesky, SymmetricSparseMatrix};

/// Orders up to this size use the dense path under [`Method::Auto`].
pub const DENSE_LIMIT: usize = 400;
/// Largest relative residual an accepted eigenpair may have.
pub const RESIDUAL_TOL: f64 = 1e-8;
const ITERATION_TARGET: f64 = 1e-11;
const START_SEED: u64 = 0x5eed_1ab0;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EigenError {
    #[error("mass matrix is not positive definite (pivot {pivot})")]
    MassNotPD { pivot: usize },
    #[error("K + {shift} M is not positive definite; use a positive shift for singular K")]
    ShiftedStiffnessNotPD { shift: f64 },
    #[error("no convergence after {iterations} iterations, best residual {best_residual:e}")]
    ConvergenceFailure {
        iterations: usize,
        best_residual: f64,
    },
    #[error("matrix orders differ: K is {k}, M is {m}")]
    OrderMismatch { k: usize, m: usize },
    #[error("requested {requested} eigenvalues of an order-{order} problem")]
    TooMany { requested: usize, order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Dense,
    SubspaceIteration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenOptions {
    /// Solve `(K + shift M) u = (λ + shift) M u` and subtract the shift.
    pub shift: f64,
    pub method: Method,
    pub max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            shift: 0.0,
            method: Method::Auto,
            max_iterations: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult {
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    /// M-orthonormal eigenvectors over the free degrees of freedom.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub residual_norms: Vec<f64>,
    pub method: Method,
    pub iterations: usize,
}

/// The `count` smallest eigenvalues of `K u = λ M u` with default options.
pub fn smallest_eigs(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    count: usize,
) -> Result<EigenResult, EigenError> {
    smallest_eigs_with(k, m, count, &EigenOptions::default())
}

pub fn smallest_eigs_with(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    count: usize,
    opts: &EigenOptions,
) -> Result<EigenResult, EigenError> {
    let n = k.order();
    if m.order() != n {
        return Err(EigenError::OrderMismatch { k: n, m: m.order() });
    }
    if count > n {
        return Err(EigenError::TooMany {
            requested: count,
            order: n,
        });
    }
    let a = if opts.shift == 0.0 {
        k.clone()
    } else {
        k.add_scaled(opts.shift, m)
    };
    let method = match opts.method {
        Method::Auto if n <= DENSE_LIMIT => Method::Dense,
        Method::Auto => Method::SubspaceIteration,
        other => other,
    };
    let mut res = match method {
        Method::SubspaceIteration if block_size(count, n) < n => {
            subspace_iteration(&a, m, count, opts)?
        }
        _ => dense(&a, m, count)?,
    };
    for v in &mut res.eigenvalues {
        *v -= opts.shift;
    }
    let worst = res.residual_norms.iter().copied().fold(0.0, f64::max);
    if !(worst <= RESIDUAL_TOL) {
        return Err(EigenError::ConvergenceFailure {
            iterations: res.iterations,
            best_residual: worst,
        });
    }
    Ok(res)
}

#[derive(Clone, Copy)]
struct PencilNorms {
    a: f64,
    m: f64,
}

impl PencilNorms {
    fn of(a: &SymmetricSparseMatrix, m: &SymmetricSparseMatrix) -> Self {
        PencilNorms {
            a: a.row_sum_norm(),
            m: m.row_sum_norm(),
        }
    }

    fn relative_residual(self, au: &[f64], mu: &[f64], u_norm: f64, theta: f64) -> f64 {
        let r: Vec<f64> = au.iter().zip(mu).map(|(a, b)| a - theta * b).collect();
        let denom = (self.a + theta.abs() * self.m) * u_norm;
        if denom == 0.0 {
            norm2(&r)
        } else {
            norm2(&r) / denom
        }
    }
}

fn dense(
    a: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    count: usize,
) -> Result<EigenResult, EigenError> {
    let n = a.order();
    let norms = PencilNorms::of(a, m);
    let l = cholesky(&m.to_dense()).map_err(|pivot| EigenError::MassNotPD { pivot })?;
    let ad = a.to_dense();
    // wt row i = L^{-1} (column i of A)
    let mut wt = SquareMatrix::zeros(n);
    for i in 0..n {
        let mut col = ad.row(i).to_vec();
        forward_substitute(&l, &mut col);
        for (j, v) in col.into_iter().enumerate() {
            wt[(i, j)] = v;
        }
    }
    let mut c = SquareMatrix::zeros(n);
    for j in 0..n {
        let mut col = wt.column(j);
        forward_substitute(&l, &mut col);
        for (i, v) in col.into_iter().enumerate() {
            c[(i, j)] = v;
        }
    }
    c.symmetrize();
    let (theta, y) = symmetric_eigen(&c).map_err(|_| EigenError::ConvergenceFailure {
        iterations: 0,
        best_residual: f64::INFINITY,
    })?;
    let mut eigenvalues = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for j in 0..count {
        let mut u = y.column(j);
        backward_substitute_transposed(&l, &mut u);
        let au = a.mul_vec(&u);
        let mu = m.mul_vec(&u);
        residuals.push(norms.relative_residual(&au, &mu, norm2(&u), theta[j]));
        eigenvalues.push(theta[j]);
        vectors.push(u);
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors: Some(vectors),
        residual_norms: residuals,
        method: Method::Dense,
        iterations: 0,
    })
}

fn block_size(count: usize, n: usize) -> usize {
    (2 * count).max(count + 8).min(n)
}

/// M-orthonormalizes the columns of `y` in place (two Gram-Schmidt passes)
/// and returns `M y`.
fn m_orthonormalize(
    y: &mut [Vec<f64>],
    m: &SymmetricSparseMatrix,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let mut my: Vec<Vec<f64>> = Vec::with_capacity(y.len());
    for j in 0..y.len() {
        for _attempt in 0..3 {
            for _pass in 0..2 {
                let (done, rest) = y.split_at_mut(j);
                let yj = &mut rest[0];
                for (yi, myi) in done.iter().zip(&my) {
                    let c = dot(myi, yj);
                    for (a, b) in yj.iter_mut().zip(yi) {
                        *a -= c * b;
                    }
                }
            }
            let mj = m.mul_vec(&y[j]);
            let nrm = libm::sqrt(dot(&y[j], &mj));
            if nrm > 1e-300 && nrm.is_finite() {
                y[j].iter_mut().for_each(|v| *v /= nrm);
                my.push(mj.into_iter().map(|v| v / nrm).collect());
                break;
            }
            // Column collapsed into the span of the others: restart it.
            y[j] = random_vector(y[j].len(), rng);
        }
        if my.len() != j + 1 {
            let mj = m.mul_vec(&y[j]);
            my.push(mj);
        }
    }
    my
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n)
        .map(|_| (rng.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0)
        .collect()
}

fn combine(cols: &[Vec<f64>], coef: &SquareMatrix, j: usize) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (i, c) in cols.iter().enumerate() {
        let w = coef[(i, j)];
        if w != 0.0 {
            for (o, v) in out.iter_mut().zip(c) {
                *o += w * v;
            }
        }
    }
    out
}

fn subspace_iteration(
    a: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    count: usize,
    opts: &EigenOptions,
) -> Result<EigenResult, EigenError> {
    let n = a.order();
    let p = block_size(count, n);
    let norms = PencilNorms::of(a, m);
    let factor = EnvelopeCholesky::factor(a)
        .map_err(|_| EigenError::ShiftedStiffnessNotPD { shift: opts.shift })?;
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x: Vec<Vec<f64>> = (0..p).map(|_| random_vector(n, &mut rng)).collect();
    let mut best: Option<EigenResult> = None;
    let mut best_worst = f64::INFINITY;
    for iter in 1..=opts.max_iterations.max(1) {
        let mut y: Vec<Vec<f64>> = x.iter().map(|xj| factor.solve(&m.mul_vec(xj))).collect();
        let my = m_orthonormalize(&mut y, m, &mut rng);
        let ay: Vec<Vec<f64>> = y.iter().map(|yj| a.mul_vec(yj)).collect();
        let mut h = SquareMatrix::zeros(p);
        for i in 0..p {
            for j in i..p {
                let v = dot(&y[i], &ay[j]);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        h.symmetrize();
        let (theta, v) = symmetric_eigen(&h).map_err(|_| EigenError::ConvergenceFailure {
            iterations: iter,
            best_residual: best_worst,
        })?;
        x = (0..p).map(|j| combine(&y, &v, j)).collect();
        let residuals: Vec<f64> = (0..count)
            .map(|j| {
                let u_norm = norm2(&x[j]);
                norms.relative_residual(
                    &combine(&ay, &v, j),
                    &combine(&my, &v, j),
                    u_norm,
                    theta[j],
                )
            })
            .collect();
        let worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst < best_worst || best.is_none() {
            best_worst = worst;
            best = Some(EigenResult {
                eigenvalues: theta[..count].to_vec(),
                eigenvectors: Some(x[..count].to_vec()),
                residual_norms: residuals,
                method: Method::SubspaceIteration,
                iterations: iter,
            });
        }
        if worst <= ITERATION_TARGET {
            break;
        }
    }
    Ok(best.expect("at least one iteration"))
}
