//! Dense kernels: Cholesky, Householder tridiagonalization, implicit QL and a
//! one-sided Jacobi SVD for tiny matrices.
//!
//! The tridiagonal reduction and QL iteration follow the EISPACK `tred2` /
//! `tql2` procedures.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "row {i} has wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in 0..i {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Lower Cholesky factor of a symmetric positive definite matrix, or the
/// index of the first non-positive pivot.
pub fn cholesky(a: &SquareMatrix) -> Result<SquareMatrix, usize> {
    let n = a.order();
    let mut l = SquareMatrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Err(j);
        }
        let d = libm::sqrt(d);
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            let (ri, rj) = (i * n, j * n);
            for k in 0..j {
                s -= l.data[ri + k] * l.data[rj + k];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `L x = b` in place.
pub fn forward_substitute(l: &SquareMatrix, b: &mut [f64]) {
    let n = l.order();
    for i in 0..n {
        let s = b[i] - dot(&l.row(i)[..i], &b[..i]);
        b[i] = s / l[(i, i)];
    }
}

/// Solves `L^T x = b` in place.
pub fn backward_substitute_transposed(l: &SquareMatrix, b: &mut [f64]) {
    let n = l.order();
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * b[k];
        }
        b[i] = s / l[(i, i)];
    }
}

/// QL iteration failed to deflate an eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoConvergence {
    pub index: usize,
}

/// Eigen-decomposition of a symmetric matrix: eigenvalues ascending and the
/// matching orthonormal eigenvectors as columns.
pub fn symmetric_eigen(a: &SquareMatrix) -> Result<(Vec<f64>, SquareMatrix), NoConvergence> {
    let n = a.order();
    let mut v = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return Ok((d, v));
    }
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;
    // Sort ascending, permuting vectors alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let mut vs = SquareMatrix::zeros(n);
    let mut ds = vec![0.0; n];
    for (new, &old) in order.iter().enumerate() {
        ds[new] = d[old];
        for r in 0..n {
            vs[(r, new)] = v[(r, old)];
        }
    }
    Ok((ds, vs))
}

/// Householder reduction to tridiagonal form, accumulating the orthogonal
/// transformation in `v`. On exit `d` is the diagonal and `e[1..]` the
/// subdiagonal.
fn tred2(v: &mut SquareMatrix, d: &mut [f64], e: &mut [f64]) {
    let n = v.order();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

const QL_MAX_SWEEPS: usize = 60;

/// Implicit QL with Wilkinson-type shifts on the tridiagonal `(d, e)`,
/// rotating the columns of `v`.
fn tql2(v: &mut SquareMatrix, d: &mut [f64], e: &mut [f64]) -> Result<(), NoConvergence> {
    let n = v.order();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_SWEEPS {
                    return Err(NoConvergence { index: l });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Singular values of the `rows.len() x cols` matrix whose rows are given,
/// by one-sided Jacobi on the columns.
pub fn singular_values(rows: &[Vec<f64>], cols: usize) -> Vec<f64> {
    let mut c: Vec<Vec<f64>> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = dot(&c[p], &c[p]);
                let beta = dot(&c[q], &c[q]);
                let gamma = dot(&c[p], &c[q]);
                if gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = cs * t;
                for k in 0..rows.len() {
                    let a = c[p][k];
                    let b = c[q][k];
                    c[p][k] = cs * a - sn * b;
                    c[q][k] = sn * a + cs * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = c.iter().map(|col| norm2(col)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
