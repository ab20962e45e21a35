//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use speclab_core::geometry::{build_polygon, Label, Point, PolygonDomain};
use speclab_core::identity::PolynomialField;

pub fn polygon(points: &[(f64, f64)], labels: &[Label]) -> PolygonDomain {
    let pts: Vec<Point> = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
    build_polygon(&pts, labels).unwrap()
}

pub fn pi_square(labels: &[Label]) -> PolygonDomain {
    polygon(&[(0.0, 0.0), (PI, 0.0), (PI, PI), (0.0, PI)], labels)
}

pub fn regular(n: usize, labels: &[Label]) -> PolygonDomain {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect();
    polygon(&pts, labels)
}

/// Number of eigenvalues of `K x = λ M x` below `lambda`: the negative
/// pivots of Gaussian elimination on `K − λ M`, i.e. the sign changes in the
/// sequence of leading principal minors.
pub fn count_below(k: &[Vec<f64>], m: &[Vec<f64>], lambda: f64) -> usize {
    let n = k.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| k[i][j] - lambda * m[i][j]).collect())
        .collect();
    let mut negative = 0;
    for p in 0..n {
        let mut piv = a[p][p];
        if piv == 0.0 {
            piv = -1e-300;
        }
        if piv < 0.0 {
            negative += 1;
        }
        for i in p + 1..n {
            let f = a[i][p] / piv;
            for j in p..n {
                a[i][j] -= f * a[p][j];
            }
        }
    }
    negative
}

/// All roots of `det(K − λ M)` by bisection on the minor-sequence count.
pub fn determinant_roots(k: &[Vec<f64>], m: &[Vec<f64>], lo: f64, hi: f64) -> Vec<f64> {
    let n = k.len();
    (0..n)
        .map(|idx| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if count_below(k, m, mid) > idx {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Random symmetric positive semidefinite `K = B Bᵀ` (rank may be deficient)
/// and positive definite `M = C Cᵀ + n I`.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rank = rng.gen_range(1..=n);
    let b: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..rank).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let c: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let k = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..rank).map(|r| b[i][r] * b[j][r]).sum())
                .collect()
        })
        .collect();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).map(|r| c[i][r] * c[j][r]).sum::<f64>()
                        + if i == j { n as f64 } else { 0.0 }
                })
                .collect()
        })
        .collect();
    (k, m)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `∫ x^a y^b` over the unit disk, from `∫ r^(a+b+1) dr · ∫ cos^a sin^b dθ`.
pub fn disk_moment(a: usize, b: usize) -> f64 {
    if a % 2 == 1 || b % 2 == 1 {
        return 0.0;
    }
    let dfact = |n: usize| -> f64 {
        let mut p = 1.0;
        let mut i = n as i64;
        while i > 1 {
            p *= i as f64;
            i -= 2;
        }
        p
    };
    // ∫_0^{2π} cos^a sin^b = 2π (a−1)!! (b−1)!! / (a+b)!! for even a, b.
    let angular = 2.0 * PI * dfact(a.saturating_sub(1)) * dfact(b.saturating_sub(1)) / dfact(a + b);
    angular / (a + b + 2) as f64
}

/// `∫ f g` over the unit disk by expanding the product term by term.
pub fn disk_product_integral(f: &PolynomialField, g: &PolynomialField) -> f64 {
    let mut s = 0.0;
    for (c, a, b) in f.terms() {
        for (d, e, h) in g.terms() {
            s += c * d * disk_moment(a + e, b + h);
        }
    }
    s
}
