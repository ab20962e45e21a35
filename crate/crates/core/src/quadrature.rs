//! Gauss rules on intervals, triangles and the unit disk.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geometry::Point;

/// `n`-point Gauss–Legendre nodes and weights on `[0, 1]`, exact for
/// polynomials of degree `2n − 1`. Nodes ascend.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-like initial guess for the i-th largest root on [-1, 1].
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Points and weights of a rule exact for polynomials of total degree
/// `degree` on the triangle `abc`, obtained by collapsing a tensor Gauss rule
/// on the square.
pub fn triangle_rule(a: Point, b: Point, c: Point, degree: usize) -> Vec<(Point, f64)> {
    let n = (degree + 2).div_ceil(2);
    let (x, w) = gauss_legendre(n);
    let twice_area = crate::geometry::orient(a, b, c).abs();
    let mut out = Vec::with_capacity(n * n);
    for (&s, &ws) in x.iter().zip(&w) {
        for (&t, &wt) in x.iter().zip(&w) {
            let xi = s;
            let eta = t * (1.0 - s);
            let p = a.add(b.sub(a).scale(xi)).add(c.sub(a).scale(eta));
            out.push((p, ws * wt * (1.0 - s) * twice_area));
        }
    }
    out
}

/// Polar tensor rule on the unit disk, exact for polynomials in `x, y` of
/// total degree `degree`: Gauss in `r` (the integrand times `r` has degree
/// `degree + 1`) and the trapezoid rule in `θ` with `degree + 1` points.
pub fn disk_rule(degree: usize) -> Vec<(Point, f64)> {
    let nr = (degree + 2).div_ceil(2);
    let nt = degree + 1;
    let (r, w) = gauss_legendre(nr);
    let dt = 2.0 * PI / nt as f64;
    let mut out = Vec::with_capacity(nr * nt);
    for (&ri, &wi) in r.iter().zip(&w) {
        for j in 0..nt {
            let t = j as f64 * dt;
            let p = Point::new(ri * libm::cos(t), ri * libm::sin(t));
            out.push((p, wi * ri * dt));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_moments() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for deg in 0..2 * n {
                let q: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(x, w)| w * libm::pow(*x, deg as f64))
                    .sum();
                assert!(
                    (q - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14,
                    "n={n} deg={deg}"
                );
            }
        }
    }

    #[test]
    fn three_point_nodes() {
        let (x, w) = gauss_legendre(3);
        let h = 0.5 * libm::sqrt(0.6);
        assert!((x[0] - (0.5 - h)).abs() < 1e-15);
        assert!((x[1] - 0.5).abs() < 1e-15);
        assert!((w[1] - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_monomials() {
        // ∫_T x^a y^b over the reference triangle is a! b! / (a + b + 2)!.
        let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
        let rule = triangle_rule(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            10,
        );
        for a in 0..=10 {
            for b in 0..=10 - a {
                let q: f64 = rule
                    .iter()
                    .map(|(p, w)| w * libm::pow(p.x, a as f64) * libm::pow(p.y, b as f64))
                    .sum();
                let want = fact(a) * fact(b) / fact(a + b + 2);
                assert!((q - want).abs() < 1e-15, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn disk_area_and_moments() {
        let rule = disk_rule(4);
        let area: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((area - PI).abs() < 1e-14);
        let x4: f64 = rule.iter().map(|(p, w)| w * libm::pow(p.x, 4.0)).sum();
        assert!((x4 - PI / 8.0).abs() < 1e-14);
    }
}
