//! The second-derivative integral identity
//!
//! ```text
//! ∫_Ω (∂_k ∂_m u)(∂_k ∂_j u) dx = ∫_Ω (∂_m ∂_j u)(∂_k ∂_k u) dx
//! ```
//!
//! for `u` vanishing on the boundary of a convex polygon, checked with
//! quadrature that is exact for the polynomial integrands, and its failure on
//! the unit disk.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{is_convex, Point, PolygonDomain};
use crate::meshing::{triangulate, MeshError};
use crate::quadrature::{disk_rule, triangle_rule};

pub const MAX_DEGREE: usize = 12;
/// Boundary samples used to confirm that `u` vanishes on the boundary.
pub const BOUNDARY_SAMPLES: usize = 100;
/// Allowed `|u|` on the boundary relative to a bound of `|u|` on the domain.
pub const BOUNDARY_TOL: f64 = 1e-10;

const N: usize = MAX_DEGREE + 1;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum IdentityError {
    #[error("polynomial degree {0} exceeds {MAX_DEGREE}")]
    DegreeOverflow(usize),
    #[error("u = {value:e} at boundary point ({}, {}) exceeds {limit:e}", point.x, point.y)]
    BoundaryConditionViolated {
        point: Point,
        value: f64,
        limit: f64,
    },
    #[error("domain is not convex")]
    NotConvex,
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const ALL: [Axis; 2] = [Axis::X, Axis::Y];

    /// One-based axis number.
    pub fn from_index(i: usize) -> Option<Axis> {
        match i {
            1 => Some(Axis::X),
            2 => Some(Axis::Y),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
        }
    }
}

/// Bivariate polynomial `Σ c[a][b] x^a y^b` of total degree at most 12.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialField {
    coeffs: [[f64; N]; N],
}

impl Default for PolynomialField {
    fn default() -> Self {
        Self::zero()
    }
}

impl PolynomialField {
    pub fn zero() -> Self {
        PolynomialField {
            coeffs: [[0.0; N]; N],
        }
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.coeffs[0][0] = c;
        p
    }

    /// `c x^a y^b`.
    pub fn monomial(c: f64, a: usize, b: usize) -> Result<Self, IdentityError> {
        if a + b > MAX_DEGREE {
            return Err(IdentityError::DegreeOverflow(a + b));
        }
        let mut p = Self::zero();
        p.coeffs[a][b] = c;
        Ok(p)
    }

    /// `c0 + cx x + cy y`.
    pub fn affine(c0: f64, cx: f64, cy: f64) -> Self {
        let mut p = Self::constant(c0);
        p.coeffs[1][0] = cx;
        p.coeffs[0][1] = cy;
        p
    }

    /// Builds from `(coefficient, a, b)` terms; repeated powers add up.
    pub fn from_terms(terms: &[(f64, usize, usize)]) -> Result<Self, IdentityError> {
        let mut p = Self::zero();
        for &(c, a, b) in terms {
            if a + b > MAX_DEGREE {
                return Err(IdentityError::DegreeOverflow(a + b));
            }
            p.coeffs[a][b] += c;
        }
        Ok(p)
    }

    pub fn coefficient(&self, a: usize, b: usize) -> f64 {
        if a < N && b < N {
            self.coeffs[a][b]
        } else {
            0.0
        }
    }

    /// Nonzero terms as `(coefficient, a, b)`, ordered by `(a, b)`.
    pub fn terms(&self) -> Vec<(f64, usize, usize)> {
        let mut out = Vec::new();
        for a in 0..N {
            for b in 0..N - a {
                if self.coeffs[a][b] != 0.0 {
                    out.push((self.coeffs[a][b], a, b));
                }
            }
        }
        out
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms().iter().map(|t| t.1 + t.2).max().unwrap_or(0)
    }

    pub fn eval(&self, p: Point) -> f64 {
        let mut s = 0.0;
        for a in (0..N).rev() {
            let mut row = 0.0;
            for b in (0..N - a).rev() {
                row = row * p.y + self.coeffs[a][b];
            }
            s = s * p.x + row;
        }
        s
    }

    pub fn derivative(&self, axis: Axis) -> Self {
        let mut d = Self::zero();
        for a in 0..N {
            for b in 0..N - a {
                let c = self.coeffs[a][b];
                match axis {
                    Axis::X if a > 0 => d.coeffs[a - 1][b] += a as f64 * c,
                    Axis::Y if b > 0 => d.coeffs[a][b - 1] += b as f64 * c,
                    _ => {}
                }
            }
        }
        d
    }

    pub fn second_derivative(&self, first: Axis, second: Axis) -> Self {
        self.derivative(first).derivative(second)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for a in 0..N {
            for b in 0..N - a {
                s.coeffs[a][b] += other.coeffs[a][b];
            }
        }
        s
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut s = self.clone();
        s.coeffs.iter_mut().flatten().for_each(|v| *v *= c);
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self, IdentityError> {
        let degree = self.degree() + other.degree();
        if degree > MAX_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(IdentityError::DegreeOverflow(degree));
        }
        let mut p = Self::zero();
        for (c, a, b) in self.terms() {
            for (d, e, f) in other.terms() {
                p.coeffs[a + e][b + f] += c * d;
            }
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|&c| c == 0.0)
    }

    /// `Σ |c_ab| R^(a+b)`, an upper bound of `|p|` on the square `[−R, R]²`.
    pub fn magnitude_bound(&self, radius: f64) -> f64 {
        self.terms()
            .iter()
            .map(|&(c, a, b)| c.abs() * libm::pow(radius, (a + b) as f64))
            .sum()
    }
}

/// `extra · Π ℓ_i` with `ℓ_i(x) = ν_i · (p_i − x)`, `ν_i` the outward unit
/// normal and `p_i` a point of side `i`. Each `ℓ_i` vanishes on its side and
/// is positive inside.
pub fn bubble(
    domain: &PolygonDomain,
    extra: &PolynomialField,
) -> Result<PolynomialField, IdentityError> {
    if !is_convex(domain) {
        return Err(IdentityError::NotConvex);
    }
    let degree = domain.len() + extra.degree();
    if degree > MAX_DEGREE {
        return Err(IdentityError::DegreeOverflow(degree));
    }
    let mut u = extra.clone();
    for s in domain.segments() {
        let p = domain.vertices()[s.start];
        let side = PolynomialField::affine(s.normal.dot(p), -s.normal.x, -s.normal.y);
        u = u.mul(&side)?;
    }
    Ok(u)
}

#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    Polygon(&'a PolygonDomain),
    UnitDisk,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub residual: f64,
    /// `L¹` norms of the two integrands.
    pub lhs_norm: f64,
    pub rhs_norm: f64,
}

impl IdentityResidual {
    /// `|residual| / (‖lhs integrand‖₁ + ‖rhs integrand‖₁)`, and the plain
    /// residual when both integrands vanish.
    pub fn relative(&self) -> f64 {
        let scale = self.lhs_norm + self.rhs_norm;
        if scale == 0.0 {
            self.residual.abs()
        } else {
            self.residual.abs() / scale
        }
    }
}

fn boundary_samples(region: Region<'_>) -> Vec<Point> {
    match region {
        Region::UnitDisk => (0..BOUNDARY_SAMPLES)
            .map(|i| {
                let t = 2.0 * core::f64::consts::PI * i as f64 / BOUNDARY_SAMPLES as f64;
                Point::new(libm::cos(t), libm::sin(t))
            })
            .collect(),
        Region::Polygon(d) => {
            let perimeter = d.perimeter();
            let mut out = Vec::with_capacity(BOUNDARY_SAMPLES);
            let mut seg = 0;
            let mut walked = 0.0;
            for i in 0..BOUNDARY_SAMPLES {
                let s = (i as f64 + 0.5) / BOUNDARY_SAMPLES as f64 * perimeter;
                while seg + 1 < d.len() && s > walked + d.segment_length(seg) {
                    walked += d.segment_length(seg);
                    seg += 1;
                }
                let sg = d.segments()[seg];
                let t = ((s - walked) / d.segment_length(seg)).clamp(0.0, 1.0);
                out.push(d.vertices()[sg.start].lerp(d.vertices()[sg.end], t));
            }
            out
        }
    }
}

/// Checks that `u` vanishes on the boundary of `region` at the sample points.
pub fn check_boundary(u: &PolynomialField, region: Region<'_>) -> Result<(), IdentityError> {
    let radius = match region {
        Region::UnitDisk => 1.0,
        Region::Polygon(d) => d
            .vertices()
            .iter()
            .map(|v| v.x.abs().max(v.y.abs()))
            .fold(0.0, f64::max),
    };
    let limit = BOUNDARY_TOL * u.magnitude_bound(radius);
    for point in boundary_samples(region) {
        let value = u.eval(point);
        if !(value.abs() <= limit) {
            return Err(IdentityError::BoundaryConditionViolated {
                point,
                value,
                limit,
            });
        }
    }
    Ok(())
}

/// `∫ (∂_k∂_m u)(∂_k∂_j u) − ∫ (∂_m∂_j u)(∂_k∂_k u)` over `region`.
pub fn identity_residual(
    u: &PolynomialField,
    j: Axis,
    k: Axis,
    m: Axis,
    region: Region<'_>,
) -> Result<IdentityResidual, IdentityError> {
    check_boundary(u, region)?;
    let degree = 2 * u.degree().saturating_sub(2);
    let rule: Vec<(Point, f64)> = match region {
        Region::UnitDisk => disk_rule(degree),
        Region::Polygon(d) => {
            let mesh = triangulate(d)?;
            mesh.triangles
                .iter()
                .flat_map(|t| {
                    triangle_rule(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]], degree)
                })
                .collect()
        }
    };
    let integrate = |f: &PolynomialField, g: &PolynomialField| -> (f64, f64) {
        rule.iter().fold((0.0, 0.0), |(s, a), &(p, w)| {
            let v = w * f.eval(p) * g.eval(p);
            (s + v, a + v.abs())
        })
    };
    let (lhs, lhs_norm) = integrate(&u.second_derivative(k, m), &u.second_derivative(k, j));
    let (rhs, rhs_norm) = integrate(&u.second_derivative(m, j), &u.second_derivative(k, k));
    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: lhs - rhs,
        lhs_norm,
        rhs_norm,
    })
}

/// Relative residual below which the identity counts as certified.
pub const CERTIFY_TOL: f64 = 1e-9;

/// Five multipliers for the bubble function: `1`, `x`, an affine field, a
/// bilinear field and a quadratic.
pub fn standard_extras() -> Vec<PolynomialField> {
    alloc::vec![
        PolynomialField::constant(1.0),
        PolynomialField::affine(0.0, 1.0, 0.0),
        PolynomialField::affine(0.5, -0.3, 1.0),
        PolynomialField::from_terms(&[(1.0, 0, 0), (1.0, 1, 1)]).unwrap(),
        PolynomialField::from_terms(&[(1.0, 2, 0), (-2.0, 0, 2), (0.5, 1, 0), (0.25, 0, 0)])
            .unwrap(),
    ]
}

/// `1 − x² − y²`, vanishing on the unit circle.
pub fn disk_bubble() -> PolynomialField {
    PolynomialField::from_terms(&[(1.0, 0, 0), (-1.0, 2, 0), (-1.0, 0, 2)]).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCase {
    /// Zero-based index into the list of extras.
    pub extra_id: usize,
    pub j: Axis,
    pub k: Axis,
    pub m: Axis,
    pub result: IdentityResidual,
}

/// Residuals for every extra and every index triple, with `u` the bubble of
/// the region times the extra. Triples run with `j` outermost and `m`
/// innermost.
pub fn certify(
    region: Region<'_>,
    extras: &[PolynomialField],
) -> Result<Vec<IdentityCase>, IdentityError> {
    let mut out = Vec::with_capacity(8 * extras.len());
    for (extra_id, extra) in extras.iter().enumerate() {
        let u = match region {
            Region::Polygon(d) => bubble(d, extra)?,
            Region::UnitDisk => disk_bubble().mul(extra)?,
        };
        for j in Axis::ALL {
            for k in Axis::ALL {
                for m in Axis::ALL {
                    let result = identity_residual(&u, j, k, m, region)?;
                    out.push(IdentityCase {
                        extra_id,
                        j,
                        k,
                        m,
                        result,
                    });
                }
            }
        }
    }
    Ok(out)
}
