//! Polygonal and box domains with a Dirichlet/Neumann boundary partition.
//!
//! Segments are relatively open: the vertices between two segments belong to
//! neither boundary part. Joint tangent spaces are computed from the rank of
//! the outward normals of a part.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::linalg::singular_values;

/// Tolerance on singular values when computing the rank of a normal set.
pub const RANK_TOL: f64 = 1e-12;

/// Tolerance on cross products in the convexity test.
pub const CONVEXITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Dirichlet,
    Neumann,
}

impl Label {
    pub fn other(self) -> Label {
        match self {
            Label::Dirichlet => Label::Neumann,
            Label::Neumann => Label::Dirichlet,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Label::Dirichlet => 'D',
            Label::Neumann => 'N',
        }
    }

    pub fn from_symbol(c: char) -> Option<Label> {
        match c {
            'D' | 'd' => Some(Label::Dirichlet),
            'N' | 'n' => Some(Label::Neumann),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which boundary condition is imposed where.
///
/// The pure kinds ignore the labels stored on the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
    Mixed,
}

impl BoundaryKind {
    /// Effective label of a boundary piece that carries `label`.
    pub fn resolve(self, label: Label) -> Label {
        match self {
            BoundaryKind::Dirichlet => Label::Dirichlet,
            BoundaryKind::Neumann => Label::Neumann,
            BoundaryKind::Mixed => label,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
            BoundaryKind::Mixed => "mixed",
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }
}

/// Twice the signed area of the triangle `a b c`.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    b.sub(a).cross(c.sub(a))
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("got {labels} labels for {vertices} edges")]
    LabelCountMismatch { vertices: usize, labels: usize },
    #[error("polygon is self-intersecting (edges {0} and {1})")]
    SelfIntersecting(usize, usize),
    #[error("polygon is clockwise or degenerate: {0}")]
    ClockwiseOrDegenerate(&'static str),
    #[error("boundary part {0} is empty")]
    EmptyPart(Label),
    #[error("no {0} segment to shrink")]
    NothingToShrink(Label),
    #[error("shrink fraction must lie in (0, 1), got {0}")]
    InvalidShrink(f64),
    #[error("mixed problem needs at least one {0} boundary piece")]
    MissingPart(Label),
    #[error("box dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("box side length {0} is not positive")]
    BadLength(f64),
    #[error("domain is not convex")]
    NotConvex,
}

/// A labeled boundary segment running from `start` to `end` (vertex indices).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub label: Label,
    pub normal: Point,
}

/// Simple counterclockwise polygon whose edges carry boundary labels.
///
/// Edge `i` joins vertex `i` to vertex `i + 1` (cyclically).
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonDomain {
    vertices: Vec<Point>,
    segments: Vec<Segment>,
}

/// Builds and validates a polygon. `labels[i]` labels the edge from
/// `points[i]` to `points[i + 1]`.
pub fn build_polygon(points: &[Point], labels: &[Label]) -> Result<PolygonDomain, GeometryError> {
    let n = points.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices(n));
    }
    if labels.len() != n {
        return Err(GeometryError::LabelCountMismatch {
            vertices: n,
            labels: labels.len(),
        });
    }
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(GeometryError::ClockwiseOrDegenerate(
            "non-finite coordinate",
        ));
    }
    let mut segments = Vec::with_capacity(n);
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        let d = b.sub(a);
        let len = d.norm();
        if len == 0.0 {
            return Err(GeometryError::ClockwiseOrDegenerate("zero-length edge"));
        }
        segments.push(Segment {
            start: i,
            end: (i + 1) % n,
            label: labels[i],
            normal: Point::new(d.y / len, -d.x / len),
        });
    }
    if let Some((i, j)) = find_intersection(points) {
        return Err(GeometryError::SelfIntersecting(i, j));
    }
    let area = signed_area(points);
    if area <= 0.0 {
        return Err(GeometryError::ClockwiseOrDegenerate(if area == 0.0 {
            "zero area"
        } else {
            "clockwise orientation"
        }));
    }
    Ok(PolygonDomain {
        vertices: points.to_vec(),
        segments,
    })
}

fn signed_area(points: &[Point]) -> f64 {
    let n = points.len();
    let mut s = 0.0;
    for i in 0..n {
        s += points[i].cross(points[(i + 1) % n]);
    }
    0.5 * s
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

fn find_intersection(points: &[Point]) -> Option<(usize, usize)> {
    let n = points.len();
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        // Adjacent edges share one vertex; they must not fold back onto each other.
        let c = points[(i + 2) % n];
        if orient(a, b, c) == 0.0 && b.sub(a).dot(c.sub(b)) < 0.0 {
            return Some((i, (i + 1) % n));
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_touch(a, b, points[j], points[(j + 1) % n]) {
                return Some((i, j));
            }
        }
    }
    None
}

impl PolygonDomain {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn labels(&self) -> Vec<Label> {
        self.segments.iter().map(|s| s.label).collect()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn segment_length(&self, i: usize) -> f64 {
        let s = &self.segments[i];
        self.vertices[s.end].sub(self.vertices[s.start]).norm()
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.segments.len())
            .map(|i| self.segment_length(i))
            .sum()
    }

    /// Total length of the segments labeled `label`.
    pub fn part_length(&self, label: Label) -> f64 {
        (0..self.segments.len())
            .filter(|&i| self.segments[i].label == label)
            .map(|i| self.segment_length(i))
            .sum()
    }

    pub fn has_part(&self, label: Label) -> bool {
        self.segments.iter().any(|s| s.label == label)
    }

    /// Same vertices, new labels.
    pub fn with_labels(&self, labels: &[Label]) -> Result<PolygonDomain, GeometryError> {
        if labels.len() != self.segments.len() {
            return Err(GeometryError::LabelCountMismatch {
                vertices: self.vertices.len(),
                labels: labels.len(),
            });
        }
        let mut out = self.clone();
        for (s, &l) in out.segments.iter_mut().zip(labels) {
            s.label = l;
        }
        Ok(out)
    }

    /// Checks that both boundary parts are present.
    pub fn validate_mixed(&self) -> Result<(), GeometryError> {
        for label in [Label::Dirichlet, Label::Neumann] {
            if !self.has_part(label) {
                return Err(GeometryError::MissingPart(label));
            }
        }
        Ok(())
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(q);
            a += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    /// Splits segment `seg` at parameter `t`, inserting a vertex. Both halves
    /// keep the original label.
    pub fn split_segment(&self, seg: usize, t: f64) -> Result<PolygonDomain, GeometryError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(GeometryError::InvalidShrink(t));
        }
        let s = self.segments[seg];
        let p = self.vertices[s.start].lerp(self.vertices[s.end], t);
        let mut points = self.vertices.clone();
        points.insert(seg + 1, p);
        let mut labels = self.labels();
        labels.insert(seg + 1, s.label);
        build_polygon(&points, &labels)
    }

    pub fn is_convex(&self) -> bool {
        is_convex(self)
    }
}

/// True iff no turn between consecutive edges is clockwise (collinear
/// vertices are allowed).
pub fn is_convex(domain: &PolygonDomain) -> bool {
    let v = &domain.vertices;
    let n = v.len();
    (0..n).all(|i| {
        let e0 = v[(i + 1) % n].sub(v[i]);
        let e1 = v[(i + 2) % n].sub(v[(i + 1) % n]);
        e0.cross(e1) >= -CONVEXITY_TOL
    })
}

/// Splits the first segment labeled `part` at fraction `shrink` and hands its
/// tail to the other part, so the returned domain's `part` is strictly
/// smaller.
pub fn refine_partition(
    domain: &PolygonDomain,
    part: Label,
    shrink: f64,
) -> Result<PolygonDomain, GeometryError> {
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(GeometryError::InvalidShrink(shrink));
    }
    let seg = domain
        .segments
        .iter()
        .position(|s| s.label == part)
        .ok_or(GeometryError::NothingToShrink(part))?;
    let mut split = domain.split_segment(seg, shrink)?;
    split.segments[seg + 1].label = part.other();
    Ok(split)
}

/// Axis-aligned box `[0, L_1] x ... x [0, L_d]` with a label on every face.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    lengths: Vec<f64>,
    /// `faces[axis] = (label at coordinate 0, label at coordinate L)`.
    faces: Vec<(Label, Label)>,
}

impl BoxDomain {
    pub fn new(lengths: &[f64], faces: &[(Label, Label)]) -> Result<BoxDomain, GeometryError> {
        let d = lengths.len();
        if !(2..=3).contains(&d) {
            return Err(GeometryError::BadDimension(d));
        }
        if faces.len() != d {
            return Err(GeometryError::LabelCountMismatch {
                vertices: d,
                labels: faces.len(),
            });
        }
        if let Some(&l) = lengths.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(GeometryError::BadLength(l));
        }
        Ok(BoxDomain {
            lengths: lengths.to_vec(),
            faces: faces.to_vec(),
        })
    }

    /// Box with every side equal to π.
    pub fn pi_box(faces: &[(Label, Label)]) -> Result<BoxDomain, GeometryError> {
        let lengths: Vec<f64> = faces.iter().map(|_| core::f64::consts::PI).collect();
        BoxDomain::new(&lengths, faces)
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn faces(&self) -> &[(Label, Label)] {
        &self.faces
    }

    pub fn has_part(&self, label: Label) -> bool {
        self.faces.iter().any(|&(a, b)| a == label || b == label)
    }

    pub fn validate_mixed(&self) -> Result<(), GeometryError> {
        for label in [Label::Dirichlet, Label::Neumann] {
            if !self.has_part(label) {
                return Err(GeometryError::MissingPart(label));
            }
        }
        Ok(())
    }

    /// Same lengths, faces relabeled according to `kind`.
    pub fn resolved(&self, kind: BoundaryKind) -> BoxDomain {
        BoxDomain {
            lengths: self.lengths.clone(),
            faces: self
                .faces
                .iter()
                .map(|&(a, b)| (kind.resolve(a), kind.resolve(b)))
                .collect(),
        }
    }
}

/// Either kind of domain the laboratory handles.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Polygon(PolygonDomain),
    Box(BoxDomain),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Polygon(_) => 2,
            Domain::Box(b) => b.dim(),
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Domain::Polygon(p) => p.is_convex(),
            Domain::Box(_) => true,
        }
    }

    pub fn has_part(&self, label: Label) -> bool {
        match self {
            Domain::Polygon(p) => p.has_part(label),
            Domain::Box(b) => b.has_part(label),
        }
    }

    pub fn validate_mixed(&self) -> Result<(), GeometryError> {
        match self {
            Domain::Polygon(p) => p.validate_mixed(),
            Domain::Box(b) => b.validate_mixed(),
        }
    }
}

/// Joint tangent space of one boundary part.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentSpaceInfo {
    pub part: Label,
    /// Distinct outward unit normals of the part, each of length `d`.
    pub normals: Vec<Vec<f64>>,
    pub dim: usize,
}

fn push_distinct(normals: &mut Vec<Vec<f64>>, v: Vec<f64>) {
    let dup = normals
        .iter()
        .any(|n| n.iter().zip(&v).all(|(a, b)| (a - b).abs() <= RANK_TOL));
    if !dup {
        normals.push(v);
    }
}

/// Dimension of the space of vectors tangential to every piece of `part`:
/// `d - rank(normals)`.
pub fn tangent_space_dim(domain: &Domain, part: Label) -> Result<TangentSpaceInfo, GeometryError> {
    match domain {
        Domain::Polygon(p) => {
            let mut normals = Vec::new();
            for s in p.segments.iter().filter(|s| s.label == part) {
                push_distinct(&mut normals, alloc::vec![s.normal.x, s.normal.y]);
            }
            if normals.is_empty() {
                return Err(GeometryError::EmptyPart(part));
            }
            let rank = singular_values(&normals, 2)
                .iter()
                .filter(|&&s| s > RANK_TOL)
                .count();
            Ok(TangentSpaceInfo {
                part,
                normals,
                dim: 2 - rank,
            })
        }
        Domain::Box(b) => {
            let d = b.dim();
            let mut normals = Vec::new();
            let mut rank = 0;
            for (axis, &(lo, hi)) in b.faces.iter().enumerate() {
                let mut hit = false;
                for (label, sign) in [(lo, -1.0), (hi, 1.0)] {
                    if label == part {
                        let mut n = alloc::vec![0.0; d];
                        n[axis] = sign;
                        normals.push(n);
                        hit = true;
                    }
                }
                if hit {
                    rank += 1;
                }
            }
            if normals.is_empty() {
                return Err(GeometryError::EmptyPart(part));
            }
            Ok(TangentSpaceInfo {
                part,
                normals,
                dim: d - rank,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;
    use Label::{Dirichlet as D, Neumann as N};

    fn square(labels: &[Label]) -> PolygonDomain {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(PI, 0.0),
            Point::new(PI, PI),
            Point::new(0.0, PI),
        ];
        build_polygon(&pts, labels).unwrap()
    }

    fn pentagon() -> PolygonDomain {
        let pts: Vec<Point> = (0..5)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 5.0;
                Point::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        build_polygon(&pts, &[D, N, N, N, N]).unwrap()
    }

    #[test]
    fn builds_square_with_one_dirichlet_side() {
        let sq = square(&[D, N, N, N]);
        assert_eq!(sq.segments().len(), 4);
        assert_eq!(sq.segments()[0].normal, Point::new(0.0, -1.0));
        assert!((sq.area() - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn builds_triangle() {
        let t = build_polygon(
            &[
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
            ],
            &[D, D, D],
        )
        .unwrap();
        assert!(!t.has_part(N));
        assert_eq!(t.validate_mixed(), Err(GeometryError::MissingPart(N)));
    }

    #[test]
    fn rejects_bowtie() {
        let r = build_polygon(
            &[
                Point::new(0.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
            ],
            &[D, D, D, D],
        );
        assert!(matches!(r, Err(GeometryError::SelfIntersecting(..))));
    }

    #[test]
    fn rejects_clockwise_and_degenerate() {
        let cw = [
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        assert!(matches!(
            build_polygon(&cw, &[D, D, D]),
            Err(GeometryError::ClockwiseOrDegenerate(_))
        ));
        let dup = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(matches!(
            build_polygon(&dup, &[D, D, D, D]),
            Err(GeometryError::ClockwiseOrDegenerate(_))
        ));
        assert!(matches!(
            build_polygon(&cw[..2], &[D, D]),
            Err(GeometryError::TooFewVertices(2))
        ));
        assert!(matches!(
            build_polygon(&cw, &[D, D]),
            Err(GeometryError::LabelCountMismatch { .. })
        ));
    }

    #[test]
    fn tangent_dims_of_square_examples() {
        let one_side = Domain::Polygon(square(&[D, N, N, N]));
        let info = tangent_space_dim(&one_side, N).unwrap();
        assert_eq!(info.normals.len(), 3);
        assert_eq!(info.dim, 0);
        assert_eq!(tangent_space_dim(&one_side, D).unwrap().dim, 1);

        let parallel = Domain::Polygon(square(&[D, N, D, N]));
        assert_eq!(tangent_space_dim(&parallel, N).unwrap().dim, 1);

        let pure = Domain::Polygon(square(&[N, N, N, N]));
        assert_eq!(
            tangent_space_dim(&pure, D),
            Err(GeometryError::EmptyPart(D))
        );
    }

    #[test]
    fn tangent_dim_of_cube_side_faces() {
        let cube = Domain::Box(BoxDomain::pi_box(&[(D, D), (D, D), (N, N)]).unwrap());
        assert_eq!(tangent_space_dim(&cube, D).unwrap().dim, 1);
        assert_eq!(tangent_space_dim(&cube, N).unwrap().dim, 2);
    }

    #[test]
    fn convexity() {
        assert!(square(&[D, D, D, D]).is_convex());
        assert!(pentagon().is_convex());
        let l = build_polygon(
            &[
                Point::new(0.0, 0.0),
                Point::new(2.0, 0.0),
                Point::new(2.0, 1.0),
                Point::new(1.0, 1.0),
                Point::new(1.0, 2.0),
                Point::new(0.0, 2.0),
            ],
            &[D; 6],
        )
        .unwrap();
        assert!(!l.is_convex());
    }

    #[test]
    fn refine_partition_halves_dirichlet_side() {
        let sq = square(&[D, N, N, N]);
        let r = refine_partition(&sq, D, 0.5).unwrap();
        assert_eq!(r.labels(), vec![D, N, N, N, N]);
        assert_eq!(r.vertices()[1], Point::new(PI / 2.0, 0.0));
        assert!((r.part_length(D) - PI / 2.0).abs() < 1e-15);
        assert!((r.perimeter() - sq.perimeter()).abs() < 1e-12);
        assert!(r.is_convex());
    }

    #[test]
    fn refine_partition_splits_first_dirichlet_segment() {
        let sq = square(&[D, D, N, N]);
        let r = refine_partition(&sq, D, 0.25).unwrap();
        assert_eq!(r.labels(), vec![D, N, D, N, N]);
        assert_eq!(r.vertices()[1], Point::new(PI / 4.0, 0.0));
    }

    #[test]
    fn refine_partition_errors() {
        let sq = square(&[N, N, N, N]);
        assert_eq!(
            refine_partition(&sq, D, 0.5),
            Err(GeometryError::NothingToShrink(D))
        );
        assert_eq!(
            refine_partition(&sq, N, 1.0),
            Err(GeometryError::InvalidShrink(1.0))
        );
    }

    #[test]
    fn collinear_segments_with_different_labels_are_allowed() {
        let sq = square(&[D, N, N, N]);
        let split = refine_partition(&sq, D, 0.3).unwrap();
        let dom = Domain::Polygon(split);
        // The Neumann piece on the bottom side shares its normal with the Dirichlet piece.
        assert_eq!(tangent_space_dim(&dom, D).unwrap().dim, 1);
        assert_eq!(tangent_space_dim(&dom, N).unwrap().dim, 0);
    }

    #[test]
    fn box_validation() {
        assert_eq!(
            BoxDomain::new(&[1.0], &[(D, D)]),
            Err(GeometryError::BadDimension(1))
        );
        assert_eq!(
            BoxDomain::new(&[1.0, -2.0], &[(D, D), (N, N)]),
            Err(GeometryError::BadLength(-2.0))
        );
        let b = BoxDomain::pi_box(&[(N, N), (D, N)]).unwrap();
        assert!(b.validate_mixed().is_ok());
        assert_eq!(
            b.resolved(BoundaryKind::Dirichlet).faces(),
            &[(D, D), (D, D)]
        );
    }
}
