//! Conforming triangulations of polygon domains and uniform red refinement.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{orient, Point, PolygonDomain};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MeshError {
    #[error("ear clipping found no ear with {remaining} vertices left")]
    EarClippingFailed { remaining: usize },
}

/// A boundary edge and the polygon segment it lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub segment: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    /// Counterclockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub level: usize,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Mesh {
    /// Unique edges, each as a sorted node pair, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| edge_key(a, b))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Number of triangles sharing each edge.
    pub fn edge_multiplicity(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *m.entry(edge_key(a, b)).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        0.5 * orient(self.nodes[a], self.nodes[b], self.nodes[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.triangle_area(t))
            .sum()
    }

    pub fn max_diameter(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| self.nodes[a].sub(self.nodes[b]).norm())
            .fold(0.0, f64::max)
    }

    /// `#nodes - #edges + #triangles`.
    pub fn euler_characteristic(&self) -> isize {
        self.nodes.len() as isize - self.edges().len() as isize + self.triangles.len() as isize
    }

    /// Interior edges are shared by two triangles, boundary edges by one,
    /// and the single-use edges are exactly the tagged boundary edges.
    pub fn is_conforming(&self) -> bool {
        let mult = self.edge_multiplicity();
        let mut boundary: Vec<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|e| edge_key(e.nodes[0], e.nodes[1]))
            .collect();
        boundary.sort_unstable();
        let n_boundary = boundary.len();
        boundary.dedup();
        if boundary.len() != n_boundary {
            return false;
        }
        let mut single: Vec<(usize, usize)> = Vec::new();
        for (&e, &c) in &mult {
            match c {
                1 => single.push(e),
                2 => {}
                _ => return false,
            }
        }
        single == boundary
    }
}

/// Level-0 mesh. Convex polygons get a fan around the area centroid, all
/// others are ear clipped.
pub fn triangulate(domain: &PolygonDomain) -> Result<Mesh, MeshError> {
    let n = domain.len();
    let boundary_edges = (0..n)
        .map(|i| BoundaryEdge {
            nodes: [i, (i + 1) % n],
            segment: i,
        })
        .collect();
    let mut nodes = domain.vertices().to_vec();
    let triangles = if n == 3 {
        alloc::vec![[0, 1, 2]]
    } else if domain.is_convex() {
        nodes.push(domain.centroid());
        (0..n).map(|i| [n, i, (i + 1) % n]).collect()
    } else {
        ear_clip(domain.vertices())?
    };
    Ok(Mesh {
        nodes,
        triangles,
        boundary_edges,
        level: 0,
    })
}

fn in_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
}

/// Repeatedly clips the lowest-indexed ear whose triangle contains no other
/// remaining vertex.
fn ear_clip(points: &[Point]) -> Result<Vec<[usize; 3]>, MeshError> {
    let mut ring: Vec<usize> = (0..points.len()).collect();
    let mut tris = Vec::with_capacity(points.len() - 2);
    while ring.len() > 3 {
        let m = ring.len();
        let ear = (0..m).find(|&k| {
            let (ip, i, inx) = (ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]);
            let (a, b, c) = (points[ip], points[i], points[inx]);
            if orient(a, b, c) <= 0.0 {
                return false;
            }
            ring.iter()
                .filter(|&&v| v != ip && v != i && v != inx)
                .all(|&v| !in_triangle(a, b, c, points[v]))
        });
        let k = ear.ok_or(MeshError::EarClippingFailed { remaining: m })?;
        tris.push([ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]]);
        ring.remove(k);
    }
    if orient(points[ring[0]], points[ring[1]], points[ring[2]]) <= 0.0 {
        return Err(MeshError::EarClippingFailed { remaining: 3 });
    }
    tris.push([ring[0], ring[1], ring[2]]);
    Ok(tris)
}

/// Splits every triangle into four through its edge midpoints.
pub fn refine(mesh: &Mesh) -> Mesh {
    let mut nodes = mesh.nodes.clone();
    let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
        *mid.entry(edge_key(a, b)).or_insert_with(|| {
            nodes.push(nodes[a].midpoint(nodes[b]));
            nodes.len() - 1
        })
    };
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    for &[a, b, c] in &mesh.triangles {
        let ab = midpoint(a, b, &mut nodes);
        let bc = midpoint(b, c, &mut nodes);
        let ca = midpoint(c, a, &mut nodes);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }
    let boundary_edges = mesh
        .boundary_edges
        .iter()
        .flat_map(|e| {
            let m = mid[&edge_key(e.nodes[0], e.nodes[1])];
            [
                BoundaryEdge {
                    nodes: [e.nodes[0], m],
                    segment: e.segment,
                },
                BoundaryEdge {
                    nodes: [m, e.nodes[1]],
                    segment: e.segment,
                },
            ]
        })
        .collect();
    Mesh {
        nodes,
        triangles,
        boundary_edges,
        level: mesh.level + 1,
    }
}

/// Applies [`refine`] `times` times.
pub fn refine_to(mesh: &Mesh, times: usize) -> Mesh {
    let mut m = mesh.clone();
    for _ in 0..times {
        m = refine(&m);
    }
    m
}
