//! Piecewise-linear stiffness and mass matrices on a triangle mesh.
//!
//! Dirichlet conditions are imposed by eliminating every node that touches a
//! Dirichlet-labeled boundary edge, including nodes shared with Neumann
//! edges. Neumann conditions are natural and need no treatment.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{orient, Label, Point};
use crate::meshing::Mesh;
use crate::sparse::SymmetricBuilder;
pub use crate::sparse::SymmetricSparseMatrix;

/// Relative area below which a triangle is rejected.
pub const DEGENERATE_AREA_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AssemblyError {
    #[error("triangle {triangle} has area {area:e}, below tolerance")]
    DegenerateTriangle { triangle: usize, area: f64 },
    #[error("mixed problem expects {expected} segment labels, got {got}")]
    LabelCountMismatch { expected: usize, got: usize },
}

/// Boundary condition as seen by the assembler.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryCondition {
    PureDirichlet,
    PureNeumann,
    /// One label per polygon segment.
    Mixed(Vec<Label>),
}

/// Mesh node to free-index map; `None` marks a constrained node.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    map: Vec<Option<usize>>,
    free: usize,
}

impl DofMap {
    pub fn free_count(&self) -> usize {
        self.free
    }

    pub fn node_count(&self) -> usize {
        self.map.len()
    }

    pub fn free_index(&self, node: usize) -> Option<usize> {
        self.map[node]
    }

    pub fn is_constrained(&self, node: usize) -> bool {
        self.map[node].is_none()
    }

    pub fn constrained_nodes(&self) -> Vec<usize> {
        (0..self.map.len())
            .filter(|&n| self.map[n].is_none())
            .collect()
    }

    /// Extends a free-dof vector by zeros on constrained nodes.
    pub fn expand(&self, free: &[f64]) -> Vec<f64> {
        self.map
            .iter()
            .map(|m| m.map_or(0.0, |i| free[i]))
            .collect()
    }
}

/// Builds the dof map: a node is constrained iff it lies on the closure of a
/// Dirichlet boundary edge.
pub fn dof_map(mesh: &Mesh, bc: &BoundaryCondition) -> Result<DofMap, AssemblyError> {
    let mut constrained = vec![false; mesh.nodes.len()];
    for e in &mesh.boundary_edges {
        let label = match bc {
            BoundaryCondition::PureDirichlet => Label::Dirichlet,
            BoundaryCondition::PureNeumann => Label::Neumann,
            BoundaryCondition::Mixed(labels) => {
                *labels
                    .get(e.segment)
                    .ok_or(AssemblyError::LabelCountMismatch {
                        expected: e.segment + 1,
                        got: labels.len(),
                    })?
            }
        };
        if label == Label::Dirichlet {
            constrained[e.nodes[0]] = true;
            constrained[e.nodes[1]] = true;
        }
    }
    let mut free = 0;
    let map = constrained
        .iter()
        .map(|&c| {
            if c {
                None
            } else {
                free += 1;
                Some(free - 1)
            }
        })
        .collect();
    Ok(DofMap { map, free })
}

/// Element stiffness `area * G G^T` (G = barycentric gradients) and the exact
/// element mass matrix.
pub fn element_matrices(p: [Point; 3]) -> ([[f64; 3]; 3], [[f64; 3]; 3], f64) {
    let twice = orient(p[0], p[1], p[2]);
    let area = 0.5 * twice;
    // grad of the barycentric coordinate opposite edge (j, k) is rot90(p_k - p_j) / (2A)
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let a = p[(i + 1) % 3];
        let b = p[(i + 2) % 3];
        g[i] = [(a.y - b.y) / twice, (b.x - a.x) / twice];
    }
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    (k, m, area)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assembled {
    pub stiffness: SymmetricSparseMatrix,
    pub mass: SymmetricSparseMatrix,
    pub dofs: DofMap,
}

/// Assembles `K` and `M` on the free degrees of freedom, scattering
/// triangles in index order.
pub fn assemble(mesh: &Mesh, bc: &BoundaryCondition) -> Result<Assembled, AssemblyError> {
    let dofs = dof_map(mesh, bc)?;
    let total_area = mesh.area().abs();
    let mut kb = SymmetricBuilder::new(dofs.free_count());
    let mut mb = SymmetricBuilder::new(dofs.free_count());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let pts = [mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]];
        let (ke, me, area) = element_matrices(pts);
        if !(area > DEGENERATE_AREA_TOL * total_area) {
            return Err(AssemblyError::DegenerateTriangle { triangle: t, area });
        }
        for a in 0..3 {
            let Some(i) = dofs.free_index(tri[a]) else {
                continue;
            };
            for b in a..3 {
                let Some(j) = dofs.free_index(tri[b]) else {
                    continue;
                };
                // (b, a) is implied by symmetry
                kb.add(i, j, ke[a][b]);
                mb.add(i, j, me[a][b]);
            }
        }
    }
    Ok(Assembled {
        stiffness: kb.build(),
        mass: mb.build(),
        dofs,
    })
}
