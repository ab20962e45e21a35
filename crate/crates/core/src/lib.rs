//! Eigenvalues of the Laplacian under Dirichlet, Neumann and mixed boundary
//! conditions on polygons and boxes, with uncertainty-aware checks of the
//! inequalities between them.

#![no_std]

extern crate alloc;

pub mod analytic;
pub mod assembly;
pub mod eigensolve;
pub mod geometry;
pub mod identity;
pub mod inequalities;
pub mod linalg;
pub mod meshing;
pub mod quadrature;
pub mod sparse;
