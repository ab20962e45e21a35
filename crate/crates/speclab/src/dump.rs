//! Plain-text dumps of meshes and assembled matrices.

use std::io::{self, Write};

use speclab_core::geometry::PolygonDomain;
use speclab_core::meshing::Mesh;
use speclab_core::sparse::SymmetricSparseMatrix;

/// OFF-like mesh dump:
///
/// ```text
/// SPECLAB_MESH
/// <nodes> <triangles> <boundary edges>
/// x y                  one line per node
/// a b c                one line per triangle, zero-based node indices
/// a b segment label    one line per boundary edge
/// ```
pub fn write_mesh(w: &mut impl Write, mesh: &Mesh, domain: &PolygonDomain) -> io::Result<()> {
    writeln!(w, "SPECLAB_MESH")?;
    writeln!(
        w,
        "{} {} {}",
        mesh.nodes.len(),
        mesh.triangles.len(),
        mesh.boundary_edges.len()
    )?;
    for p in &mesh.nodes {
        writeln!(w, "{:.16e} {:.16e}", p.x, p.y)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
    }
    for e in &mesh.boundary_edges {
        let label = domain.segments()[e.segment].label;
        writeln!(w, "{} {} {} {label}", e.nodes[0], e.nodes[1], e.segment)?;
    }
    Ok(())
}

/// Matrix Market coordinate dump of the lower triangle, one-based, with
/// 17 significant digits.
pub fn write_matrix(w: &mut impl Write, a: &SymmetricSparseMatrix) -> io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(w, "{} {} {}", a.order(), a.order(), a.entries().len())?;
    for &(i, j, v) in a.entries() {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        writeln!(w, "{} {} {v:.16e}", r + 1, c + 1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use speclab_core::geometry::{build_polygon, Label, Point};
    use speclab_core::meshing::triangulate;

    #[test]
    fn mesh_dump_counts() {
        let d = build_polygon(
            &[
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
            ],
            &[Label::Dirichlet, Label::Neumann, Label::Neumann],
        )
        .unwrap();
        let m = triangulate(&d).unwrap();
        let mut buf = Vec::new();
        write_mesh(&mut buf, &m, &d).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[1],
            format!(
                "{} {} {}",
                m.nodes.len(),
                m.triangles.len(),
                m.boundary_edges.len()
            )
        );
        assert_eq!(
            lines.len(),
            2 + m.nodes.len() + m.triangles.len() + m.boundary_edges.len()
        );
    }

    #[test]
    fn matrix_dump_is_lower_triangle() {
        let a = SymmetricSparseMatrix::from_triplets(2, &[(0, 0, 2.0), (0, 1, -1.0), (1, 1, 2.0)]);
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\n2 1 -1.0000000000000000e0\n"), "{text}");
    }
}
