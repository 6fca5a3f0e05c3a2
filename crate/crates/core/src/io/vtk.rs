//! Legacy ASCII VTK unstructured-grid writer.

use std::fmt::Write as _;
use std::path::Path;

use super::format::sig;
use crate::error::Result;
use crate::mesh::{Association, Field, Point, QuadDominantMesh, TriangleMesh, VolumeMesh};

pub const VTK_TRIANGLE: u8 = 5;
pub const VTK_QUAD: u8 = 9;
pub const VTK_TETRA: u8 = 10;
pub const VTK_HEXAHEDRON: u8 = 12;

/// A mesh that can be written as an unstructured grid.
#[derive(Debug, Clone, Copy)]
pub enum VtkMesh<'a> {
    Surface(&'a TriangleMesh),
    QuadDominant(&'a QuadDominantMesh),
    Volume(&'a VolumeMesh),
}

impl<'a> From<&'a TriangleMesh> for VtkMesh<'a> {
    fn from(m: &'a TriangleMesh) -> Self {
        VtkMesh::Surface(m)
    }
}

impl<'a> From<&'a QuadDominantMesh> for VtkMesh<'a> {
    fn from(m: &'a QuadDominantMesh) -> Self {
        VtkMesh::QuadDominant(m)
    }
}

impl<'a> From<&'a VolumeMesh> for VtkMesh<'a> {
    fn from(m: &'a VolumeMesh) -> Self {
        VtkMesh::Volume(m)
    }
}

impl VtkMesh<'_> {
    fn points(&self) -> &[Point] {
        match self {
            VtkMesh::Surface(m) => m.vertices(),
            VtkMesh::QuadDominant(m) => m.vertices(),
            VtkMesh::Volume(m) => m.nodes(),
        }
    }

    fn cells(&self) -> Vec<(u8, Vec<usize>)> {
        match self {
            VtkMesh::Surface(m) => m.faces().iter().map(|f| (VTK_TRIANGLE, f.to_vec())).collect(),
            VtkMesh::QuadDominant(m) => m
                .quads()
                .iter()
                .map(|q| (VTK_QUAD, q.to_vec()))
                .chain(m.triangles().iter().map(|t| (VTK_TRIANGLE, t.to_vec())))
                .collect(),
            VtkMesh::Volume(m) => m
                .hexes()
                .iter()
                .map(|h| (VTK_HEXAHEDRON, h.to_vec()))
                .chain(m.tets().iter().map(|t| (VTK_TETRA, t.to_vec())))
                .collect(),
        }
    }
}

fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect();
    if s.is_empty() {
        "field".to_string()
    } else {
        s
    }
}

fn write_field(out: &mut String, field: &Field) {
    match field {
        Field::Scalar(f) => {
            let _ = writeln!(out, "SCALARS {} double 1", sanitize(&f.name));
            out.push_str("LOOKUP_TABLE default\n");
            for v in &f.values {
                let _ = writeln!(out, "{}", sig(*v, 9));
            }
        }
        Field::Vector(f) => {
            let _ = writeln!(out, "VECTORS {} double", sanitize(&f.name));
            for v in &f.values {
                let _ = writeln!(out, "{} {} {}", sig(v[0], 9), sig(v[1], 9), sig(v[2], 9));
            }
        }
    }
}

/// Renders the mesh and its fields as a legacy VTK document.
pub fn vtk_string<'a>(mesh: impl Into<VtkMesh<'a>>, fields: &[Field]) -> Result<String> {
    let mesh = mesh.into();
    let points = mesh.points();
    let cells = mesh.cells();
    for f in fields {
        f.check_len(points.len(), cells.len())?;
    }
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\nscan2sim\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(out, "POINTS {} double", points.len());
    for p in points {
        let _ = writeln!(out, "{} {} {}", sig(p.x, 9), sig(p.y, 9), sig(p.z, 9));
    }
    let size: usize = cells.iter().map(|(_, c)| c.len() + 1).sum();
    let _ = writeln!(out, "CELLS {} {}", cells.len(), size);
    for (_, c) in &cells {
        let _ = write!(out, "{}", c.len());
        for i in c {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "CELL_TYPES {}", cells.len());
    for (t, _) in &cells {
        let _ = writeln!(out, "{t}");
    }
    let node_fields: Vec<&Field> = fields
        .iter()
        .filter(|f| f.association() == Association::Node)
        .collect();
    let cell_fields: Vec<&Field> = fields
        .iter()
        .filter(|f| f.association() == Association::Element)
        .collect();
    if !node_fields.is_empty() {
        let _ = writeln!(out, "POINT_DATA {}", points.len());
        for f in node_fields {
            write_field(&mut out, f);
        }
    }
    if !cell_fields.is_empty() {
        let _ = writeln!(out, "CELL_DATA {}", cells.len());
        for f in cell_fields {
            write_field(&mut out, f);
        }
    }
    Ok(out)
}

/// Writes the mesh and fields as legacy ASCII VTK. Field lengths are checked
/// before anything is written.
pub fn write_vtk<'a>(mesh: impl Into<VtkMesh<'a>>, fields: &[Field], path: &Path) -> Result<()> {
    let text = vtk_string(mesh, fields)?;
    super::write_bytes(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::mesh::ScalarField;

    fn unit_hex() -> VolumeMesh {
        let nodes = (0..8)
            .map(|i| {
                let (x, y, z) = (crate::mesh::hex::XI[i], crate::mesh::hex::ETA[i], crate::mesh::hex::ZETA[i]);
                Point::new((x + 1.0) / 2.0, (y + 1.0) / 2.0, (z + 1.0) / 2.0)
            })
            .collect();
        VolumeMesh::new(nodes, vec![[0, 1, 2, 3, 4, 5, 6, 7]], vec![]).unwrap()
    }

    #[test]
    fn single_hex_layout() {
        let s = vtk_string(&unit_hex(), &[]).unwrap();
        assert!(s.starts_with("# vtk DataFile Version 3.0\n"));
        assert!(s.contains("POINTS 8 double\n"));
        assert!(s.contains("CELLS 1 9\n8 0 1 2 3 4 5 6 7\n"));
        assert!(s.contains("CELL_TYPES 1\n12\n"));
        assert!(!s.contains("POINT_DATA"));
    }

    #[test]
    fn wrong_field_length_rejected() {
        let f = Field::from(ScalarField::per_node("t", vec![0.0; 7]));
        assert!(matches!(
            vtk_string(&unit_hex(), &[f]),
            Err(Error::FieldLength { expected: 8, actual: 7, .. })
        ));
    }

    #[test]
    fn cell_and_point_sections() {
        let fields = vec![
            Field::from(ScalarField::per_node("temp c", vec![1.0; 8])),
            Field::from(ScalarField::per_element("vm", vec![2.5])),
        ];
        let s = vtk_string(&unit_hex(), &fields).unwrap();
        assert!(s.contains("POINT_DATA 8\nSCALARS temp_c double 1\nLOOKUP_TABLE default\n1\n"));
        assert!(s.contains("CELL_DATA 1\nSCALARS vm double 1\nLOOKUP_TABLE default\n2.5\n"));
    }
}
