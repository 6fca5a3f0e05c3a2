//! File interchange: surface ingestion, VTK / keyword-deck / glTF export.

pub mod colormap;
pub mod format;
pub mod gltf;
pub mod inp;
pub mod obj;
pub mod ply;
pub mod vtk;

use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{Point, QuadDominantMesh, TriangleMesh, Vec3};

pub use colormap::Colormap;
pub use gltf::{export_gltf_colored, gltf_colored_bytes};
pub use inp::{export_inp, inp_deck, parse_inp, read_inp};
pub use vtk::{vtk_string, write_vtk, VtkMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceFormat {
    Obj,
    Ply,
}

impl SurfaceFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path
            .extension()?
            .to_str()?
            .to_ascii_lowercase()
            .as_str()
        {
            "obj" => Some(SurfaceFormat::Obj),
            "ply" => Some(SurfaceFormat::Ply),
            _ => None,
        }
    }
}

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Loads a triangle surface from an OBJ or PLY file.
///
/// Polygons with more than three vertices are fan-triangulated from their
/// first vertex, faces that repeat a vertex are dropped, and the winding of
/// each connected component is normalized by majority vote.
pub fn load_surface(path: &Path, format: SurfaceFormat) -> Result<TriangleMesh> {
    let bytes = read_bytes(path)?;
    parse_surface(&bytes, format)
}

/// Loads a surface, picking the format from the file extension.
pub fn load_surface_auto(path: &Path) -> Result<TriangleMesh> {
    let format = SurfaceFormat::from_path(path).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "cannot infer surface format from '{}'",
            path.display()
        ))
    })?;
    load_surface(path, format)
}

pub fn parse_surface(bytes: &[u8], format: SurfaceFormat) -> Result<TriangleMesh> {
    let (vertices, polygons, normals) = match format {
        SurfaceFormat::Obj => {
            let text = std::str::from_utf8(bytes).map_err(|_| Error::parse(0, "OBJ is not UTF-8"))?;
            let d = obj::parse(text)?;
            (d.vertices, d.polygons, None)
        }
        SurfaceFormat::Ply => {
            let d = ply::parse(bytes)?;
            (d.vertices, d.polygons, d.normals)
        }
    };
    build_surface(vertices, &polygons, normals)
}

fn build_surface(vertices: Vec<Point>, polygons: &[Vec<usize>], normals: Option<Vec<Vec3>>) -> Result<TriangleMesh> {
    let n = vertices.len();
    let mut faces = Vec::new();
    let mut dropped = 0;
    for (pi, poly) in polygons.iter().enumerate() {
        if let Some(&bad) = poly.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                count: n,
                context: format!("polygon {pi}"),
            });
        }
        for k in 1..poly.len() - 1 {
            let f = [poly[0], poly[k], poly[k + 1]];
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                dropped += 1;
            } else {
                faces.push(f);
            }
        }
    }
    if dropped > 0 {
        log::warn!("dropped {dropped} faces that repeat a vertex");
    }
    if vertices.is_empty() || faces.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let mesh = TriangleMesh::with_normalized_winding(vertices, faces)?;
    match normals {
        Some(nrm) => mesh.with_normals(nrm),
        None => Ok(mesh),
    }
}

pub fn save_obj(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    write_bytes(path, obj::write_triangles(mesh).as_bytes())
}

pub fn save_quad_obj(mesh: &QuadDominantMesh, path: &Path) -> Result<()> {
    write_bytes(path, obj::write_quad_dominant(mesh).as_bytes())
}
