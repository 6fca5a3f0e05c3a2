use super::topology;
use super::{triangle_area, triangle_cross, Aabb, Point, Vec3};
use crate::error::{Error, Result};

fn check_indices<const N: usize>(polys: &[[usize; N]], count: usize, what: &str) -> Result<()> {
    for (i, p) in polys.iter().enumerate() {
        for &v in p {
            if v >= count {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    count,
                    context: format!("{what} {i}"),
                });
            }
        }
        for a in 0..N {
            for b in a + 1..N {
                if p[a] == p[b] {
                    return Err(Error::InvalidMesh(format!(
                        "{what} {i} references vertex {} twice",
                        p[a]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Indexed triangle surface.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point>,
    faces: Vec<[usize; 3]>,
    normals: Option<Vec<Vec3>>,
}

impl TriangleMesh {
    /// Builds a mesh, checking that every index is in range and no face
    /// repeats a vertex. Winding is kept as given.
    pub fn new(vertices: Vec<Point>, faces: Vec<[usize; 3]>) -> Result<Self> {
        check_indices(&faces, vertices.len(), "face")?;
        Ok(TriangleMesh {
            vertices,
            faces,
            normals: None,
        })
    }

    /// Like [`TriangleMesh::new`], then makes winding consistent per
    /// connected component by majority vote.
    pub fn with_normalized_winding(vertices: Vec<Point>, mut faces: Vec<[usize; 3]>) -> Result<Self> {
        check_indices(&faces, vertices.len(), "face")?;
        let flipped = topology::normalize_winding(&mut faces);
        if flipped > 0 {
            log::debug!("winding normalization flipped {flipped} faces");
        }
        Ok(TriangleMesh {
            vertices,
            faces,
            normals: None,
        })
    }

    /// Attaches per-vertex normals; they are normalized to unit length.
    pub fn with_normals(mut self, normals: Vec<Vec3>) -> Result<Self> {
        if normals.len() != self.vertices.len() {
            return Err(Error::InvalidMesh(format!(
                "{} normals for {} vertices",
                normals.len(),
                self.vertices.len()
            )));
        }
        self.normals = Some(
            normals
                .into_iter()
                .map(|n| n.try_normalize(0.0).unwrap_or_else(Vec3::zeros))
                .collect(),
        );
        Ok(self)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn normals(&self) -> Option<&[Vec3]> {
        self.normals.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face_points(&self, f: usize) -> [Point; 3] {
        let [a, b, c] = self.faces[f];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.face_points(f);
        triangle_area(&a, &b, &c)
    }

    /// Unit face normal, or zero for a degenerate face.
    pub fn face_normal(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.face_points(f);
        triangle_cross(&a, &b, &c)
            .try_normalize(0.0)
            .unwrap_or_else(Vec3::zeros)
    }

    pub fn area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    /// Signed enclosed volume (positive for outward-facing closed meshes).
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|&[a, b, c]| {
                let (a, b, c) = (self.vertices[a], self.vertices[b], self.vertices[c]);
                a.coords.dot(&b.coords.cross(&c.coords)) / 6.0
            })
            .sum()
    }

    pub fn bounding_box(&self) -> Option<Aabb> {
        Aabb::from_points(&self.vertices)
    }

    /// Area-weighted vertex normals computed from the faces.
    pub fn vertex_normals(&self) -> Vec<Vec3> {
        let mut normals = vec![Vec3::zeros(); self.vertices.len()];
        for &[a, b, c] in &self.faces {
            let n = triangle_cross(&self.vertices[a], &self.vertices[b], &self.vertices[c]);
            normals[a] += n;
            normals[b] += n;
            normals[c] += n;
        }
        normals
            .into_iter()
            .map(|n| n.try_normalize(0.0).unwrap_or_else(Vec3::zeros))
            .collect()
    }

    /// Lengths of all unique edges.
    pub fn edge_lengths(&self) -> Vec<f64> {
        topology::edge_faces(&self.faces)
            .keys()
            .map(|&(a, b)| (self.vertices[a] - self.vertices[b]).norm())
            .collect()
    }

    /// True when every edge is shared by exactly two faces.
    pub fn is_closed(&self) -> bool {
        topology::edge_faces(&self.faces)
            .values()
            .all(|fs| fs.len() == 2)
    }

    /// Applies `f` to every vertex position, keeping connectivity.
    pub fn map_vertices(&self, f: impl Fn(&Point) -> Point) -> TriangleMesh {
        TriangleMesh {
            vertices: self.vertices.iter().map(f).collect(),
            faces: self.faces.clone(),
            normals: self.normals.clone(),
        }
    }

    /// Reverses the winding of every face.
    pub fn flipped(&self) -> TriangleMesh {
        TriangleMesh {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect(),
            normals: self.normals.as_ref().map(|n| n.iter().map(|v| -v).collect()),
        }
    }

    pub fn into_parts(self) -> (Vec<Point>, Vec<[usize; 3]>) {
        (self.vertices, self.faces)
    }
}

/// Surface made mostly of quadrilaterals with an unpaired triangle remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadDominantMesh {
    vertices: Vec<Point>,
    quads: Vec<[usize; 4]>,
    triangles: Vec<[usize; 3]>,
}

impl QuadDominantMesh {
    pub fn new(vertices: Vec<Point>, quads: Vec<[usize; 4]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        check_indices(&quads, vertices.len(), "quad")?;
        check_indices(&triangles, vertices.len(), "triangle")?;
        Ok(QuadDominantMesh {
            vertices,
            quads,
            triangles,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn quads(&self) -> &[[usize; 4]] {
        &self.quads
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// quads / (quads + triangles); zero for an empty mesh.
    pub fn quad_fraction(&self) -> f64 {
        let total = self.quads.len() + self.triangles.len();
        if total == 0 {
            0.0
        } else {
            self.quads.len() as f64 / total as f64
        }
    }

    /// Each polygon as a vertex-index list (quads first, then triangles).
    pub fn polygons(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.quads
            .iter()
            .map(|q| q.as_slice())
            .chain(self.triangles.iter().map(|t| t.as_slice()))
    }

    /// Interior corner angles of every quad, in degrees.
    pub fn quad_corner_angles(&self, q: usize) -> [f64; 4] {
        let quad = self.quads[q];
        let mut out = [0.0; 4];
        for k in 0..4 {
            let p = self.vertices[quad[k]];
            let prev = self.vertices[quad[(k + 3) % 4]];
            let next = self.vertices[quad[(k + 1) % 4]];
            out[k] = crate::geom::angle_between(&(prev - p), &(next - p)).to_degrees();
        }
        out
    }

    /// Mean over quads of the smallest corner angle, in degrees.
    pub fn average_min_quad_angle(&self) -> Option<f64> {
        if self.quads.is_empty() {
            return None;
        }
        let sum: f64 = (0..self.quads.len())
            .map(|q| {
                self.quad_corner_angles(q)
                    .into_iter()
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        Some(sum / self.quads.len() as f64)
    }

    pub fn with_vertices(&self, vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::InvalidMesh("vertex count changed".into()));
        }
        Ok(QuadDominantMesh {
            vertices,
            quads: self.quads.clone(),
            triangles: self.triangles.clone(),
        })
    }

    pub fn bounding_box(&self) -> Option<Aabb> {
        Aabb::from_points(&self.vertices)
    }
}

/// Splits every quad along its shorter 3D diagonal (ties use the 0-2
/// diagonal); triangles and vertices pass through unchanged.
pub fn triangulate(mesh: &QuadDominantMesh) -> TriangleMesh {
    let v = &mesh.vertices;
    let mut faces = Vec::with_capacity(mesh.quads.len() * 2 + mesh.triangles.len());
    for &[a, b, c, d] in &mesh.quads {
        let d02 = (v[a] - v[c]).norm_squared();
        let d13 = (v[b] - v[d]).norm_squared();
        if d13 < d02 {
            faces.push([a, b, d]);
            faces.push([b, c, d]);
        } else {
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    faces.extend_from_slice(&mesh.triangles);
    TriangleMesh {
        vertices: mesh.vertices.clone(),
        faces,
        normals: None,
    }
}

impl QuadDominantMesh {
    pub fn triangulate(&self) -> TriangleMesh {
        triangulate(self)
    }
}
