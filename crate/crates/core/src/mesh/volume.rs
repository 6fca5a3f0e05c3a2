use std::collections::BTreeMap;

use super::hex;
use super::{Aabb, Point, TriangleMesh};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Hex8,
    Tet4,
}

/// Node indices of one volume element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementNodes {
    Hex8([usize; 8]),
    Tet4([usize; 4]),
}

impl ElementNodes {
    pub fn kind(&self) -> ElementKind {
        match self {
            ElementNodes::Hex8(_) => ElementKind::Hex8,
            ElementNodes::Tet4(_) => ElementKind::Tet4,
        }
    }

    pub fn nodes(&self) -> &[usize] {
        match self {
            ElementNodes::Hex8(n) => n,
            ElementNodes::Tet4(n) => n,
        }
    }
}

/// Signed volume of a tetrahedron (positive when node 3 lies on the side of
/// face 0-1-2 that the right-hand rule points to).
pub fn tet_signed_volume(p: &[Point; 4]) -> f64 {
    (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0]))) / 6.0
}

/// Hexahedral / tetrahedral volume mesh with named node and element sets.
///
/// Elements are numbered with all hexahedra first, followed by tetrahedra.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeMesh {
    nodes: Vec<Point>,
    hexes: Vec<[usize; 8]>,
    tets: Vec<[usize; 4]>,
    node_sets: BTreeMap<String, Vec<usize>>,
    element_sets: BTreeMap<String, Vec<usize>>,
}

impl VolumeMesh {
    /// Builds a mesh after checking index ranges, positive corner Jacobians
    /// for every hex and positive volume for every tet.
    pub fn new(nodes: Vec<Point>, hexes: Vec<[usize; 8]>, tets: Vec<[usize; 4]>) -> Result<Self> {
        let n = nodes.len();
        for (e, nodes_of) in hexes
            .iter()
            .map(|h| h.as_slice())
            .chain(tets.iter().map(|t| t.as_slice()))
            .enumerate()
        {
            if let Some(&bad) = nodes_of.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    count: n,
                    context: format!("element {e}"),
                });
            }
        }
        let mesh = VolumeMesh {
            nodes,
            hexes,
            tets,
            node_sets: BTreeMap::new(),
            element_sets: BTreeMap::new(),
        };
        for e in 0..mesh.hexes.len() {
            let det = hex::corner_jacobians(&mesh.hex_points(e))
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if !(det > 0.0) {
                return Err(Error::NonPositiveJacobian { element: e, det });
            }
        }
        for t in 0..mesh.tets.len() {
            let vol = tet_signed_volume(&mesh.tet_points(t));
            if !(vol > 0.0) {
                return Err(Error::NonPositiveJacobian {
                    element: mesh.hexes.len() + t,
                    det: vol,
                });
            }
        }
        Ok(mesh)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn hexes(&self) -> &[[usize; 8]] {
        &self.hexes
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.hexes.len() + self.tets.len()
    }

    pub fn element(&self, e: usize) -> ElementNodes {
        if e < self.hexes.len() {
            ElementNodes::Hex8(self.hexes[e])
        } else {
            ElementNodes::Tet4(self.tets[e - self.hexes.len()])
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementNodes> + '_ {
        (0..self.element_count()).map(|e| self.element(e))
    }

    pub fn hex_points(&self, h: usize) -> [Point; 8] {
        self.hexes[h].map(|i| self.nodes[i])
    }

    pub fn tet_points(&self, t: usize) -> [Point; 4] {
        self.tets[t].map(|i| self.nodes[i])
    }

    pub fn element_points(&self, e: usize) -> Vec<Point> {
        self.element(e).nodes().iter().map(|&i| self.nodes[i]).collect()
    }

    pub fn bounding_box(&self) -> Option<Aabb> {
        Aabb::from_points(&self.nodes)
    }

    pub fn node_sets(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.node_sets
    }

    pub fn element_sets(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.element_sets
    }

    pub fn node_set(&self, name: &str) -> Result<&[usize]> {
        self.node_sets
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::MissingSet(name.to_string()))
    }

    pub fn element_set(&self, name: &str) -> Result<&[usize]> {
        self.element_sets
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::MissingSet(name.to_string()))
    }

    /// Registers a node set. Entries are sorted and deduplicated.
    pub fn add_node_set(&mut self, name: impl Into<String>, mut nodes: Vec<usize>) -> Result<()> {
        let name = name.into();
        if self.node_sets.contains_key(&name) {
            return Err(Error::DuplicateSet(name));
        }
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&bad) = nodes.iter().find(|&&i| i >= self.nodes.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                count: self.nodes.len(),
                context: format!("node set '{name}'"),
            });
        }
        self.node_sets.insert(name, nodes);
        Ok(())
    }

    /// Registers an element set. Entries are sorted and deduplicated.
    pub fn add_element_set(&mut self, name: impl Into<String>, mut elements: Vec<usize>) -> Result<()> {
        let name = name.into();
        if self.element_sets.contains_key(&name) {
            return Err(Error::DuplicateSet(name));
        }
        elements.sort_unstable();
        elements.dedup();
        let count = self.element_count();
        if let Some(&bad) = elements.iter().find(|&&i| i >= count) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                count,
                context: format!("element set '{name}'"),
            });
        }
        self.element_sets.insert(name, elements);
        Ok(())
    }

    /// Element volume: Gauss-integrated for hexes (exact for trilinear maps).
    pub fn element_volume(&self, e: usize) -> f64 {
        match self.element(e) {
            ElementNodes::Hex8(_) => {
                let pts = self.hex_points(e);
                let g = 1.0 / 3f64.sqrt();
                let mut vol = 0.0;
                for &z in &[-g, g] {
                    for &y in &[-g, g] {
                        for &x in &[-g, g] {
                            let dn = hex::shape_derivatives(x, y, z);
                            vol += hex::jacobian(&pts, &dn).determinant();
                        }
                    }
                }
                vol
            }
            ElementNodes::Tet4(_) => tet_signed_volume(&self.tet_points(e - self.hexes.len())),
        }
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.element_count()).map(|e| self.element_volume(e)).sum()
    }

    /// Applies `f` to every node; connectivity and sets are kept.
    pub fn map_nodes(&self, f: impl Fn(&Point) -> Point) -> Result<VolumeMesh> {
        let mut m = VolumeMesh::new(
            self.nodes.iter().map(f).collect(),
            self.hexes.clone(),
            self.tets.clone(),
        )?;
        m.node_sets = self.node_sets.clone();
        m.element_sets = self.element_sets.clone();
        Ok(m)
    }

    /// Boundary faces (used by exactly one element) as node-index lists,
    /// oriented outward. Hex faces are quads, tet faces triangles.
    pub fn boundary_faces(&self) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = Vec::new();
        for h in &self.hexes {
            for f in hex::FACES {
                all.push(f.iter().map(|&i| h[i]).collect());
            }
        }
        for t in &self.tets {
            for f in TET_FACES {
                all.push(f.iter().map(|&i| t[i]).collect());
            }
        }
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for f in &all {
            let mut key = f.clone();
            key.sort_unstable();
            *counts.entry(key).or_default() += 1;
        }
        all.into_iter()
            .filter(|f| {
                let mut key = f.clone();
                key.sort_unstable();
                counts[&key] == 1
            })
            .collect()
    }

    /// Outer surface as a triangle mesh over the boundary nodes, plus the
    /// volume-node index of every surface vertex (ascending). Quad faces are
    /// split along their shorter diagonal.
    pub fn boundary_surface(&self) -> Result<(TriangleMesh, Vec<usize>)> {
        let faces = self.boundary_faces();
        let mut local = vec![usize::MAX; self.nodes.len()];
        for f in &faces {
            for &i in f {
                local[i] = 0;
            }
        }
        let mut node_of = Vec::new();
        for (i, slot) in local.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = node_of.len();
                node_of.push(i);
            }
        }
        let mut tris = Vec::with_capacity(2 * faces.len());
        for f in &faces {
            let l: Vec<usize> = f.iter().map(|&i| local[i]).collect();
            if l.len() == 3 {
                tris.push([l[0], l[1], l[2]]);
                continue;
            }
            let d02 = (self.nodes[f[0]] - self.nodes[f[2]]).norm_squared();
            let d13 = (self.nodes[f[1]] - self.nodes[f[3]]).norm_squared();
            if d13 < d02 {
                tris.push([l[0], l[1], l[3]]);
                tris.push([l[1], l[2], l[3]]);
            } else {
                tris.push([l[0], l[1], l[2]]);
                tris.push([l[0], l[2], l[3]]);
            }
        }
        let verts = node_of.iter().map(|&i| self.nodes[i]).collect();
        Ok((TriangleMesh::new(verts, tris)?, node_of))
    }
}

/// Tet faces, outward for positively oriented tets.
pub const TET_FACES: [[usize; 3]; 4] = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];
