//! Voxel hex meshing of closed surfaces and node-set selection.
//!
//! Cells of an axis-aligned grid anchored at the surface's bounding-box
//! minimum are kept when their centre is inside the surface according to the
//! generalized winding number. Kept cells become 8-node hexahedra sharing
//! deduplicated lattice nodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::solid_angle;
use crate::mesh::{hex, Point, TriangleMesh, VolumeMesh};

/// Generalized winding number of `p` with respect to the surface.
///
/// 1 inside and 0 outside a closed outward-oriented surface; fractional
/// near holes.
pub fn winding_number(mesh: &TriangleMesh, p: &Point) -> f64 {
    let v = mesh.vertices();
    let total: f64 = mesh
        .faces()
        .iter()
        .map(|&[a, b, c]| solid_angle(p, &v[a], &v[b], &v[c]))
        .sum();
    total / (4.0 * std::f64::consts::PI)
}

/// Inside test: |winding number| ≥ 0.5. The absolute value makes the test
/// independent of whether the surface is wound outward or inward.
pub fn point_inside(mesh: &TriangleMesh, p: &Point) -> bool {
    winding_number(mesh, p).abs() >= 0.5
}

/// Regular occupancy grid; cell `(i, j, k)` spans
/// `origin + [i, i+1] × [j, j+1] × [k, k+1] · voxel_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    pub origin: Point,
    pub voxel_size: f64,
    pub dims: [usize; 3],
    pub occupancy: Vec<bool>,
}

impl VoxelGrid {
    pub fn new(origin: Point, voxel_size: f64, dims: [usize; 3], occupancy: Vec<bool>) -> Result<Self> {
        if !(voxel_size > 0.0) || !voxel_size.is_finite() {
            return Err(Error::InvalidParameter(format!("voxel size {voxel_size} must be positive")));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidParameter("grid dimensions must be at least 1".into()));
        }
        if occupancy.len() != dims[0] * dims[1] * dims[2] {
            return Err(Error::InvalidParameter("occupancy length does not match dims".into()));
        }
        Ok(VoxelGrid {
            origin,
            voxel_size,
            dims,
            occupancy,
        })
    }

    pub fn filled(origin: Point, voxel_size: f64, dims: [usize; 3]) -> Self {
        let n = dims[0] * dims[1] * dims[2];
        VoxelGrid::new(origin, voxel_size, dims, vec![true; n]).expect("valid grid")
    }

    /// Linear cell index, x-major: `(i · ny + j) · nz + k`.
    pub fn cell_index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> Point {
        let h = self.voxel_size;
        Point::new(
            self.origin.x + (i as f64 + 0.5) * h,
            self.origin.y + (j as f64 + 0.5) * h,
            self.origin.z + (k as f64 + 0.5) * h,
        )
    }

    pub fn lattice_point(&self, i: usize, j: usize, k: usize) -> Point {
        let h = self.voxel_size;
        Point::new(
            self.origin.x + i as f64 * h,
            self.origin.y + j as f64 * h,
            self.origin.z + k as f64 * h,
        )
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }

    /// Classifies every cell centre against the surface.
    pub fn classify(mesh: &TriangleMesh, voxel_size: f64) -> Result<Self> {
        if !(voxel_size > 0.0) || !voxel_size.is_finite() {
            return Err(Error::InvalidParameter(format!("voxel size {voxel_size} must be positive")));
        }
        let bb = mesh.bounding_box().ok_or(Error::EmptyMesh)?;
        let ext = bb.extent();
        let dims = [0, 1, 2].map(|a| ((ext[a] / voxel_size).ceil() as usize).max(1));
        let mut grid = VoxelGrid::new(bb.min, voxel_size, dims, vec![false; dims[0] * dims[1] * dims[2]])?;
        let [_, ny, nz] = dims;
        let occ: Vec<bool> = (0..grid.occupancy.len())
            .into_par_iter()
            .map(|c| {
                let (i, j, k) = (c / (ny * nz), (c / nz) % ny, c % nz);
                point_inside(mesh, &grid.cell_center(i, j, k))
            })
            .collect();
        grid.occupancy = occ;
        Ok(grid)
    }

    /// Occupied cells as hexahedra. Nodes are the used lattice points,
    /// numbered lexicographically in (x, y, z) lattice coordinates; elements
    /// follow the same cell order.
    pub fn to_volume_mesh(&self) -> Result<VolumeMesh> {
        let [nx, ny, nz] = self.dims;
        let (lx, ly, lz) = (nx + 1, ny + 1, nz + 1);
        let lattice = |i: usize, j: usize, k: usize| (i * ly + j) * lz + k;
        let mut used = vec![false; lx * ly * lz];
        let mut cells = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    if !self.occupancy[self.cell_index(i, j, k)] {
                        continue;
                    }
                    cells.push((i, j, k));
                    for c in 0..8 {
                        let (di, dj, dk) = corner_offset(c);
                        used[lattice(i + di, j + dj, k + dk)] = true;
                    }
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::NoOccupiedCells);
        }
        let mut node_id = vec![usize::MAX; used.len()];
        let mut nodes = Vec::new();
        for i in 0..lx {
            for j in 0..ly {
                for k in 0..lz {
                    let l = lattice(i, j, k);
                    if used[l] {
                        node_id[l] = nodes.len();
                        nodes.push(self.lattice_point(i, j, k));
                    }
                }
            }
        }
        let hexes = cells
            .iter()
            .map(|&(i, j, k)| {
                let mut h = [0; 8];
                for (c, slot) in h.iter_mut().enumerate() {
                    let (di, dj, dk) = corner_offset(c);
                    *slot = node_id[lattice(i + di, j + dj, k + dk)];
                }
                h
            })
            .collect();
        VolumeMesh::new(nodes, hexes, vec![])
    }
}

/// Lattice offset of hex corner `c` in the standard node order.
fn corner_offset(c: usize) -> (usize, usize, usize) {
    (
        (hex::XI[c] > 0.0) as usize,
        (hex::ETA[c] > 0.0) as usize,
        (hex::ZETA[c] > 0.0) as usize,
    )
}

/// Converts a closed surface into a hexahedral voxel mesh.
pub fn voxelize(mesh: &TriangleMesh, voxel_size: f64) -> Result<VolumeMesh> {
    VoxelGrid::classify(mesh, voxel_size)?.to_volume_mesh()
}

/// Node selection rules for boundary conditions and loads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeSelector {
    /// Nodes within half the shortest element edge of the lowest z.
    ZMinLayer,
    /// Nodes within half the shortest element edge of the highest z.
    ZMaxLayer,
    /// Nodes inside the closed axis-aligned box.
    Box { min: [f64; 3], max: [f64; 3] },
}

fn shortest_edge(mesh: &VolumeMesh) -> f64 {
    let n = mesh.nodes();
    let mut best = f64::INFINITY;
    for h in mesh.hexes() {
        for [a, b] in hex::EDGES {
            best = best.min((n[h[a]] - n[h[b]]).norm());
        }
    }
    for t in mesh.tets() {
        for a in 0..4 {
            for b in a + 1..4 {
                best = best.min((n[t[a]] - n[t[b]]).norm());
            }
        }
    }
    best
}

/// Indices of nodes matching `selector`, ascending.
pub fn select_nodes(mesh: &VolumeMesh, selector: &NodeSelector) -> Result<Vec<usize>> {
    let bb = mesh.bounding_box().ok_or(Error::EmptyMesh)?;
    let nodes = mesh.nodes();
    let picked: Vec<usize> = match selector {
        NodeSelector::ZMinLayer | NodeSelector::ZMaxLayer => {
            let tol = 0.5 * shortest_edge(mesh);
            let target = if *selector == NodeSelector::ZMinLayer {
                bb.min.z
            } else {
                bb.max.z
            };
            (0..nodes.len())
                .filter(|&i| (nodes[i].z - target).abs() <= tol)
                .collect()
        }
        NodeSelector::Box { min, max } => (0..nodes.len())
            .filter(|&i| (0..3).all(|a| nodes[i][a] >= min[a] && nodes[i][a] <= max[a]))
            .collect(),
    };
    if picked.is_empty() {
        return Err(Error::EmptySelection(format!("{selector:?}")));
    }
    Ok(picked)
}

/// Selects nodes and registers them on the mesh under `name`.
pub fn register_node_set(mesh: &mut VolumeMesh, name: &str, selector: &NodeSelector) -> Result<usize> {
    let nodes = select_nodes(mesh, selector)?;
    let n = nodes.len();
    mesh.add_node_set(name, nodes)?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::{icosphere, unit_cube};

    #[test]
    fn cube_center_inside_far_point_outside() {
        let cube = unit_cube();
        assert!(point_inside(&cube, &Point::new(0.5, 0.5, 0.5)));
        assert!(!point_inside(&cube, &Point::new(10.0, 10.0, 10.0)));
        assert!((winding_number(&cube, &Point::new(0.5, 0.5, 0.5)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inward_winding_still_classifies() {
        let cube = unit_cube().flipped();
        assert!(point_inside(&cube, &Point::new(0.3, 0.6, 0.5)));
    }

    #[test]
    fn unit_cube_at_half_gives_eight_hexes() {
        let vm = voxelize(&unit_cube(), 0.5).unwrap();
        assert_eq!(vm.hexes().len(), 8);
        assert_eq!(vm.node_count(), 27);
        assert!((vm.total_volume() - 1.0).abs() < 1e-12);
        // Lexicographic node order: x most significant.
        assert_eq!(vm.nodes()[1], Point::new(0.0, 0.0, 0.5));
        assert_eq!(vm.nodes()[26], Point::new(1.0, 1.0, 1.0));
    }

    #[test]
    fn oversized_voxel_has_no_cells() {
        assert!(matches!(voxelize(&unit_cube(), 3.0), Err(Error::NoOccupiedCells)));
        assert!(matches!(voxelize(&unit_cube(), 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn layer_and_box_selection() {
        let vm = voxelize(&unit_cube(), 0.5).unwrap();
        assert_eq!(select_nodes(&vm, &NodeSelector::ZMinLayer).unwrap().len(), 9);
        assert_eq!(select_nodes(&vm, &NodeSelector::ZMaxLayer).unwrap().len(), 9);
        let all = NodeSelector::Box {
            min: [-1.0; 3],
            max: [2.0; 3],
        };
        assert_eq!(select_nodes(&vm, &all).unwrap().len(), 27);
        let none = NodeSelector::Box {
            min: [5.0; 3],
            max: [6.0; 3],
        };
        assert!(matches!(select_nodes(&vm, &none), Err(Error::EmptySelection(_))));
    }

    #[test]
    fn register_rejects_duplicate_names() {
        let mut vm = voxelize(&unit_cube(), 0.5).unwrap();
        register_node_set(&mut vm, "bottom", &NodeSelector::ZMinLayer).unwrap();
        assert!(matches!(
            register_node_set(&mut vm, "bottom", &NodeSelector::ZMaxLayer),
            Err(Error::DuplicateSet(_))
        ));
    }

    #[test]
    fn hexes_are_perfect_cubes() {
        let vm = voxelize(&icosphere(3.0, 2), 0.75).unwrap();
        let h = 0.75;
        for e in 0..vm.hexes().len() {
            let j = hex::corner_jacobians(&vm.hex_points(e));
            for d in j {
                assert!((d - h * h * h / 8.0).abs() < 1e-12);
            }
        }
    }
}
