//! Uniform Laplacian smoothing for triangle and quad-dominant surfaces.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::topology::edge_key;
use crate::mesh::{Point, QuadDominantMesh, TriangleMesh};

/// A polygonal surface whose vertices can be repositioned.
pub trait PolygonSurface: Sized {
    fn positions(&self) -> &[Point];
    fn polygon_list(&self) -> Vec<Vec<usize>>;
    fn with_positions(&self, positions: Vec<Point>) -> Result<Self>;
}

impl PolygonSurface for TriangleMesh {
    fn positions(&self) -> &[Point] {
        self.vertices()
    }

    fn polygon_list(&self) -> Vec<Vec<usize>> {
        self.faces().iter().map(|f| f.to_vec()).collect()
    }

    fn with_positions(&self, positions: Vec<Point>) -> Result<Self> {
        TriangleMesh::new(positions, self.faces().to_vec())
    }
}

impl PolygonSurface for QuadDominantMesh {
    fn positions(&self) -> &[Point] {
        self.vertices()
    }

    fn polygon_list(&self) -> Vec<Vec<usize>> {
        self.polygons().map(|p| p.to_vec()).collect()
    }

    fn with_positions(&self, positions: Vec<Point>) -> Result<Self> {
        self.with_vertices(positions)
    }
}

/// Neighbours along polygon edges and boundary flags (edges used once).
fn polygon_topology(n: usize, polys: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<bool>) {
    let mut uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut nbrs = vec![Vec::new(); n];
    for p in polys {
        for k in 0..p.len() {
            let (a, b) = (p[k], p[(k + 1) % p.len()]);
            *uses.entry(edge_key(a, b)).or_default() += 1;
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    }
    for l in &mut nbrs {
        l.sort_unstable();
        l.dedup();
    }
    let mut boundary = vec![false; n];
    for ((a, b), c) in uses {
        if c == 1 {
            boundary[a] = true;
            boundary[b] = true;
        }
    }
    (nbrs, boundary)
}

/// `v ← v + λ·(mean of edge neighbours − v)`, Jacobi-style, `iterations`
/// times. With `preserve_boundary`, boundary vertices keep their exact
/// positions. Connectivity is unchanged.
pub fn laplacian_smooth<M: PolygonSurface>(
    mesh: &M,
    iterations: usize,
    lambda: f64,
    preserve_boundary: bool,
) -> Result<M> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter(format!("smoothing lambda {lambda} must lie in (0, 1]")));
    }
    let mut pos = mesh.positions().to_vec();
    let (nbrs, boundary) = polygon_topology(pos.len(), &mesh.polygon_list());
    for _ in 0..iterations {
        let old = &pos;
        pos = (0..old.len())
            .into_par_iter()
            .map(|v| {
                if nbrs[v].is_empty() || (preserve_boundary && boundary[v]) {
                    return old[v];
                }
                let mut c = nalgebra::Vector3::zeros();
                for &w in &nbrs[v] {
                    c += old[w].coords;
                }
                c /= nbrs[v].len() as f64;
                old[v] + (c - old[v].coords) * lambda
            })
            .collect();
    }
    mesh.with_positions(pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::topology::boundary_vertices;
    use crate::primitives::square_grid;
    use rand::{Rng, SeedableRng};

    #[test]
    fn zero_iterations_is_identity() {
        let g = square_grid(4, 4, 1.0);
        assert_eq!(laplacian_smooth(&g, 0, 0.5, false).unwrap(), g);
    }

    #[test]
    fn planar_grid_quad_interior_is_fixed_point() {
        let g = square_grid(4, 4, 1.0);
        let q = crate::remesh::pair_to_quads(&g);
        let s = laplacian_smooth(&q, 3, 1.0, true).unwrap();
        for (a, b) in s.vertices().iter().zip(q.vertices()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    fn interior_z_variance(m: &TriangleMesh, interior: &[bool]) -> f64 {
        let z: Vec<f64> = m
            .vertices()
            .iter()
            .zip(interior)
            .filter(|(_, &i)| i)
            .map(|(p, _)| p.z)
            .collect();
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / z.len() as f64
    }

    #[test]
    fn noisy_plane_variance_decreases() {
        let g = square_grid(12, 12, 1.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let jittered = g
            .vertices()
            .iter()
            .map(|p| Point::new(p.x, p.y, rng.random_range(-0.1..0.1)))
            .collect();
        let noisy = TriangleMesh::new(jittered, g.faces().to_vec()).unwrap();
        let interior: Vec<bool> = boundary_vertices(g.vertex_count(), g.faces())
            .into_iter()
            .map(|b| !b)
            .collect();
        let mut m = noisy;
        let mut prev = interior_z_variance(&m, &interior);
        for _ in 0..10 {
            m = laplacian_smooth(&m, 1, 0.5, true).unwrap();
            let v = interior_z_variance(&m, &interior);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn boundary_preserved_bitwise() {
        let g = square_grid(5, 5, 1.0).map_vertices(|p| Point::new(p.x, p.y, (p.x * p.y).sin()));
        let s = laplacian_smooth(&g, 4, 0.7, true).unwrap();
        let b = boundary_vertices(g.vertex_count(), g.faces());
        for v in 0..g.vertex_count() {
            if b[v] {
                assert_eq!(s.vertices()[v], g.vertices()[v]);
            }
        }
    }
}
