//! Curvature-adaptive isotropic remeshing: split, collapse, valence flips
//! and tangential relaxation with projection onto the input surface.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bvh::TriangleBvh;
use super::SizingField;
use crate::error::{Error, Result};
use crate::geom::triangle_angles;
use crate::mesh::topology::{edge_key, non_manifold_vertices, EdgeKey};
use crate::mesh::{triangle_cross, Point, TriangleMesh, Vec3};

const SPLIT_FACTOR: f64 = 4.0 / 3.0;
const COLLAPSE_FACTOR: f64 = 4.0 / 5.0;

/// Operation counts accumulated over all iterations.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RemeshDiagnostics {
    pub frozen_vertices: usize,
    pub splits: usize,
    pub collapses: usize,
    pub flips: usize,
}

struct Work<'a> {
    pos: Vec<Point>,
    size: Vec<f64>,
    boundary: Vec<bool>,
    frozen: Vec<bool>,
    alive: Vec<bool>,
    faces: Vec<[usize; 3]>,
    face_alive: Vec<bool>,
    vf: Vec<Vec<usize>>,
    surface: &'a TriangleBvh,
    input_faces: &'a [[usize; 3]],
    input_size: &'a [f64],
    diag: RemeshDiagnostics,
}

fn third(f: &[usize; 3], a: usize, b: usize) -> usize {
    *f.iter().find(|&&x| x != a && x != b).expect("triangle has a third vertex")
}

fn min_angle(a: &Point, b: &Point, c: &Point) -> f64 {
    triangle_angles(a, b, c).into_iter().fold(f64::INFINITY, f64::min)
}

impl<'a> Work<'a> {
    fn edge_faces(&self, a: usize, b: usize) -> Vec<usize> {
        self.vf[a]
            .iter()
            .copied()
            .filter(|&f| self.faces[f].contains(&b))
            .collect()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut n: Vec<usize> = self.vf[v]
            .iter()
            .flat_map(|&f| self.faces[f])
            .filter(|&w| w != v)
            .collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    fn edges(&self) -> Vec<EdgeKey> {
        let mut e: Vec<EdgeKey> = (0..self.faces.len())
            .filter(|&f| self.face_alive[f])
            .flat_map(|f| {
                let [a, b, c] = self.faces[f];
                [edge_key(a, b), edge_key(b, c), edge_key(c, a)]
            })
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    fn target(&self, a: usize, b: usize) -> f64 {
        0.5 * (self.size[a] + self.size[b])
    }

    fn length(&self, a: usize, b: usize) -> f64 {
        (self.pos[a] - self.pos[b]).norm()
    }

    fn remove_vf(&mut self, v: usize, f: usize) {
        if let Some(i) = self.vf[v].iter().position(|&x| x == f) {
            self.vf[v].remove(i);
        }
    }

    fn split_long_edges(&mut self) {
        for (a, b) in self.edges() {
            if self.frozen[a] || self.frozen[b] || self.length(a, b) <= SPLIT_FACTOR * self.target(a, b) {
                continue;
            }
            let fs = self.edge_faces(a, b);
            if fs.is_empty() || fs.len() > 2 {
                continue;
            }
            let m = self.pos.len();
            self.pos.push(Point::from((self.pos[a].coords + self.pos[b].coords) / 2.0));
            self.size.push(self.target(a, b));
            self.boundary.push(fs.len() == 1);
            self.frozen.push(false);
            self.alive.push(true);
            self.vf.push(Vec::new());
            for f in fs {
                let face = self.faces[f];
                let k = (0..3)
                    .find(|&k| {
                        let (p, q) = (face[k], face[(k + 1) % 3]);
                        (p == a && q == b) || (p == b && q == a)
                    })
                    .expect("edge in face");
                let (p, q, r) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
                self.faces[f] = [p, m, r];
                let g = self.faces.len();
                self.faces.push([m, q, r]);
                self.face_alive.push(true);
                self.remove_vf(q, f);
                self.vf[q].push(g);
                self.vf[m].push(f);
                self.vf[m].push(g);
                self.vf[r].push(g);
            }
            self.diag.splits += 1;
        }
    }

    /// Chooses (kept, removed, new position) for collapsing edge (a, b).
    fn collapse_plan(&self, a: usize, b: usize, fs: &[usize]) -> Option<(usize, usize, Point)> {
        let (ba, bb) = (self.boundary[a], self.boundary[b]);
        match (ba, bb) {
            (true, true) => {
                if fs.len() != 1 {
                    return None;
                }
                let (k, r) = (a.min(b), a.max(b));
                Some((k, r, self.pos[k]))
            }
            (true, false) => Some((a, b, self.pos[a])),
            (false, true) => Some((b, a, self.pos[b])),
            (false, false) => Some((a.min(b), a.max(b), Point::from((self.pos[a].coords + self.pos[b].coords) / 2.0))),
        }
    }

    fn try_collapse(&mut self, a: usize, b: usize) -> bool {
        let fs = self.edge_faces(a, b);
        if fs.is_empty() || fs.len() > 2 {
            return false;
        }
        let Some((k, r, np)) = self.collapse_plan(a, b, &fs) else {
            return false;
        };
        // Link condition: common neighbours are exactly the opposite vertices.
        let na = self.neighbors(a);
        let nb = self.neighbors(b);
        let common: Vec<usize> = na.iter().copied().filter(|x| nb.binary_search(x).is_ok()).collect();
        let mut opp: Vec<usize> = fs.iter().map(|&f| third(&self.faces[f], a, b)).collect();
        opp.sort_unstable();
        if common != opp {
            return false;
        }
        for &o in &opp {
            let min_val = if self.boundary[o] { 3 } else { 4 };
            if self.neighbors(o).len() < min_val {
                return false;
            }
        }
        let mut union: Vec<usize> = na.iter().chain(nb.iter()).copied().filter(|&x| x != a && x != b).collect();
        union.sort_unstable();
        union.dedup();
        if union.len() < 3 {
            return false;
        }
        let high = SPLIT_FACTOR * self.target(a, b);
        if union.iter().any(|&n| (np - self.pos[n]).norm() > high) {
            return false;
        }
        // No face may flip or degenerate.
        for &v in &[a, b] {
            for &f in &self.vf[v] {
                if fs.contains(&f) {
                    continue;
                }
                let face = self.faces[f];
                let before = triangle_cross(&self.pos[face[0]], &self.pos[face[1]], &self.pos[face[2]]);
                let moved = face.map(|x| if x == a || x == b { np } else { self.pos[x] });
                let after = triangle_cross(&moved[0], &moved[1], &moved[2]);
                if before.dot(&after) <= 0.0 || after.norm() <= 1e-12 * before.norm() {
                    return false;
                }
                if min_angle(&moved[0], &moved[1], &moved[2]) < 0.02 {
                    return false;
                }
            }
        }
        for &f in &fs {
            self.face_alive[f] = false;
            let face = self.faces[f];
            for v in face {
                self.remove_vf(v, f);
            }
        }
        let moved: Vec<usize> = std::mem::take(&mut self.vf[r]);
        for f in moved {
            for x in self.faces[f].iter_mut() {
                if *x == r {
                    *x = k;
                }
            }
            self.vf[k].push(f);
        }
        self.vf[k].sort_unstable();
        if np != self.pos[k] {
            self.size[k] = self.target(a, b);
        }
        self.pos[k] = np;
        self.alive[r] = false;
        self.diag.collapses += 1;
        true
    }

    fn collapse_short_edges(&mut self) {
        for (a, b) in self.edges() {
            if !self.alive[a] || !self.alive[b] || self.frozen[a] || self.frozen[b] {
                continue;
            }
            if self.edge_faces(a, b).is_empty() {
                continue;
            }
            if self.length(a, b) >= COLLAPSE_FACTOR * self.target(a, b) {
                continue;
            }
            self.try_collapse(a, b);
        }
    }

    fn valence_deviation(&self, v: usize, val: usize) -> i64 {
        let opt = if self.boundary[v] { 4 } else { 6 };
        let d = val as i64 - opt;
        d * d
    }

    fn flip_edges(&mut self) {
        for (a, b) in self.edges() {
            if self.frozen[a] || self.frozen[b] {
                continue;
            }
            let fs = self.edge_faces(a, b);
            if fs.len() != 2 {
                continue;
            }
            // Orient so that f1 traverses a -> b.
            let (f1, f2) = {
                let f = self.faces[fs[0]];
                if (0..3).any(|k| f[k] == a && f[(k + 1) % 3] == b) {
                    (fs[0], fs[1])
                } else {
                    (fs[1], fs[0])
                }
            };
            let c = third(&self.faces[f1], a, b);
            let d = third(&self.faces[f2], a, b);
            if c == d || self.frozen[c] || self.frozen[d] || self.neighbors(c).binary_search(&d).is_ok() {
                continue;
            }
            let (va, vb, vc, vd) = (
                self.neighbors(a).len(),
                self.neighbors(b).len(),
                self.neighbors(c).len(),
                self.neighbors(d).len(),
            );
            if va <= 3 || vb <= 3 {
                continue;
            }
            let before = self.valence_deviation(a, va)
                + self.valence_deviation(b, vb)
                + self.valence_deviation(c, vc)
                + self.valence_deviation(d, vd);
            let after = self.valence_deviation(a, va - 1)
                + self.valence_deviation(b, vb - 1)
                + self.valence_deviation(c, vc + 1)
                + self.valence_deviation(d, vd + 1);
            if after >= before {
                continue;
            }
            let p = &self.pos;
            let n_old = triangle_cross(&p[a], &p[b], &p[c]) + triangle_cross(&p[b], &p[a], &p[d]);
            let n1 = triangle_cross(&p[a], &p[d], &p[c]);
            let n2 = triangle_cross(&p[d], &p[b], &p[c]);
            if n1.dot(&n_old) <= 0.0 || n2.dot(&n_old) <= 0.0 || n1.dot(&n2) <= 0.0 {
                continue;
            }
            let old_min = min_angle(&p[a], &p[b], &p[c]).min(min_angle(&p[b], &p[a], &p[d]));
            let new_min = min_angle(&p[a], &p[d], &p[c]).min(min_angle(&p[d], &p[b], &p[c]));
            if new_min < 0.75 * old_min {
                continue;
            }
            self.faces[f1] = [a, d, c];
            self.faces[f2] = [d, b, c];
            self.remove_vf(a, f2);
            self.remove_vf(b, f1);
            self.vf[c].push(f2);
            self.vf[d].push(f1);
            self.diag.flips += 1;
        }
    }

    fn vertex_normals(&self) -> Vec<Vec3> {
        let mut n = vec![Vec3::zeros(); self.pos.len()];
        for (f, face) in self.faces.iter().enumerate() {
            if !self.face_alive[f] {
                continue;
            }
            let c = triangle_cross(&self.pos[face[0]], &self.pos[face[1]], &self.pos[face[2]]);
            for &v in face {
                n[v] += c;
            }
        }
        n.into_iter().map(|v| v.try_normalize(0.0).unwrap_or_else(Vec3::zeros)).collect()
    }

    /// Sizing interpolated from the input field at a surface point.
    fn size_at(&self, face: usize, bary: [f64; 3]) -> f64 {
        let f = self.input_faces[face];
        bary[0] * self.input_size[f[0]] + bary[1] * self.input_size[f[1]] + bary[2] * self.input_size[f[2]]
    }

    fn relax(&mut self) {
        let normals = self.vertex_normals();
        let nbrs: Vec<Vec<usize>> = (0..self.pos.len()).map(|v| self.neighbors(v)).collect();
        let this = &*self;
        let updates: Vec<Option<(Point, f64)>> = (0..this.pos.len())
            .into_par_iter()
            .map(|v| {
                if !this.alive[v] || this.frozen[v] || nbrs[v].is_empty() {
                    return None;
                }
                let p = this.pos[v];
                let target = if this.boundary[v] {
                    p
                } else {
                    let mut q = Vec3::zeros();
                    for &w in &nbrs[v] {
                        q += this.pos[w].coords;
                    }
                    q /= nbrs[v].len() as f64;
                    let d = q - p.coords;
                    let n = normals[v];
                    p + (d - n * n.dot(&d))
                };
                let c = this.surface.closest(&target)?;
                let moved = if this.boundary[v] { p } else { c.point };
                Some((moved, this.size_at(c.face, c.bary)))
            })
            .collect();
        for (v, u) in updates.into_iter().enumerate() {
            if let Some((p, s)) = u {
                self.pos[v] = p;
                self.size[v] = s;
            }
        }
    }

    fn into_mesh(self) -> Result<TriangleMesh> {
        let mut map = vec![usize::MAX; self.pos.len()];
        let mut verts = Vec::new();
        for v in 0..self.pos.len() {
            if self.alive[v] && !self.vf[v].is_empty() {
                map[v] = verts.len();
                verts.push(self.pos[v]);
            }
        }
        let faces = (0..self.faces.len())
            .filter(|&f| self.face_alive[f])
            .map(|f| self.faces[f].map(|v| map[v]))
            .collect();
        TriangleMesh::new(verts, faces)
    }
}

/// Remeshes towards the per-vertex target edge lengths in `sizing`.
///
/// Vertices of non-manifold regions are frozen: edges touching them are
/// never split, collapsed or flipped and they never move.
pub fn isotropic_remesh(
    mesh: &TriangleMesh,
    sizing: &SizingField,
    iterations: usize,
) -> Result<(TriangleMesh, RemeshDiagnostics)> {
    let n = mesh.vertex_count();
    if sizing.values.len() != n {
        return Err(Error::FieldLength {
            name: "sizing".into(),
            expected: n,
            actual: sizing.values.len(),
        });
    }
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let faces = mesh.faces();
    let frozen = non_manifold_vertices(n, faces);
    let frozen_count = frozen.iter().filter(|&&f| f).count();
    if frozen_count > 0 {
        warn!("{frozen_count} non-manifold vertices frozen during remeshing");
    }
    let bvh = TriangleBvh::new(mesh);
    let mut vf = vec![Vec::new(); n];
    for (f, face) in faces.iter().enumerate() {
        for &v in face {
            vf[v].push(f);
        }
    }
    let mut work = Work {
        pos: mesh.vertices().to_vec(),
        size: sizing.values.clone(),
        boundary: crate::mesh::topology::boundary_vertices(n, faces),
        frozen,
        alive: vec![true; n],
        faces: faces.to_vec(),
        face_alive: vec![true; faces.len()],
        vf,
        surface: &bvh,
        input_faces: faces,
        input_size: &sizing.values,
        diag: RemeshDiagnostics {
            frozen_vertices: frozen_count,
            ..Default::default()
        },
    };
    for _ in 0..iterations {
        work.split_long_edges();
        work.collapse_short_edges();
        work.flip_edges();
        work.relax();
    }
    let diag = work.diag.clone();
    Ok((work.into_mesh()?, diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::{equilateral_grid, icosphere};
    use crate::remesh::SizingField;

    fn uniform(n: usize, e: f64) -> SizingField {
        SizingField {
            values: vec![e; n],
            min_edge: e,
            max_edge: e,
        }
    }

    #[test]
    fn sphere_reaches_target_length() {
        let m = icosphere(10.0, 2);
        let e = 1.5;
        let (out, _) = isotropic_remesh(&m, &uniform(m.vertex_count(), e), 5).unwrap();
        let mut l = out.edge_lengths();
        l.sort_by(f64::total_cmp);
        let median = l[l.len() / 2];
        assert!((median - e).abs() < 0.3 * e, "median {median}");
        assert!(out.is_closed());
        assert!(out.signed_volume() > 0.0);
    }

    #[test]
    fn equilateral_grid_at_target_is_stable() {
        let g = equilateral_grid(6, 6, 1.0);
        let (out, d) = isotropic_remesh(&g, &uniform(g.vertex_count(), 1.0), 1).unwrap();
        assert_eq!(out.faces(), g.faces());
        assert_eq!(d.splits + d.collapses + d.flips, 0);
    }

    #[test]
    fn sizing_length_checked() {
        let m = icosphere(1.0, 0);
        assert!(isotropic_remesh(&m, &uniform(3, 1.0), 1).is_err());
    }
}
