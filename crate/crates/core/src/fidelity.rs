//! Geometric fidelity: surface sampling, unit-sphere normalization and the
//! symmetric Chamfer distance
//! CD(P, Q) = (1/|P|) Σ_p min_q ‖p − q‖² + (1/|Q|) Σ_q min_p ‖q − p‖².

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{Point, PointCloud, TriangleMesh, Vec3};

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

/// Balanced k-d tree over a fixed point set.
#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<Point>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn new(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let mut tree = KdTree {
            points: points.to_vec(),
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        tree.build(0, points.len());
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Builds the subtree over `order[start..end]` and returns its node id.
    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for &i in &self.order[start..end] {
            for a in 0..3 {
                lo[a] = lo[a].min(self.points[i][a]);
                hi[a] = hi[a].max(self.points[i][a]);
            }
        }
        let axis = (0..3).fold(0, |best, a| if hi[a] - lo[a] > hi[best] - lo[best] { a } else { best });
        let mid = start + (end - start) / 2;
        let pts = &self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&i, &j| {
            pts[i][axis].total_cmp(&pts[j][axis]).then(i.cmp(&j))
        });
        let value = self.points[self.order[mid]][axis];
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    /// Nearest point to `q`: (index into the input, squared distance). Ties
    /// resolve to the lowest index.
    pub fn nearest(&self, q: &Point) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(0, q, &mut best);
        best
    }

    fn search(&self, node: usize, q: &Point, best: &mut (usize, f64)) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d = (self.points[i] - q).norm_squared();
                    if d < best.1 || (d == best.1 && i < best.0) {
                        *best = (i, d);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, best);
                if diff * diff <= best.1 {
                    self.search(far, q, best);
                }
            }
        }
    }
}

/// `n` points drawn area-proportionally over the triangles and uniformly
/// within each, from a ChaCha8 stream seeded with `seed`.
pub fn sample_surface(mesh: &TriangleMesh, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let mut cdf = Vec::with_capacity(mesh.face_count());
    let mut total = 0.0;
    for f in 0..mesh.face_count() {
        total += mesh.face_area(f);
        cdf.push(total);
    }
    if !(total > 0.0) {
        return Err(Error::ZeroArea);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = mesh.vertices();
    let last = cdf.len() - 1;
    let points = (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * total;
            let f = cdf.partition_point(|&c| c <= u).min(last);
            let r1: f64 = rng.random::<f64>().sqrt();
            let r2: f64 = rng.random();
            let [a, b, c] = mesh.faces()[f];
            let (wa, wb, wc) = (1.0 - r1, r1 * (1.0 - r2), r1 * r2);
            Point::from(v[a].coords * wa + v[b].coords * wb + v[c].coords * wc)
        })
        .collect();
    Ok(PointCloud::new(points))
}

/// Translates the centroid to the origin and scales the farthest point to
/// radius 1.
pub fn normalize_unit_sphere(cloud: &PointCloud) -> Result<PointCloud> {
    let pts = cloud.points();
    if pts.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut sum = Vec3::zeros();
    for p in pts {
        sum += p.coords;
    }
    let c = sum / pts.len() as f64;
    let r = pts.iter().map(|p| (p.coords - c).norm()).fold(0.0, f64::max);
    if !(r > 0.0) {
        return Err(Error::ZeroRadius);
    }
    Ok(PointCloud::new(pts.iter().map(|p| Point::from((p.coords - c) / r)).collect()))
}

/// The two directed terms and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chamfer {
    pub cd: f64,
    pub term_p_to_q: f64,
    pub term_q_to_p: f64,
}

/// Mean squared nearest-neighbour distance from each point of `from` to
/// `to`; queries run in parallel and the sum runs in input order.
fn directed_term(from: &[Point], to: &KdTree) -> f64 {
    let d: Vec<f64> = from.par_iter().map(|p| to.nearest(p).1).collect();
    let mut s = 0.0;
    for x in &d {
        s += x;
    }
    s / from.len() as f64
}

pub fn chamfer_distance(p: &PointCloud, q: &PointCloud) -> Result<Chamfer> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let tp = KdTree::new(p.points())?;
    let tq = KdTree::new(q.points())?;
    let term_p_to_q = directed_term(p.points(), &tq);
    let term_q_to_p = directed_term(q.points(), &tp);
    Ok(Chamfer {
        cd: term_p_to_q + term_q_to_p,
        term_p_to_q,
        term_q_to_p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamferReport {
    pub cd: f64,
    pub term_p_to_q: f64,
    pub term_q_to_p: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Maps the mesh into [0, 1]³ by its bounding box (largest extent becomes
/// 1) before sampling, so the sampled cloud does not depend on the input's
/// placement or scale.
fn canonical(mesh: &TriangleMesh) -> Result<TriangleMesh> {
    let bb = mesh.bounding_box().ok_or(Error::EmptyMesh)?;
    let ext = bb.extent();
    let s = ext.x.max(ext.y).max(ext.z);
    if !(s > 0.0) {
        return Err(Error::ZeroArea);
    }
    Ok(mesh.map_vertices(|v| Point::from((v - bb.min) / s)))
}

/// Samples both meshes with `seed`, normalizes both clouds to the unit
/// sphere and evaluates the Chamfer distance. P is the reconstruction, Q the
/// reference.
pub fn evaluate_pair(
    reconstructed: &TriangleMesh,
    reference: &TriangleMesh,
    samples: usize,
    seed: u64,
) -> Result<ChamferReport> {
    let p = normalize_unit_sphere(&sample_surface(&canonical(reconstructed)?, samples, seed)?)?;
    let q = normalize_unit_sphere(&sample_surface(&canonical(reference)?, samples, seed)?)?;
    let c = chamfer_distance(&p, &q)?;
    Ok(ChamferReport {
        cd: c.cd,
        term_p_to_q: c.term_p_to_q,
        term_q_to_p: c.term_q_to_p,
        samples,
        seed,
    })
}

impl ChamferReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
