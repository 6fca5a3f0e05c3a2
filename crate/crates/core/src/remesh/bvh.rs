//! Bounding-volume hierarchy for closest-point queries on a fixed triangle
//! set.

use crate::geom::closest_point_on_triangle;
use crate::mesh::{Aabb, Point, TriangleMesh};

const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone)]
struct Node {
    bb: Aabb,
    /// Leaf: triangle range in `order`; inner: child node ids.
    leaf: bool,
    a: usize,
    b: usize,
}

/// Closest surface point with its triangle and barycentric weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closest {
    pub point: Point,
    pub face: usize,
    pub bary: [f64; 3],
    pub dist2: f64,
}

#[derive(Debug, Clone)]
pub struct TriangleBvh {
    tris: Vec<[Point; 3]>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

fn dist2_to_box(bb: &Aabb, p: &Point) -> f64 {
    let mut d = 0.0;
    for a in 0..3 {
        let e = (bb.min[a] - p[a]).max(p[a] - bb.max[a]).max(0.0);
        d += e * e;
    }
    d
}

impl TriangleBvh {
    pub fn new(mesh: &TriangleMesh) -> Self {
        let tris: Vec<[Point; 3]> = (0..mesh.face_count()).map(|f| mesh.face_points(f)).collect();
        let mut bvh = TriangleBvh {
            order: (0..tris.len()).collect(),
            tris,
            nodes: Vec::new(),
        };
        if !bvh.tris.is_empty() {
            let n = bvh.tris.len();
            bvh.build(0, n);
        }
        bvh
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        let bb = Aabb::from_points(self.order[start..end].iter().flat_map(|&t| self.tris[t].iter()))
            .expect("non-empty range");
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node {
                bb,
                leaf: true,
                a: start,
                b: end,
            });
            return id;
        }
        let centroid = |t: usize| (self.tris[t][0].coords + self.tris[t][1].coords + self.tris[t][2].coords) / 3.0;
        let cb = Aabb::from_points(
            self.order[start..end]
                .iter()
                .map(|&t| Point::from(centroid(t)))
                .collect::<Vec<_>>()
                .iter(),
        )
        .expect("non-empty range");
        let ext = cb.extent();
        let axis = (0..3).fold(0, |best, a| if ext[a] > ext[best] { a } else { best });
        let mid = start + (end - start) / 2;
        let tris = &self.tris;
        self.order[start..end].select_nth_unstable_by(mid - start, |&i, &j| {
            let ci = (tris[i][0][axis] + tris[i][1][axis] + tris[i][2][axis]) / 3.0;
            let cj = (tris[j][0][axis] + tris[j][1][axis] + tris[j][2][axis]) / 3.0;
            ci.total_cmp(&cj).then(i.cmp(&j))
        });
        self.nodes.push(Node {
            bb,
            leaf: false,
            a: 0,
            b: 0,
        });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id].a = left;
        self.nodes[id].b = right;
        id
    }

    /// Closest point on the triangle set; ties resolve to the lowest face.
    pub fn closest(&self, p: &Point) -> Option<Closest> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best: Option<Closest> = None;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if let Some(b) = &best {
                if dist2_to_box(&node.bb, p) > b.dist2 {
                    continue;
                }
            }
            if node.leaf {
                for &t in &self.order[node.a..node.b] {
                    let [a, b, c] = &self.tris[t];
                    let (q, bary) = closest_point_on_triangle(p, a, b, c);
                    let d = (q - p).norm_squared();
                    let better = match &best {
                        None => true,
                        Some(cur) => d < cur.dist2 || (d == cur.dist2 && t < cur.face),
                    };
                    if better {
                        best = Some(Closest {
                            point: q,
                            face: t,
                            bary,
                            dist2: d,
                        });
                    }
                }
            } else {
                let (l, r) = (node.a, node.b);
                let dl = dist2_to_box(&self.nodes[l].bb, p);
                let dr = dist2_to_box(&self.nodes[r].bb, p);
                // Push the farther child first so the nearer one is visited first.
                if dl <= dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        best
    }
}
