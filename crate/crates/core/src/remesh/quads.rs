//! Triangle pairing into a quad-dominant mesh.

use serde::{Deserialize, Serialize};

use crate::geom::angle_between;
use crate::mesh::topology::edge_faces;
use crate::mesh::{triangle_cross, Point, QuadDominantMesh, TriangleMesh};

/// Candidate pairing of two triangles sharing an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    t1: usize,
    t2: usize,
    quad: [usize; 4],
    weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PairingStats {
    pub greedy_pairs: usize,
    /// Extra pairs gained by the augmenting-path pass.
    pub augmented_pairs: usize,
}

/// Interior corner angles of a quad, in degrees.
fn quad_angles(p: &[Point], q: &[usize; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for k in 0..4 {
        let c = p[q[k]];
        out[k] = angle_between(&(p[q[(k + 3) % 4]] - c), &(p[q[(k + 1) % 4]] - c)).to_degrees();
    }
    out
}

/// Pair weight: planarity (clamped normal agreement) times the closeness of
/// every corner to 90°. Zero for non-convex unions.
fn pair_weight(p: &[Point], quad: &[usize; 4]) -> f64 {
    let [a, d, b, c] = *quad;
    let n1 = triangle_cross(&p[a], &p[b], &p[c]);
    let n2 = triangle_cross(&p[b], &p[a], &p[d]);
    let (l1, l2) = (n1.norm(), n2.norm());
    if l1 == 0.0 || l2 == 0.0 {
        return 0.0;
    }
    let n = n1 / l1 + n2 / l2;
    // Convex iff the other diagonal also splits it into agreeing triangles.
    if triangle_cross(&p[d], &p[b], &p[c]).dot(&n) <= 0.0 || triangle_cross(&p[c], &p[a], &p[d]).dot(&n) <= 0.0 {
        return 0.0;
    }
    let planarity = (n1.dot(&n2) / (l1 * l2)).max(0.0);
    let worst = quad_angles(p, quad)
        .iter()
        .map(|t| (t - 90.0).abs())
        .fold(0.0, f64::max);
    let angle_score = (1.0 - worst / 90.0).max(0.0);
    planarity * angle_score
}

fn candidates(mesh: &TriangleMesh) -> Vec<Candidate> {
    let faces = mesh.faces();
    let p = mesh.vertices();
    let mut out = Vec::new();
    for ((a, b), fs) in edge_faces(faces) {
        if fs.len() != 2 {
            continue;
        }
        let has = |f: usize, x: usize, y: usize| {
            let t = faces[f];
            (0..3).any(|k| t[k] == x && t[(k + 1) % 3] == y)
        };
        // t1 traverses x -> y, t2 traverses y -> x.
        let (t1, t2, x, y) = if has(fs[0], a, b) && has(fs[1], b, a) {
            (fs[0], fs[1], a, b)
        } else if has(fs[0], b, a) && has(fs[1], a, b) {
            (fs[0], fs[1], b, a)
        } else {
            continue;
        };
        let c = *faces[t1].iter().find(|&&v| v != x && v != y).expect("third vertex");
        let d = *faces[t2].iter().find(|&&v| v != x && v != y).expect("third vertex");
        if c == d {
            continue;
        }
        let quad = [x, d, y, c];
        let weight = pair_weight(p, &quad);
        if weight > 0.0 {
            out.push(Candidate { t1, t2, quad, weight });
        }
    }
    out
}

/// Searches an alternating path from unmatched triangle `t` to another
/// unmatched triangle and flips it. Depth counts matched edges traversed.
fn augment(
    t: usize,
    adj: &[Vec<(usize, usize)>],
    mate: &mut [Option<usize>],
    pair_of: &mut [Option<usize>],
    depth: usize,
    visited: &mut Vec<bool>,
) -> bool {
    visited[t] = true;
    for &(u, cand) in &adj[t] {
        if visited[u] {
            continue;
        }
        match mate[u] {
            None => {
                mate[t] = Some(u);
                mate[u] = Some(t);
                pair_of[t] = Some(cand);
                pair_of[u] = Some(cand);
                return true;
            }
            Some(w) if depth > 0 && !visited[w] => {
                visited[u] = true;
                // Tentatively release u from w and try to rematch w.
                mate[w] = None;
                pair_of[w] = None;
                if augment(w, adj, mate, pair_of, depth - 1, visited) {
                    mate[t] = Some(u);
                    mate[u] = Some(t);
                    pair_of[t] = Some(cand);
                    pair_of[u] = Some(cand);
                    return true;
                }
                mate[w] = Some(u);
                pair_of[w] = pair_of[u];
            }
            _ => {}
        }
    }
    false
}

/// Greedy maximum-weight pairing over the dual graph (heaviest pair first,
/// ties by lowest edge), followed by bounded augmenting-path search that
/// rematches triangles left single. Every input triangle ends up in exactly
/// one quad or stays a triangle.
pub fn pair_to_quads_with_stats(mesh: &TriangleMesh, augment_depth: usize) -> (QuadDominantMesh, PairingStats) {
    let faces = mesh.faces();
    let mut cands = candidates(mesh);
    // Candidates come out in edge order; a stable sort keeps that as the tie-break.
    cands.sort_by(|x, y| y.weight.total_cmp(&x.weight));
    let nf = faces.len();
    let mut mate: Vec<Option<usize>> = vec![None; nf];
    let mut pair_of: Vec<Option<usize>> = vec![None; nf];
    let mut stats = PairingStats::default();
    for (i, c) in cands.iter().enumerate() {
        if mate[c.t1].is_none() && mate[c.t2].is_none() {
            mate[c.t1] = Some(c.t2);
            mate[c.t2] = Some(c.t1);
            pair_of[c.t1] = Some(i);
            pair_of[c.t2] = Some(i);
            stats.greedy_pairs += 1;
        }
    }
    if augment_depth > 0 {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
        for (i, c) in cands.iter().enumerate() {
            adj[c.t1].push((c.t2, i));
            adj[c.t2].push((c.t1, i));
        }
        for t in 0..nf {
            if mate[t].is_some() || adj[t].is_empty() {
                continue;
            }
            let mut visited = vec![false; nf];
            if augment(t, &adj, &mut mate, &mut pair_of, augment_depth, &mut visited) {
                stats.augmented_pairs += 1;
            }
        }
    }
    let mut quads = Vec::new();
    let mut triangles = Vec::new();
    for t in 0..nf {
        match (mate[t], pair_of[t]) {
            (Some(u), Some(ci)) if t < u => quads.push(cands[ci].quad),
            (Some(_), _) => {}
            (None, _) => triangles.push(faces[t]),
        }
    }
    let q = QuadDominantMesh::new(mesh.vertices().to_vec(), quads, triangles).expect("indices from a valid mesh");
    (q, stats)
}

/// Default augmenting-path depth for [`pair_to_quads`].
pub const AUGMENT_DEPTH: usize = 8;

pub fn pair_to_quads(mesh: &TriangleMesh) -> QuadDominantMesh {
    pair_to_quads_with_stats(mesh, AUGMENT_DEPTH).0
}
