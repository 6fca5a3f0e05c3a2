//! Brute-force element quality metrics and aggregates.

use crate::{cross, dot, norm, sub, P3};

const HEX_FACES: [[usize; 4]; 6] = [
    [0, 3, 2, 1],
    [4, 5, 6, 7],
    [0, 1, 5, 4],
    [1, 2, 6, 5],
    [2, 3, 7, 6],
    [3, 0, 4, 7],
];
const HEX_EDGES: [[usize; 2]; 12] = [
    [0, 1],
    [1, 2],
    [2, 3],
    [3, 0],
    [4, 5],
    [5, 6],
    [6, 7],
    [7, 4],
    [0, 4],
    [1, 5],
    [2, 6],
    [3, 7],
];
const TET_FACES: [[usize; 3]; 4] = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];
const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

fn corner(prev: P3, at: P3, next: P3) -> f64 {
    let u = sub(prev, at);
    let v = sub(next, at);
    (dot(u, v) / (norm(u) * norm(v))).clamp(-1.0, 1.0).acos().to_degrees()
}

/// (min angle, max angle, aspect ratio, shape factor for tets).
pub fn metrics(pts: &[P3]) -> (f64, f64, f64, Option<f64>) {
    let mut angles = Vec::new();
    let faces: Vec<Vec<usize>> = if pts.len() == 8 {
        HEX_FACES.iter().map(|f| f.to_vec()).collect()
    } else {
        TET_FACES.iter().map(|f| f.to_vec()).collect()
    };
    for f in &faces {
        let n = f.len();
        for i in 0..n {
            angles.push(corner(pts[f[(i + n - 1) % n]], pts[f[i]], pts[f[(i + 1) % n]]));
        }
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &a in &angles {
        lo = lo.min(a);
        hi = hi.max(a);
    }
    let edges: &[[usize; 2]] = if pts.len() == 8 { &HEX_EDGES } else { &TET_EDGES };
    let lens: Vec<f64> = edges.iter().map(|e| norm(sub(pts[e[0]], pts[e[1]]))).collect();
    let shortest = lens.iter().copied().fold(f64::INFINITY, f64::min);
    let longest = lens.iter().copied().fold(0.0, f64::max);
    let sf = (pts.len() == 4).then(|| tet_shape_factor(pts));
    (lo, hi, longest / shortest, sf)
}

/// Volume over the volume of the equilateral tet inscribed in the same
/// circumsphere, from an explicit circumcentre solve.
pub fn tet_shape_factor(p: &[P3]) -> f64 {
    let a = sub(p[1], p[0]);
    let b = sub(p[2], p[0]);
    let c = sub(p[3], p[0]);
    let vol = dot(a, cross(b, c)).abs() / 6.0;
    // Circumcentre x solves 2·[a; b; c]·x = [|a|², |b|², |c|²].
    let m = [a, b, c];
    let rhs = [dot(a, a) / 2.0, dot(b, b) / 2.0, dot(c, c) / 2.0];
    let det = dot(m[0], cross(m[1], m[2]));
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = m;
        for r in 0..3 {
            mk[r][k] = rhs[r];
        }
        *xk = dot(mk[0], cross(mk[1], mk[2])) / det;
    }
    let r = norm(x);
    let regular = 8.0 * 3f64.sqrt() * r * r * r / 27.0;
    (vol / regular).min(1.0)
}

/// Aggregates over one element family, computed with a plain loop.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Aggregates {
    pub total: usize,
    pub min_angle_below: usize,
    pub average_min_angle: f64,
    pub worst_min_angle: f64,
    pub max_angle_above: usize,
    pub average_max_angle: f64,
    pub worst_max_angle: f64,
    pub aspect_ratio_above: usize,
    pub average_aspect_ratio: f64,
    pub worst_aspect_ratio: f64,
    pub shape_factor_below: usize,
    pub average_shape_factor: f64,
    pub worst_shape_factor: f64,
}

pub fn aggregate(elements: &[Vec<P3>], min_angle: f64, max_angle: f64, aspect: f64, shape: f64) -> Aggregates {
    let mut out = Aggregates {
        total: elements.len(),
        worst_min_angle: f64::INFINITY,
        worst_max_angle: f64::NEG_INFINITY,
        worst_aspect_ratio: f64::NEG_INFINITY,
        worst_shape_factor: f64::INFINITY,
        ..Default::default()
    };
    let (mut s_min, mut s_max, mut s_ar, mut s_sf) = (0.0, 0.0, 0.0, 0.0);
    for e in elements {
        let (lo, hi, ar, sf) = metrics(e);
        s_min += lo;
        s_max += hi;
        s_ar += ar;
        if lo < min_angle {
            out.min_angle_below += 1;
        }
        if hi > max_angle {
            out.max_angle_above += 1;
        }
        if ar > aspect {
            out.aspect_ratio_above += 1;
        }
        out.worst_min_angle = out.worst_min_angle.min(lo);
        out.worst_max_angle = out.worst_max_angle.max(hi);
        out.worst_aspect_ratio = out.worst_aspect_ratio.max(ar);
        if let Some(sf) = sf {
            s_sf += sf;
            if sf < shape {
                out.shape_factor_below += 1;
            }
            out.worst_shape_factor = out.worst_shape_factor.min(sf);
        }
    }
    let n = elements.len() as f64;
    out.average_min_angle = s_min / n;
    out.average_max_angle = s_max / n;
    out.average_aspect_ratio = s_ar / n;
    out.average_shape_factor = s_sf / n;
    out
}
