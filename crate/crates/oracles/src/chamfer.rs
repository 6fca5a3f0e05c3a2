//! O(N·M) Chamfer distance.

use crate::P3;

fn sq(a: P3, b: P3) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// Mean over `from` of the squared distance to the closest point of `to`.
pub fn directed(from: &[P3], to: &[P3]) -> f64 {
    let mut total = 0.0;
    for &p in from {
        let mut best = f64::INFINITY;
        for &q in to {
            best = best.min(sq(p, q));
        }
        total += best;
    }
    total / from.len() as f64
}

/// (cd, P→Q term, Q→P term).
pub fn chamfer(p: &[P3], q: &[P3]) -> (f64, f64, f64) {
    let a = directed(p, q);
    let b = directed(q, p);
    (a + b, a, b)
}

/// Index and squared distance of the nearest point, lowest index on ties.
pub fn nearest(points: &[P3], q: P3) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (i, &p) in points.iter().enumerate() {
        let d = sq(p, q);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}
