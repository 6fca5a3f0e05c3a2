//! Ray-parity point containment for closed triangle meshes.

use crate::{cross, dot, sub, P3};

/// Fixed direction with irrational-looking components so rays almost never
/// graze edges or vertices of test meshes.
const DIR: P3 = [0.573_048_2, 0.621_803_7, 0.534_982_9];

fn hits(p: P3, a: P3, b: P3, c: P3) -> bool {
    let e1 = sub(b, a);
    let e2 = sub(c, a);
    let h = cross(DIR, e2);
    let det = dot(e1, h);
    if det.abs() < 1e-14 {
        return false;
    }
    let inv = 1.0 / det;
    let s = sub(p, a);
    let u = inv * dot(s, h);
    if !(0.0..=1.0).contains(&u) {
        return false;
    }
    let q = cross(s, e1);
    let v = inv * dot(DIR, q);
    if v < 0.0 || u + v > 1.0 {
        return false;
    }
    inv * dot(e2, q) > 0.0
}

/// Odd number of crossings along a fixed ray means inside.
pub fn ray_parity_inside(vertices: &[P3], faces: &[[usize; 3]], p: P3) -> bool {
    let count = faces
        .iter()
        .filter(|f| hits(p, vertices[f[0]], vertices[f[1]], vertices[f[2]]))
        .count();
    count % 2 == 1
}
