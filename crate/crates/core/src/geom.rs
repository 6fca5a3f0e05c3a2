//! Small geometric kernels.

use crate::mesh::{Point, Vec3};

/// Angle between two vectors in radians, in [0, π].
///
/// Returns NaN if either vector has zero length.
pub fn angle_between(u: &Vec3, v: &Vec3) -> f64 {
    let denom = u.norm() * v.norm();
    if denom == 0.0 {
        return f64::NAN;
    }
    (u.dot(v) / denom).clamp(-1.0, 1.0).acos()
}

/// Interior angles of triangle `(a, b, c)` at a, b and c, in radians.
pub fn triangle_angles(a: &Point, b: &Point, c: &Point) -> [f64; 3] {
    [
        angle_between(&(b - a), &(c - a)),
        angle_between(&(c - b), &(a - b)),
        angle_between(&(a - c), &(b - c)),
    ]
}

/// Closest point on triangle `(a, b, c)` to `p`, with its barycentric
/// coordinates (weights of a, b, c).
pub fn closest_point_on_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> (Point, [f64; 3]) {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (*a, [1.0, 0.0, 0.0]);
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (*b, [0.0, 1.0, 0.0]);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (a + ab * v, [1.0 - v, v, 0.0]);
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (*c, [0.0, 0.0, 1.0]);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (a + ac * w, [1.0 - w, 0.0, w]);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + (c - b) * w, [0.0, 1.0 - w, w]);
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (a + ab * v + ac * w, [1.0 - v - w, v, w])
}

/// Signed solid angle subtended at `p` by triangle `(a, b, c)`.
pub fn solid_angle(p: &Point, a: &Point, b: &Point, c: &Point) -> f64 {
    let ra = a - p;
    let rb = b - p;
    let rc = c - p;
    let la = ra.norm();
    let lb = rb.norm();
    let lc = rc.norm();
    let numer = ra.dot(&rb.cross(&rc));
    let denom = la * lb * lc + ra.dot(&rb) * lc + rb.dot(&rc) * la + rc.dot(&ra) * lb;
    2.0 * numer.atan2(denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closest_point_regions() {
        let a = Point::new(0.0, 0.0, 0.0);
        let b = Point::new(1.0, 0.0, 0.0);
        let c = Point::new(0.0, 1.0, 0.0);
        let (q, w) = closest_point_on_triangle(&Point::new(0.2, 0.2, 5.0), &a, &b, &c);
        assert_relative_eq!(q, Point::new(0.2, 0.2, 0.0), epsilon = 1e-15);
        assert_relative_eq!(w[0], 0.6, epsilon = 1e-15);
        let (q, _) = closest_point_on_triangle(&Point::new(-1.0, -1.0, 0.0), &a, &b, &c);
        assert_eq!(q, a);
        let (q, w) = closest_point_on_triangle(&Point::new(1.0, 1.0, 0.0), &a, &b, &c);
        assert_relative_eq!(q, Point::new(0.5, 0.5, 0.0), epsilon = 1e-15);
        assert_relative_eq!(w[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn solid_angle_of_octant() {
        // The triangle spanning the three unit axes covers one octant: 4π/8.
        let p = Point::origin();
        let omega = solid_angle(
            &p,
            &Point::new(1.0, 0.0, 0.0),
            &Point::new(0.0, 1.0, 0.0),
            &Point::new(0.0, 0.0, 1.0),
        );
        assert_relative_eq!(omega, std::f64::consts::PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn right_triangle_angles() {
        let ang = triangle_angles(
            &Point::new(0.0, 0.0, 0.0),
            &Point::new(1.0, 0.0, 0.0),
            &Point::new(0.0, 1.0, 0.0),
        );
        assert_relative_eq!(ang[0].to_degrees(), 90.0, epsilon = 1e-12);
        assert_relative_eq!(ang[1].to_degrees(), 45.0, epsilon = 1e-12);
    }
}
