//! Procedural test and benchmark geometry.

use std::collections::HashMap;

use crate::mesh::{Point, TriangleMesh, VolumeMesh};
use crate::voxel::VoxelGrid;

/// Icosahedron-based sphere centred at the origin with outward winding.
/// Each subdivision level quadruples the face count (20 · 4^level).
pub fn icosphere(radius: f64, subdivisions: u32) -> TriangleMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Point> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|v| Point::from(nalgebra::Vector3::from(*v).normalize()))
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let m = nalgebra::center(&verts[a], &verts[b]);
                verts.push(Point::from(m.coords.normalize()));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    let verts = verts.into_iter().map(|p| p * radius).collect();
    TriangleMesh::new(verts, faces).expect("icosphere is valid")
}

/// Latitude/longitude sphere; its pole fans contain thin triangles.
pub fn uv_sphere(radius: f64, rings: usize, segments: usize) -> TriangleMesh {
    assert!(rings >= 2 && segments >= 3);
    let mut verts = vec![Point::new(0.0, 0.0, radius)];
    for r in 1..rings {
        let theta = std::f64::consts::PI * r as f64 / rings as f64;
        for s in 0..segments {
            let phi = 2.0 * std::f64::consts::PI * s as f64 / segments as f64;
            verts.push(Point::new(
                radius * theta.sin() * phi.cos(),
                radius * theta.sin() * phi.sin(),
                radius * theta.cos(),
            ));
        }
    }
    verts.push(Point::new(0.0, 0.0, -radius));
    let south = verts.len() - 1;
    let ring = |r: usize, s: usize| 1 + (r - 1) * segments + (s % segments);
    let mut faces = Vec::new();
    for s in 0..segments {
        faces.push([0, ring(1, s), ring(1, s + 1)]);
    }
    for r in 1..rings - 1 {
        for s in 0..segments {
            let (a, b, c, d) = (ring(r, s), ring(r + 1, s), ring(r + 1, s + 1), ring(r, s + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    for s in 0..segments {
        faces.push([south, ring(rings - 1, s + 1), ring(rings - 1, s)]);
    }
    TriangleMesh::new(verts, faces).expect("uv sphere is valid")
}

/// Torus around the z axis with outward winding.
pub fn torus(major: f64, minor: f64, major_segments: usize, minor_segments: usize) -> TriangleMesh {
    let mut verts = Vec::with_capacity(major_segments * minor_segments);
    for i in 0..major_segments {
        let u = 2.0 * std::f64::consts::PI * i as f64 / major_segments as f64;
        for j in 0..minor_segments {
            let v = 2.0 * std::f64::consts::PI * j as f64 / minor_segments as f64;
            let rr = major + minor * v.cos();
            verts.push(Point::new(rr * u.cos(), rr * u.sin(), minor * v.sin()));
        }
    }
    let idx = |i: usize, j: usize| (i % major_segments) * minor_segments + (j % minor_segments);
    let mut faces = Vec::new();
    for i in 0..major_segments {
        for j in 0..minor_segments {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    TriangleMesh::new(verts, faces).expect("torus is valid")
}

/// Closed box surface over `[min, max]` with each face split into an
/// `n × n` grid of triangle pairs.
pub fn box_surface(min: Point, max: Point, n: usize) -> TriangleMesh {
    assert!(n >= 1);
    let mut index: HashMap<[usize; 3], usize> = HashMap::new();
    let mut verts = Vec::new();
    let mut faces = Vec::new();
    let mut vid = |l: [usize; 3], verts: &mut Vec<Point>| -> usize {
        *index.entry(l).or_insert_with(|| {
            let f = |a: usize| min[a] + (max[a] - min[a]) * l[a] as f64 / n as f64;
            verts.push(Point::new(f(0), f(1), f(2)));
            verts.len() - 1
        })
    };
    // (normal axis, side, u axis, v axis) with u × v pointing outward.
    let sides = [
        (0, n, 1, 2),
        (0, 0, 2, 1),
        (1, n, 2, 0),
        (1, 0, 0, 2),
        (2, n, 0, 1),
        (2, 0, 1, 0),
    ];
    for (axis, side, u, v) in sides {
        for i in 0..n {
            for j in 0..n {
                let lat = |du: usize, dv: usize| {
                    let mut l = [0; 3];
                    l[axis] = side;
                    l[u] = i + du;
                    l[v] = j + dv;
                    l
                };
                let a = vid(lat(0, 0), &mut verts);
                let b = vid(lat(1, 0), &mut verts);
                let c = vid(lat(1, 1), &mut verts);
                let d = vid(lat(0, 1), &mut verts);
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            }
        }
    }
    TriangleMesh::new(verts, faces).expect("box is valid")
}

/// Axis-aligned unit cube `[0, 1]³` as 12 triangles.
pub fn unit_cube() -> TriangleMesh {
    box_surface(Point::origin(), Point::new(1.0, 1.0, 1.0), 1)
}

/// Planar square grid in z = 0 with `nx × ny` cells of size `h`, each cell
/// split along the same diagonal.
pub fn square_grid(nx: usize, ny: usize, h: f64) -> TriangleMesh {
    let mut verts = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            verts.push(Point::new(i as f64 * h, j as f64 * h, 0.0));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut faces = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    TriangleMesh::new(verts, faces).expect("grid is valid")
}

/// Planar grid of equilateral triangles with edge length `edge`, rows offset
/// by half an edge.
pub fn equilateral_grid(nx: usize, ny: usize, edge: f64) -> TriangleMesh {
    let h = edge * 3f64.sqrt() / 2.0;
    let mut verts = Vec::new();
    for j in 0..=ny {
        let shift = if j % 2 == 1 { edge / 2.0 } else { 0.0 };
        for i in 0..=nx {
            verts.push(Point::new(i as f64 * edge + shift, j as f64 * h, 0.0));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut faces = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if j % 2 == 0 {
                faces.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                faces.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            } else {
                faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
    }
    TriangleMesh::new(verts, faces).expect("grid is valid")
}

/// Fully occupied block of `dims` cubic hexahedra with edge `h`, anchored
/// at the origin.
pub fn hex_block(dims: [usize; 3], h: f64) -> VolumeMesh {
    let grid = VoxelGrid::filled(Point::origin(), h, dims);
    grid.to_volume_mesh().expect("block is non-empty")
}
