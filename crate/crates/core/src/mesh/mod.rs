//! Core mesh containers shared by every stage of the pipeline.
//!
//! All geometry is expressed in millimetres. Containers validate their
//! invariants on construction and are treated as immutable afterwards;
//! operations that change geometry return new meshes.

mod cloud;
mod field;
pub mod hex;
mod surface;
pub mod topology;
mod volume;

pub use cloud::PointCloud;
pub use field::{Association, Field, ScalarField, VectorField};
pub use surface::{triangulate, QuadDominantMesh, TriangleMesh};
pub use volume::{tet_signed_volume, ElementKind, ElementNodes, VolumeMesh, TET_FACES};

pub type Point = nalgebra::Point3<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = Aabb {
            min: first,
            max: first,
        };
        for p in it {
            bb.include(p);
        }
        Some(bb)
    }

    pub fn include(&mut self, p: &Point) {
        for a in 0..3 {
            self.min[a] = self.min[a].min(p[a]);
            self.max[a] = self.max[a].max(p[a]);
        }
    }

    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn diagonal(&self) -> f64 {
        self.extent().norm()
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..3).all(|a| p[a] >= self.min[a] && p[a] <= self.max[a])
    }
}

/// Unnormalized normal of triangle `(a, b, c)`; its length is twice the area.
pub(crate) fn triangle_cross(a: &Point, b: &Point, c: &Point) -> Vec3 {
    (b - a).cross(&(c - a))
}

pub(crate) fn triangle_area(a: &Point, b: &Point, c: &Point) -> f64 {
    0.5 * triangle_cross(a, b, c).norm()
}
