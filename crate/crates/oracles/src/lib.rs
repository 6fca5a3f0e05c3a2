//! Independent reference implementations for tests.
//!
//! Everything here works on plain arrays and shares no code with
//! `scan2sim-core`, so the two can be checked against each other.

pub mod chamfer;
pub mod fem;
pub mod gltf_validator;
pub mod inp;
pub mod inside;
pub mod quality;
pub mod vtk;

pub type P3 = [f64; 3];

pub(crate) fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: P3) -> f64 {
    dot(a, a).sqrt()
}
