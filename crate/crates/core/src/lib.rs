//! Scan-to-simulation mesh pipeline.
//!
//! Takes a reconstructed triangle surface through curvature-adaptive
//! quad-dominant remeshing, voxel hex meshing, element quality auditing and
//! linear-elastic static analysis, and measures geometric fidelity with the
//! Chamfer distance. Results are exported as legacy VTK, keyword decks and
//! vertex-coloured glTF.

pub mod error;
pub mod fea;
pub mod fidelity;
pub mod geom;
pub mod io;
pub mod mesh;
mod numeric;
pub mod primitives;
pub mod quality;
pub mod remesh;
pub mod voxel;

pub use error::{Error, Result};
