//! Binary glTF 2.0 (GLB) export of a vertex-coloured triangle surface.

use std::path::Path;

use serde_json::json;

use super::colormap::Colormap;
use crate::error::{Error, Result};
use crate::mesh::{Association, ScalarField, TriangleMesh};

const GLB_MAGIC: u32 = 0x4654_6C67;
const CHUNK_JSON: u32 = 0x4E4F_534A;
const CHUNK_BIN: u32 = 0x004E_4942;
const FLOAT: u32 = 5126;
const UNSIGNED_INT: u32 = 5125;
const ARRAY_BUFFER: u32 = 34962;
const ELEMENT_ARRAY_BUFFER: u32 = 34963;

/// Builds a GLB document with POSITION, COLOR_0 (RGB float) and u32 indices.
pub fn gltf_colored_bytes(mesh: &TriangleMesh, field: &ScalarField, colormap: Colormap) -> Result<Vec<u8>> {
    if field.association != Association::Node {
        return Err(Error::UnsupportedField(format!(
            "'{}' is per-element; glTF export needs per-node values",
            field.name
        )));
    }
    if field.values.len() != mesh.vertex_count() {
        return Err(Error::FieldLength {
            name: field.name.clone(),
            expected: mesh.vertex_count(),
            actual: field.values.len(),
        });
    }
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }

    let positions: Vec<[f32; 3]> = mesh
        .vertices()
        .iter()
        .map(|p| [p.x as f32, p.y as f32, p.z as f32])
        .collect();
    let colors = colormap.map_values(&field.values);
    let mut pmin = [f32::INFINITY; 3];
    let mut pmax = [f32::NEG_INFINITY; 3];
    for p in &positions {
        for a in 0..3 {
            pmin[a] = pmin[a].min(p[a]);
            pmax[a] = pmax[a].max(p[a]);
        }
    }

    let mut bin: Vec<u8> = Vec::new();
    for p in &positions {
        for c in p {
            bin.extend_from_slice(&c.to_le_bytes());
        }
    }
    let pos_len = bin.len();
    for c in &colors {
        for ch in c {
            bin.extend_from_slice(&(*ch as f32).to_le_bytes());
        }
    }
    let col_len = bin.len() - pos_len;
    for f in mesh.faces() {
        for &i in f {
            bin.extend_from_slice(&(i as u32).to_le_bytes());
        }
    }
    let idx_len = bin.len() - pos_len - col_len;
    while bin.len() % 4 != 0 {
        bin.push(0);
    }

    let (lo, hi) = field.range().unwrap_or((0.0, 0.0));
    let doc = json!({
        "asset": { "version": "2.0", "generator": "scan2sim" },
        "scene": 0,
        "scenes": [ { "nodes": [0] } ],
        "nodes": [ { "mesh": 0, "name": field.name } ],
        "meshes": [ {
            "name": field.name,
            "primitives": [ {
                "attributes": { "POSITION": 0, "COLOR_0": 1 },
                "indices": 2,
                "mode": 4
            } ],
            "extras": { "field": field.name, "min": lo, "max": hi, "colormap": colormap.name() }
        } ],
        "buffers": [ { "byteLength": bin.len() } ],
        "bufferViews": [
            { "buffer": 0, "byteOffset": 0, "byteLength": pos_len, "target": ARRAY_BUFFER },
            { "buffer": 0, "byteOffset": pos_len, "byteLength": col_len, "target": ARRAY_BUFFER },
            { "buffer": 0, "byteOffset": pos_len + col_len, "byteLength": idx_len, "target": ELEMENT_ARRAY_BUFFER }
        ],
        "accessors": [
            { "bufferView": 0, "componentType": FLOAT, "count": positions.len(), "type": "VEC3",
              "min": pmin, "max": pmax },
            { "bufferView": 1, "componentType": FLOAT, "count": colors.len(), "type": "VEC3" },
            { "bufferView": 2, "componentType": UNSIGNED_INT, "count": mesh.face_count() * 3, "type": "SCALAR" }
        ]
    });
    let mut json_bytes = serde_json::to_vec(&doc).expect("glTF JSON serializes");
    while json_bytes.len() % 4 != 0 {
        json_bytes.push(b' ');
    }

    let total = 12 + 8 + json_bytes.len() + 8 + bin.len();
    let mut out = Vec::with_capacity(total);
    out.extend_from_slice(&GLB_MAGIC.to_le_bytes());
    out.extend_from_slice(&2u32.to_le_bytes());
    out.extend_from_slice(&(total as u32).to_le_bytes());
    out.extend_from_slice(&(json_bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(&CHUNK_JSON.to_le_bytes());
    out.extend_from_slice(&json_bytes);
    out.extend_from_slice(&(bin.len() as u32).to_le_bytes());
    out.extend_from_slice(&CHUNK_BIN.to_le_bytes());
    out.extend_from_slice(&bin);
    Ok(out)
}

/// Writes the surface with per-vertex colours mapped from `field`.
pub fn export_gltf_colored(mesh: &TriangleMesh, field: &ScalarField, colormap: Colormap, path: &Path) -> Result<()> {
    let bytes = gltf_colored_bytes(mesh, field, colormap)?;
    super::write_bytes(path, &bytes)
}
