//! Element quality metrics, aggregate statistics and the pre-analysis gate.
//!
//! Angles are face-corner angles in degrees: 24 per hex (4 per quad face)
//! and 12 per tet. Aspect ratio is longest over shortest edge. The tet shape
//! factor is the element volume divided by the volume of the equilateral tet
//! inscribed in the same circumsphere.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::angle_between;
use crate::mesh::{hex, tet_signed_volume, ElementKind, Point, VolumeMesh, TET_FACES};

const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

fn degenerate(reason: &str) -> Error {
    Error::DegenerateElement {
        element: 0,
        reason: reason.to_string(),
    }
}

fn polygon_corner_angles(pts: &[Point], face: &[usize], out: &mut Vec<f64>) -> Result<()> {
    let n = face.len();
    for i in 0..n {
        let p = pts[face[i]];
        let prev = pts[face[(i + n - 1) % n]] - p;
        let next = pts[face[(i + 1) % n]] - p;
        let a = angle_between(&prev, &next);
        if a.is_nan() {
            return Err(degenerate("coincident vertices"));
        }
        out.push(a.to_degrees());
    }
    Ok(())
}

/// Face-corner angles in degrees: 24 for a hex, 12 for a tet.
pub fn corner_angles(points: &[Point]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(24);
    match points.len() {
        8 => {
            for f in hex::FACES {
                polygon_corner_angles(points, &f, &mut out)?;
            }
        }
        4 => {
            for f in TET_FACES {
                polygon_corner_angles(points, &f, &mut out)?;
            }
        }
        n => return Err(Error::InvalidParameter(format!("element with {n} nodes"))),
    }
    Ok(out)
}

/// Longest edge over shortest edge.
pub fn aspect_ratio(points: &[Point]) -> Result<f64> {
    let edges: &[[usize; 2]] = match points.len() {
        8 => &hex::EDGES,
        4 => &TET_EDGES,
        n => return Err(Error::InvalidParameter(format!("element with {n} nodes"))),
    };
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for [a, b] in edges {
        let l = (points[*a] - points[*b]).norm();
        lo = lo.min(l);
        hi = hi.max(l);
    }
    if !(lo > 0.0) {
        return Err(degenerate("zero-length edge"));
    }
    Ok(hi / lo)
}

/// Shape factor of a tet in [0, 1]; 1 for the regular tet.
pub fn shape_factor(p: &[Point; 4]) -> Result<f64> {
    let a = p[1] - p[0];
    let b = p[2] - p[0];
    let c = p[3] - p[0];
    // Circumcentre offset times 12·V.
    let num = b.cross(&c) * a.norm_squared() + c.cross(&a) * b.norm_squared() + a.cross(&b) * c.norm_squared();
    let m = num.norm();
    if !(m > 0.0) {
        return Err(degenerate("zero circumradius"));
    }
    let v = tet_signed_volume(p).abs();
    // V / (8√3 R³ / 27) with R = m / (12 V).
    let sf = 27.0 * 1728.0 * v.powi(4) / (8.0 * 3f64.sqrt() * m.powi(3));
    Ok(sf.min(1.0))
}

/// Audit thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    pub min_angle_hex: f64,
    pub min_angle_tet: f64,
    pub max_angle: f64,
    pub aspect_ratio: f64,
    pub shape_factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_angle_hex: 10.0,
            min_angle_tet: 5.0,
            max_angle: 160.0,
            aspect_ratio: 10.0,
            shape_factor: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementQuality {
    pub element: usize,
    pub kind: ElementKind,
    pub min_corner_angle: f64,
    pub max_corner_angle: f64,
    pub aspect_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateElement {
    pub element: usize,
    pub reason: String,
}

/// Aggregates over one element family. Averages and extrema cover the
/// non-degenerate elements; `None` when there are none.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyStats {
    pub total: usize,
    pub degenerate: usize,
    pub min_angle_below: usize,
    pub average_min_angle: Option<f64>,
    pub worst_min_angle: Option<f64>,
    pub max_angle_above: usize,
    pub average_max_angle: Option<f64>,
    pub worst_max_angle: Option<f64>,
    pub aspect_ratio_above: usize,
    pub average_aspect_ratio: Option<f64>,
    pub worst_aspect_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape_factor_below: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average_shape_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_shape_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub thresholds: Thresholds,
    pub hex: FamilyStats,
    pub tet: FamilyStats,
    /// True iff no element violates the max-angle, aspect-ratio or
    /// shape-factor thresholds and no element is degenerate.
    pub gate_passed: bool,
    pub degenerate: Vec<DegenerateElement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<ElementQuality>,
}

/// Metrics of one element; `Err` carries the degeneracy reason.
pub fn element_quality(mesh: &VolumeMesh, e: usize) -> std::result::Result<ElementQuality, String> {
    let kind = mesh.element(e).kind();
    let pts = mesh.element_points(e);
    let reason = |err: Error| match err {
        Error::DegenerateElement { reason, .. } => reason,
        other => other.to_string(),
    };
    let angles = corner_angles(&pts).map_err(reason)?;
    let min = angles.iter().copied().fold(f64::INFINITY, f64::min);
    let max = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ar = aspect_ratio(&pts).map_err(reason)?;
    let sf = match kind {
        ElementKind::Tet4 => Some(shape_factor(&[pts[0], pts[1], pts[2], pts[3]]).map_err(reason)?),
        ElementKind::Hex8 => None,
    };
    Ok(ElementQuality {
        element: e,
        kind,
        min_corner_angle: min,
        max_corner_angle: max,
        aspect_ratio: ar,
        shape_factor: sf,
    })
}

fn family_stats(records: &[&ElementQuality], degenerate: usize, kind: ElementKind, t: &Thresholds) -> FamilyStats {
    let n = records.len();
    let mean = |f: &dyn Fn(&ElementQuality) -> f64| {
        if n == 0 {
            None
        } else {
            let mut s = 0.0;
            for r in records {
                s += f(r);
            }
            Some(s / n as f64)
        }
    };
    let fold = |f: &dyn Fn(&ElementQuality) -> f64, pick: fn(f64, f64) -> f64| {
        records.iter().map(|r| f(r)).reduce(pick)
    };
    let min_thr = match kind {
        ElementKind::Hex8 => t.min_angle_hex,
        ElementKind::Tet4 => t.min_angle_tet,
    };
    let sf = |r: &ElementQuality| r.shape_factor.unwrap_or(1.0);
    let is_tet = kind == ElementKind::Tet4;
    FamilyStats {
        total: n + degenerate,
        degenerate,
        min_angle_below: records.iter().filter(|r| r.min_corner_angle < min_thr).count(),
        average_min_angle: mean(&|r| r.min_corner_angle),
        worst_min_angle: fold(&|r| r.min_corner_angle, f64::min),
        max_angle_above: records.iter().filter(|r| r.max_corner_angle > t.max_angle).count(),
        average_max_angle: mean(&|r| r.max_corner_angle),
        worst_max_angle: fold(&|r| r.max_corner_angle, f64::max),
        aspect_ratio_above: records.iter().filter(|r| r.aspect_ratio > t.aspect_ratio).count(),
        average_aspect_ratio: mean(&|r| r.aspect_ratio),
        worst_aspect_ratio: fold(&|r| r.aspect_ratio, f64::max),
        shape_factor_below: is_tet.then(|| records.iter().filter(|r| sf(r) < t.shape_factor).count()),
        average_shape_factor: if is_tet { mean(&sf) } else { None },
        worst_shape_factor: if is_tet { fold(&sf, f64::min) } else { None },
    }
}

/// Audits every element. Per-element metrics are computed in parallel and
/// aggregated sequentially in element order. Set `keep_elements` to retain
/// the per-element records in the report.
pub fn audit(mesh: &VolumeMesh, thresholds: &Thresholds, keep_elements: bool) -> Result<QualityReport> {
    if mesh.element_count() == 0 {
        return Err(Error::EmptyMesh);
    }
    let results: Vec<_> = (0..mesh.element_count())
        .into_par_iter()
        .map(|e| element_quality(mesh, e))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut degenerate = Vec::new();
    for (e, r) in results.into_iter().enumerate() {
        match r {
            Ok(q) => records.push(q),
            Err(reason) => degenerate.push(DegenerateElement { element: e, reason }),
        }
    }
    let nh = mesh.hexes().len();
    let hexes: Vec<&ElementQuality> = records.iter().filter(|r| r.kind == ElementKind::Hex8).collect();
    let tets: Vec<&ElementQuality> = records.iter().filter(|r| r.kind == ElementKind::Tet4).collect();
    let hex_degenerate = degenerate.iter().filter(|d| d.element < nh).count();
    let hex = family_stats(&hexes, hex_degenerate, ElementKind::Hex8, thresholds);
    let tet = family_stats(&tets, degenerate.len() - hex_degenerate, ElementKind::Tet4, thresholds);
    let gate_passed = degenerate.is_empty()
        && hex.max_angle_above == 0
        && tet.max_angle_above == 0
        && hex.aspect_ratio_above == 0
        && tet.aspect_ratio_above == 0
        && tet.shape_factor_below.unwrap_or(0) == 0;
    Ok(QualityReport {
        thresholds: thresholds.clone(),
        hex,
        tet,
        gate_passed,
        degenerate,
        elements: if keep_elements { records } else { Vec::new() },
    })
}

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.digits$}"))
}

impl QualityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text table with one row per metric and a column per family.
    pub fn to_table(&self) -> String {
        let t = &self.thresholds;
        let (h, k) = (&self.hex, &self.tet);
        let rows: Vec<(String, String, String)> = vec![
            ("Total elements".into(), h.total.to_string(), k.total.to_string()),
            (
                format!("Minimum angle < {}° (hex) / {}° (tet)", t.min_angle_hex, t.min_angle_tet),
                h.min_angle_below.to_string(),
                k.min_angle_below.to_string(),
            ),
            ("Average minimum angle (°)".into(), cell(h.average_min_angle, 2), cell(k.average_min_angle, 2)),
            ("Worst minimum angle (°)".into(), cell(h.worst_min_angle, 2), cell(k.worst_min_angle, 2)),
            (
                format!("Maximum angle > {}°", t.max_angle),
                h.max_angle_above.to_string(),
                k.max_angle_above.to_string(),
            ),
            ("Average maximum angle (°)".into(), cell(h.average_max_angle, 2), cell(k.average_max_angle, 2)),
            (
                format!("Aspect ratio > {}", t.aspect_ratio),
                h.aspect_ratio_above.to_string(),
                k.aspect_ratio_above.to_string(),
            ),
            ("Average aspect ratio".into(), cell(h.average_aspect_ratio, 2), cell(k.average_aspect_ratio, 2)),
            ("Worst aspect ratio".into(), cell(h.worst_aspect_ratio, 2), cell(k.worst_aspect_ratio, 2)),
            (
                format!("Shape factor < {}", t.shape_factor),
                "-".into(),
                k.shape_factor_below.map_or("-".into(), |c| c.to_string()),
            ),
            ("Average shape factor".into(), "-".into(), cell(k.average_shape_factor, 4)),
            ("Worst shape factor".into(), "-".into(), cell(k.worst_shape_factor, 4)),
            ("Degenerate elements".into(), h.degenerate.to_string(), k.degenerate.to_string()),
        ];
        let w0 = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0).max(6);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(3);
        let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max(3);
        let mut out = String::new();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
        let _ = writeln!(out, "{} | {} | {}", pad("Metric", w0), pad("Hex", w1), pad("Tet", w2));
        let _ = writeln!(out, "{}-+-{}-+-{}", "-".repeat(w0), "-".repeat(w1), "-".repeat(w2));
        for (a, b, c) in &rows {
            let _ = writeln!(out, "{} | {} | {}", pad(a, w0), pad(b, w1), pad(c, w2));
        }
        let _ = writeln!(out, "Gate: {}", if self.gate_passed { "PASS" } else { "FAIL" });
        out
    }
}
