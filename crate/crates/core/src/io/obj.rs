//! Wavefront OBJ (`v` / `f` records, 1-based indices).

use std::fmt::Write as _;

use super::format::sig;
use crate::error::{Error, Result};
use crate::mesh::{Point, QuadDominantMesh, TriangleMesh};

/// Raw polygon soup read from an OBJ file.
#[derive(Debug, Default)]
pub struct ObjData {
    pub vertices: Vec<Point>,
    pub polygons: Vec<Vec<usize>>,
}

fn parse_index(token: &str, vertex_count: usize, line: usize) -> Result<usize> {
    let head = token.split('/').next().unwrap_or("");
    let raw: i64 = head
        .parse()
        .map_err(|_| Error::parse(line, format!("bad face index '{token}'")))?;
    if raw > 0 {
        Ok(raw as usize - 1)
    } else if raw < 0 {
        let back = (-raw) as usize;
        if back > vertex_count {
            return Err(Error::IndexOutOfRange {
                index: vertex_count.wrapping_sub(back),
                count: vertex_count,
                context: format!("line {line}"),
            });
        }
        Ok(vertex_count - back)
    } else {
        Err(Error::parse(line, "face index 0 is not valid in OBJ"))
    }
}

pub fn parse(text: &str) -> Result<ObjData> {
    let mut data = ObjData::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut xyz = [0.0; 3];
                for c in &mut xyz {
                    let t = tokens
                        .next()
                        .ok_or_else(|| Error::parse(line_no, "vertex needs 3 coordinates"))?;
                    *c = t
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad coordinate '{t}'")))?;
                }
                data.vertices.push(Point::new(xyz[0], xyz[1], xyz[2]));
            }
            Some("f") => {
                let poly = tokens
                    .map(|t| parse_index(t, data.vertices.len(), line_no))
                    .collect::<Result<Vec<_>>>()?;
                if poly.len() < 3 {
                    return Err(Error::parse(line_no, "face needs at least 3 vertices"));
                }
                data.polygons.push(poly);
            }
            _ => {}
        }
    }
    Ok(data)
}

pub fn write_triangles(mesh: &TriangleMesh) -> String {
    write_polygons(
        mesh.vertices(),
        mesh.faces().iter().map(|f| f.as_slice()),
    )
}

pub fn write_quad_dominant(mesh: &QuadDominantMesh) -> String {
    write_polygons(mesh.vertices(), mesh.polygons())
}

fn write_polygons<'a>(vertices: &[Point], polys: impl Iterator<Item = &'a [usize]>) -> String {
    let mut out = String::new();
    for v in vertices {
        let _ = writeln!(out, "v {} {} {}", sig(v.x, 9), sig(v.y, 9), sig(v.z, 9));
    }
    for p in polys {
        out.push('f');
        for &i in p {
            let _ = write!(out, " {}", i + 1);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_slash_forms_and_negative_indices() {
        let d = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1/1/1 2//1 -1\n").unwrap();
        assert_eq!(d.polygons, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse("v 0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse("v 0 0 0\nf 1 x 2\n").is_err());
    }
}
