//! PLY reader (ASCII and binary little-endian).

use crate::error::{Error, Result};
use crate::mesh::{Point, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(name: &str, line: usize) -> Result<Self> {
        Ok(match name {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            other => return Err(Error::parse(line, format!("unknown PLY type '{other}'"))),
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn read_le(self, b: &[u8]) -> f64 {
        match self {
            Scalar::I8 => b[0] as i8 as f64,
            Scalar::U8 => b[0] as f64,
            Scalar::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::I32 => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::U32 => u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F32 => f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
            Scalar::F64 => f64::from_le_bytes(b[..8].try_into().unwrap()),
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: Scalar },
    List { name: String, count: Scalar, item: Scalar },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    props: Vec<Property>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Encoding {
    Ascii,
    BinaryLe,
}

/// Vertices, polygons and optional per-vertex normals read from a PLY file.
#[derive(Debug, Default)]
pub struct PlyData {
    pub vertices: Vec<Point>,
    pub normals: Option<Vec<Vec3>>,
    pub polygons: Vec<Vec<usize>>,
}

/// One decoded element record: scalar values and list values in property order.
type Record = Vec<Vec<f64>>;

pub fn parse(bytes: &[u8]) -> Result<PlyData> {
    let (elements, encoding, body_start) = parse_header(bytes)?;
    let body = &bytes[body_start..];
    let records = match encoding {
        Encoding::Ascii => read_ascii(&elements, body)?,
        Encoding::BinaryLe => read_binary(&elements, body)?,
    };
    let mut data = PlyData::default();
    for (el, recs) in elements.iter().zip(records) {
        match el.name.as_str() {
            "vertex" => {
                let find = |n: &str| {
                    el.props.iter().position(|p| matches!(p, Property::Scalar { name, .. } if name == n))
                };
                let (x, y, z) = match (find("x"), find("y"), find("z")) {
                    (Some(x), Some(y), Some(z)) => (x, y, z),
                    _ => return Err(Error::parse(0, "vertex element lacks x/y/z")),
                };
                let normal_idx = match (find("nx"), find("ny"), find("nz")) {
                    (Some(a), Some(b), Some(c)) => Some((a, b, c)),
                    _ => None,
                };
                let mut normals = Vec::new();
                for r in &recs {
                    data.vertices.push(Point::new(r[x][0], r[y][0], r[z][0]));
                    if let Some((a, b, c)) = normal_idx {
                        normals.push(Vec3::new(r[a][0], r[b][0], r[c][0]));
                    }
                }
                if normal_idx.is_some() {
                    data.normals = Some(normals);
                }
            }
            "face" => {
                let li = el
                    .props
                    .iter()
                    .position(|p| {
                        matches!(p, Property::List { name, .. } if name == "vertex_indices" || name == "vertex_index")
                    })
                    .ok_or_else(|| Error::parse(0, "face element lacks vertex_indices"))?;
                for r in &recs {
                    let poly: Vec<usize> = r[li]
                        .iter()
                        .map(|&v| {
                            if v < 0.0 {
                                Err(Error::parse(0, format!("negative face index {v}")))
                            } else {
                                Ok(v as usize)
                            }
                        })
                        .collect::<Result<_>>()?;
                    if poly.len() < 3 {
                        return Err(Error::parse(0, "face needs at least 3 vertices"));
                    }
                    data.polygons.push(poly);
                }
            }
            _ => {}
        }
    }
    Ok(data)
}

fn parse_header(bytes: &[u8]) -> Result<(Vec<Element>, Encoding, usize)> {
    let mut pos = 0;
    let mut line_no = 0;
    let mut elements: Vec<Element> = Vec::new();
    let mut encoding = None;
    loop {
        let end = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::parse(line_no + 1, "unterminated PLY header"))?;
        let line = std::str::from_utf8(&bytes[pos..pos + end])
            .map_err(|_| Error::parse(line_no + 1, "non-UTF-8 header"))?
            .trim();
        pos += end + 1;
        line_no += 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if line_no == 1 {
            if line != "ply" {
                return Err(Error::parse(1, "missing 'ply' magic"));
            }
            continue;
        }
        match tokens.first().copied() {
            Some("format") => {
                encoding = Some(match tokens.get(1).copied() {
                    Some("ascii") => Encoding::Ascii,
                    Some("binary_little_endian") => Encoding::BinaryLe,
                    other => {
                        return Err(Error::parse(
                            line_no,
                            format!("unsupported PLY format {other:?}"),
                        ))
                    }
                })
            }
            Some("element") => {
                let (name, count) = match (tokens.get(1), tokens.get(2)) {
                    (Some(n), Some(c)) => (
                        n.to_string(),
                        c.parse()
                            .map_err(|_| Error::parse(line_no, "bad element count"))?,
                    ),
                    _ => return Err(Error::parse(line_no, "malformed element line")),
                };
                elements.push(Element {
                    name,
                    count,
                    props: Vec::new(),
                });
            }
            Some("property") => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| Error::parse(line_no, "property before element"))?;
                let prop = if tokens.get(1) == Some(&"list") {
                    if tokens.len() != 5 {
                        return Err(Error::parse(line_no, "malformed list property"));
                    }
                    Property::List {
                        count: Scalar::parse(tokens[2], line_no)?,
                        item: Scalar::parse(tokens[3], line_no)?,
                        name: tokens[4].to_string(),
                    }
                } else {
                    if tokens.len() != 3 {
                        return Err(Error::parse(line_no, "malformed property"));
                    }
                    Property::Scalar {
                        ty: Scalar::parse(tokens[1], line_no)?,
                        name: tokens[2].to_string(),
                    }
                };
                el.props.push(prop);
            }
            Some("end_header") => break,
            Some("comment") | Some("obj_info") | None => {}
            Some(other) => {
                return Err(Error::parse(line_no, format!("unknown header keyword '{other}'")))
            }
        }
    }
    let encoding = encoding.ok_or_else(|| Error::parse(line_no, "missing format line"))?;
    Ok((elements, encoding, pos))
}

fn read_ascii(elements: &[Element], body: &[u8]) -> Result<Vec<Vec<Record>>> {
    let text = std::str::from_utf8(body).map_err(|_| Error::parse(0, "non-UTF-8 ASCII body"))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut out = Vec::new();
    for el in elements {
        let mut recs = Vec::with_capacity(el.count);
        for _ in 0..el.count {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("truncated '{}' data", el.name)))?;
            let mut toks = line.split_whitespace();
            let mut next = || -> Result<f64> {
                let t = toks
                    .next()
                    .ok_or_else(|| Error::parse(ln + 1, "too few values"))?;
                t.parse()
                    .map_err(|_| Error::parse(ln + 1, format!("bad value '{t}'")))
            };
            let mut rec = Vec::with_capacity(el.props.len());
            for p in &el.props {
                match p {
                    Property::Scalar { .. } => rec.push(vec![next()?]),
                    Property::List { .. } => {
                        let n = next()? as usize;
                        rec.push((0..n).map(|_| next()).collect::<Result<_>>()?);
                    }
                }
            }
            recs.push(rec);
        }
        out.push(recs);
    }
    Ok(out)
}

fn read_binary(elements: &[Element], body: &[u8]) -> Result<Vec<Vec<Record>>> {
    let mut pos = 0;
    let mut take = |n: usize| -> Result<&[u8]> {
        if pos + n > body.len() {
            return Err(Error::parse(0, "truncated binary PLY body"));
        }
        let s = &body[pos..pos + n];
        pos += n;
        Ok(s)
    };
    let mut out = Vec::new();
    for el in elements {
        let mut recs = Vec::with_capacity(el.count);
        for _ in 0..el.count {
            let mut rec = Vec::with_capacity(el.props.len());
            for p in &el.props {
                match *p {
                    Property::Scalar { ty, .. } => rec.push(vec![ty.read_le(take(ty.size())?)]),
                    Property::List { count, item, .. } => {
                        let n = count.read_le(take(count.size())?) as usize;
                        let mut vals = Vec::with_capacity(n);
                        for _ in 0..n {
                            vals.push(item.read_le(take(item.size())?));
                        }
                        rec.push(vals);
                    }
                }
            }
            recs.push(rec);
        }
        out.push(recs);
    }
    Ok(out)
}
