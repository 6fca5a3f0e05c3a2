//! Keyword-deck (`.inp`) export and import for hex8 / tet4 volume meshes.
//!
//! The writer emits `*NODE`, `*ELEMENT` (C3D8 / C3D4), node and element
//! sets and, for a full analysis deck, the material, boundary conditions,
//! gravity and concentrated loads of a static step. Units are mm, N, s
//! and tonne/mm³.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use super::format::deck_real;
use crate::error::{Error, Result};
use crate::fea::{surface_load_forces, LoadCase, Material};
use crate::mesh::{Point, VolumeMesh};

const PER_LINE: usize = 16;

fn write_id_list(out: &mut String, ids: impl Iterator<Item = usize>) {
    let ids: Vec<usize> = ids.collect();
    for chunk in ids.chunks(PER_LINE) {
        let line: Vec<String> = chunk.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(", "));
    }
}

fn write_mesh(out: &mut String, mesh: &VolumeMesh) {
    out.push_str("*NODE\n");
    for (i, p) in mesh.nodes().iter().enumerate() {
        let _ = writeln!(
            out,
            "{}, {}, {}, {}",
            i + 1,
            deck_real(p.x),
            deck_real(p.y),
            deck_real(p.z)
        );
    }
    if !mesh.hexes().is_empty() {
        out.push_str("*ELEMENT, TYPE=C3D8\n");
        for (e, h) in mesh.hexes().iter().enumerate() {
            let _ = write!(out, "{}", e + 1);
            for n in h {
                let _ = write!(out, ", {}", n + 1);
            }
            out.push('\n');
        }
    }
    if !mesh.tets().is_empty() {
        out.push_str("*ELEMENT, TYPE=C3D4\n");
        let offset = mesh.hexes().len();
        for (t, tet) in mesh.tets().iter().enumerate() {
            let _ = write!(out, "{}", offset + t + 1);
            for n in tet {
                let _ = write!(out, ", {}", n + 1);
            }
            out.push('\n');
        }
    }
    for (name, nodes) in mesh.node_sets() {
        let _ = writeln!(out, "*NSET, NSET={name}");
        write_id_list(out, nodes.iter().map(|n| n + 1));
    }
    for (name, elems) in mesh.element_sets() {
        let _ = writeln!(out, "*ELSET, ELSET={name}");
        write_id_list(out, elems.iter().map(|e| e + 1));
    }
}

/// Mesh-only deck: nodes, elements and sets.
pub fn mesh_deck(mesh: &VolumeMesh) -> String {
    let mut out = String::from("*HEADING\nscan2sim volume mesh\n");
    write_mesh(&mut out, mesh);
    out
}

/// Full static-analysis deck for the mesh, material and load case.
pub fn inp_deck(mesh: &VolumeMesh, material: &Material, load: &LoadCase) -> Result<String> {
    load.check_sets(mesh)?;
    let all = if mesh.element_sets().contains_key("EALL") {
        "EALL_".to_string()
    } else {
        "EALL".to_string()
    };
    let mut out = String::from("*HEADING\nscan2sim static analysis, units mm N s tonne\n");
    write_mesh(&mut out, mesh);
    let _ = writeln!(out, "*ELSET, ELSET={all}, GENERATE\n1, {}, 1", mesh.element_count());
    let _ = writeln!(out, "*SOLID SECTION, ELSET={all}, MATERIAL=MATERIAL1");
    out.push_str("*MATERIAL, NAME=MATERIAL1\n*ELASTIC\n");
    let _ = writeln!(
        out,
        "{}, {}",
        deck_real(material.young_modulus),
        deck_real(material.poisson_ratio)
    );
    out.push_str("*DENSITY\n");
    let _ = writeln!(out, "{}", deck_real(material.mass_density()));
    out.push_str("*STEP\n*STATIC\n");
    if !load.constraints.is_empty() {
        out.push_str("*BOUNDARY\n");
        for c in &load.constraints {
            for (first, last) in c.dof_ranges() {
                let _ = writeln!(out, "{}, {}, {}", c.node_set, first, last);
            }
        }
    }
    let g = load.gravity;
    let gmag = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
    if gmag > 0.0 {
        let _ = writeln!(
            out,
            "*DLOAD\n{all}, GRAV, {}, {}, {}, {}",
            deck_real(gmag),
            deck_real(g[0] / gmag),
            deck_real(g[1] / gmag),
            deck_real(g[2] / gmag)
        );
    }
    let mut cloads: BTreeMap<usize, [f64; 3]> = BTreeMap::new();
    for sl in &load.surface_loads {
        for (node, f) in surface_load_forces(mesh, sl)? {
            let acc = cloads.entry(node).or_insert([0.0; 3]);
            for a in 0..3 {
                acc[a] += f[a];
            }
        }
    }
    if cloads.values().any(|f| f.iter().any(|&c| c != 0.0)) {
        out.push_str("*CLOAD\n");
        for (node, f) in &cloads {
            for a in 0..3 {
                if f[a] != 0.0 {
                    let _ = writeln!(out, "{}, {}, {}", node + 1, a + 1, deck_real(f[a]));
                }
            }
        }
    }
    out.push_str("*END STEP\n");
    Ok(out)
}

/// Writes a full analysis deck to `path`.
pub fn export_inp(mesh: &VolumeMesh, material: &Material, load: &LoadCase, path: &Path) -> Result<()> {
    let deck = inp_deck(mesh, material, load)?;
    super::write_bytes(path, deck.as_bytes())
}

pub fn save_mesh_inp(mesh: &VolumeMesh, path: &Path) -> Result<()> {
    super::write_bytes(path, mesh_deck(mesh).as_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Block {
    None,
    Node,
    Element { nodes: usize, hex: bool },
    NodeSet { generate: bool },
    ElementSet { generate: bool },
}

struct Keyword {
    name: String,
    params: HashMap<String, String>,
}

fn parse_keyword(line: &str) -> Keyword {
    let mut parts = line[1..].split(',');
    let name = parts.next().unwrap_or("").trim().to_ascii_uppercase();
    let params = parts
        .filter_map(|p| {
            let p = p.trim();
            if p.is_empty() {
                return None;
            }
            let mut kv = p.splitn(2, '=');
            let k = kv.next()?.trim().to_ascii_uppercase();
            let v = kv.next().unwrap_or("").trim().to_string();
            Some((k, v))
        })
        .collect();
    Keyword { name, params }
}

fn numbers(line: &str, line_no: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::parse(line_no, format!("bad number '{t}'")))
        })
        .collect()
}

fn labels(line: &str, line_no: usize) -> Result<Vec<i64>> {
    line.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::parse(line_no, format!("bad label '{t}' (set references are not supported)")))
        })
        .collect()
}

fn expand(vals: &[i64], generate: bool, line_no: usize) -> Result<Vec<i64>> {
    if !generate {
        return Ok(vals.to_vec());
    }
    let (a, b, s) = match vals {
        [a, b] => (*a, *b, 1),
        [a, b, s] => (*a, *b, *s),
        _ => return Err(Error::parse(line_no, "GENERATE needs start, end[, step]")),
    };
    if s <= 0 || b < a {
        return Err(Error::parse(line_no, "invalid GENERATE range"));
    }
    Ok((a..=b).step_by(s as usize).collect())
}

/// Reads nodes, C3D8/C3D4 elements and sets from a keyword deck. Other
/// keywords are skipped. Nodes and elements are renumbered densely in file
/// order, with all hexahedra before tetrahedra.
pub fn parse_inp(text: &str) -> Result<VolumeMesh> {
    let mut node_index: HashMap<i64, usize> = HashMap::new();
    let mut nodes: Vec<Point> = Vec::new();
    // (label, hex?, node labels)
    let mut elements: Vec<(i64, bool, Vec<i64>)> = Vec::new();
    let mut nsets: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    let mut elsets: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    let mut block = Block::None;
    let mut current_set = String::new();
    let mut pending: Vec<f64> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("**") {
            continue;
        }
        if line.starts_with('*') {
            if !pending.is_empty() {
                return Err(Error::parse(line_no, "incomplete element record"));
            }
            let kw = parse_keyword(line);
            block = match kw.name.as_str() {
                "NODE" => Block::Node,
                "ELEMENT" => {
                    let ty = kw.params.get("TYPE").map(|s| s.to_ascii_uppercase()).unwrap_or_default();
                    let (nodes, hex) = match ty.as_str() {
                        "C3D8" | "C3D8R" | "C3D8I" | "C3D8H" => (8, true),
                        "C3D4" | "C3D4H" => (4, false),
                        other => {
                            return Err(Error::parse(line_no, format!("unsupported element type '{other}'")))
                        }
                    };
                    if let Some(set) = kw.params.get("ELSET") {
                        current_set = set.clone();
                        elsets.entry(set.clone()).or_default();
                    } else {
                        current_set.clear();
                    }
                    Block::Element { nodes, hex }
                }
                "NSET" => {
                    current_set = kw
                        .params
                        .get("NSET")
                        .cloned()
                        .ok_or_else(|| Error::parse(line_no, "*NSET without NSET="))?;
                    nsets.entry(current_set.clone()).or_default();
                    Block::NodeSet {
                        generate: kw.params.contains_key("GENERATE"),
                    }
                }
                "ELSET" => {
                    current_set = kw
                        .params
                        .get("ELSET")
                        .cloned()
                        .ok_or_else(|| Error::parse(line_no, "*ELSET without ELSET="))?;
                    elsets.entry(current_set.clone()).or_default();
                    Block::ElementSet {
                        generate: kw.params.contains_key("GENERATE"),
                    }
                }
                _ => Block::None,
            };
            continue;
        }
        match block {
            Block::None => {}
            Block::Node => {
                let v = numbers(line, line_no)?;
                if v.len() < 4 {
                    return Err(Error::parse(line_no, "node needs label and 3 coordinates"));
                }
                let label = v[0] as i64;
                if node_index.insert(label, nodes.len()).is_some() {
                    return Err(Error::parse(line_no, format!("duplicate node {label}")));
                }
                nodes.push(Point::new(v[1], v[2], v[3]));
            }
            Block::Element { nodes: nn, hex } => {
                pending.extend(numbers(line, line_no)?);
                if pending.len() > nn + 1 {
                    return Err(Error::parse(line_no, "too many element nodes"));
                }
                if pending.len() == nn + 1 {
                    let label = pending[0] as i64;
                    let conn = pending[1..].iter().map(|&x| x as i64).collect();
                    elements.push((label, hex, conn));
                    if !current_set.is_empty() {
                        elsets.get_mut(&current_set).unwrap().push(label);
                    }
                    pending.clear();
                }
            }
            Block::NodeSet { generate } => {
                let ids = expand(&labels(line, line_no)?, generate, line_no)?;
                nsets.get_mut(&current_set).unwrap().extend(ids);
            }
            Block::ElementSet { generate } => {
                let ids = expand(&labels(line, line_no)?, generate, line_no)?;
                elsets.get_mut(&current_set).unwrap().extend(ids);
            }
        }
    }
    if !pending.is_empty() {
        return Err(Error::parse(0, "incomplete element record at end of file"));
    }

    let node_count = nodes.len();
    let lookup = |label: i64, ctx: &str| -> Result<usize> {
        node_index.get(&label).copied().ok_or_else(|| Error::IndexOutOfRange {
            index: label.max(0) as usize,
            count: node_count,
            context: ctx.to_string(),
        })
    };
    let mut hexes = Vec::new();
    let mut tets = Vec::new();
    let mut hex_labels = Vec::new();
    let mut tet_labels = Vec::new();
    for (label, hex, conn) in &elements {
        let ctx = format!("element {label}");
        if *hex {
            let mut h = [0; 8];
            for (k, &l) in conn.iter().enumerate() {
                h[k] = lookup(l, &ctx)?;
            }
            hexes.push(h);
            hex_labels.push(*label);
        } else {
            let mut t = [0; 4];
            for (k, &l) in conn.iter().enumerate() {
                t[k] = lookup(l, &ctx)?;
            }
            tets.push(t);
            tet_labels.push(*label);
        }
    }
    let elem_index: HashMap<i64, usize> = hex_labels
        .iter()
        .chain(tet_labels.iter())
        .enumerate()
        .map(|(i, &l)| (l, i))
        .collect();
    if nodes.is_empty() || elem_index.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let mut mesh = VolumeMesh::new(nodes, hexes, tets)?;
    for (name, ids) in nsets {
        let idx = ids
            .into_iter()
            .map(|l| lookup(l, &format!("node set '{name}'")))
            .collect::<Result<Vec<_>>>()?;
        mesh.add_node_set(name, idx)?;
    }
    for (name, ids) in elsets {
        let count = mesh.element_count();
        let idx = ids
            .into_iter()
            .map(|l| {
                elem_index.get(&l).copied().ok_or_else(|| Error::IndexOutOfRange {
                    index: l.max(0) as usize,
                    count,
                    context: format!("element set '{name}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        mesh.add_element_set(name, idx)?;
    }
    Ok(mesh)
}

pub fn read_inp(path: &Path) -> Result<VolumeMesh> {
    let bytes = super::read_bytes(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| Error::parse(0, "deck is not UTF-8"))?;
    parse_inp(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fea::{Constraint, Distribution, SurfaceLoad};
    use crate::primitives::hex_block;

    #[test]
    fn single_hex_spruce_deck() {
        let mut mesh = hex_block([1, 1, 1], 1.0);
        mesh.add_node_set("bottom", vec![0, 1, 2, 3]).unwrap();
        let load = LoadCase {
            gravity: [0.0, 0.0, -9810.0],
            surface_loads: vec![],
            constraints: vec![Constraint::pinned("bottom")],
        };
        let deck = inp_deck(&mesh, &Material::spruce(), &load).unwrap();
        assert!(deck.contains("*ELASTIC\n10000., 0.3\n"));
        assert!(deck.contains("*DENSITY\n4.5e-10\n"));
        assert!(deck.contains("*BOUNDARY\nbottom, 1, 3\n"));
        assert!(deck.contains("*DLOAD\nEALL, GRAV, 9810., 0., 0., -1.\n"));
    }

    #[test]
    fn missing_set_is_an_error() {
        let mesh = hex_block([1, 1, 1], 1.0);
        let load = LoadCase {
            gravity: [0.0; 3],
            surface_loads: vec![SurfaceLoad {
                node_set: "top".into(),
                force: [0.0, 0.0, -500.0],
                distribution: Distribution::EqualPerNode,
            }],
            constraints: vec![],
        };
        assert!(matches!(
            inp_deck(&mesh, &Material::spruce(), &load),
            Err(Error::MissingSet(s)) if s == "top"
        ));
    }

    #[test]
    fn parses_generate_and_continuation_lines() {
        let text = "*NODE\n1, 0, 0, 0\n2, 1, 0, 0\n3, 0, 1, 0\n4, 0, 0, 1\n*ELEMENT, TYPE=C3D4, ELSET=T\n10, 1, 2,\n3, 4\n*NSET, NSET=ALL, GENERATE\n1, 4, 1\n";
        let m = parse_inp(text).unwrap();
        assert_eq!(m.tets(), &[[0, 1, 2, 3]]);
        assert_eq!(m.node_set("ALL").unwrap(), &[0, 1, 2, 3]);
        assert_eq!(m.element_set("T").unwrap(), &[0]);
    }

    #[test]
    fn mesh_deck_round_trip() {
        let mut mesh = hex_block([2, 1, 3], 0.7);
        mesh.add_node_set("a", vec![3, 1]).unwrap();
        mesh.add_element_set("e", vec![2]).unwrap();
        let back = parse_inp(&mesh_deck(&mesh)).unwrap();
        assert_eq!(back, mesh);
    }
}
