//! Minimal reader for legacy ASCII unstructured-grid VTK files.

use std::collections::BTreeMap;

#[derive(Debug, Default, Clone)]
pub struct VtkGrid {
    pub points: Vec<[f64; 3]>,
    pub cells: Vec<Vec<usize>>,
    pub cell_types: Vec<u8>,
    /// Per-point arrays by name; vectors are flattened.
    pub point_data: BTreeMap<String, Vec<f64>>,
    pub cell_data: BTreeMap<String, Vec<f64>>,
}

/// Parses the document; panics with a message on malformed input.
pub fn parse(text: &str) -> VtkGrid {
    let mut tokens = text.lines().skip(2).flat_map(|l| l.split_whitespace());
    assert_eq!(tokens.next(), Some("ASCII"));
    assert_eq!(tokens.next(), Some("DATASET"));
    assert_eq!(tokens.next(), Some("UNSTRUCTURED_GRID"));
    let mut grid = VtkGrid::default();
    let mut section: Option<(bool, usize)> = None;
    while let Some(key) = tokens.next() {
        match key {
            "POINTS" => {
                let n: usize = tokens.next().unwrap().parse().unwrap();
                tokens.next();
                for _ in 0..n {
                    let mut p = [0.0; 3];
                    for c in &mut p {
                        *c = tokens.next().unwrap().parse().unwrap();
                    }
                    grid.points.push(p);
                }
            }
            "CELLS" => {
                let n: usize = tokens.next().unwrap().parse().unwrap();
                let size: usize = tokens.next().unwrap().parse().unwrap();
                let mut used = 0;
                for _ in 0..n {
                    let k: usize = tokens.next().unwrap().parse().unwrap();
                    let c = (0..k).map(|_| tokens.next().unwrap().parse().unwrap()).collect();
                    grid.cells.push(c);
                    used += k + 1;
                }
                assert_eq!(used, size, "CELLS size field");
            }
            "CELL_TYPES" => {
                let n: usize = tokens.next().unwrap().parse().unwrap();
                for _ in 0..n {
                    grid.cell_types.push(tokens.next().unwrap().parse().unwrap());
                }
            }
            "POINT_DATA" => section = Some((true, tokens.next().unwrap().parse().unwrap())),
            "CELL_DATA" => section = Some((false, tokens.next().unwrap().parse().unwrap())),
            "SCALARS" | "VECTORS" => {
                let (is_point, n) = section.expect("data before POINT_DATA/CELL_DATA");
                let name = tokens.next().unwrap().to_string();
                tokens.next();
                let width = if key == "VECTORS" {
                    3
                } else {
                    let comps: usize = tokens.next().unwrap().parse().unwrap();
                    assert_eq!(tokens.next(), Some("LOOKUP_TABLE"));
                    tokens.next();
                    comps
                };
                let values = (0..n * width).map(|_| tokens.next().unwrap().parse().unwrap()).collect();
                if is_point {
                    grid.point_data.insert(name, values);
                } else {
                    grid.cell_data.insert(name, values);
                }
            }
            other => panic!("unexpected VTK token '{other}'"),
        }
    }
    grid
}
