use scan2sim_core::fea::{solve_static, Constraint, LoadCase, Material, SolverSettings, SurfaceLoad};
use scan2sim_core::io::{
    colormap::Colormap, gltf_colored_bytes, inp::mesh_deck, inp_deck, load_surface_auto, parse_inp, save_obj,
    vtk_string,
};
use scan2sim_core::mesh::{Point, ScalarField, VolumeMesh};
use scan2sim_core::primitives::{hex_block, icosphere, torus};
use scan2sim_core::remesh::{remesh, RemeshParams};
use scan2sim_core::voxel::{register_node_set, NodeSelector};
use scan2sim_oracles::{gltf_validator, inp as inp_oracle, vtk as vtk_oracle};

fn mixed_mesh() -> VolumeMesh {
    // Two hexes plus a tet capping the top face of the second.
    let block = hex_block([2, 1, 1], 1.0);
    let mut nodes = block.nodes().to_vec();
    nodes.push(Point::new(1.5, 0.5, 1.7));
    let apex = nodes.len() - 1;
    let top = block.nodes();
    let find = |x: f64, y: f64, z: f64| {
        top.iter()
            .position(|p| (p - Point::new(x, y, z)).norm() < 1e-12)
            .unwrap()
    };
    let (a, b, c) = (find(1.0, 0.0, 1.0), find(2.0, 0.0, 1.0), find(2.0, 1.0, 1.0));
    let mut m = VolumeMesh::new(nodes, block.hexes().to_vec(), vec![[a, b, c, apex]]).unwrap();
    register_node_set(&mut m, "bottom", &NodeSelector::ZMinLayer).unwrap();
    m.add_element_set("CAP", vec![2]).unwrap();
    m
}

fn solved() -> (VolumeMesh, scan2sim_core::fea::FieldResult, LoadCase) {
    let mut mesh = hex_block([2, 2, 3], 2.0);
    register_node_set(&mut mesh, "bottom", &NodeSelector::ZMinLayer).unwrap();
    register_node_set(&mut mesh, "top", &NodeSelector::ZMaxLayer).unwrap();
    let load = LoadCase {
        gravity: [0.0, 0.0, -9810.0],
        surface_loads: vec![SurfaceLoad {
            node_set: "top".into(),
            force: [0.0, 0.0, -500.0],
            distribution: Default::default(),
        }],
        constraints: vec![Constraint::pinned("bottom")],
    };
    let r = solve_static(&mesh, &Material::spruce(), &load, &SolverSettings::default()).unwrap();
    (mesh, r, load)
}

#[test]
fn vtk_volume_round_trip_through_oracle() {
    let (mesh, result, _) = solved();
    let text = vtk_string(&mesh, &result.fields()).unwrap();
    let grid = vtk_oracle::parse(&text);
    assert_eq!(grid.points.len(), mesh.node_count());
    for (p, q) in grid.points.iter().zip(mesh.nodes()) {
        for a in 0..3 {
            assert!((p[a] - q[a]).abs() <= 1e-8 * q[a].abs().max(1.0));
        }
    }
    let cells: Vec<Vec<usize>> = mesh.hexes().iter().map(|h| h.to_vec()).collect();
    assert_eq!(grid.cells, cells);
    assert!(grid.cell_types.iter().all(|&t| t == 12));
    let disp = &grid.point_data["displacement"];
    assert_eq!(disp.len(), 3 * mesh.node_count());
    for (i, d) in result.displacements.iter().enumerate() {
        for a in 0..3 {
            assert!((disp[3 * i + a] - d[a]).abs() <= 1e-8 * result.max_displacement());
        }
    }
    assert_eq!(grid.cell_data["von_mises"].len(), mesh.element_count());
    assert!(grid.cell_data.contains_key("stress_zz"));
    assert!(grid.cell_data.contains_key("strain_zx"));
}

#[test]
fn vtk_mixed_and_quad_dominant_cells() {
    let m = mixed_mesh();
    let grid = vtk_oracle::parse(&vtk_string(&m, &[]).unwrap());
    assert_eq!(grid.cell_types, vec![12, 12, 10]);
    assert_eq!(grid.cells[2], m.tets()[0].to_vec());

    let out = remesh(&icosphere(10.0, 3), &RemeshParams::default()).unwrap();
    let grid = vtk_oracle::parse(&vtk_string(&out.quads, &[]).unwrap());
    let nq = out.quads.quads().len();
    assert_eq!(grid.cells.len(), nq + out.quads.triangles().len());
    assert!(grid.cell_types[..nq].iter().all(|&t| t == 9));
    for (c, q) in grid.cells.iter().zip(out.quads.quads()) {
        assert_eq!(c, &q.to_vec());
    }
}

#[test]
fn vtk_rejects_wrong_field_length() {
    let m = hex_block([1, 1, 1], 1.0);
    let bad = ScalarField::per_node("x", vec![0.0; 3]);
    assert!(vtk_string(&m, &[bad.into()]).is_err());
}

#[test]
fn inp_mesh_round_trip_through_oracle() {
    let m = mixed_mesh();
    let deck = inp_oracle::parse(&mesh_deck(&m));
    assert_eq!(deck.nodes.len(), m.node_count());
    for (i, (label, p)) in deck.nodes.iter().enumerate() {
        assert_eq!(*label, i as i64 + 1);
        for a in 0..3 {
            assert!((p[a] - m.nodes()[i][a]).abs() <= 1e-12 * m.nodes()[i][a].abs().max(1.0));
        }
    }
    let types: Vec<&str> = deck.elements.iter().map(|e| e.1.as_str()).collect();
    assert_eq!(types, vec!["C3D8", "C3D8", "C3D4"]);
    for (e, (label, _, nodes)) in deck.elements.iter().enumerate() {
        assert_eq!(*label, e as i64 + 1);
        let want: Vec<i64> = m.element(e).nodes().iter().map(|&n| n as i64 + 1).collect();
        assert_eq!(nodes, &want);
    }
    let bottom: Vec<i64> = m.node_set("bottom").unwrap().iter().map(|&n| n as i64 + 1).collect();
    assert_eq!(deck.node_sets["bottom"], bottom);
    assert_eq!(deck.element_sets["CAP"], vec![3]);

    let back = parse_inp(&mesh_deck(&m)).unwrap();
    assert_eq!(back.hexes(), m.hexes());
    assert_eq!(back.tets(), m.tets());
    assert_eq!(back.node_sets(), m.node_sets());
    assert_eq!(back.element_sets(), m.element_sets());
}

#[test]
fn analysis_deck_carries_the_load_case() {
    let (mesh, _, load) = solved();
    let text = inp_deck(&mesh, &Material::spruce(), &load).unwrap();
    let deck = inp_oracle::parse(&text);
    for kw in ["NODE", "MATERIAL, NAME=MATERIAL1", "ELASTIC", "DENSITY", "STEP", "STATIC", "BOUNDARY", "DLOAD", "CLOAD", "END STEP"] {
        assert!(deck.keywords.iter().any(|k| k == kw || k.starts_with(&format!("{kw},"))), "missing *{kw}");
    }
    // Concentrated loads add up to the surface load.
    let cload = text.split("*CLOAD\n").nth(1).unwrap().split("*END STEP").next().unwrap();
    let mut total = [0.0; 3];
    for line in cload.lines() {
        let v: Vec<&str> = line.split(',').map(str::trim).collect();
        let dof: usize = v[1].parse().unwrap();
        total[dof - 1] += v[2].parse::<f64>().unwrap();
    }
    assert!((total[2] + 500.0).abs() < 1e-9);
    assert_eq!(total[0], 0.0);
}

#[test]
fn glb_reads_back_and_passes_validator() {
    let (mesh, result, _) = solved();
    let (surface, node_of) = mesh.boundary_surface().unwrap();
    let nodal = scan2sim_core::fea::element_to_nodal(&ScalarField::per_element("von_mises", result.von_mises.clone()), &mesh)
        .unwrap();
    let values: Vec<f64> = node_of.iter().map(|&i| nodal.values[i]).collect();
    let bytes = gltf_colored_bytes(&surface, &ScalarField::per_node("von_mises", values), Colormap::Viridis).unwrap();

    let (doc, buffers, _) = gltf::import_slice(&bytes).unwrap();
    let prim = doc.meshes().next().unwrap().primitives().next().unwrap();
    let reader = prim.reader(|b| Some(&buffers[b.index()]));
    let positions: Vec<[f32; 3]> = reader.read_positions().unwrap().collect();
    assert_eq!(positions.len(), surface.vertex_count());
    let indices: Vec<u32> = reader.read_indices().unwrap().into_u32().collect();
    assert_eq!(indices.len(), 3 * surface.face_count());
    let colors: Vec<[f32; 3]> = reader.read_colors(0).unwrap().into_rgb_f32().collect();
    assert_eq!(colors.len(), positions.len());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.glb");
    std::fs::write(&path, &bytes).unwrap();
    let v = gltf_validator::validate(&path).expect("validator runs");
    assert_eq!(v.errors, 0, "{:?}", v.messages);
}

#[test]
fn boundary_surface_is_closed_and_outward() {
    let m = hex_block([3, 2, 2], 1.5);
    let (s, node_of) = m.boundary_surface().unwrap();
    assert!(s.is_closed());
    assert!((s.signed_volume() - m.total_volume()).abs() < 1e-9);
    // All nodes of a 3×2×2 block lie on its boundary except the two interior ones.
    assert_eq!(node_of.len(), m.node_count() - 2);
    assert!(node_of.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn obj_file_round_trip() {
    let t = torus(5.0, 2.0, 12, 8);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.obj");
    save_obj(&t, &path).unwrap();
    let back = load_surface_auto(&path).unwrap();
    assert_eq!(back.faces(), t.faces());
    assert!(load_surface_auto(&dir.path().join("t.stl")).is_err());
}
