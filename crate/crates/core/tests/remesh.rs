use proptest::prelude::*;
use scan2sim_core::fidelity::sample_surface;
use scan2sim_core::geom::triangle_angles;
use scan2sim_core::mesh::{Point, TriangleMesh};
use scan2sim_core::primitives::{equilateral_grid, icosphere, square_grid, torus, uv_sphere};
use scan2sim_core::remesh::{
    compute_sizing, estimate_curvature, isotropic_remesh, laplacian_smooth, pair_to_quads, remesh, RemeshParams,
    TriangleBvh,
};

fn min_angle(m: &TriangleMesh) -> f64 {
    (0..m.face_count())
        .flat_map(|f| {
            let [a, b, c] = m.face_points(f);
            triangle_angles(&a, &b, &c)
        })
        .fold(f64::INFINITY, f64::min)
}

fn benchmarks() -> Vec<(&'static str, TriangleMesh)> {
    vec![
        ("icosphere", icosphere(10.0, 3)),
        ("torus", torus(10.0, 4.0, 48, 24)),
        ("uv_sphere", uv_sphere(10.0, 24, 48)),
    ]
}

#[test]
fn sphere_curvature_is_inverse_radius() {
    for r in [5.0, 10.0, 20.0] {
        let c = estimate_curvature(&icosphere(r, 3));
        assert!((c.mean() - 1.0 / r).abs() < 0.1 / r, "r = {r}: {}", c.mean());
    }
    let ratio = estimate_curvature(&icosphere(5.0, 3)).mean() / estimate_curvature(&icosphere(10.0, 3)).mean();
    assert!((ratio - 2.0).abs() < 1e-6);
}

#[test]
fn flat_grid_interior_has_zero_curvature() {
    let c = estimate_curvature(&square_grid(6, 6, 1.0));
    assert!(c.values.iter().all(|&k| k.abs() < 1e-12));
}

#[test]
fn remeshed_sphere_stays_near_input() {
    let input = icosphere(10.0, 3);
    let params = RemeshParams::default();
    let (_, max_edge) = params.edge_bounds(&input).unwrap();
    let out = remesh(&input, &params).unwrap();
    // Symmetric Hausdorff estimate from dense samples and closest-point queries.
    let h = |a: &TriangleMesh, b: &TriangleMesh| {
        let bvh = TriangleBvh::new(b);
        sample_surface(a, 20_000, 3)
            .unwrap()
            .points()
            .iter()
            .map(|p| bvh.closest(p).unwrap().dist2.sqrt())
            .fold(0.0, f64::max)
    };
    let surf = out.quads.triangulate();
    let d = h(&surf, &input).max(h(&input, &surf));
    assert!(d <= 2.0 * max_edge, "{d} > {}", 2.0 * max_edge);
    let d_iso = h(&out.triangles, &input).max(h(&input, &out.triangles));
    assert!(d_iso <= 2.0 * max_edge);
}

#[test]
fn remeshing_improves_min_angle_on_irregular_inputs() {
    for (name, m) in [("uv_sphere", uv_sphere(10.0, 24, 48)), ("torus", torus(10.0, 4.0, 48, 24))] {
        let out = remesh(&m, &RemeshParams::default()).unwrap();
        assert!(min_angle(&out.triangles) >= min_angle(&m), "{name}");
    }
}

#[test]
fn benchmark_meshes_are_quad_dominant() {
    for (name, m) in benchmarks() {
        let out = remesh(&m, &RemeshParams::default()).unwrap();
        let s = &out.summary;
        assert!(s.quad_fraction >= 0.9, "{name}: {}", s.quad_fraction);
        assert_eq!(2 * s.quads + s.triangles, s.remeshed_triangles, "{name}");
        assert!(s.average_min_quad_angle.unwrap() >= 40.0, "{name}");
        assert!(out.triangles.is_closed());
    }
}

#[test]
fn uniform_sizing_gives_target_edges() {
    let m = icosphere(10.0, 2);
    let c = estimate_curvature(&m);
    let sizing = compute_sizing(&c, 1.0, 2.0, 1e-9).unwrap();
    let (out, _) = isotropic_remesh(&m, &sizing, 5).unwrap();
    let mut e = out.edge_lengths();
    e.sort_by(f64::total_cmp);
    let median = e[e.len() / 2];
    assert!((median - 2.0).abs() <= 0.3 * 2.0, "{median}");
}

#[test]
fn equilateral_grid_is_left_alone() {
    let g = equilateral_grid(8, 8, 1.0);
    let c = estimate_curvature(&g);
    let sizing = compute_sizing(&c, 0.5, 1.0, 1.0).unwrap();
    let (out, d) = isotropic_remesh(&g, &sizing, 1).unwrap();
    assert_eq!(out.faces(), g.faces());
    assert_eq!(d.splits + d.collapses + d.flips, 0);
}

#[test]
fn smoothing_keeps_boundary_bitwise() {
    let mut g = square_grid(8, 8, 1.0);
    g = g.map_vertices(|p| Point::new(p.x, p.y, ((p.x * 12.9898 + p.y * 78.233).sin() * 43758.5453).fract() * 0.1));
    let quads = pair_to_quads(&g);
    let smoothed = laplacian_smooth(&quads, 10, 0.5, true).unwrap();
    let boundary = scan2sim_core::mesh::topology::boundary_vertices(g.vertex_count(), g.faces());
    for (i, b) in boundary.iter().enumerate() {
        if *b {
            assert_eq!(smoothed.vertices()[i], quads.vertices()[i]);
        }
    }
    assert_eq!(smoothed.quads(), quads.quads());
    assert_eq!(smoothed.triangles(), quads.triangles());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pairing_conserves_triangles(nx in 1usize..10, ny in 1usize..10, jitter in 0.0f64..0.3) {
        let g = square_grid(nx, ny, 1.0).map_vertices(|p| {
            Point::new(p.x + jitter * (p.y * 3.1).sin(), p.y + jitter * (p.x * 2.3).cos(), 0.0)
        });
        let q = pair_to_quads(&g);
        prop_assert_eq!(2 * q.quads().len() + q.triangles().len(), g.face_count());
        // Every input triangle is used exactly once: the triangulated result
        // covers the same area.
        prop_assert!((q.triangulate().area() - g.area()).abs() < 1e-9 * g.area());
    }

    #[test]
    fn sizing_within_bounds_and_monotone(k in prop::collection::vec(0.0f64..10.0, 2..50), s in 0.01f64..1.0) {
        let curv = scan2sim_core::remesh::CurvatureEstimate { values: k.clone(), non_manifold: 0, degenerate: 0 };
        let z = compute_sizing(&curv, 0.5, 4.0, s).unwrap();
        for (i, &a) in z.values.iter().enumerate() {
            prop_assert!((0.5..=4.0).contains(&a));
            for (j, &b) in z.values.iter().enumerate() {
                if k[i] < k[j] {
                    prop_assert!(a >= b);
                }
            }
        }
    }
}
