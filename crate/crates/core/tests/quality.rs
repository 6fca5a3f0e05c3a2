use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scan2sim_core::mesh::{hex, Point, VolumeMesh};
use scan2sim_core::primitives::hex_block;
use scan2sim_core::quality::{aspect_ratio, audit, corner_angles, shape_factor, FamilyStats, Thresholds};
use scan2sim_oracles::quality as oracle;

/// Random hexes (jittered unit cubes) and random tets, sharing no nodes.
pub fn random_elements(n_hex: usize, n_tet: usize, seed: u64) -> VolumeMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cube = hex_block([1, 1, 1], 1.0);
    let h0 = cube.hexes()[0];
    let mut nodes = Vec::new();
    let mut hexes = Vec::new();
    while hexes.len() < n_hex {
        let jitter = rng.random_range(0.05..0.45);
        let pts: [Point; 8] = std::array::from_fn(|i| {
            let p = cube.nodes()[h0[i]];
            Point::new(
                p.x + rng.random_range(-jitter..jitter),
                p.y + rng.random_range(-jitter..jitter),
                p.z + rng.random_range(-jitter..jitter) * 3.0,
            )
        });
        if hex::corner_jacobians(&pts).iter().all(|&d| d > 0.0) {
            let base = nodes.len();
            nodes.extend(pts);
            hexes.push(std::array::from_fn(|i| base + i));
        }
    }
    let mut tets = Vec::new();
    while tets.len() < n_tet {
        let mut p: [Point; 4] = std::array::from_fn(|_| {
            Point::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0), rng.random_range(0.0..1.0))
        });
        let v = (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0])));
        if v == 0.0 {
            continue;
        }
        if v < 0.0 {
            p.swap(2, 3);
        }
        let base = nodes.len();
        nodes.extend(p);
        tets.push([base, base + 1, base + 2, base + 3]);
    }
    VolumeMesh::new(nodes, hexes, tets).unwrap()
}

fn family_points(mesh: &VolumeMesh, hexes: bool) -> Vec<Vec<[f64; 3]>> {
    let range = if hexes {
        0..mesh.hexes().len()
    } else {
        mesh.hexes().len()..mesh.element_count()
    };
    range
        .map(|e| mesh.element_points(e).iter().map(|p| [p.x, p.y, p.z]).collect())
        .collect()
}

fn assert_family(got: &FamilyStats, want: &oracle::Aggregates, min_angle: f64, is_tet: bool) {
    assert_eq!(got.total, want.total);
    assert_eq!(got.degenerate, 0);
    assert_eq!(got.min_angle_below, want.min_angle_below, "min angle < {min_angle}");
    assert_eq!(got.max_angle_above, want.max_angle_above);
    assert_eq!(got.aspect_ratio_above, want.aspect_ratio_above);
    assert_eq!(got.average_min_angle, Some(want.average_min_angle));
    assert_eq!(got.worst_min_angle, Some(want.worst_min_angle));
    assert_eq!(got.average_max_angle, Some(want.average_max_angle));
    assert_eq!(got.worst_max_angle, Some(want.worst_max_angle));
    assert_eq!(got.average_aspect_ratio, Some(want.average_aspect_ratio));
    assert_eq!(got.worst_aspect_ratio, Some(want.worst_aspect_ratio));
    if is_tet {
        // The oracle solves for the circumcentre explicitly, so values agree
        // to rounding rather than bit for bit.
        assert_eq!(got.shape_factor_below, Some(want.shape_factor_below));
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        assert!(rel(got.average_shape_factor.unwrap(), want.average_shape_factor) < 1e-9);
        assert!(rel(got.worst_shape_factor.unwrap(), want.worst_shape_factor) < 1e-6);
    } else {
        assert_eq!(got.shape_factor_below, None);
    }
}

#[test]
fn aggregates_match_brute_force_pass() {
    let mesh = random_elements(5000, 5000, 11);
    let t = Thresholds::default();
    let report = audit(&mesh, &t, false).unwrap();
    let hexes = oracle::aggregate(&family_points(&mesh, true), t.min_angle_hex, t.max_angle, t.aspect_ratio, t.shape_factor);
    let tets = oracle::aggregate(&family_points(&mesh, false), t.min_angle_tet, t.max_angle, t.aspect_ratio, t.shape_factor);
    assert!(tets.min_angle_below > 0 && tets.aspect_ratio_above > 0, "fixture exercises the thresholds");
    assert_family(&report.hex, &hexes, t.min_angle_hex, false);
    assert_family(&report.tet, &tets, t.min_angle_tet, true);
    assert!(!report.gate_passed);
}

#[test]
fn per_element_records_match_oracle() {
    let mesh = random_elements(200, 200, 5);
    let report = audit(&mesh, &Thresholds::default(), true).unwrap();
    assert_eq!(report.elements.len(), 400);
    for q in &report.elements {
        let pts: Vec<[f64; 3]> = mesh.element_points(q.element).iter().map(|p| [p.x, p.y, p.z]).collect();
        let (lo, hi, ar, sf) = oracle::metrics(&pts);
        assert_eq!(q.min_corner_angle, lo);
        assert_eq!(q.max_corner_angle, hi);
        assert_eq!(q.aspect_ratio, ar);
        match (q.shape_factor, sf) {
            (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-9 * b.max(1e-12)),
            (None, None) => {}
            other => panic!("shape factor mismatch {other:?}"),
        }
    }
}

#[test]
fn voxel_mesh_passes_default_gate() {
    let report = audit(&hex_block([3, 4, 5], 0.7), &Thresholds::default(), false).unwrap();
    assert!(report.gate_passed);
    assert_eq!(report.hex.total, 60);
    assert!((report.hex.worst_min_angle.unwrap() - 90.0).abs() < 1e-9);
    assert!((report.hex.worst_aspect_ratio.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn sliver_tet_fails_gate() {
    let nodes = vec![
        Point::new(0.0, 0.0, 0.0),
        Point::new(1.0, 0.0, 0.0),
        Point::new(0.0, 1.0, 0.0),
        Point::new(0.5, 0.5, 1e-6),
    ];
    let mesh = VolumeMesh::new(nodes, vec![], vec![[0, 1, 2, 3]]).unwrap();
    let report = audit(&mesh, &Thresholds::default(), false).unwrap();
    assert!(!report.gate_passed);
    assert_eq!(report.tet.shape_factor_below, Some(1));
    assert!(report.to_table().contains("FAIL"));
}

fn similarity() -> impl Strategy<Value = (f64, [f64; 3], [f64; 3])> {
    (0.01f64..100.0, prop::array::uniform3(-50.0f64..50.0), prop::array::uniform3(-3.0f64..3.0))
}

fn transform(p: &Point, s: f64, t: [f64; 3], r: [f64; 3]) -> Point {
    let rot = nalgebra::Rotation3::from_euler_angles(r[0], r[1], r[2]);
    Point::from(rot * p.coords * s + nalgebra::Vector3::from(t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn metrics_invariant_under_similarity((s, t, r) in similarity(), seed in 0u64..1000) {
        let mesh = random_elements(1, 1, seed);
        for e in 0..2 {
            let pts = mesh.element_points(e);
            let moved: Vec<Point> = pts.iter().map(|p| transform(p, s, t, r)).collect();
            let a0 = corner_angles(&pts).unwrap();
            let a1 = corner_angles(&moved).unwrap();
            for (x, y) in a0.iter().zip(&a1) {
                prop_assert!((x - y).abs() < 1e-6);
            }
            let ar0 = aspect_ratio(&pts).unwrap();
            prop_assert!((ar0 - aspect_ratio(&moved).unwrap()).abs() < 1e-9 * ar0);
            if pts.len() == 4 {
                let p0 = [pts[0], pts[1], pts[2], pts[3]];
                let p1 = [moved[0], moved[1], moved[2], moved[3]];
                let s0 = shape_factor(&p0).unwrap();
                prop_assert!((s0 - shape_factor(&p1).unwrap()).abs() < 1e-8 * s0.max(1e-6));
                prop_assert!(s0 > 0.0 && s0 <= 1.0);
            }
        }
    }

    #[test]
    fn corner_angles_bounded(seed in 0u64..5000) {
        let mesh = random_elements(1, 1, seed);
        for e in 0..2 {
            let angles = corner_angles(&mesh.element_points(e)).unwrap();
            prop_assert_eq!(angles.len(), if e == 0 { 24 } else { 12 });
            prop_assert!(angles.iter().all(|&a| a > 0.0 && a < 180.0));
            if e == 1 {
                // Each tet face is a triangle: its three corners sum to 180°.
                for f in angles.chunks(3) {
                    prop_assert!((f.iter().sum::<f64>() - 180.0).abs() < 1e-9);
                }
            }
        }
    }
}
