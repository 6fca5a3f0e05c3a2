use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scan2sim_core::fidelity::{chamfer_distance, evaluate_pair, normalize_unit_sphere, sample_surface, KdTree};
use scan2sim_core::mesh::{Point, PointCloud, TriangleMesh};
use scan2sim_core::primitives::{icosphere, torus};
use scan2sim_oracles::chamfer as oracle;

fn random_cloud(n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new(
        (0..n)
            .map(|_| Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

fn arrays(c: &PointCloud) -> Vec<[f64; 3]> {
    c.points().iter().map(|p| [p.x, p.y, p.z]).collect()
}

/// Icosphere with coordinates rounded to multiples of 2⁻¹⁶, so scaling by
/// small integers and integer shifts are exact in floating point.
fn dyadic_sphere() -> TriangleMesh {
    let q = 65536.0;
    icosphere(3.0, 3).map_vertices(|p| Point::new((p.x * q).round() / q, (p.y * q).round() / q, (p.z * q).round() / q))
}

#[test]
fn chamfer_matches_brute_force() {
    for seed in 0..5 {
        let p = random_cloud(1000, seed);
        let q = random_cloud(1000, 100 + seed);
        let got = chamfer_distance(&p, &q).unwrap();
        let (cd, a, b) = oracle::chamfer(&arrays(&p), &arrays(&q));
        assert!((got.cd - cd).abs() <= 1e-12, "{} vs {cd}", got.cd);
        assert!((got.term_p_to_q - a).abs() <= 1e-12);
        assert!((got.term_q_to_p - b).abs() <= 1e-12);
    }
}

#[test]
fn chamfer_of_a_cloud_with_itself_is_zero() {
    let p = random_cloud(777, 3);
    assert_eq!(chamfer_distance(&p, &p).unwrap().cd, 0.0);
}

#[test]
fn kd_tree_nearest_matches_linear_scan_with_duplicates() {
    let mut pts = random_cloud(500, 8).into_points();
    let dup: Vec<Point> = pts[..50].to_vec();
    pts.extend(dup);
    let tree = KdTree::new(&pts).unwrap();
    let flat: Vec<[f64; 3]> = pts.iter().map(|p| [p.x, p.y, p.z]).collect();
    for q in random_cloud(2000, 9).points().iter().chain(&pts[..60]) {
        let (i, d2) = tree.nearest(q);
        let (j, e2) = oracle::nearest(&flat, [q.x, q.y, q.z]);
        assert_eq!(d2, e2);
        assert_eq!(i, j);
    }
}

#[test]
fn sampling_is_area_proportional() {
    // Two disjoint triangles with areas 9 : 1.
    let v = vec![
        Point::new(0.0, 0.0, 0.0),
        Point::new(3.0, 0.0, 0.0),
        Point::new(0.0, 3.0, 0.0),
        Point::new(10.0, 0.0, 0.0),
        Point::new(11.0, 0.0, 0.0),
        Point::new(10.0, 1.0, 0.0),
    ];
    let m = TriangleMesh::new(v, vec![[0, 1, 2], [3, 4, 5]]).unwrap();
    let n = 100_000;
    let c = sample_surface(&m, n, 42).unwrap();
    let big = c.points().iter().filter(|p| p.x < 5.0).count() as f64;
    // Binomial standard deviation is about 95 samples.
    assert!((big - 0.9 * n as f64).abs() < 600.0, "{big}");
    for p in c.points() {
        let inside = if p.x < 5.0 {
            p.x >= 0.0 && p.y >= 0.0 && p.x + p.y <= 3.0 + 1e-12
        } else {
            p.x >= 10.0 && p.y >= 0.0 && (p.x - 10.0) + p.y <= 1.0 + 1e-12
        };
        assert!(inside && p.z == 0.0);
    }
}

#[test]
fn sampling_is_reproducible() {
    let m = torus(4.0, 1.0, 16, 8);
    assert_eq!(sample_surface(&m, 1000, 5).unwrap(), sample_surface(&m, 1000, 5).unwrap());
    assert_ne!(sample_surface(&m, 1000, 5).unwrap(), sample_surface(&m, 1000, 6).unwrap());
}

#[test]
fn unit_sphere_normalization() {
    let c = PointCloud::new(vec![Point::new(1.0, 1.0, 1.0), Point::new(3.0, 1.0, 1.0)]);
    let n = normalize_unit_sphere(&c).unwrap();
    assert_eq!(n.points(), &[Point::new(-1.0, 0.0, 0.0), Point::new(1.0, 0.0, 0.0)]);
    let n = normalize_unit_sphere(&random_cloud(1000, 4)).unwrap();
    let centroid = n.points().iter().fold(nalgebra::Vector3::zeros(), |a, p| a + p.coords) / 1000.0;
    assert!(centroid.norm() < 1e-15);
    let r = n.points().iter().map(|p| p.coords.norm()).fold(0.0, f64::max);
    assert!((r - 1.0).abs() < 1e-15);
    assert!(normalize_unit_sphere(&PointCloud::new(vec![Point::origin(); 3])).is_err());
}

#[test]
fn evaluate_pair_is_bit_exact_under_scale_and_shift() {
    let p = dyadic_sphere();
    let q = torus(3.0, 1.0, 24, 12);
    let base = evaluate_pair(&p, &q, 5000, 17).unwrap();
    for (s, t) in [(7.0, [123.0, -45.0, 6.0]), (0.25, [-3.0, 0.0, 1024.0]), (1.0, [1.0, 2.0, 3.0])] {
        let moved = p.map_vertices(|v| Point::new(v.x * s + t[0], v.y * s + t[1], v.z * s + t[2]));
        let r = evaluate_pair(&moved, &q, 5000, 17).unwrap();
        assert_eq!(r.cd.to_bits(), base.cd.to_bits(), "scale {s}");
        assert_eq!(r.term_p_to_q.to_bits(), base.term_p_to_q.to_bits());
    }
}

#[test]
fn evaluate_pair_self_is_zero() {
    let m = torus(3.0, 1.0, 24, 12);
    let r = evaluate_pair(&m, &m, 2000, 1).unwrap();
    assert_eq!(r.cd, 0.0);
    let moved = m.map_vertices(|v| Point::new(v.x * 1000.0 + 5.0, v.y * 1000.0, v.z * 1000.0 - 7.0));
    assert!(evaluate_pair(&moved, &m, 2000, 1).unwrap().cd < 1e-20);
}

#[test]
fn independent_samples_converge_with_count() {
    let m = icosphere(1.0, 3);
    let cd = |n: usize| {
        let a = normalize_unit_sphere(&sample_surface(&m, n, 1).unwrap()).unwrap();
        let b = normalize_unit_sphere(&sample_surface(&m, n, 2).unwrap()).unwrap();
        chamfer_distance(&a, &b).unwrap().cd
    };
    let (coarse, fine) = (cd(1000), cd(16000));
    assert!(fine < coarse / 4.0, "{coarse} -> {fine}");
}

#[test]
fn rejects_empty_inputs() {
    let m = icosphere(1.0, 0);
    assert!(sample_surface(&m, 0, 1).is_err());
    assert!(chamfer_distance(&PointCloud::new(vec![]), &random_cloud(3, 1)).is_err());
    assert!(KdTree::new(&[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chamfer_symmetric_and_nonnegative(n in 1usize..200, m in 1usize..200, s in 0u64..1000) {
        let p = random_cloud(n, s);
        let q = random_cloud(m, s + 7);
        let a = chamfer_distance(&p, &q).unwrap();
        let b = chamfer_distance(&q, &p).unwrap();
        prop_assert!(a.cd >= 0.0);
        prop_assert_eq!(a.term_p_to_q, b.term_q_to_p);
        prop_assert_eq!(a.cd, a.term_p_to_q + a.term_q_to_p);
        let (cd, _, _) = oracle::chamfer(&arrays(&p), &arrays(&q));
        prop_assert!((a.cd - cd).abs() <= 1e-12);
    }
}
