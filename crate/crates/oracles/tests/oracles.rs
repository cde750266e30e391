use riesz_oracles::ledger::{read_csv, standard_records, write_csv};
use riesz_oracles::{grid_fekete, sphere_potential_quadrature, uniform_sphere_samples};

#[test]
fn doubling_nodes_stays_within_the_error_estimate() {
    let probes: Vec<[f64; 3]> = (0..20)
        .map(|i| {
            let t = i as f64;
            let r = if i % 2 == 0 { 0.08 * t / 2.0 } else { 1.3 + 0.1 * t };
            let (a, b) = (1.7 * t, 0.4 + 0.9 * t);
            [r * a.sin() * b.cos(), r * a.sin() * b.sin(), r * a.cos()]
        })
        .collect();
    for y in &probes {
        let q = sphere_potential_quadrature(1.0, y, 2048).unwrap();
        let q2 = sphere_potential_quadrature(1.0, y, 4096).unwrap();
        assert!((q2.value - q.value).abs() < q.error_estimate, "{y:?}: {q:?} {q2:?}");
    }
}

#[test]
fn interior_potential_is_flat() {
    let centre = sphere_potential_quadrature(1.0, &[0.0; 3], 2048).unwrap().value;
    for r in [0.2, 0.5, 0.8] {
        let q = sphere_potential_quadrature(1.0, &[0.0, r, 0.0], 2048).unwrap();
        assert!((q.value - centre).abs() < 2e-3);
    }
}

#[test]
fn exterior_potential_is_inverse_distance() {
    for r in [1.5, 2.0, 4.0] {
        let q = sphere_potential_quadrature(1.0, &[0.0, 0.0, r], 2048).unwrap();
        assert!((q.value - 1.0 / r).abs() < 1e-3);
    }
}

#[test]
fn grid_search_certifies_small_fekete_sets() {
    assert!((grid_fekete(2, 64, 2.0).unwrap().energy - 0.5).abs() < 1e-12);
    let tri = grid_fekete(3, 64, 2.0).unwrap();
    assert!((tri.energy - 1.0 / 3f64.sqrt()).abs() < 1e-9);
    // the triangle lies on a great circle
    let [a, b, c] = [tri.points[0], tri.points[1], tri.points[2]];
    let normal = [
        (b[1] - a[1]) * (c[2] - a[2]) - (b[2] - a[2]) * (c[1] - a[1]),
        (b[2] - a[2]) * (c[0] - a[0]) - (b[0] - a[0]) * (c[2] - a[2]),
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]),
    ];
    let offset: f64 = normal.iter().zip(&a).map(|(n, p)| n * p).sum();
    assert!(offset.abs() < 1e-6);
    let tet = grid_fekete(4, 32, 2.0).unwrap();
    assert!((tet.energy - 0.612_372).abs() < 1e-5, "{}", tet.energy);
}

#[test]
fn ledger_is_reproducible_and_round_trips() {
    let a = standard_records().unwrap();
    let b = standard_records().unwrap();
    assert_eq!(a, b);
    let mut buf = Vec::new();
    write_csv(&a, &mut buf).unwrap();
    assert_eq!(read_csv(buf.as_slice()).unwrap(), a);
}

#[test]
fn committed_ledger_matches_regeneration() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../oracle_ledger.csv");
    let file = std::fs::File::open(path).expect("oracle_ledger.csv at the repository root");
    assert_eq!(read_csv(file).unwrap(), standard_records().unwrap());
}

#[test]
fn ledger_values() {
    let records = standard_records().unwrap();
    let find = |name: &str, inputs: &str| {
        records
            .iter()
            .find(|r| r.name == name && r.inputs.starts_with(inputs))
            .unwrap()
            .value
    };
    assert!((find("sphere_potential_quadrature", "R=1;d=3;y=origin") - 1.0).abs() < 1e-3);
    assert!((find("sphere_potential_quadrature", "R=1;d=3;y=(2,0,0)") - 0.5).abs() < 1e-3);
    assert!((find("discrepancy_composite", "antipodal") - 13.0 / 12.0).abs() < 1e-3);
    assert!(find("mc_potential_error", "unit sphere;n=10000") < 0.02);
}

#[test]
fn sphere_samples_have_zero_mean() {
    let s = uniform_sphere_samples(50_000, 3, 1.0, 9);
    for axis in 0..3 {
        let mean: f64 = s.chunks_exact(3).map(|p| p[axis]).sum::<f64>() / 50_000.0;
        assert!(mean.abs() < 0.02);
    }
}
