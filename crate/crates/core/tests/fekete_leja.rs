use riesz_core::configurations::{fekete_search, leja_sequence, FeketeSearchParams};
use riesz_core::measures::discrete_energy;
use riesz_core::{CompactSet, KernelSpec};
use riesz_oracles::grid_fekete;

fn sphere() -> CompactSet {
    CompactSet::unit_sphere(3).unwrap()
}

fn newton() -> KernelSpec {
    KernelSpec::newtonian(3).unwrap()
}

#[test]
fn small_fekete_sets_match_the_grid_search() {
    for (n, grid) in [(2, 64), (3, 64), (4, 32)] {
        let reference = grid_fekete(n, grid, 2.0).unwrap().energy;
        let found = fekete_search(&sphere(), &newton(), &FeketeSearchParams::new(n, 0)).unwrap();
        assert!((found.energy - reference).abs() < 1e-4, "n={n}: {} vs {reference}", found.energy);
    }
}

#[test]
fn five_points_match_the_grid_search() {
    let reference = grid_fekete(5, 16, 2.0).unwrap().energy;
    let found = fekete_search(&sphere(), &newton(), &FeketeSearchParams::new(5, 0)).unwrap();
    assert!((found.energy - reference).abs() < 1e-4, "{} vs {reference}", found.energy);
}

#[test]
fn fekete_energies_increase_with_n() {
    let mut last = 0.0;
    for n in 2..=16 {
        let e = fekete_search(&sphere(), &newton(), &FeketeSearchParams::new(n, 1)).unwrap().energy;
        assert!(e <= 1.0);
        assert!(e >= last - 1e-5, "n={n}: {e} < {last}");
        last = e;
    }
}

#[test]
fn leja_prefixes_in_four_dimensions_stay_below_robin() {
    let s4 = CompactSet::unit_sphere(4).unwrap();
    let k = KernelSpec::newtonian(4).unwrap();
    let seq = leja_sequence(&s4, &k, 40, &[0.0, 0.0, 0.0, 1.0], 500, 2).unwrap();
    for m in 2..=40 {
        assert!(discrete_energy(&seq.prefix(m), &k).unwrap() <= 1.0 + 1e-6);
    }
}

#[test]
fn leja_next_beats_a_brute_force_grid() {
    // the refined point should do at least as well as any point of a dense grid
    let seq = leja_sequence(&sphere(), &newton(), 6, &[0.0, 0.0, 1.0], 1000, 5).unwrap();
    let prefix = seq.prefix(5);
    let last = seq.point(5);
    let potential = |y: &[f64]| -> f64 {
        prefix
            .iter()
            .map(|p| 1.0 / p.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .sum()
    };
    let ours = potential(last);
    let g = 200;
    for i in 1..g {
        for j in 0..2 * g {
            let theta = std::f64::consts::PI * i as f64 / g as f64;
            let phi = std::f64::consts::PI * j as f64 / g as f64;
            let y = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            assert!(ours <= potential(&y) + 1e-9);
        }
    }
}
