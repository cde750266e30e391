//! The acceptance criteria, shared by `riesz verify` and the `acceptance`
//! test target. Every outcome is a pure function of the seed, so verdicts are
//! reproducible byte for byte; wall-clock times are reported separately.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Mutex;

use rand::Rng;
use riesz_core::configurations::{fekete_search, leja_sequence, FeketeSearchParams};
use riesz_core::discrepancy::{
    fit_decay_exponent, phi_for_potential, theorem21_bound, theorem22_error, BoundOptions,
    TestFunction,
};
use riesz_core::measures::{closeness_m_e, discrete_energy, moment_distance};
use riesz_core::rng::{derive_seed, indexed_stream};
use riesz_core::sets::equilibrium_oracle;
use riesz_core::{CompactSet, EquilibriumOracle, KernelSpec, PointConfig};
use riesz_oracles::ledger::{read_csv, standard_records};
use riesz_oracles::{grid_fekete, reference_energy, sphere_potential_quadrature};
use serde::{Deserialize, Serialize};

/// A criterion: identifier, title, filter tags and runtime budget.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: &'static str,
    pub name: &'static str,
    pub tags: &'static [&'static str],
    pub budget_secs: u64,
}

/// Criteria run by `verify`, in order. Criterion 10 (verify twice, compare
/// bytes) needs the binary and lives in the acceptance test target.
pub const CRITERIA: &[Criterion] = &[
    Criterion { id: "1", name: "energy correctness", tags: &["energy"], budget_secs: 30 },
    Criterion { id: "2", name: "robin constant of the unit ball", tags: &["oracle", "robin"], budget_secs: 10 },
    Criterion { id: "3", name: "fekete upper bound and monotonicity", tags: &["energy", "fekete"], budget_secs: 300 },
    Criterion { id: "4", name: "small-n fekete optimality", tags: &["energy", "fekete"], budget_secs: 120 },
    Criterion { id: "5", name: "leja bound", tags: &["energy", "leja"], budget_secs: 120 },
    Criterion { id: "6", name: "discrepancy inequality", tags: &["discrepancy"], budget_secs: 600 },
    Criterion { id: "7", name: "potential error decay", tags: &["discrepancy", "decay"], budget_secs: 600 },
    Criterion { id: "8", name: "weak-star diagnostics", tags: &["weak-star"], budget_secs: 60 },
    Criterion { id: "9", name: "converse direction witness", tags: &["weak-star"], budget_secs: 60 },
    Criterion { id: "provenance", name: "oracle ledger provenance", tags: &["provenance"], budget_secs: 60 },
];

/// Criteria matching any of `only` by id or tag; all of them when `only` is empty.
pub fn select(only: &[String]) -> Vec<Criterion> {
    CRITERIA
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|o| o == c.id || c.tags.contains(&o.as_str())))
        .copied()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

/// Shared state: the seed, the ledger to check, and configurations reused
/// across criteria.
pub struct Context {
    pub seed: u64,
    pub ledger: PathBuf,
    fekete: Mutex<HashMap<(bool, usize), PointConfig>>,
    leja: Mutex<Option<PointConfig>>,
}

const LEJA_LENGTH: usize = 500;
const LEJA_CANDIDATES: usize = 2000;

impl Context {
    pub fn new(seed: u64, ledger: PathBuf) -> Self {
        Context { seed, ledger, fekete: Mutex::new(HashMap::new()), leja: Mutex::new(None) }
    }

    fn fekete(&self, ball: bool, n: usize) -> PointConfig {
        if let Some(x) = self.fekete.lock().unwrap().get(&(ball, n)) {
            return x.clone();
        }
        let set = if ball { unit_ball() } else { unit_sphere() };
        let x = fekete_search(&set, &newton(), &FeketeSearchParams::new(n, self.seed))
            .expect("fekete search on the unit sphere")
            .config;
        self.fekete.lock().unwrap().insert((ball, n), x.clone());
        x
    }

    fn leja(&self) -> PointConfig {
        let mut slot = self.leja.lock().unwrap();
        slot.get_or_insert_with(|| {
            leja_sequence(&unit_sphere(), &newton(), LEJA_LENGTH, &[0.0, 0.0, 1.0], LEJA_CANDIDATES, self.seed)
                .expect("leja sequence on the unit sphere")
        })
        .clone()
    }
}

fn unit_sphere() -> CompactSet {
    CompactSet::unit_sphere(3).unwrap()
}

fn unit_ball() -> CompactSet {
    CompactSet::unit_ball(3).unwrap()
}

fn newton() -> KernelSpec {
    KernelSpec::newtonian(3).unwrap()
}

fn oracle() -> EquilibriumOracle {
    equilibrium_oracle(&unit_sphere(), &newton()).unwrap()
}

struct Report {
    passed: bool,
    detail: String,
    metrics: BTreeMap<String, f64>,
}

impl Report {
    fn new() -> Self {
        Report { passed: true, detail: String::new(), metrics: BTreeMap::new() }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(if ok { "ok " } else { "FAILED " });
        self.detail.push_str(&what);
        self.passed &= ok;
    }
}

pub fn run(criterion: &Criterion, ctx: &Context) -> Outcome {
    let report = match criterion.id {
        "1" => energy_correctness(ctx),
        "2" => robin_constant(ctx),
        "3" => fekete_monotone(ctx),
        "4" => fekete_small(ctx),
        "5" => leja_bound(ctx),
        "6" => discrepancy_matrix(ctx),
        "7" => decay(ctx),
        "8" => weak_star(ctx),
        "9" => converse(ctx),
        "provenance" => provenance(ctx),
        other => panic!("unknown criterion {other}"),
    };
    Outcome {
        id: criterion.id.to_string(),
        name: criterion.name.to_string(),
        passed: report.passed,
        detail: report.detail,
        metrics: report.metrics,
    }
}

fn energy_correctness(ctx: &Context) -> Report {
    let mut r = Report::new();
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let dim = 3 + (trial % 2) as usize;
        let n = 2 + (trial as usize * 37) % 299;
        let alpha = [2.0, 1.0, 0.5, 2.5][(trial % 4) as usize];
        let mut rng = indexed_stream(ctx.seed, "acceptance-energy", trial);
        let coords = (0..n * dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let x = PointConfig::new(dim, coords).unwrap();
        let ours = discrete_energy(&x, &KernelSpec::new(alpha, dim).unwrap()).unwrap();
        let reference = reference_energy(x.coords(), dim, alpha).unwrap();
        worst = worst.max(((ours - reference) / reference).abs());
    }
    r.metric("max_relative_error", worst);
    r.check(worst <= 1e-12, format!("max relative error {worst:.3e} <= 1e-12 over 100 configs"));

    let x = riesz_core::configurations::random_config(&CompactSet::unit_sphere(4).unwrap(), 300, ctx.seed).unwrap();
    let k = KernelSpec::newtonian(4).unwrap();
    let energy_with = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| discrete_energy(&x, &k).unwrap())
    };
    let single = energy_with(1);
    let same = [2, 4, 8].iter().all(|&t| energy_with(t).to_bits() == single.to_bits());
    r.check(same, "1/2/4/8 workers bitwise equal");
    r
}

fn robin_constant(ctx: &Context) -> Report {
    let mut r = Report::new();
    let mut rng = indexed_stream(ctx.seed, "acceptance-robin", 0);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        // uniform in the ball of radius 0.95
        let mut p = [0.0f64; 3];
        loop {
            for c in p.iter_mut() {
                *c = rng.random_range(-0.95..0.95);
            }
            if p.iter().map(|c| c * c).sum::<f64>() <= 0.95 * 0.95 {
                break;
            }
        }
        let q = sphere_potential_quadrature(1.0, &p, 4096).unwrap();
        worst = worst.max((q.value - 1.0).abs());
    }
    r.metric("max_deviation", worst);
    r.check(worst <= 1e-2, format!("interior potential within {worst:.3e} of 1 at 20 probes"));
    r
}

fn fekete_monotone(ctx: &Context) -> Report {
    let mut r = Report::new();
    let energies: Vec<f64> = (2..=40)
        .map(|n| discrete_energy(&ctx.fekete(false, n), &newton()).unwrap())
        .collect();
    let max = energies.iter().copied().fold(f64::MIN, f64::max);
    let worst_drop = energies.windows(2).map(|w| w[0] - w[1]).fold(f64::MIN, f64::max);
    let last = energies[energies.len() - 1];
    r.metric("max_energy", max);
    r.metric("max_decrease", worst_drop);
    r.metric("energy_40", last);
    r.check(max <= 1.0, format!("max energy {max:.6} <= 1"));
    r.check(worst_drop <= 1e-5, format!("largest step down {worst_drop:.3e} <= 1e-5"));
    r.check(last >= 0.9, format!("energy at n=40 {last:.6} >= 0.9"));
    r
}

fn fekete_small(ctx: &Context) -> Report {
    let mut r = Report::new();
    for (n, grid) in [(2, 64), (3, 64), (4, 32)] {
        let reference = grid_fekete(n, grid, 2.0).unwrap().energy;
        let ours = discrete_energy(&ctx.fekete(false, n), &newton()).unwrap();
        r.metric(&format!("energy_{n}"), ours);
        r.metric(&format!("grid_energy_{n}"), reference);
        r.check((ours - reference).abs() < 1e-4, format!("n={n}: {ours:.8} vs grid {reference:.8}"));
    }
    r
}

fn leja_bound(ctx: &Context) -> Report {
    let mut r = Report::new();
    let seq = ctx.leja();
    // running pair sum gives every prefix energy in O(n^2)
    let mut sum = 0.0;
    let mut worst = f64::MIN;
    for m in 1..seq.len() {
        for k in 0..m {
            let d2: f64 = seq.point(m).iter().zip(seq.point(k)).map(|(a, b)| (a - b) * (a - b)).sum();
            sum += 1.0 / d2.sqrt();
        }
        let n = (m + 1) as f64;
        worst = worst.max(2.0 * sum / (n * (n - 1.0)));
    }
    r.metric("max_prefix_energy", worst);
    r.check(worst <= 1.0 + 1e-6, format!("max prefix energy {worst:.8} <= 1 + 1e-6 for n <= {LEJA_LENGTH}"));
    r
}

/// The fixed trial design: set, size, method, radius and test function cycle
/// through their levels so that every combination of set, size and method
/// appears.
fn discrepancy_matrix(ctx: &Context) -> Report {
    let mut r = Report::new();
    let probes = [[0.0, 0.0, 1.5], [2.0, 1.0, 0.0], [-1.2, -1.2, 1.0]];
    let radii = [0.05, 0.1, 0.3];
    let sizes = [20, 50, 100];
    let options = BoundOptions { seed: ctx.seed, ..BoundOptions::default() };
    let mut failures = Vec::new();
    let mut vacuous = 0;
    let mut worst_margin = f64::MIN;
    for t in 0..30usize {
        let ball = t % 2 == 1;
        let set = if ball { unit_ball() } else { unit_sphere() };
        let n = sizes[(t / 2) % 3];
        let method = (t / 6) % 3;
        let radius = radii[(t + t / 3) % 3];
        let x = match method {
            0 => ctx.fekete(ball, n),
            1 => leja_sequence(&set, &newton(), n, &[0.0, 0.0, 1.0], 1000, derive_seed(ctx.seed, "trial", t as u64)).unwrap(),
            _ => riesz_core::configurations::random_config(&set, n, derive_seed(ctx.seed, "trial", t as u64)).unwrap(),
        };
        let phi = match t % 4 {
            3 => TestFunction::radial_hat(vec![0.6, 0.0, 0.8], 0.7, 1.0).unwrap(),
            k => phi_for_potential(&set, &probes[k], &newton()).unwrap(),
        };
        let oracle = equilibrium_oracle(&set, &newton()).unwrap();
        let rep = theorem21_bound(&set, &oracle, &x, &phi, radius, &newton(), &options).unwrap();
        match rep.holds_within(3.0) {
            None => vacuous += 1,
            Some(ok) => {
                worst_margin = worst_margin.max(rep.lhs - rep.rhs - 3.0 * rep.lhs_std_error);
                if !ok {
                    failures.push(t);
                }
            }
        }
    }
    r.metric("vacuous_trials", vacuous as f64);
    r.metric("worst_margin", worst_margin);
    r.check(
        failures.is_empty(),
        format!("lhs <= rhs + 3 se in all {} non-vacuous trials (violations: {failures:?})", 30 - vacuous),
    );
    r
}

pub const DECAY_SIZES: [usize; 5] = [25, 50, 100, 200, 400];

fn decay(ctx: &Context) -> Report {
    let mut r = Report::new();
    let sphere = unit_sphere();
    let y = [0.0, 0.0, 2.0];
    let mut measured = Vec::new();
    let mut shapes = Vec::new();
    for &n in &DECAY_SIZES {
        let (m, s) = theorem22_error(&sphere, &oracle(), &ctx.fekete(false, n), &y, &newton()).unwrap();
        r.metric(&format!("measured_{n}"), m);
        measured.push(m);
        shapes.push(s);
    }
    let slope = fit_decay_exponent(&DECAY_SIZES, &measured).unwrap();
    r.metric("slope", slope);
    r.check(slope <= -0.3, format!("fitted slope {slope:.3} <= -0.3"));
    // calibrate C on the two smallest sizes, then check every size
    let c = measured[..2].iter().zip(&shapes[..2]).map(|(m, s)| m / s).fold(0.0, f64::max);
    r.metric("fitted_c", c);
    let bad: Vec<usize> = DECAY_SIZES
        .iter()
        .zip(measured.iter().zip(&shapes))
        .filter(|(_, (m, s))| **m > c * **s)
        .map(|(n, _)| *n)
        .collect();
    r.check(bad.is_empty(), format!("measured <= C * shape with C = {c:.4e} from n = 25, 50 (violations: {bad:?})"));
    r
}

const MOMENT_SAMPLES: usize = 100_000;

fn weak_star(ctx: &Context) -> Report {
    let mut r = Report::new();
    let sphere = unit_sphere();
    let oracle = oracle();
    let seed = derive_seed(ctx.seed, "moments", 0);
    let fekete = ctx.fekete(false, 200);
    let leja = ctx.leja().prefix(200);
    for (label, x) in [("fekete", &fekete), ("leja", &leja)] {
        let d = moment_distance(x, &oracle, 2, MOMENT_SAMPLES, seed).unwrap();
        let m = closeness_m_e(x, &sphere, &oracle);
        r.metric(&format!("moment_distance_{label}"), d);
        r.check(d < 0.05 && m == 0.0, format!("{label}: moment distance {d:.4} < 0.05, m_E = {m}"));
    }
    let mut control = oracle.sample(200, derive_seed(ctx.seed, "hemisphere", 0)).unwrap();
    let coords: Vec<f64> = control
        .iter()
        .flat_map(|p| [p[0], p[1], p[2].abs()])
        .collect();
    control = PointConfig::new(3, coords).unwrap();
    let d = moment_distance(&control, &oracle, 2, MOMENT_SAMPLES, seed).unwrap();
    r.metric("moment_distance_hemisphere", d);
    r.check(d > 0.1, format!("hemisphere control: moment distance {d:.4} > 0.1"));
    r
}

fn converse(ctx: &Context) -> Report {
    let mut r = Report::new();
    let sphere = unit_sphere();
    let oracle = oracle();
    let mut last = f64::INFINITY;
    for n in [10usize, 100, 1000] {
        let scale = 1.0 + 1.0 / n as f64;
        let x = oracle.sample(n, derive_seed(ctx.seed, "converse", n as u64)).unwrap().scaled(scale);
        let m = closeness_m_e(&x, &sphere, &oracle);
        let g = 1.0 - 1.0 / scale;
        r.metric(&format!("m_e_{n}"), m);
        r.check(
            m <= g + 1e-12 && g <= 1.0 / n as f64 && m < last,
            format!("n={n}: m_E = {m:.6e} <= g = {g:.6e} <= 1/n"),
        );
        last = m;
    }
    r
}

fn provenance(ctx: &Context) -> Report {
    let mut r = Report::new();
    let committed = std::fs::File::open(&ctx.ledger)
        .map_err(|e| e.to_string())
        .and_then(|f| read_csv(f).map_err(|e| e.to_string()));
    let regenerated = standard_records().map_err(|e| e.to_string());
    match (committed, regenerated) {
        (Ok(c), Ok(g)) => {
            let mismatched: Vec<String> = g
                .iter()
                .zip(&c)
                .filter(|(a, b)| a != b)
                .map(|(a, _)| format!("{} [{}]", a.name, a.inputs))
                .collect();
            r.metric("records", g.len() as f64);
            r.check(
                c.len() == g.len() && mismatched.is_empty(),
                format!("{} committed rows match regeneration (mismatched: {mismatched:?})", c.len()),
            );
        }
        (Err(e), _) => r.check(false, format!("cannot read ledger {}: {e}", ctx.ledger.display())),
        (_, Err(e)) => r.check(false, format!("oracle regeneration failed: {e}")),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        assert_eq!(select(&[]).len(), CRITERIA.len());
        let energy: Vec<&str> = select(&["energy".into()]).iter().map(|c| c.id).collect();
        assert_eq!(energy, ["1", "3", "4", "5"]);
        assert_eq!(select(&["7".into(), "provenance".into()]).len(), 2);
        assert!(select(&["nothing".into()]).is_empty());
    }
}
