//! The subcommands. Each takes parsed arguments plus, where relevant, the
//! set definition text, so a manifest can replay a run without the original
//! files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use riesz_core::configurations::{fekete_search, leja_sequence, random_config, FeketeSearchParams};
use riesz_core::discrepancy::{
    phi_for_potential, sup_potential_deficit, theorem21_bound, theorem22_error, BoundOptions, TestFunction,
};
use riesz_core::measures::{closeness_m_e, discrete_energy, discrete_potential, moment_distance};
use riesz_core::rng::derive_seed;
use riesz_core::sets::equilibrium_oracle;
use riesz_core::{CompactSet, KernelSpec, PointConfig, Shape};
use serde::{Deserialize, Serialize};

use crate::acceptance::{self, Context, Outcome};
use crate::error::{CliError, Result};
use crate::io::{
    parse_point, points_from_csv, points_to_csv, read_text, to_json, write_text, KernelEntry, RunManifest,
    TOOL_VERSION,
};
use crate::setfile::parse_set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fekete,
    Leja,
    Random,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    /// Set definition file
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Number of points
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points CSV to write
    #[arg(long)]
    pub out: PathBuf,
    /// Manifest path; defaults to the output with a `.manifest.json` suffix
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Riesz parameter; Leja sequences need 2
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    /// Leja candidates per step
    #[arg(long, default_value_t = 2000)]
    pub candidates: usize,
    /// First Leja point, comma-separated; defaults to the top of the set
    #[arg(long)]
    pub xi0: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiKind {
    /// The potential test function at the probe point
    Potential,
    /// A radial hat centred on the top of the set
    Hat,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct StudyArgs {
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Configuration sizes, comma-separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Study CSV to write
    #[arg(long)]
    pub out: PathBuf,
    /// Full per-row records as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Exterior probe point; defaults to distance 1 from the set along x1
    #[arg(long)]
    pub probe: Option<String>,
    /// Smoothing radius schedule r_n = c n^(-a)
    #[arg(long, default_value_t = 1.0)]
    pub r_c: f64,
    /// Defaults to 1/d
    #[arg(long)]
    pub r_a: Option<f64>,
    #[arg(long, value_enum, default_value_t = PhiKind::Potential)]
    pub phi: PhiKind,
    /// Grid size for the sup-deficit search
    #[arg(long, default_value_t = 500)]
    pub grid: usize,
    #[arg(long, default_value_t = 20_000)]
    pub moment_samples: usize,
    #[arg(long, default_value_t = 100_000)]
    pub integration_samples: usize,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 2000)]
    pub candidates: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[arg(long)]
    pub set: PathBuf,
    /// Points CSV
    #[arg(long)]
    pub points: PathBuf,
    /// Query point, comma-separated
    #[arg(long)]
    pub y: String,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Run only criteria with these ids or tags
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value = "oracle_ledger.csv")]
    pub ledger: PathBuf,
    /// Verdict JSON path; printed to standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct LedgerArgs {
    #[arg(long, default_value = "oracle_ledger.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Manifest written by `generate` or `study`
    pub manifest: PathBuf,
}

fn default_manifest(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    out.with_file_name(format!("{stem}.manifest.json"))
}

fn manifest_for<T: Serialize>(
    command: &str,
    set_text: &str,
    kernel: &KernelSpec,
    seed: u64,
    args: &T,
    outputs: Vec<&Path>,
) -> RunManifest {
    let params = match serde_json::to_value(args).expect("serializable arguments") {
        serde_json::Value::Object(map) => map.into_iter().collect(),
        _ => unreachable!("arguments serialize to an object"),
    };
    RunManifest {
        command: command.to_string(),
        set_definition: set_text.to_string(),
        kernel: KernelEntry { alpha: kernel.alpha(), d: kernel.dim() },
        seed,
        params,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        tool_version: TOOL_VERSION.to_string(),
    }
}

/// Top of the set: the projection of a far point above the centre.
fn top_point(set: &CompactSet) -> Vec<f64> {
    let mut far = set.center();
    let last = far.len() - 1;
    far[last] += 2.0 * set.length_scale() + set.diameter();
    set.project(&far)
}

pub fn generate(args: &GenerateArgs) -> Result<f64> {
    let text = read_text(&args.set)?;
    generate_from(&text, args)
}

pub fn generate_from(set_text: &str, args: &GenerateArgs) -> Result<f64> {
    let set = parse_set(set_text)?;
    let kernel = KernelSpec::new(args.alpha, set.dim())?;
    let x = match args.method {
        Method::Fekete => {
            let mut params = FeketeSearchParams::new(args.n, args.seed);
            params.restarts = args.restarts;
            params.max_iters = args.max_iters;
            let outcome = fekete_search(&set, &kernel, &params)?;
            if !outcome.converged {
                eprintln!("warning: fekete search hit the iteration cap");
            }
            outcome.config
        }
        Method::Leja => {
            let xi0 = match &args.xi0 {
                Some(s) => parse_point(s).map_err(|e| CliError::Parse(format!("--xi0: {e}")))?,
                None => top_point(&set),
            };
            leja_sequence(&set, &kernel, args.n, &xi0, args.candidates, args.seed)?
        }
        Method::Random => random_config(&set, args.n, args.seed)?,
    };
    let energy = if x.len() >= 2 { discrete_energy(&x, &kernel)? } else { 0.0 };
    if args.method == Method::Leja {
        if let Ok(oracle) = equilibrium_oracle(&set, &kernel) {
            if !oracle.is_approximate() && energy > oracle.robin_constant() + 1e-6 {
                eprintln!("warning: leja energy {energy} exceeds W(E) = {}", oracle.robin_constant());
            }
        }
    }
    let manifest_path = args.manifest.clone().unwrap_or_else(|| default_manifest(&args.out));
    write_text(&args.out, &points_to_csv(&x))?;
    let manifest = manifest_for("generate", set_text, &kernel, args.seed, args, vec![&args.out, &manifest_path]);
    write_text(&manifest_path, &to_json(&manifest))?;
    Ok(energy)
}

/// One row of the study CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub energy: f64,
    pub energy_gap: f64,
    #[serde(rename = "m_E")]
    pub m_e: f64,
    pub deficit_at_probe: f64,
    pub sup_deficit: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub r: f64,
}

/// Study CSV columns, in order.
pub const STUDY_COLUMNS: [&str; 9] =
    ["n", "energy", "energy_gap", "m_E", "deficit_at_probe", "sup_deficit", "lhs", "rhs", "r"];

/// A study row with the diagnostics that do not fit the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRecord {
    #[serde(flatten)]
    pub row: ConvergenceRecord,
    pub moment_distance: f64,
    pub bound_shape: Option<f64>,
    pub lhs_std_error: f64,
    #[serde(rename = "I_value")]
    pub i_value: f64,
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub robin_constant: f64,
    pub probe: Vec<f64>,
    pub phi: PhiKind,
    pub r_c: f64,
    pub r_a: f64,
    pub records: Vec<StudyRecord>,
}

pub fn study(args: &StudyArgs) -> Result<StudyReport> {
    let text = read_text(&args.set)?;
    study_from(&text, args)
}

pub fn study_from(set_text: &str, args: &StudyArgs) -> Result<StudyReport> {
    let set = parse_set(set_text)?;
    let (center, radius) = match set.shape() {
        Shape::Ball { center, radius } | Shape::Sphere { center, radius } => (center.clone(), *radius),
        _ => {
            return Err(CliError::Unsupported(
                "study needs an exact equilibrium oracle (ball or sphere); this set only has an approximation".into(),
            ))
        }
    };
    let dim = set.dim();
    let kernel = KernelSpec::newtonian(dim)?;
    let oracle = equilibrium_oracle(&set, &kernel)?;
    if let Some(&n) = args.ns.iter().find(|&&n| n < 2) {
        return Err(CliError::Infeasible(format!("study sizes must be at least 2, got {n}")));
    }
    let probe = match &args.probe {
        Some(s) => parse_point(s).map_err(|e| CliError::Parse(format!("--probe: {e}")))?,
        None => {
            let mut y = center.clone();
            y[0] += radius + 1.0;
            y
        }
    };
    let phi = match args.phi {
        PhiKind::Potential => phi_for_potential(&set, &probe, &kernel)?,
        PhiKind::Hat => TestFunction::radial_hat(top_point(&set), 0.7 * radius, 1.0)?,
    };
    let r_a = args.r_a.unwrap_or(1.0 / dim as f64);
    let leja = match args.method {
        Method::Leja => {
            let longest = args.ns.iter().copied().max().unwrap_or(2);
            Some(leja_sequence(&set, &kernel, longest, &top_point(&set), args.candidates, args.seed)?)
        }
        _ => None,
    };
    let options = BoundOptions {
        integration_samples: args.integration_samples,
        seed: args.seed,
        ..BoundOptions::default()
    };
    let w = oracle.robin_constant();
    let mut records = Vec::new();
    let mut violations = Vec::new();
    for &n in &args.ns {
        let started = Instant::now();
        let x: PointConfig = match args.method {
            Method::Fekete => {
                let mut params = FeketeSearchParams::new(n, args.seed);
                params.restarts = args.restarts;
                params.max_iters = args.max_iters;
                fekete_search(&set, &kernel, &params)?.config
            }
            Method::Leja => leja.as_ref().expect("built above").prefix(n),
            Method::Random => random_config(&set, n, derive_seed(args.seed, "study-random", n as u64))?,
        };
        let energy = discrete_energy(&x, &kernel)?;
        let (deficit_at_probe, shape) = if set.holder().is_some() {
            let (m, s) = theorem22_error(&set, &oracle, &x, &probe, &kernel)?;
            (m, Some(s))
        } else {
            ((oracle.potential(&probe) - discrete_potential(&x, &kernel, &probe)?).abs(), None)
        };
        let sup_deficit = sup_potential_deficit(&oracle, &x, &set, &kernel, args.grid, args.seed)?;
        let r = args.r_c * (n as f64).powf(-r_a);
        let rep = theorem21_bound(&set, &oracle, &x, &phi, r, &kernel, &options)?;
        let moments = moment_distance(&x, &oracle, 2, args.moment_samples, derive_seed(args.seed, "study-moments", 0))?;
        if rep.holds_within(3.0) == Some(false) {
            violations.push(n);
        }
        let row = ConvergenceRecord {
            n,
            energy,
            energy_gap: energy - w,
            m_e: closeness_m_e(&x, &set, &oracle),
            deficit_at_probe,
            sup_deficit,
            lhs: rep.lhs,
            rhs: rep.rhs,
            r,
        };
        eprintln!(
            "n={n} energy={energy:.8} gap={:.3e} lhs={:.3e} rhs={:.3e} ({:.1} s)",
            row.energy_gap,
            row.lhs,
            row.rhs,
            started.elapsed().as_secs_f64()
        );
        records.push(StudyRecord {
            row,
            moment_distance: moments,
            bound_shape: shape,
            lhs_std_error: rep.lhs_std_error,
            i_value: rep.i_value,
            vacuous: rep.vacuous,
        });
    }
    let report = StudyReport { robin_constant: w, probe, phi: args.phi, r_c: args.r_c, r_a, records };

    let mut w = csv::Writer::from_writer(Vec::new());
    for rec in &report.records {
        w.serialize(&rec.row).expect("in-memory write");
    }
    let csv_text = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    write_text(&args.out, &csv_text)?;
    let manifest_path = args.manifest.clone().unwrap_or_else(|| default_manifest(&args.out));
    let mut outputs = vec![args.out.as_path(), manifest_path.as_path()];
    if let Some(json) = &args.json {
        write_text(json, &to_json(&report))?;
        outputs.push(json);
    }
    let manifest = manifest_for("study", set_text, &kernel, args.seed, args, outputs);
    write_text(&manifest_path, &to_json(&manifest))?;
    if !violations.is_empty() {
        return Err(CliError::Verification(format!("discrepancy bound violated at n = {violations:?}")));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialQuery {
    pub y: Vec<f64>,
    #[serde(rename = "d_E")]
    pub d_e: f64,
    pub equilibrium_potential: f64,
    pub discrete_potential: f64,
    pub deficit: f64,
    pub approximate: bool,
}

pub fn potential(args: &PotentialArgs) -> Result<PotentialQuery> {
    let set = parse_set(&read_text(&args.set)?)?;
    let x = points_from_csv(&read_text(&args.points)?)?;
    let y = parse_point(&args.y).map_err(|e| CliError::Parse(format!("--y: {e}")))?;
    if y.len() != set.dim() || x.dim() != set.dim() {
        return Err(CliError::Infeasible(format!("dimension mismatch: set has d = {}", set.dim())));
    }
    let kernel = KernelSpec::newtonian(set.dim())?;
    let oracle = equilibrium_oracle(&set, &kernel)?;
    let u_mu = oracle.potential(&y);
    let u_tau = discrete_potential(&x, &kernel, &y)?;
    Ok(PotentialQuery {
        d_e: set.distance(&y),
        y,
        equilibrium_potential: u_mu,
        discrete_potential: u_tau,
        deficit: u_mu - u_tau,
        approximate: oracle.is_approximate(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<Outcome>,
}

/// Runs the selected criteria, printing one line per criterion to standard
/// error.
pub fn verify(args: &VerifyArgs) -> Result<Verdict> {
    let selected = acceptance::select(&args.only);
    if selected.is_empty() {
        return Err(CliError::Parse(format!("--only {:?} matches no criterion", args.only)));
    }
    let ctx = Context::new(args.seed, args.ledger.clone());
    let mut criteria = Vec::new();
    for c in &selected {
        let started = Instant::now();
        let outcome = acceptance::run(c, &ctx);
        eprintln!(
            "criterion {} {}: {} ({}) [{:.1} s]",
            c.id,
            if outcome.passed { "PASS" } else { "FAIL" },
            c.name,
            outcome.detail,
            started.elapsed().as_secs_f64()
        );
        criteria.push(outcome);
    }
    let verdict = Verdict { seed: args.seed, passed: criteria.iter().all(|c| c.passed), criteria };
    let json = to_json(&verdict);
    match &args.out {
        Some(path) => write_text(path, &json)?,
        None => print!("{json}"),
    }
    if !verdict.passed {
        let failed: Vec<String> = verdict
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.id, c.name))
            .collect();
        return Err(CliError::Verification(format!("failed criteria: {}", failed.join(", "))));
    }
    Ok(verdict)
}

pub fn ledger(args: &LedgerArgs) -> Result<usize> {
    let records = riesz_oracles::ledger::standard_records()
        .map_err(|e| CliError::Infeasible(format!("oracle regeneration failed: {e}")))?;
    let mut buf = Vec::new();
    riesz_oracles::ledger::write_csv(&records, &mut buf).expect("in-memory write");
    write_text(&args.out, &String::from_utf8(buf).expect("utf-8"))?;
    Ok(records.len())
}

/// Reruns the command recorded in a manifest, rewriting its outputs.
pub fn replay(args: &ReplayArgs) -> Result<()> {
    let manifest: RunManifest = serde_json::from_str(&read_text(&args.manifest)?)
        .map_err(|e| CliError::Parse(format!("manifest: {e}")))?;
    let params = serde_json::Value::Object(manifest.params.into_iter().collect());
    let bad = |e: serde_json::Error| CliError::Parse(format!("manifest params: {e}"));
    match manifest.command.as_str() {
        "generate" => {
            let a: GenerateArgs = serde_json::from_value(params).map_err(bad)?;
            generate_from(&manifest.set_definition, &a).map(|_| ())
        }
        "study" => {
            let a: StudyArgs = serde_json::from_value(params).map_err(bad)?;
            study_from(&manifest.set_definition, &a).map(|_| ())
        }
        other => Err(CliError::Parse(format!("manifest: cannot replay {other:?}"))),
    }
}
