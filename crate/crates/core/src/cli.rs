//! Batch driver behind the `spinzero` binary.
//!
//! Every subcommand writes one deterministic report, JSON or CSV, to stdout or
//! to `--out`. Exit status: 0 when every check passes, 1 for usage or input
//! errors, 2 when a verification check fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{completeness_residual, GaussianBump, HarmonicCoefficients, ParityFilter, QuadratureGrid};
use crate::config_space::Vec3;
use crate::error::{Error, Result};
use crate::random::random_coefficients;
use crate::seam::{default_eps_list, seam_limit_scan, statistics_classify, Classification};
use crate::special::{
    small_d_block, sph_harm, wigner_big_d, wigner_small_d, HarmonicIndex, LegendreTable, C64, EULER_ORDER,
    PHASE_CONVENTION, SMALL_D_CONVENTION,
};
use crate::spectrum::{identified_laplacian_eigs, min_samples, DEFAULT_CLUSTER_TOL};
use crate::superselection::{
    point_state, superselection_check, to_body_k1, verdict_sweep, BodyFrame, PhaseFitReport, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Mixed,
}

impl ParityArg {
    fn filter(self) -> ParityFilter {
        match self {
            ParityArg::Even => ParityFilter::Even,
            ParityArg::Odd => ParityFilter::Odd,
            ParityArg::Mixed => ParityFilter::All,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "spinzero", version, about = "Numerical checks of exchange symmetry for identical spin-zero particles")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Orbital cutoff.
    #[arg(long, global = true, default_value_t = 32)]
    l_max: u32,

    /// Seed of the coefficient generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Tolerance override, written `--tol.<name>=<value>`.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Subcommand)]
enum Command {
    /// Special-function identities: equator zeros, d-matrix parity zeros, orthonormality, unitarity.
    Identities,
    /// Seam mismatch scan of a coefficient file, or of seeded random coefficients.
    Seam {
        /// HarmonicCoefficients JSON file.
        file: Option<PathBuf>,
        /// Comma-separated, strictly decreasing offsets from the equator.
        #[arg(long, value_delimiter = ',')]
        eps_list: Option<Vec<f64>>,
        /// Parity of the random coefficients used when no file is given.
        #[arg(long, value_enum, default_value_t = ParityArg::Even)]
        parity: ParityArg,
    },
    /// Half-turn phase fits of the point state at r0, by orbital parity.
    Superselect {
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.0, 1.0], allow_negative_numbers = true)]
        r0: Vec<f64>,
        /// Also sweep the polar angle of r0 over [0.1, 1.4].
        #[arg(long)]
        sweep_theta: bool,
    },
    /// Spectrum of the angular Laplacian on the hemisphere with the seam identification.
    Spectrum {
        /// Azimuths per seam condition; at least 2 l_max + 1.
        #[arg(long)]
        n_samples: Option<usize>,
    },
    /// Completeness residuals of a smooth bump in each parity family.
    Complete,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::Seam { .. } => "seam",
            Command::Superselect { .. } => "superselect",
            Command::Spectrum { .. } => "spectrum",
            Command::Complete => "complete",
        }
    }

    fn default_tolerances(&self) -> BTreeMap<String, f64> {
        let pairs: &[(&str, f64)] = match self {
            Command::Identities => &[
                ("equator_zero", 1e-12),
                ("d_parity_zero", 1e-12),
                ("orthonormality", 1e-10),
                ("orthogonality", 1e-10),
                ("unitarity", 1e-10),
            ],
            Command::Seam { .. } => &[("classify", crate::seam::DEFAULT_CLASSIFY_TOL)],
            Command::Superselect { .. } => &[("phase", crate::superselection::SUPERSELECTION_TOL)],
            Command::Spectrum { .. } => &[("cluster", DEFAULT_CLUSTER_TOL)],
            Command::Complete => &[("residual", 1e-2)],
        };
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v: f64 = value.parse().map_err(|e| format!("tolerance '{name}': {e}"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("tolerance '{name}' must be positive and finite, got {v}"));
    }
    Ok((name.to_string(), v))
}

/// Rewrites `--tol.<name>=<v>` and `--tol.<name> <v>` into `--tol <name>=<v>`.
fn expand_tolerance_flags(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.strip_prefix("--tol.") {
            Some(rest) if rest.contains('=') => {
                out.push("--tol".into());
                out.push(rest.to_string());
            }
            Some(rest) => {
                out.push("--tol".into());
                let value = it.next().unwrap_or_default();
                out.push(format!("{rest}={value}"));
            }
            None => out.push(a),
        }
    }
    out
}

/// Fully resolved options of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    pub l_max: u32,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn conventions() -> Value {
    json!({
        "phase": PHASE_CONVENTION,
        "euler_order": EULER_ORDER,
        "small_d": SMALL_D_CONVENTION,
        "body_frame": "n3 = r0/|r0|, n1 = z x r0 / |z x r0|, n2 = n3 x n1",
    })
}

fn header(cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(cfg.subcommand));
    m.insert("conventions".into(), conventions());
    m.insert("l_max".into(), json!(cfg.l_max));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("tolerances".into(), json!(cfg.tolerances));
    m
}

/// Outcome of a subcommand: the rendered report and whether every check passed.
struct Outcome {
    report: String,
    passed: bool,
    note: Option<String>,
}

fn render_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("plain data serializes");
    s.push('\n');
    s
}

fn csv_table(head: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(head).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[derive(Debug, Clone)]
struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
    /// `true` when the value must stay below `tol`, `false` when it must exceed it.
    upper: bool,
}

impl Check {
    fn below(name: &'static str, value: f64, tol: f64) -> Self {
        Self { name, value, tol, upper: true }
    }

    fn above(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, tol: bound, upper: false }
    }

    fn passed(&self) -> bool {
        if self.upper {
            self.value < self.tol
        } else {
            self.value > self.tol
        }
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "value": self.value,
            "bound": if self.upper { "below" } else { "above" },
            "tol": self.tol,
            "passed": self.passed(),
        })
    }

    fn row(&self) -> Vec<String> {
        vec![self.name.into(), format!("{:?}", self.value), format!("{:?}", self.tol), self.passed().to_string()]
    }
}

fn checks_outcome(cfg: &RunConfig, checks: &[Check], extra: serde_json::Map<String, Value>) -> Outcome {
    let passed = checks.iter().all(Check::passed);
    let failing: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    let note = (!failing.is_empty()).then(|| format!("failed checks: {}", failing.join(", ")));
    let report = match cfg.format {
        Format::Json => {
            let mut m = header(cfg);
            m.extend(extra);
            m.insert("checks".into(), Value::Array(checks.iter().map(Check::json).collect()));
            m.insert("passed".into(), json!(passed));
            render_json(Value::Object(m))
        }
        Format::Csv => csv_table(&["check", "value", "tol", "passed"], &checks.iter().map(Check::row).collect::<Vec<_>>()),
    };
    Outcome { report, passed, note }
}

fn identities(cfg: &RunConfig) -> Result<Outcome> {
    let l_max = cfg.l_max;
    let tol = |k: &str| cfg.tolerances[k];

    // |Y_lm(pi/2, phi)| for l + m odd, over 100 azimuths
    let mut equator = 0.0f64;
    let mut witness = f64::INFINITY;
    for l in 0..=l_max {
        for m in -(l as i32)..=(l as i32) {
            let odd_sum = (l as i32 + m) % 2 != 0;
            let odd_witness = l % 2 == 1 && m == l as i32 && l <= 31;
            if !odd_sum && !odd_witness {
                continue;
            }
            let idx = HarmonicIndex::new(l, m)?;
            let mut peak = 0.0f64;
            for j in 0..100 {
                let v = sph_harm(idx, FRAC_PI_2, TAU * j as f64 / 100.0)?.norm();
                if odd_sum {
                    equator = equator.max(v);
                }
                peak = peak.max(v);
            }
            if odd_witness {
                witness = witness.min(peak);
            }
        }
    }

    let mut d_parity = 0.0f64;
    let mut orthogonality = 0.0f64;
    let mut unitarity = 0.0f64;
    for l in 0..=l_max {
        for mu in -(l as i32)..=(l as i32) {
            if (l as i32 - mu) % 2 != 0 {
                d_parity = d_parity.max(wigner_small_d(l, mu, 0, FRAC_PI_2)?.abs());
            }
        }
        for beta in [0.37, FRAC_PI_2, 2.9] {
            let d = small_d_block(l, beta);
            let dim = d.nrows();
            let e = d.transpose() * &d - nalgebra::DMatrix::<f64>::identity(dim, dim);
            orthogonality = orthogonality.max(e.amax());
        }
        unitarity = unitarity.max(wigner_big_d(l, 0.3, 1.1, -0.7)?.unitarity_error());
    }

    let orthonormality = harmonic_orthonormality(l_max);
    let mut checks = vec![
        Check::below("equator_zero", equator, tol("equator_zero")),
        Check::below("d_parity_zero", d_parity, tol("d_parity_zero")),
        Check::below("orthonormality", orthonormality, tol("orthonormality")),
        Check::below("orthogonality", orthogonality, tol("orthogonality")),
        Check::below("unitarity", unitarity, tol("unitarity")),
    ];
    if witness.is_finite() {
        checks.push(Check::above("odd_equator_witness", witness, 0.1));
    }
    Ok(checks_outcome(cfg, &checks, serde_json::Map::new()))
}

/// Largest entry of `G - I` for the Gram matrix of `{Y_lm : l <= l_max}` on an exact grid.
///
/// The azimuthal and polar integrals factor, so the Gram matrix is assembled
/// one `m` at a time; cross-`m` entries are bounded through the azimuthal
/// leakage of the trapezoid rule.
fn harmonic_orthonormality(l_max: u32) -> f64 {
    let n_theta = l_max as usize + 1;
    let n_phi = 2 * l_max as usize + 1;
    let (nodes, weights) = crate::analysis::gauss_legendre(n_theta);
    let tables: Vec<LegendreTable> = nodes.iter().map(|x| LegendreTable::new(l_max, x.clamp(-1.0, 1.0).acos())).collect();
    let mut worst = 0.0f64;
    let mut diag_max = 0.0f64;
    for m in 0..=l_max as i32 {
        for l in m.unsigned_abs()..=l_max {
            for lp in l..=l_max {
                let ring: f64 = tables.iter().zip(&weights).map(|(t, w)| w * t.value(l, m) * t.value(lp, m)).sum();
                let g = TAU * ring;
                let target = if l == lp { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
                if l == lp {
                    diag_max = diag_max.max(ring);
                }
            }
        }
    }
    let dphi = TAU / n_phi as f64;
    let mut leak = 0.0f64;
    for k in 1..=(2 * l_max as i64) {
        let s: C64 = (0..n_phi).map(|j| C64::from_polar(dphi, k as f64 * j as f64 * dphi)).sum();
        leak = leak.max(s.norm());
    }
    worst.max(leak * diag_max)
}

fn parse_coefficients(path: &PathBuf) -> Result<HarmonicCoefficients> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    HarmonicCoefficients::from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn seam(cfg: &RunConfig, file: &Option<PathBuf>, eps_list: &Option<Vec<f64>>, parity: ParityArg) -> Result<Outcome> {
    let (coeffs, source) = match file {
        Some(p) => (parse_coefficients(p)?, json!({"file": p.display().to_string()})),
        None => (
            random_coefficients(cfg.l_max, parity.filter(), cfg.seed),
            json!({"random": {"parity": format!("{parity:?}").to_lowercase(), "seed": cfg.seed}}),
        ),
    };
    let eps = eps_list.clone().unwrap_or_else(default_eps_list);
    let class = statistics_classify(&coeffs, cfg.tolerances["classify"])?;
    let scan = seam_limit_scan(&coeffs, &eps)?;
    let consistent = scan.decays().map(|d| d == (class == Classification::Symmetric));
    let passed = consistent != Some(false);
    let note = Some(format!("classification: {}", class.as_str()));
    let report = match cfg.format {
        Format::Json => {
            let mut m = header(cfg);
            m.insert("source".into(), source);
            m.insert("coefficients_l_max".into(), json!(coeffs.l_max()));
            m.insert("parity".into(), json!(coeffs.parity().as_str()));
            m.insert("classification".into(), json!(class.as_str()));
            m.insert("scan".into(), scan.to_json_value());
            m.insert("scan_consistent".into(), json!(consistent));
            m.insert("passed".into(), json!(passed));
            render_json(Value::Object(m))
        }
        Format::Csv => scan.to_csv(),
    };
    Ok(Outcome { report, passed, note })
}

fn fit_row(sector: &str, theta0: Option<f64>, fit: &PhaseFitReport) -> Vec<String> {
    vec![
        sector.into(),
        theta0.map(|t| format!("{t:?}")).unwrap_or_default(),
        format!("{:?}", fit.best_phase.re),
        format!("{:?}", fit.best_phase.im),
        format!("{:?}", fit.residual),
        fit.verdict.as_str().into(),
    ]
}

fn superselect(cfg: &RunConfig, r0: &[f64], sweep: bool) -> Result<Outcome> {
    if r0.len() != 3 {
        return Err(crate::error::domain(format!("--r0 takes three components, got {}", r0.len())));
    }
    let r0 = Vec3::new(r0[0], r0[1], r0[2]);
    BodyFrame::new(r0)?;
    let tol = cfg.tolerances["phase"];
    let k1 = to_body_k1(&point_state(r0, cfg.l_max)?)?;
    let even = superselection_check(&k1.orbital_part(0), tol)?;
    let odd = if cfg.l_max >= 1 { Some(superselection_check(&k1.orbital_part(1), tol)?) } else { None };
    let mixed = superselection_check(&k1, tol)?;

    let near = |f: &PhaseFitReport, lam: f64| (f.best_phase - C64::new(lam, 0.0)).norm() < tol;
    let mut passed = even.verdict == Verdict::GlobalPhase && near(&even, 1.0);
    if let Some(o) = &odd {
        passed &= o.verdict == Verdict::GlobalPhase && near(o, -1.0);
        passed &= mixed.verdict == Verdict::NoGlobalPhase;
    }

    let mut sweeps = Vec::new();
    if sweep {
        let thetas: Vec<f64> = (0..20).map(|k| 0.1 + 1.3 * k as f64 / 19.0).collect();
        let phi0 = r0.y.atan2(r0.x);
        let parities: &[(u32, &str, f64)] = if cfg.l_max >= 1 { &[(0, "even", 1.0), (1, "odd", -1.0)] } else { &[(0, "even", 1.0)] };
        for &(parity, name, lam) in parities {
            let pts = verdict_sweep(&thetas, phi0, cfg.l_max, Some(parity), tol)?;
            let constant = pts
                .iter()
                .all(|p| p.residual < tol && (C64::new(p.phase_re, p.phase_im) - C64::new(lam, 0.0)).norm() < tol);
            passed &= constant;
            sweeps.push((name, pts, constant));
        }
    }

    let report = match cfg.format {
        Format::Json => {
            let mut m = header(cfg);
            m.insert("r0".into(), json!([r0.x, r0.y, r0.z]));
            let mut sectors = serde_json::Map::new();
            sectors.insert("even".into(), even.to_json_value());
            if let Some(o) = &odd {
                sectors.insert("odd".into(), o.to_json_value());
            }
            sectors.insert("mixed".into(), mixed.to_json_value());
            m.insert("sectors".into(), Value::Object(sectors));
            if sweep {
                let s: serde_json::Map<String, Value> = sweeps
                    .iter()
                    .map(|(name, pts, constant)| (name.to_string(), json!({"points": pts, "constant_verdict": constant})))
                    .collect();
                m.insert("sweep".into(), Value::Object(s));
            }
            m.insert("passed".into(), json!(passed));
            render_json(Value::Object(m))
        }
        Format::Csv => {
            let mut rows = vec![fit_row("even", None, &even)];
            if let Some(o) = &odd {
                rows.push(fit_row("odd", None, o));
            }
            rows.push(fit_row("mixed", None, &mixed));
            for (name, pts, _) in &sweeps {
                for p in pts {
                    let verdict = if p.residual < tol { Verdict::GlobalPhase } else { Verdict::NoGlobalPhase };
                    let fit = PhaseFitReport {
                        best_phase: C64::new(p.phase_re, p.phase_im),
                        residual: p.residual,
                        verdict,
                    };
                    rows.push(fit_row(&format!("sweep-{name}"), Some(p.theta0), &fit));
                }
            }
            csv_table(&["sector", "theta0", "phase_re", "phase_im", "residual", "verdict"], &rows)
        }
    };
    Ok(Outcome { report, passed, note: None })
}

fn spectrum(cfg: &RunConfig, n_samples: Option<usize>) -> Result<Outcome> {
    let n = n_samples.unwrap_or_else(|| min_samples(cfg.l_max));
    let r = identified_laplacian_eigs(cfg.l_max, n, cfg.tolerances["cluster"])?;
    let passed = r.is_even_spectrum();
    let report = match cfg.format {
        Format::Json => {
            let mut m = header(cfg);
            m.insert("result".into(), serde_json::to_value(&r).expect("plain data serializes"));
            m.insert("even_spectrum".into(), json!(passed));
            m.insert("passed".into(), json!(passed));
            render_json(Value::Object(m))
        }
        Format::Csv => r.to_csv(),
    };
    let note = (!passed).then(|| "spectrum deviates from the even-orbital prediction".to_string());
    Ok(Outcome { report, passed, note })
}

/// Cutoffs scanned by `complete`: multiples of 8 up to `l_max`, at least `{8}`.
fn completeness_levels(l_max: u32) -> Vec<u32> {
    (1..=(l_max / 8).max(1)).map(|k| 8 * k).collect()
}

fn complete(cfg: &RunConfig) -> Result<Outcome> {
    let levels = completeness_levels(cfg.l_max);
    let top = *levels.last().expect("non-empty");
    let grid = QuadratureGrid::for_band_limit(2 * top, crate::analysis::Domain::Hemisphere);
    let bump = GaussianBump::INTERIOR;
    let mut rows = Vec::new();
    for &l in &levels {
        let even = completeness_residual(bump.as_fn(), l, ParityFilter::Even, &grid)?;
        let odd = completeness_residual(bump.as_fn(), l, ParityFilter::Odd, &grid)?;
        rows.push((l, even, odd));
    }
    let monotone = |k: usize| rows.windows(2).all(|w| if k == 0 { w[1].1 < w[0].1 } else { w[1].2 < w[0].2 });
    let last = rows.last().expect("non-empty");
    let tol = cfg.tolerances["residual"];
    let checks = vec![
        Check::below("even_final_residual", last.1, tol),
        Check::below("odd_final_residual", last.2, tol),
        Check::above("even_monotone", if monotone(0) { 1.0 } else { 0.0 }, 0.5),
        Check::above("odd_monotone", if monotone(1) { 1.0 } else { 0.0 }, 0.5),
    ];
    if cfg.format == Format::Csv {
        let table: Vec<Vec<String>> =
            rows.iter().map(|(l, e, o)| vec![l.to_string(), format!("{e:?}"), format!("{o:?}")]).collect();
        let passed = checks.iter().all(Check::passed);
        return Ok(Outcome { report: csv_table(&["l_max", "even_residual", "odd_residual"], &table), passed, note: None });
    }
    let mut extra = serde_json::Map::new();
    extra.insert("bump".into(), json!({"theta0": bump.theta0, "phi0": bump.phi0, "width": bump.width}));
    extra.insert(
        "residuals".into(),
        Value::Array(rows.iter().map(|(l, e, o)| json!({"l_max": l, "even": e, "odd": o})).collect()),
    );
    Ok(checks_outcome(cfg, &checks, extra))
}

fn resolve(cli: &Cli) -> std::result::Result<RunConfig, String> {
    let mut tolerances = cli.command.default_tolerances();
    for (name, v) in &cli.tol {
        match tolerances.get_mut(name) {
            Some(slot) => *slot = *v,
            None => {
                let known: Vec<&str> = tolerances.keys().map(String::as_str).collect();
                return Err(format!(
                    "unknown tolerance '{name}' for {}; known: {}",
                    cli.command.name(),
                    known.join(", ")
                ));
            }
        }
    }
    Ok(RunConfig {
        subcommand: cli.command.name().into(),
        l_max: cli.l_max,
        seed: cli.seed,
        tolerances,
        out: cli.out.clone(),
        format: cli.format,
    })
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = expand_tolerance_flags(args.into_iter().map(Into::into).collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let outcome = match &cli.command {
        Command::Identities => identities(&cfg),
        Command::Seam { file, eps_list, parity } => seam(&cfg, file, eps_list, *parity),
        Command::Superselect { r0, sweep_theta } => superselect(&cfg, r0, *sweep_theta),
        Command::Spectrum { n_samples } => spectrum(&cfg, *n_samples),
        Command::Complete => complete(&cfg),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.report),
        None => stdout.write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if let Some(note) = &outcome.note {
        let _ = writeln!(stderr, "{note}");
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}
