//! The `expand`, `verify`, `kelvin` and `selfcheck` commands.

use std::fs;
use std::path::{Path, PathBuf};

use alexpand::kelvin::{kelvin_metric, KelvinImage};
use alexpand::metric::{log_inventory, run_bootstrap, BootstrapOptions, ExpMatrix, Report};
use alexpand::numeric::{proxy_slope, sample_residuals, FdCheck, ProxyEvaluator, SamplePlan, SlopeOutcome};
use alexpand::serial::{
    expansion_to_json, metric_from_json, metric_to_json, parse_json, poly_to_json, to_json_string, ExpansionJson,
    MetricFile, PolyJson,
};
use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::config::RunConfig;

pub const EXPANSION_FILE: &str = "expansion.json";
pub const REPORT_FILE: &str = "report.json";
pub const SAMPLES_FILE: &str = "samples.csv";
pub const VERIFY_FILE: &str = "verify.json";

/// Slack allowed on the certified decay rate.
pub const SLOPE_TOLERANCE: f64 = 0.1;

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn load_expansion(path: &Path) -> Result<(ExpMatrix, i64)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MetricFile = parse_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let u = metric_from_json(&file).with_context(|| format!("in {}", path.display()))?;
    Ok((u, file.order))
}

pub struct ExpandOutcome {
    pub report: Report,
    pub expansion_path: PathBuf,
    pub report_path: PathBuf,
}

impl ExpandOutcome {
    pub fn success(&self) -> bool {
        self.report.all_passed()
    }
}

pub fn cmd_expand(config: &RunConfig, out_dir: &Path, timing: bool) -> Result<ExpandOutcome> {
    let opts = BootstrapOptions { max_logpow: (config.n == 4).then_some(config.max_logpow), timing };
    let (u, report) = run_bootstrap(config.n, config.target_order, &config.seeds, &opts)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let expansion_path = out_dir.join(EXPANSION_FILE);
    let report_path = out_dir.join(REPORT_FILE);
    write(&expansion_path, &to_json_string(&metric_to_json(&u, config.target_order)))?;
    write(&report_path, &to_json_string(&report))?;
    Ok(ExpandOutcome { report, expansion_path, report_path })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstEntry {
    pub i: usize,
    pub j: usize,
    pub direction: usize,
    pub r: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdSummary {
    pub first: f64,
    pub second: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub n: usize,
    pub order: i64,
    /// `"decaying"`, `"violation"` or `"identically-zero proxy"`.
    pub status: String,
    pub slope: Option<f64>,
    pub bound: f64,
    pub worst: Option<WorstEntry>,
    pub fd_check: FdSummary,
}

impl VerifySummary {
    pub fn success(&self) -> bool {
        self.status != "violation" && self.fd_check.passed
    }
}

pub struct VerifyOutcome {
    pub summary: VerifySummary,
    pub samples_path: PathBuf,
    pub summary_path: PathBuf,
}

fn fd_summary(ev: &ProxyEvaluator, plan: &SamplePlan) -> FdSummary {
    let r = plan.radii[plan.radii.len() / 2];
    let checks: Vec<FdCheck> = (0..plan.directions.len()).map(|d| ev.fd_check(&plan.point(d, r), plan.fd_ratio)).collect();
    let first = checks.iter().map(|c| c.first).fold(0.0, f64::max);
    let second = checks.iter().map(|c| c.second).fold(0.0, f64::max);
    let tolerance = 10.0 * plan.fd_ratio * plan.fd_ratio;
    FdSummary { first, second, tolerance, passed: checks.iter().all(FdCheck::passed) }
}

/// Samples the numeric residual of an expansion file and checks that it
/// decays at least as fast as `r^{-(order + 2)}`.
pub fn cmd_verify(config: &RunConfig, expansion: &Path, out_dir: Option<&Path>) -> Result<VerifyOutcome> {
    let (u, order) = load_expansion(expansion)?;
    if u.dim() != config.n {
        bail!("expansion has n = {} but the configuration has n = {}", u.dim(), config.n);
    }
    let plan = &config.plan;
    let ev = ProxyEvaluator::new(&u);
    let rows = sample_residuals(&ev, plan)?;
    let bound = -(order as f64 + 2.0) + SLOPE_TOLERANCE;
    let (status, slope, worst) = match proxy_slope(plan, &rows)? {
        SlopeOutcome::IdenticallyZero => ("identically-zero proxy".to_string(), None, None),
        SlopeOutcome::Slope { slope, direction } => {
            let last = rows.iter().filter(|row| row.direction == direction).last().expect("rows for direction");
            let (i, j, value) = last
                .entries
                .iter()
                .copied()
                .fold((0, 0, 0.0f64), |best, e| if e.2.abs() > best.2.abs() { e } else { best });
            let worst = WorstEntry { i: i + 1, j: j + 1, direction, r: last.r, value };
            let status = if slope <= bound { "decaying" } else { "violation" };
            (status.to_string(), Some(slope), Some(worst))
        }
    };
    let summary = VerifySummary { n: u.dim(), order, status, slope, bound, worst, fd_check: fd_summary(&ev, plan) };

    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => expansion.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let samples_path = dir.join(SAMPLES_FILE);
    let mut w = csv::Writer::from_path(&samples_path).with_context(|| format!("writing {}", samples_path.display()))?;
    w.write_record(["r", "direction_id", "entry_i", "entry_j", "value"])?;
    for row in &rows {
        for &(i, j, v) in &row.entries {
            w.write_record([row.r.to_string(), row.direction.to_string(), (i + 1).to_string(), (j + 1).to_string(), format!("{v:e}")])?;
        }
    }
    w.flush()?;
    let summary_path = dir.join(VERIFY_FILE);
    write(&summary_path, &to_json_string(&summary))?;
    Ok(VerifyOutcome { summary, samples_path, summary_path })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KelvinEntry {
    Polynomial { i: usize, j: usize, polynomial: PolyJson },
    NotPolynomial { i: usize, j: usize, offending: ExpansionJson },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KelvinOutput {
    pub n: usize,
    pub polynomial: bool,
    pub entries: Vec<KelvinEntry>,
}

/// Kelvin polynomial check of every entry of an expansion file.
pub fn cmd_kelvin(expansion: &Path, n: usize) -> Result<KelvinOutput> {
    let (u, _) = load_expansion(expansion)?;
    if u.dim() != n {
        bail!("expansion has n = {} but --n {n} was given", u.dim());
    }
    if n % 2 == 1 {
        bail!("odd dimension {n}: the Kelvin polynomial check needs even n > 4");
    }
    let logs = log_inventory(&u);
    if !logs.is_empty() {
        let listing: Vec<String> =
            logs.iter().map(|l| format!("sigma={} logpow={} count={}", l.sigma, l.logpow, l.count)).collect();
        bail!("log terms present, Kelvin transform not supported: {}", listing.join(", "));
    }
    let images = kelvin_metric(&u)?;
    let mut polynomial = true;
    let entries = images
        .into_iter()
        .map(|(i, j, img)| match img {
            KelvinImage::Polynomial(p) => KelvinEntry::Polynomial { i: i + 1, j: j + 1, polynomial: poly_to_json(&p) },
            KelvinImage::NotPolynomial(terms) => {
                polynomial = false;
                let e = alexpand::Expansion::from_terms(n, terms).expect("terms share the dimension");
                KelvinEntry::NotPolynomial { i: i + 1, j: j + 1, offending: expansion_to_json(&e) }
            }
        })
        .collect();
    Ok(KelvinOutput { n, polynomial, entries })
}

pub fn write_kelvin(output: &KelvinOutput, out: Option<&Path>) -> Result<()> {
    let text = to_json_string(output);
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
