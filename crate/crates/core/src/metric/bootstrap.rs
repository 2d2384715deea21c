//! Order-by-order construction of `U = g - delta`.
//!
//! Stage `N` is certified at `q_N = N (n - 1)`: the residual
//! `Delta U - RHS(U)` has no term with `sigma >= -(q_N + 2)`. One step
//! computes the right-hand side down to `q_N + n + 1`, inverts the Laplacian
//! termwise and adds the harmonic seed terms that enter at the new order.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{exp_laplacian, membership_t, membership_ttilde, Expansion};
use crate::poisson::{is_exceptional, solve_expansion};
use crate::poly::{HarmonicPoly, MAX_DIM};

use super::geometry::{gauge_residual, matrix_partials, rhs, symbolic_residual};
use super::ExpMatrix;

/// One seed polynomial at `(i, j)`, zero-based with `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedEntry {
    pub i: usize,
    pub j: usize,
    pub harmonic: HarmonicPoly,
}

/// Free harmonic data: at level `k` the entry `(i, j)` receives
/// `r^{-(n-2)-k} G_k` with `G_k = h / r^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedData {
    n: usize,
    levels: BTreeMap<usize, Vec<SeedEntry>>,
}

impl SeedData {
    pub fn new(n: usize) -> Self {
        Self { n, levels: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds a seed; `(i, j)` may be given in either order.
    pub fn insert(&mut self, level: usize, i: usize, j: usize, harmonic: HarmonicPoly) -> Result<()> {
        if level == 0 {
            return Err(Error::InvalidConfig("seed level must be at least 1".into()));
        }
        if harmonic.dim() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: harmonic.dim() });
        }
        if harmonic.degree() != level {
            return Err(Error::DegreeMismatch { expected: level, found: harmonic.degree() });
        }
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidConfig(format!("seed index ({}, {}) out of range", i + 1, j + 1)));
        }
        let (i, j) = (i.min(j), i.max(j));
        self.levels.entry(level).or_default().push(SeedEntry { i, j, harmonic });
        Ok(())
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, &[SeedEntry])> + '_ {
        self.levels.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.levels.values().all(Vec::is_empty)
    }

    /// `sigma` of the seed term at `level`.
    pub fn sigma(n: usize, level: usize) -> i64 {
        -(n as i64 - 2) - level as i64
    }

    /// Sum of all seed terms with `sigma >= -order`.
    pub fn metric_upto(&self, order: i64) -> ExpMatrix {
        let mut out = ExpMatrix::zero(self.n);
        for (&level, entries) in &self.levels {
            let sigma = Self::sigma(self.n, level);
            if sigma < -order {
                continue;
            }
            for e in entries {
                let sum = out.get(e.i, e.j).add(&Expansion::harmonic(sigma, 0, &e.harmonic));
                out.set_symmetric(e.i, e.j, sum);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BootstrapOptions {
    /// Abort when a term's log power exceeds this (n = 4 only).
    pub max_logpow: Option<u32>,
    /// Record wall-clock time per stage.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    #[serde(rename = "N")]
    pub index: usize,
    #[serde(rename = "q_N")]
    pub order: i64,
    pub term_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

/// Snapshot after a certified stage.
#[derive(Clone, Debug)]
pub struct BootstrapState {
    pub n: usize,
    pub metric: ExpMatrix,
    pub stage: usize,
    pub certified: i64,
    pub target: i64,
    pub log: Vec<StageReport>,
    pub exceptional_solves: usize,
}

impl BootstrapState {
    /// Stage 1: the level-1 seeds, certified at `n - 1`.
    pub fn initial(n: usize, target: i64, seeds: &SeedData) -> Result<Self> {
        if n < 4 {
            return Err(Error::DimensionTooSmall(n));
        }
        if n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if seeds.dim() != n {
            return Err(Error::DimensionMismatch { left: n, right: seeds.dim() });
        }
        let q1 = n as i64 - 1;
        if target < q1 {
            return Err(Error::InvalidConfig(format!("target order {target} below n - 1 = {q1}")));
        }
        let metric = seeds.metric_upto(q1);
        let log = vec![StageReport { index: 1, order: q1, term_count: metric.term_count(), wall_ms: None }];
        Ok(Self { n, metric, stage: 1, certified: q1, target, log, exceptional_solves: 0 })
    }

    pub fn is_done(&self) -> bool {
        self.certified >= self.target
    }
}

/// Solves `Delta X = rhs` entrywise on the upper triangle and mirrors it.
/// Returns the solution and the number of exceptional groups met.
fn solve_matrix(rhs: &ExpMatrix) -> Result<(ExpMatrix, usize)> {
    let n = rhs.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let solved: Vec<Result<(Expansion, usize)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let e = rhs.get(i, j);
            let mut exceptional = 0;
            for (k, _) in e.groups() {
                if is_exceptional(k.sigma, n, k.degree) {
                    if n > 4 {
                        return Err(Error::UnexpectedExceptional { n, sigma: k.sigma, logpow: k.logpow, degree: k.degree });
                    }
                    exceptional += 1;
                }
            }
            Ok((solve_expansion(e)?, exceptional))
        })
        .collect();
    let mut out = ExpMatrix::zero(n);
    let mut count = 0;
    for ((i, j), r) in pairs.into_iter().zip(solved) {
        let (e, c) = r?;
        count += c;
        out.set_symmetric(i, j, e);
    }
    Ok((out, count))
}

/// Advances a certified state by one stage (or up to the target order).
pub fn bootstrap_step(state: &BootstrapState, seeds: &SeedData, opts: &BootstrapOptions) -> Result<BootstrapState> {
    let start = Instant::now();
    let n = state.n;
    let next = state.target.min(state.certified + n as i64 - 1);
    let source = rhs(&state.metric, next + 2)?;
    let (particular, exceptional) = solve_matrix(&source)?;
    let metric = particular.add(&seeds.metric_upto(next));
    if let Some(guard) = opts.max_logpow {
        let found = metric.max_logpow();
        if found > guard {
            return Err(Error::LogDepthExceeded { found, guard });
        }
    }
    let mut log = state.log.clone();
    log.push(StageReport {
        index: state.stage + 1,
        order: next,
        term_count: metric.term_count(),
        wall_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    });
    Ok(BootstrapState {
        n,
        metric,
        stage: state.stage + 1,
        certified: next,
        target: state.target,
        log,
        exceptional_solves: state.exceptional_solves + exceptional,
    })
}

/// `(sigma, logpow)` of a leading term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingOrder {
    pub sigma: i64,
    pub logpow: u32,
}

impl LeadingOrder {
    pub fn of(e: &Expansion) -> Option<Self> {
        e.leading_order().map(|(sigma, logpow)| Self { sigma, logpow })
    }
}

/// Leading order of a residual entry; indices are one-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryOrder {
    pub i: usize,
    pub j: usize,
    pub leading: Option<LeadingOrder>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentOrder {
    pub k: usize,
    pub leading: Option<LeadingOrder>,
}

/// Number of upper-triangle groups at a given `(sigma, logpow)` with
/// `logpow >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogInventory {
    pub sigma: i64,
    pub logpow: u32,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    #[serde(rename = "Q")]
    pub order: i64,
    pub stages: Vec<StageReport>,
    pub residual_leading_order: Vec<EntryOrder>,
    pub gauge_leading_order: Vec<ComponentOrder>,
    pub log_terms: Vec<LogInventory>,
    pub exceptional_solves: usize,
    pub invariants: Vec<InvariantCheck>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.invariants.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.invariants.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Upper-triangle inventory of log-bearing groups.
pub fn log_inventory(u: &ExpMatrix) -> Vec<LogInventory> {
    let mut counts: BTreeMap<(i64, u32), usize> = BTreeMap::new();
    for (_, _, e) in u.upper() {
        for (k, _) in e.groups() {
            if k.logpow > 0 {
                *counts.entry((-k.sigma, k.logpow)).or_default() += 1;
            }
        }
    }
    counts.into_iter().map(|((s, logpow), count)| LogInventory { sigma: -s, logpow, count }).collect()
}

/// Every term with `sigma >= 3 - 2n` is harmonic.
pub fn early_terms_harmonic(u: &ExpMatrix) -> bool {
    let cut = 3 - 2 * u.dim() as i64;
    u.upper().all(|(_, _, e)| exp_laplacian(&e.truncate(-cut)).is_zero())
}

/// Every term lies in the index set for its dimension.
pub fn all_terms_in_index_set(u: &ExpMatrix) -> bool {
    let n = u.dim();
    u.upper().all(|(_, _, e)| {
        e.groups().all(|(k, _)| {
            if n == 4 {
                matches!(membership_ttilde(*k, n), Ok(Some(_)))
            } else {
                matches!(membership_t(*k, n), Ok(Some(_)))
            }
        })
    })
}

/// Leading-order bounds for `U`, `dU` and `d^2 U`: `1 - n`, `-n`, `-n - 1`.
pub fn order_laws_hold(u: &ExpMatrix) -> bool {
    let n = u.dim() as i64;
    let du = matrix_partials(u);
    let below = |s: Option<i64>, bound: i64| s.is_none_or(|s| s <= bound);
    if !below(u.max_sigma(), 1 - n) {
        return false;
    }
    if !du.iter().all(|d| below(d.max_sigma(), -n)) {
        return false;
    }
    du.iter().all(|d| matrix_partials(d).iter().all(|dd| below(dd.max_sigma(), -n - 1)))
}

/// Recomputes the residual, gauge and structural checks for a final state.
pub fn audit(u: &ExpMatrix, order: i64, stages: Vec<StageReport>, exceptional_solves: usize) -> Result<Report> {
    let n = u.dim();
    let residual = symbolic_residual(u, order)?;
    let gauge = gauge_residual(u, order)?;
    let residual_leading_order: Vec<EntryOrder> = residual
        .upper()
        .map(|(i, j, e)| EntryOrder { i: i + 1, j: j + 1, leading: LeadingOrder::of(e) })
        .collect();
    let gauge_leading_order = gauge
        .iter()
        .enumerate()
        .map(|(k, e)| ComponentOrder { k: k + 1, leading: LeadingOrder::of(e) })
        .collect();
    let check = |name: &str, passed: bool| InvariantCheck { name: name.to_string(), passed };
    let mut invariants = vec![
        check("residual_cancellation", residual.is_zero()),
        check("symmetry", u.is_symmetric()),
        check("order_laws", order_laws_hold(u)),
        check("early_harmonicity", early_terms_harmonic(u)),
        check("index_set_membership", all_terms_in_index_set(u)),
    ];
    if n > 4 {
        invariants.push(check("no_log_terms", u.max_logpow() == 0 && exceptional_solves == 0));
    }
    Ok(Report {
        n,
        order,
        stages,
        residual_leading_order,
        gauge_leading_order,
        log_terms: log_inventory(u),
        exceptional_solves,
        invariants,
    })
}

/// Runs the bootstrap from stage 1 until the target order is certified.
pub fn run_bootstrap(n: usize, order: i64, seeds: &SeedData, opts: &BootstrapOptions) -> Result<(ExpMatrix, Report)> {
    let mut state = BootstrapState::initial(n, order, seeds)?;
    while !state.is_done() {
        state = bootstrap_step(&state, seeds, opts)?;
    }
    let report = audit(&state.metric, order, state.log, state.exceptional_solves)?;
    Ok((state.metric, report))
}
