//! Run configuration files.

use std::collections::BTreeMap;
use std::path::Path;

use alexpand::metric::SeedData;
use alexpand::numeric::SamplePlan;
use alexpand::poly::HarmonicPoly;
use alexpand::rational;
use alexpand::serial::{poly_from_json, PolyJson};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_LOGPOW: u32 = 4;

/// A seed entry with one-based indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    pub i: usize,
    pub j: usize,
    pub harmonic: PolyJson,
}

/// A direction component, either a JSON number or an exact `"p/q"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Number(f64),
    Exact(String),
}

impl Component {
    fn value(&self) -> Result<f64> {
        match self {
            Component::Number(v) => Ok(*v),
            Component::Exact(s) => Ok(rational::parse(s)?.to_f64()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub radii: Vec<f64>,
    #[serde(default)]
    pub directions: Option<Vec<Vec<Component>>>,
    #[serde(default)]
    pub fd_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub n: usize,
    pub target_order: i64,
    #[serde(default)]
    pub seeds: BTreeMap<String, Vec<SeedSpec>>,
    #[serde(default)]
    pub verify: Option<VerifySpec>,
    #[serde(default)]
    pub max_logpow: Option<u32>,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub target_order: i64,
    pub seeds: SeedData,
    pub plan: SamplePlan,
    pub max_logpow: u32,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).context("malformed configuration")?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self> {
        let n = raw.n;
        if !(4..=alexpand::poly::MAX_DIM).contains(&n) {
            bail!("n = {n} is outside the supported range 4..={}", alexpand::poly::MAX_DIM);
        }
        let q = raw.target_order;
        if q < n as i64 - 1 {
            bail!("target_order {q} is below n - 1 = {}", n - 1);
        }
        let max_logpow = raw.max_logpow.unwrap_or(DEFAULT_MAX_LOGPOW);
        // at order Q the log index set allows (log r)^i only for i <= Q - 3
        if n == 4 && q - 3 > max_logpow as i64 {
            bail!(
                "n = 4 with target_order {q} allows log depth up to {}, above max_logpow {max_logpow}; raise max_logpow or lower the order",
                q - 3
            );
        }

        let mut seeds = SeedData::new(n);
        for (level_key, entries) in &raw.seeds {
            let level: usize =
                level_key.parse().with_context(|| format!("seed level {level_key:?} is not an integer"))?;
            if level == 0 {
                bail!("seed level must be at least 1");
            }
            for e in entries {
                if e.i == 0 || e.j == 0 || e.i > n || e.j > n {
                    bail!("seed index ({}, {}) out of range 1..={n}", e.i, e.j);
                }
                if e.i > e.j {
                    bail!("seed index ({}, {}) must satisfy i <= j", e.i, e.j);
                }
                let p = poly_from_json(n, &e.harmonic)
                    .with_context(|| format!("seed ({}, {}) at level {level}", e.i, e.j))?;
                if !p.is_homogeneous_of(level) {
                    bail!("seed ({}, {}) at level {level}: degree mismatch, expected homogeneous degree {level}", e.i, e.j);
                }
                if !p.laplacian().is_zero() {
                    bail!("seed ({}, {}) at level {level} is not harmonic", e.i, e.j);
                }
                let h = HarmonicPoly::new(p, level)?;
                seeds.insert(level, e.i - 1, e.j - 1, h)?;
            }
        }

        let mut plan = SamplePlan::default_for(n);
        if let Some(v) = raw.verify {
            plan.radii = v.radii;
            if let Some(dirs) = v.directions {
                plan.directions =
                    dirs.iter().map(|d| d.iter().map(Component::value).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
            }
            if let Some(c) = v.fd_ratio {
                plan.fd_ratio = c;
            }
        }
        plan.validate(n)?;

        Ok(Self { n, target_order: q, seeds, plan, max_logpow })
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunConfig::from_json(&text).with_context(|| format!("in {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(seeds: &str) -> String {
        format!(r#"{{"n": 5, "target_order": 4, "seeds": {seeds}}}"#)
    }

    #[test]
    fn minimal_config() {
        let c = RunConfig::from_json(&config(r#"{"1": [{"i": 1, "j": 1, "harmonic": [{"exponents": [1,0,0,0,0], "coeff": "1"}]}]}"#))
            .unwrap();
        assert_eq!(c.n, 5);
        assert_eq!(c.max_logpow, DEFAULT_MAX_LOGPOW);
        assert!(!c.seeds.is_empty());
    }

    #[test]
    fn rejects_bad_seeds() {
        let x1sq = r#"{"2": [{"i": 1, "j": 1, "harmonic": [{"exponents": [2,0,0,0,0], "coeff": "1"}]}]}"#;
        let err = RunConfig::from_json(&config(x1sq)).unwrap_err();
        assert!(format!("{err:#}").contains("not harmonic"));
        let x1x2 = r#"{"1": [{"i": 1, "j": 2, "harmonic": [{"exponents": [1,1,0,0,0], "coeff": "1"}]}]}"#;
        let err = RunConfig::from_json(&config(x1x2)).unwrap_err();
        assert!(format!("{err:#}").contains("degree mismatch"));
        let lower = r#"{"1": [{"i": 2, "j": 1, "harmonic": [{"exponents": [1,0,0,0,0], "coeff": "1"}]}]}"#;
        assert!(RunConfig::from_json(&config(lower)).is_err());
        let decimal = r#"{"1": [{"i": 1, "j": 1, "harmonic": [{"exponents": [1,0,0,0,0], "coeff": "0.5"}]}]}"#;
        assert!(RunConfig::from_json(&config(decimal)).is_err());
        assert!(RunConfig::from_json("{\"n\": 5}").is_err());
    }

    #[test]
    fn log_depth_guard() {
        let ok = r#"{"n": 4, "target_order": 7}"#;
        assert!(RunConfig::from_json(ok).is_ok());
        let deep = r#"{"n": 4, "target_order": 9}"#;
        assert!(RunConfig::from_json(deep).is_err());
        let raised = r#"{"n": 4, "target_order": 9, "max_logpow": 6}"#;
        assert!(RunConfig::from_json(raised).is_ok());
    }

    #[test]
    fn verify_section() {
        let text = r#"{"n": 4, "target_order": 3, "verify": {"radii": [10, 20, 40], "directions": [["1", "1/2", 0, 0]], "fd_ratio": 0.01}}"#;
        let c = RunConfig::from_json(text).unwrap();
        assert_eq!(c.plan.directions, vec![vec![1.0, 0.5, 0.0, 0.0]]);
        assert_eq!(c.plan.fd_ratio, 0.01);
        let bad = r#"{"n": 4, "target_order": 3, "verify": {"radii": [20, 10, 40]}}"#;
        assert!(RunConfig::from_json(bad).is_err());
    }
}
