//! JSON formats for polynomials, expansions and metric expansions.
//!
//! A polynomial is a list of `{exponents, coeff}` in descending grlex order
//! with `coeff` a `"p/q"` string. An expansion is a list of
//! `{sigma, logpow, harmonic}` groups in canonical order, where `harmonic`
//! carries the coefficient. Metric files list the upper triangle with
//! one-based indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{Expansion, TermKey};
use crate::metric::ExpMatrix;
use crate::poly::{check_dim, Monomial, Poly};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialEntry {
    pub exponents: Vec<u32>,
    #[serde(with = "rational::serde_str")]
    pub coeff: Rational,
}

pub type PolyJson = Vec<MonomialEntry>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub sigma: i64,
    pub logpow: u32,
    pub harmonic: PolyJson,
}

pub type ExpansionJson = Vec<TermEntry>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricEntry {
    pub i: usize,
    pub j: usize,
    pub terms: ExpansionJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricFile {
    pub n: usize,
    pub order: i64,
    pub entries: Vec<MetricEntry>,
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    let n = p.dim();
    p.iter().rev().map(|(m, c)| MonomialEntry { exponents: m.exponents(n), coeff: c.clone() }).collect()
}

/// Rebuilds a polynomial; every exponent vector must have length `dim`.
pub fn poly_from_json(dim: usize, entries: &[MonomialEntry]) -> Result<Poly> {
    check_dim(dim)?;
    let mut p = Poly::zero(dim);
    for e in entries {
        if e.exponents.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: e.exponents.len() });
        }
        let m = Monomial::from_exponents(&e.exponents)
            .ok_or_else(|| Error::Parse(format!("exponents {:?} out of range", e.exponents)))?;
        p.add_term(m, e.coeff.clone());
    }
    Ok(p)
}

pub fn expansion_to_json(a: &Expansion) -> ExpansionJson {
    a.groups()
        .map(|(k, p)| TermEntry { sigma: k.sigma, logpow: k.logpow, harmonic: poly_to_json(p) })
        .collect()
}

/// Rebuilds an expansion. Each `harmonic` must be homogeneous; one that is
/// not harmonic is split into its harmonic components, so `r^sigma p / r^d`
/// keeps its meaning.
pub fn expansion_from_json(dim: usize, entries: &[TermEntry]) -> Result<Expansion> {
    let mut groups: BTreeMap<TermKey, Poly> = BTreeMap::new();
    for e in entries {
        let p = poly_from_json(dim, &e.harmonic)?;
        if p.is_zero() {
            continue;
        }
        let d = p.degree().unwrap_or(0);
        if !p.is_homogeneous_of(d) {
            return Err(Error::NotHomogeneous { expected: d });
        }
        let part = Expansion::from_homogeneous(e.sigma, e.logpow, &p)?;
        for (k, h) in part.groups() {
            let slot = groups.entry(*k).or_insert_with(|| Poly::zero(dim));
            slot.add_scaled(h, &rational::one());
        }
    }
    groups.retain(|_, p| !p.is_zero());
    Ok(Expansion::from_groups(dim, groups))
}

pub fn metric_to_json(u: &ExpMatrix, order: i64) -> MetricFile {
    MetricFile {
        n: u.dim(),
        order,
        entries: u
            .upper()
            .map(|(i, j, e)| MetricEntry { i: i + 1, j: j + 1, terms: expansion_to_json(e) })
            .collect(),
    }
}

/// Rebuilds `U` from its upper triangle; missing entries are zero and
/// repeated entries are rejected.
pub fn metric_from_json(file: &MetricFile) -> Result<ExpMatrix> {
    let n = file.n;
    check_dim(n)?;
    let mut u = ExpMatrix::zero(n);
    let mut seen = vec![false; n * n];
    for e in &file.entries {
        if e.i == 0 || e.j == 0 || e.i > n || e.j > n || e.i > e.j {
            return Err(Error::Parse(format!("entry ({}, {}) is not in the upper triangle of a {n}x{n} matrix", e.i, e.j)));
        }
        let (i, j) = (e.i - 1, e.j - 1);
        if std::mem::replace(&mut seen[i * n + j], true) {
            return Err(Error::Parse(format!("entry ({}, {}) appears twice", e.i, e.j)));
        }
        u.set_symmetric(i, j, expansion_from_json(n, &e.terms)?);
    }
    Ok(u)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
