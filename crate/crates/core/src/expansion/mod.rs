//! Finite sums of terms `c * r^sigma (log r)^i G_m`.
//!
//! An [`Expansion`] stores one harmonic polynomial per `(sigma, logpow, m)`
//! group, with the coefficient folded into the polynomial. The group for
//! `(sigma, i, m)` holding `h` denotes the function
//! `r^{sigma - m} (log r)^i h(x)`, i.e. `r^sigma (log r)^i G_m` with
//! `G_m = h / r^m`.

mod accumulate;
mod calculus;
mod membership;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{harmonic_decompose, HarmonicPoly, Poly};
use crate::rational::Rational;

pub use accumulate::Accumulator;
pub use calculus::{exp_diff, exp_laplacian, exp_mul, lambda, laplacian_via_partials};
pub use membership::{
    membership_t, membership_ttilde, product_witness_t, product_witness_ttilde, TWitness,
    TildeWitness,
};

/// Grouping key of a term. Sorts by descending `sigma`, then ascending
/// `logpow`, then ascending harmonic degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TermKey {
    pub sigma: i64,
    pub logpow: u32,
    pub degree: usize,
}

impl TermKey {
    pub fn new(sigma: i64, logpow: u32, degree: usize) -> Self {
        Self { sigma, logpow, degree }
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .sigma
            .cmp(&self.sigma)
            .then(self.logpow.cmp(&other.logpow))
            .then(self.degree.cmp(&other.degree))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One atom `coeff * r^sigma (log r)^logpow G_m` with `G_m = harm / r^m`.
///
/// Terms handed out by an [`Expansion`] have a monic `harm` (leading
/// coefficient one in graded lex order) so that `coeff` is well defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    coeff: Rational,
    sigma: i64,
    logpow: u32,
    harm: HarmonicPoly,
}

impl Term {
    pub fn new(coeff: Rational, sigma: i64, logpow: u32, harm: HarmonicPoly) -> Self {
        Self { coeff, sigma, logpow, harm }
    }

    /// `r^sigma (log r)^logpow G_0` with unit coefficient.
    pub fn radial(dim: usize, sigma: i64, logpow: u32) -> Self {
        Self::new(Rational::one(), sigma, logpow, HarmonicPoly::one(dim))
    }

    /// Normalizes a nonzero harmonic polynomial into `coeff * monic`.
    pub fn from_harmonic(sigma: i64, logpow: u32, harm: HarmonicPoly) -> Self {
        let degree = harm.degree();
        let mut poly = harm.into_poly();
        let coeff = poly.make_monic().unwrap_or_else(Rational::zero);
        Self { coeff, sigma, logpow, harm: HarmonicPoly::new_unchecked(poly, degree) }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn set_coeff(&mut self, c: Rational) {
        self.coeff = c;
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn logpow(&self) -> u32 {
        self.logpow
    }

    pub fn harmonic(&self) -> &HarmonicPoly {
        &self.harm
    }

    pub fn degree(&self) -> usize {
        self.harm.degree()
    }

    pub fn dim(&self) -> usize {
        self.harm.dim()
    }

    pub fn key(&self) -> TermKey {
        TermKey::new(self.sigma, self.logpow, self.harm.degree())
    }

    /// `coeff * harm`, the polynomial stored for this term.
    pub fn poly(&self) -> Poly {
        self.harm.poly().scale(&self.coeff)
    }

    pub fn to_expansion(&self) -> Expansion {
        Expansion::from_terms(self.dim(), [self.clone()]).expect("single term has one dimension")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) r^{}", self.coeff, self.sigma)?;
        if self.logpow > 0 {
            write!(f, " (log r)^{}", self.logpow)?;
        }
        write!(f, " G_{}[{}]", self.degree(), self.harm.poly())
    }
}

/// Canonical finite sum of terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expansion {
    dim: usize,
    groups: BTreeMap<TermKey, Poly>,
}

impl Expansion {
    pub fn zero(dim: usize) -> Self {
        crate::poly::check_dim(dim).expect("unsupported dimension");
        Self { dim, groups: BTreeMap::new() }
    }

    /// The constant function `1 = r^0 G_0`.
    pub fn one(dim: usize) -> Self {
        Self::zero(dim).with_group(TermKey::new(0, 0, 0), Poly::one(dim))
    }

    /// `c * r^sigma (log r)^logpow G_0`.
    pub fn radial(dim: usize, c: Rational, sigma: i64, logpow: u32) -> Self {
        Self::zero(dim).with_group(TermKey::new(sigma, logpow, 0), Poly::constant(dim, c))
    }

    /// `r^sigma (log r)^logpow * h / r^m`.
    pub fn harmonic(sigma: i64, logpow: u32, h: &HarmonicPoly) -> Self {
        Self::zero(h.dim()).with_group(TermKey::new(sigma, logpow, h.degree()), h.poly().clone())
    }

    fn with_group(mut self, key: TermKey, poly: Poly) -> Self {
        if !poly.is_zero() {
            self.groups.insert(key, poly);
        }
        self
    }

    pub(crate) fn from_groups(dim: usize, groups: BTreeMap<TermKey, Poly>) -> Self {
        debug_assert!(groups.values().all(|p| !p.is_zero()));
        Self { dim, groups }
    }

    /// Merges terms sharing `(sigma, logpow, m)` and drops cancellations.
    pub fn from_terms<I: IntoIterator<Item = Term>>(dim: usize, terms: I) -> Result<Self> {
        let mut acc = Accumulator::new(dim);
        for t in terms {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: t.dim() });
            }
            acc.add_harmonic(t.key(), &t.harm.poly().scale(&t.coeff));
        }
        Ok(acc.finish())
    }

    /// Accepts an arbitrary homogeneous polynomial `p` of degree `d` standing
    /// for `r^sigma (log r)^logpow p / r^d` and splits it into harmonic
    /// groups.
    pub fn from_homogeneous(sigma: i64, logpow: u32, p: &Poly) -> Result<Self> {
        let d = p.homogeneous_degree().unwrap_or(0);
        let comps = harmonic_decompose(p, d)?;
        let mut groups = BTreeMap::new();
        for c in comps {
            groups.insert(TermKey::new(sigma, logpow, c.harmonic.degree()), c.harmonic.into_poly());
        }
        Ok(Self::from_groups(p.dim(), groups))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    /// Number of `(sigma, logpow, m)` groups.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Groups in canonical order.
    pub fn groups(&self) -> impl DoubleEndedIterator<Item = (&TermKey, &Poly)> + '_ {
        self.groups.iter()
    }

    pub fn group(&self, key: &TermKey) -> Option<&Poly> {
        self.groups.get(key)
    }

    /// Terms in canonical order, each with a monic harmonic part.
    pub fn terms(&self) -> Vec<Term> {
        self.groups
            .iter()
            .map(|(k, p)| Term::from_harmonic(k.sigma, k.logpow, HarmonicPoly::new_unchecked(p.clone(), k.degree)))
            .collect()
    }

    pub fn check_dim(&self, other: &Expansion) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Expansion, c: &Rational) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (k, p) in &other.groups {
            match self.groups.get_mut(k) {
                Some(q) => {
                    q.add_scaled(p, c);
                    if q.is_zero() {
                        self.groups.remove(k);
                    }
                }
                None => {
                    self.groups.insert(*k, p.scale(c));
                }
            }
        }
    }

    pub fn add(&self, other: &Expansion) -> Expansion {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Expansion) -> Expansion {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn neg(&self) -> Expansion {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Expansion {
        if c.is_zero() {
            return Expansion::zero(self.dim);
        }
        Expansion {
            dim: self.dim,
            groups: self.groups.iter().map(|(k, p)| (*k, p.scale(c))).collect(),
        }
    }

    /// Keeps the terms with `sigma >= -order`; log powers do not matter.
    pub fn truncate(&self, order: i64) -> Expansion {
        Expansion {
            dim: self.dim,
            groups: self
                .groups
                .iter()
                .take_while(|(k, _)| k.sigma >= -order)
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
        }
    }

    /// Largest `sigma` present together with the largest log power at
    /// that `sigma`.
    pub fn leading_order(&self) -> Option<(i64, u32)> {
        let sigma = self.groups.keys().next()?.sigma;
        let logpow = self
            .groups
            .keys()
            .take_while(|k| k.sigma == sigma)
            .map(|k| k.logpow)
            .max()
            .unwrap_or(0);
        Some((sigma, logpow))
    }

    pub fn max_sigma(&self) -> Option<i64> {
        self.groups.keys().next().map(|k| k.sigma)
    }

    pub fn min_sigma(&self) -> Option<i64> {
        self.groups.keys().next_back().map(|k| k.sigma)
    }

    pub fn max_logpow(&self) -> u32 {
        self.groups.keys().map(|k| k.logpow).max().unwrap_or(0)
    }

    /// Terms of exactly the given `sigma`.
    pub fn at_sigma(&self, sigma: i64) -> Expansion {
        Expansion {
            dim: self.dim,
            groups: self
                .groups
                .iter()
                .filter(|(k, _)| k.sigma == sigma)
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
        }
    }
}

/// `a + b`, checking dimensions.
pub fn exp_add(a: &Expansion, b: &Expansion) -> Result<Expansion> {
    a.check_dim(b)?;
    Ok(a.add(b))
}

/// Alias of [`Expansion::from_terms`] under its operation name.
pub fn canonicalize(dim: usize, raw: Vec<Term>) -> Result<Expansion> {
    Expansion::from_terms(dim, raw)
}

/// Alias of [`Expansion::truncate`].
pub fn truncate(a: &Expansion, order: i64) -> Expansion {
    a.truncate(order)
}

/// Alias of [`Expansion::leading_order`].
pub fn leading_order(a: &Expansion) -> Option<(i64, u32)> {
    a.leading_order()
}

impl fmt::Debug for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, p)) in self.groups.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "r^{}", k.sigma)?;
            if k.logpow > 0 {
                write!(f, "(log r)^{}", k.logpow)?;
            }
            write!(f, " G_{}[{}]", k.degree, p)?;
        }
        Ok(())
    }
}
