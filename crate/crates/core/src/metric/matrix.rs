use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{Accumulator, Expansion};
use crate::rational::Rational;

/// Square matrix of expansions, stored row-major.
///
/// Used for `U = g - delta`, its inverse counterpart `V = g^{-1} - delta`,
/// and the right-hand sides of the reduced equation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExpMatrix {
    n: usize,
    entries: Vec<Expansion>,
}

/// `g - delta` for the metric.
pub type MetricExpansion = ExpMatrix;

impl ExpMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, entries: vec![Expansion::zero(n); n * n] }
    }

    /// Builds a matrix from a function of zero-based `(i, j)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Expansion) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    /// Like [`ExpMatrix::from_fn`] with the entries evaluated in parallel.
    pub fn par_from_fn<F>(n: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Expansion + Sync,
    {
        let entries = (0..n * n).into_par_iter().map(|idx| f(idx / n, idx % n)).collect();
        Self { n, entries }
    }

    /// Evaluates `f` on the upper triangle in parallel and mirrors it.
    pub fn symmetric_from_fn<F>(n: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Expansion + Sync,
    {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let values: Vec<Expansion> = pairs.par_iter().map(|&(i, j)| f(i, j)).collect();
        let mut out = Self::zero(n);
        for ((i, j), e) in pairs.into_iter().zip(values) {
            if i != j {
                out.entries[j * n + i] = e.clone();
            }
            out.entries[i * n + j] = e;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Expansion {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Expansion) {
        self.entries[i * self.n + j] = e;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_symmetric(&mut self, i: usize, j: usize, e: Expansion) {
        self.entries[j * self.n + i] = e.clone();
        self.entries[i * self.n + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Expansion::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Entries with their zero-based indices, row-major.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Expansion)> + '_ {
        self.entries.iter().enumerate().map(|(idx, e)| (idx / self.n, idx % self.n, e))
    }

    /// Upper triangle `i <= j`.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, &Expansion)> + '_ {
        self.iter().filter(|(i, j, _)| i <= j)
    }

    pub fn map(&self, f: impl Fn(&Expansion) -> Expansion + Sync + Send) -> Self {
        Self { n: self.n, entries: self.entries.par_iter().map(f).collect() }
    }

    pub fn add(&self, other: &ExpMatrix) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &ExpMatrix) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(Expansion::neg)
    }

    pub fn truncate(&self, order: i64) -> Self {
        self.map(|e| e.truncate(order))
    }

    /// Total number of `(sigma, logpow, m)` groups over the upper triangle.
    pub fn term_count(&self) -> usize {
        self.upper().map(|(_, _, e)| e.len()).sum()
    }

    pub fn max_sigma(&self) -> Option<i64> {
        self.entries.iter().filter_map(Expansion::max_sigma).max()
    }

    pub fn max_logpow(&self) -> u32 {
        self.entries.iter().map(Expansion::max_logpow).max().unwrap_or(0)
    }

    /// `self * other` truncated at `order`; each entry is accumulated
    /// separately so the harmonic split happens once per entry.
    pub fn mul(&self, other: &ExpMatrix, order: i64) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let one = Rational::one();
        Self::par_from_fn(n, |i, j| {
            let mut acc = Accumulator::truncated(n, order);
            for k in 0..n {
                acc.add_product(self.get(i, k), other.get(k, j), &one);
            }
            acc.finish()
        })
    }

    /// Product of two matrices whose product is known to be symmetric
    /// (e.g. powers of one symmetric matrix); only `i <= j` is computed.
    pub fn mul_symmetric(&self, other: &ExpMatrix, order: i64) -> Self {
        assert_eq!(self.n, other.n);
        let one = Rational::one();
        Self::symmetric_from_fn(self.n, |i, j| {
            let mut acc = Accumulator::truncated(self.n, order);
            for k in 0..self.n {
                acc.add_product(self.get(i, k), other.get(k, j), &one);
            }
            acc.finish()
        })
    }

    /// Validates the invariants of a metric perturbation: symmetric and
    /// every term at `sigma <= 1 - n`.
    pub fn check_metric(&self) -> Result<()> {
        if !self.is_symmetric() {
            return Err(Error::InvalidConfig("metric expansion is not symmetric".into()));
        }
        let n = self.n as i64;
        if let Some(s) = self.max_sigma() {
            if s > 1 - n {
                return Err(Error::InvalidConfig(format!("metric term at sigma = {s} above 1 - n = {}", 1 - n)));
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for ExpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, j, e) in self.iter() {
            if !e.is_zero() {
                writeln!(f, "[{},{}] {}", i + 1, j + 1, e)?;
            }
        }
        Ok(())
    }
}
