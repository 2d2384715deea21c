use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Expansion, TermKey};
use crate::poly::{harmonic_decompose, Poly};
use crate::rational::Rational;

/// Collects raw (not yet harmonic) contributions and decomposes each
/// `(sigma, logpow, degree)` bucket once at the end.
///
/// A raw bucket keyed by `(sigma, i, d)` holding a homogeneous `P` of degree
/// `d` stands for `r^{sigma - d} (log r)^i P`.
pub struct Accumulator {
    dim: usize,
    order: Option<i64>,
    harmonic: BTreeMap<TermKey, Poly>,
    raw: BTreeMap<TermKey, Poly>,
}

fn add_into(map: &mut BTreeMap<TermKey, Poly>, key: TermKey, p: &Poly, c: Option<&Rational>) {
    match map.entry(key) {
        Entry::Occupied(mut e) => match c {
            Some(c) => e.get_mut().add_scaled(p, c),
            None => e.get_mut().add_scaled(p, &Rational::one()),
        },
        Entry::Vacant(e) => {
            e.insert(match c {
                Some(c) => p.scale(c),
                None => p.clone(),
            });
        }
    }
}

impl Accumulator {
    pub fn new(dim: usize) -> Self {
        Self { dim, order: None, harmonic: BTreeMap::new(), raw: BTreeMap::new() }
    }

    /// Discards every contribution with `sigma < -order`.
    pub fn truncated(dim: usize, order: i64) -> Self {
        Self { order: Some(order), ..Self::new(dim) }
    }

    fn keeps(&self, sigma: i64) -> bool {
        self.order.is_none_or(|q| sigma >= -q)
    }

    /// Adds a polynomial already known to be harmonic of degree `key.degree`.
    pub fn add_harmonic(&mut self, key: TermKey, p: &Poly) {
        if self.keeps(key.sigma) && !p.is_zero() {
            add_into(&mut self.harmonic, key, p, None);
        }
    }

    /// Adds a homogeneous polynomial of degree `key.degree`.
    pub fn add_raw(&mut self, key: TermKey, p: &Poly, c: &Rational) {
        if !self.keeps(key.sigma) || p.is_zero() || c.is_zero() {
            return;
        }
        if key.degree <= 1 {
            add_into(&mut self.harmonic, key, p, Some(c));
        } else {
            add_into(&mut self.raw, key, p, Some(c));
        }
    }

    /// `self += c * e`.
    pub fn add_expansion(&mut self, e: &Expansion, c: &Rational) {
        assert_eq!(e.dim(), self.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (k, p) in e.groups() {
            if !self.keeps(k.sigma) {
                break;
            }
            add_into(&mut self.harmonic, *k, p, Some(c));
        }
    }

    /// `self += c * a * b`, skipping pairs that fall below the truncation.
    pub fn add_product(&mut self, a: &Expansion, b: &Expansion, c: &Rational) {
        assert!(a.dim() == self.dim && b.dim() == self.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (ka, pa) in a.groups() {
            let scaled = pa.scale(c);
            for (kb, pb) in b.groups() {
                let sigma = ka.sigma + kb.sigma;
                if !self.keeps(sigma) {
                    // b is sorted by descending sigma
                    break;
                }
                let key = TermKey::new(sigma, ka.logpow + kb.logpow, ka.degree + kb.degree);
                if key.degree <= 1 {
                    self.harmonic.entry(key).or_insert_with(|| Poly::zero(self.dim)).add_product(&scaled, pb, &Rational::one());
                } else {
                    self.raw.entry(key).or_insert_with(|| Poly::zero(self.dim)).add_product(&scaled, pb, &Rational::one());
                }
            }
        }
    }

    /// Decomposes the raw buckets and merges everything into canonical form.
    pub fn finish(self) -> Expansion {
        let Accumulator { dim, harmonic: mut out, raw, .. } = self;
        let raw: Vec<(TermKey, Poly)> = raw.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let pieces: Vec<Vec<(TermKey, Poly)>> = raw
            .into_par_iter()
            .map(|(k, p)| {
                harmonic_decompose(&p, k.degree)
                    .expect("raw bucket holds a homogeneous polynomial")
                    .into_iter()
                    .map(|c| (TermKey::new(k.sigma, k.logpow, c.harmonic.degree()), c.harmonic.into_poly()))
                    .collect()
            })
            .collect();
        for (k, h) in pieces.into_iter().flatten() {
            match out.entry(k) {
                Entry::Occupied(mut e) => {
                    let sum = e.get_mut();
                    sum.add_scaled(&h, &Rational::one());
                }
                Entry::Vacant(e) => {
                    e.insert(h);
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        Expansion::from_groups(dim, out)
    }
}
