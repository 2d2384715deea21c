//! Kelvin transform `K[u](x) = |x|^{2-n} u(x / |x|^2)` on log-free
//! expansions. Termwise `K[r^sigma G_m] = r^{2-n-sigma} G_m`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expansion::{Expansion, Term, TermKey};
use crate::metric::ExpMatrix;
use crate::poly::Poly;

fn log_count(a: &Expansion) -> usize {
    a.groups().filter(|(k, _)| k.logpow > 0).count()
}

/// `sigma -> 2 - n - sigma`, harmonic parts unchanged.
pub fn kelvin_expansion(a: &Expansion) -> Result<Expansion> {
    let count = log_count(a);
    if count > 0 {
        return Err(Error::LogTerms { count });
    }
    let n = a.dim() as i64;
    let groups: BTreeMap<TermKey, Poly> = a
        .groups()
        .map(|(k, p)| (TermKey::new(2 - n - k.sigma, 0, k.degree), p.clone()))
        .collect();
    Ok(Expansion::from_groups(a.dim(), groups))
}

/// Kelvin image of an exterior expansion, either as an exact polynomial or
/// as the list of image terms that are not polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KelvinImage {
    Polynomial(Poly),
    NotPolynomial(Vec<Term>),
}

impl KelvinImage {
    pub fn is_polynomial(&self) -> bool {
        matches!(self, KelvinImage::Polynomial(_))
    }
}

/// Transforms `a` and tests whether every image term `r^{2-n-sigma} G_m`
/// is the polynomial `|x|^{2-n-sigma-m} h_m`, i.e. `2 - n - sigma - m` is
/// even and nonnegative.
pub fn kelvin_polynomial_check(a: &Expansion) -> Result<KelvinImage> {
    let n = a.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let image = kelvin_expansion(a)?;
    if n <= 4 {
        return Err(Error::DimensionTooSmall(n));
    }
    let mut poly = Poly::zero(n);
    let mut offending = Vec::new();
    for (k, h) in image.groups() {
        let e = k.sigma - k.degree as i64;
        if e >= 0 && e % 2 == 0 {
            poly.add_product(&Poly::radius_power(n, (e / 2) as usize), h, &crate::rational::one());
        } else {
            offending.extend(Expansion::from_groups(n, BTreeMap::from([(*k, h.clone())])).terms());
        }
    }
    if offending.is_empty() {
        Ok(KelvinImage::Polynomial(poly))
    } else {
        Ok(KelvinImage::NotPolynomial(offending))
    }
}

/// Entrywise check over the upper triangle of a metric expansion; indices
/// are zero-based.
pub fn kelvin_metric(u: &ExpMatrix) -> Result<Vec<(usize, usize, KelvinImage)>> {
    let n = u.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let count: usize = u.upper().map(|(_, _, e)| log_count(e)).sum();
    if count > 0 {
        return Err(Error::LogTerms { count });
    }
    u.upper().map(|(i, j, e)| Ok((i, j, kelvin_polynomial_check(e)?))).collect()
}
