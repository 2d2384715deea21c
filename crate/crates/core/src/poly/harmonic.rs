//! Harmonic homogeneous polynomials and the decomposition
//! `P_k = H_k + |x|^2 H_{k-2} + |x|^4 H_{k-4} + ...`.

use num_traits::One;

use super::Poly;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A homogeneous polynomial of degree `degree` with vanishing Laplacian.
///
/// Its restriction to the unit sphere is a spherical harmonic `G_m` with
/// eigenvalue `-m(m+n-2)`; away from the sphere `G_m = r^{-m} h_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HarmonicPoly {
    poly: Poly,
    degree: usize,
}

impl HarmonicPoly {
    /// Validates homogeneity and harmonicity.
    pub fn new(poly: Poly, degree: usize) -> Result<Self> {
        if !poly.is_homogeneous_of(degree) {
            return Err(Error::NotHomogeneous { expected: degree });
        }
        if !poly.laplacian().is_zero() {
            return Err(Error::NotHarmonic(degree));
        }
        Ok(Self { poly, degree })
    }

    /// Infers the degree from the polynomial; rejects the zero polynomial.
    pub fn from_poly(poly: Poly) -> Result<Self> {
        let degree = poly.homogeneous_degree().ok_or(Error::NotHomogeneous { expected: 0 })?;
        Self::new(poly, degree)
    }

    pub(crate) fn new_unchecked(poly: Poly, degree: usize) -> Self {
        debug_assert!(poly.is_homogeneous_of(degree));
        Self { poly, degree }
    }

    /// The constant harmonic `1` (so `G_0 = 1`).
    pub fn one(dim: usize) -> Self {
        Self { poly: Poly::one(dim), degree: 0 }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

/// One summand `|x|^{2 power} * harmonic` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicComponent {
    pub power: usize,
    pub harmonic: HarmonicPoly,
}

/// `Delta^j (|x|^{2a} h_m) = c * |x|^{2(a-j)} h_m`; returns `c`.
fn iterated_laplacian_factor(dim: usize, a: usize, j: usize, m: usize) -> Rational {
    let mut c = Rational::one();
    for t in (a - j + 1)..=a {
        let t = t as i64;
        c *= rational::int(2 * t * (2 * t + dim as i64 - 2 + 2 * m as i64));
    }
    c
}

/// Harmonic part of a homogeneous `q` of degree `d`, given the iterates
/// `laps[j] = Delta^j q`:
/// `pi(q) = sum_j (-1)^j |x|^{2j} Delta^j q / (2^j j! prod_{i=1}^{j} (n + 2d - 2 - 2i))`,
/// evaluated in Horner form so only multiplications by `|x|^2` occur.
fn harmonic_projection(dim: usize, d: usize, laps: &[Poly]) -> Poly {
    let top = (d / 2).min(laps.len().saturating_sub(1));
    let mut acc = laps[top].clone();
    for j in (0..top).rev() {
        let ratio = rational::frac(-1, 2 * (j as i64 + 1) * (dim as i64 + 2 * d as i64 - 4 - 2 * j as i64));
        let mut next = laps[j].clone();
        if !acc.is_zero() {
            next.add_scaled(&acc.mul_radius_squared(), &ratio);
        }
        acc = next;
    }
    acc
}

/// Splits a homogeneous polynomial of degree `k` into
/// `sum_a |x|^{2a} h_{k-2a}` with each `h` harmonic.
///
/// `Delta^a p` has harmonic part `C * h_{k-2a}` with `C` the iterated
/// Laplacian factor, so every component is a harmonic projection of one of
/// the Laplacian iterates. Components that vanish are omitted; the result is
/// sorted by increasing `power`.
pub fn harmonic_decompose(p: &Poly, k: usize) -> Result<Vec<HarmonicComponent>> {
    if !p.is_homogeneous_of(k) {
        return Err(Error::NotHomogeneous { expected: k });
    }
    if p.is_zero() {
        return Ok(Vec::new());
    }
    let dim = p.dim();
    let top = k / 2;

    let mut laps = Vec::with_capacity(top + 1);
    laps.push(p.clone());
    while laps.len() <= top {
        let next = laps.last().unwrap().laplacian();
        if next.is_zero() {
            break;
        }
        laps.push(next);
    }

    let mut out = Vec::new();
    for a in 0..laps.len() {
        let m = k - 2 * a;
        let mut h = harmonic_projection(dim, m, &laps[a..]);
        if h.is_zero() {
            continue;
        }
        let c = iterated_laplacian_factor(dim, a, a, m);
        if !c.is_one() {
            h.scale_in_place(&c.recip());
        }
        out.push(HarmonicComponent { power: a, harmonic: HarmonicPoly::new_unchecked(h, m) });
    }
    Ok(out)
}

/// `sum_a |x|^{2a} h_a`; inverse of [`harmonic_decompose`].
pub fn reassemble(dim: usize, components: &[HarmonicComponent]) -> Poly {
    let mut out = Poly::zero(dim);
    for c in components {
        out.add_product(&Poly::radius_power(dim, c.power), c.harmonic.poly(), &Rational::one());
    }
    out
}
