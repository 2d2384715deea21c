//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] lives in a fixed number of coordinates `x1..xn` and stores only
//! nonzero coefficients, keyed by [`Monomial`] in graded lexicographic order.

mod harmonic;
mod monomial;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use harmonic::{harmonic_decompose, reassemble, HarmonicComponent, HarmonicPoly};
pub use monomial::{Monomial, MAX_DIM};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// Binary operations accepted by [`poly_arith`].
#[derive(Debug, Clone)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Scale(Rational),
}

/// Checked arithmetic entry point; `Scale` ignores `b` apart from the
/// dimension check.
pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly> {
    a.check_dim(b)?;
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
        PolyOp::Scale(c) => a.scale(&c),
    })
}

pub fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "unsupported dimension {dim}");
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, Monomial::ONE, c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn monomial(dim: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        debug_assert!(m.fits(dim));
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The coordinate `x_{axis+1}` (axes are zero-based internally).
    pub fn var(dim: usize, axis: usize) -> Self {
        assert!(axis < dim);
        Self::monomial(dim, Monomial::var(axis), Rational::one())
    }

    /// `|x|^2 = x1^2 + ... + xn^2`.
    pub fn radius_squared(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for a in 0..dim {
            p.terms.insert(Monomial::var(a).raise(a, 1), Rational::one());
        }
        p
    }

    /// `|x|^{2a}`.
    pub fn radius_power(dim: usize, a: usize) -> Self {
        let r2 = Self::radius_squared(dim);
        let mut out = Self::one(dim);
        for _ in 0..a {
            out = &out * &r2;
        }
        out
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        check_dim(dim)?;
        let mut p = Self::zero(dim);
        for (exps, c) in terms {
            if exps.len() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: exps.len() });
            }
            let m = Monomial::from_exponents(&exps)
                .ok_or_else(|| Error::Parse(format!("exponents {exps:?} out of range")))?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total degree present; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Common total degree of every monomial, if the polynomial is
    /// homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let first = self.terms.keys().next()?.degree();
        let last = self.terms.keys().next_back()?.degree();
        (first == last).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    /// Largest monomial in graded lex order with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn check_dim(&self, other: &Poly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    /// Adds `c * m`, removing the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (m, v) in &other.terms {
            self.add_term(*m, if unit { v.clone() } else { v * c });
        }
    }

    /// `self += c * a * b` without materializing the product.
    pub fn add_product(&mut self, a: &Poly, b: &Poly, c: &Rational) {
        assert!(self.dim == a.dim && a.dim == b.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (ma, va) in &a.terms {
            let vac = if unit { va.clone() } else { va * c };
            for (mb, vb) in &b.terms {
                self.add_term(ma.mul(*mb), &vac * vb);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn scale_in_place(&mut self, c: &Rational) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    /// Divides by the leading coefficient and returns it.
    pub fn make_monic(&mut self) -> Option<Rational> {
        let lc = self.leading()?.1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            self.scale_in_place(&inv);
        }
        Some(lc)
    }

    /// `self * |x|^2`.
    pub fn mul_radius_squared(&self) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (m, v) in &self.terms {
            for axis in 0..self.dim {
                out.add_term(m.raise(axis, 2), v.clone());
            }
        }
        out
    }

    /// Multiplies by the coordinate `x_{axis+1}`.
    pub fn mul_var(&self, axis: usize) -> Poly {
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (m.raise(axis, 1), v.clone())).collect(),
        }
    }

    /// Partial derivative along `axis` (zero-based).
    pub fn partial(&self, axis: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (m, v) in &self.terms {
            let e = m.exponent(axis);
            if let Some(lowered) = m.lower(axis, 1) {
                out.terms.insert(lowered, v * rational::int(e as i64));
            }
        }
        out
    }

    /// Euclidean Laplacian `sum_i d^2/dx_i^2`.
    pub fn laplacian(&self) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (m, v) in &self.terms {
            for axis in 0..self.dim {
                let e = m.exponent(axis) as i64;
                if let Some(lowered) = m.lower(axis, 2) {
                    out.add_term(lowered, v * rational::int(e * (e - 1)));
                }
            }
        }
        out
    }

    /// Floating point evaluation; coefficients are converted to `f64` per
    /// monomial after the exact sum has been formed.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: x.len() });
        }
        Ok(self.terms.iter().map(|(m, v)| rational::to_f64(v) * m.eval(x)).sum())
    }

    /// Value at the origin (the constant coefficient).
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim);
        out.add_product(self, rhs, &Rational::one());
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, v) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({v})")?;
            for a in 0..self.dim {
                match m.exponent(a) {
                    0 => {}
                    1 => write!(f, "*x{}", a + 1)?,
                    e => write!(f, "*x{}^{}", a + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn x(dim: usize, axis: usize) -> Poly {
        Poly::var(dim, axis)
    }

    #[test]
    fn monomial_product() {
        let p = &x(4, 0) * &x(4, 0);
        let expected = Poly::from_terms(4, [(vec![2, 0, 0, 0], int(1))]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn cancellation_removes_entries() {
        let p = &(&x(4, 0) + &x(4, 1)) + &(-&x(4, 1));
        assert_eq!(p, x(4, 0));
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn scaling() {
        let p = poly_arith(&(&x(4, 0) * &x(4, 1)), &Poly::zero(4), PolyOp::Scale(frac(3, 2))).unwrap();
        let expected = Poly::from_terms(4, [(vec![1, 1, 0, 0], frac(3, 2))]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn arith_rejects_dimension_mismatch() {
        let err = poly_arith(&x(4, 0), &x(5, 0), PolyOp::Add).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 4, right: 5 });
    }

    #[test]
    fn product_of_homogeneous_is_homogeneous() {
        let a = &(&x(5, 0) * &x(5, 1)) + &(&x(5, 2) * &x(5, 2));
        let b = &x(5, 3) + &x(5, 4);
        assert_eq!((&a * &b).homogeneous_degree(), Some(3));
    }

    #[test]
    fn laplacian_examples() {
        assert!((&x(4, 0) * &x(4, 1)).laplacian().is_zero());
        assert_eq!((&x(4, 0) * &x(4, 0)).laplacian(), Poly::constant(4, int(2)));
        assert_eq!(Poly::radius_squared(5).laplacian(), Poly::constant(5, int(10)));
    }

    #[test]
    fn eval_examples() {
        let x1sq = &x(4, 0) * &x(4, 0);
        assert_eq!(x1sq.eval(&[2.0, 0.0, 0.0, 0.0]).unwrap(), 4.0);
        assert_eq!(Poly::radius_squared(4).eval(&[1.0; 4]).unwrap(), 4.0);
        let h = &x1sq - &Poly::radius_squared(4).scale(&frac(1, 4));
        assert_eq!(h.eval(&[1.0; 4]).unwrap(), 0.0);
        assert!(h.eval(&[1.0; 3]).is_err());
    }

    #[test]
    fn partial_derivative() {
        // d/dx1 (x1^3 x2) = 3 x1^2 x2
        let p = Poly::from_terms(3, [(vec![3, 1, 0], int(1))]).unwrap();
        let expected = Poly::from_terms(3, [(vec![2, 1, 0], int(3))]).unwrap();
        assert_eq!(p.partial(0), expected);
        assert!(p.partial(2).is_zero());
    }

    #[test]
    fn monic_normalization() {
        let mut p = Poly::from_terms(2, [(vec![2, 0], int(4)), (vec![0, 2], int(-2))]).unwrap();
        let lc = p.make_monic().unwrap();
        assert_eq!(lc, int(4));
        assert_eq!(p.coeff(&Monomial::from_exponents(&[0, 2]).unwrap()), frac(-1, 2));
    }
}
