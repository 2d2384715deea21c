use std::cmp::Ordering;
use std::fmt;

/// Largest number of coordinates a [`Monomial`] can carry.
pub const MAX_DIM: usize = 8;

const BITS: u32 = 8;
const MASK: u64 = 0xff;

/// Exponent vector packed into a `u64`, one byte per coordinate.
///
/// Coordinate 0 occupies the most significant byte, so comparing the packed
/// words of two monomials of equal total degree is lexicographic comparison
/// with `x1 > x2 > ... > xn`. Together with the cached total degree this gives
/// graded lexicographic order from the derived `Ord`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    degree: u16,
    packed: u64,
}

#[inline]
fn shift(axis: usize) -> u32 {
    BITS * (MAX_DIM as u32 - 1 - axis as u32)
}

impl Monomial {
    pub const ONE: Monomial = Monomial { degree: 0, packed: 0 };

    /// Builds a monomial from explicit exponents; `None` if any exponent
    /// exceeds 255 or there are more than [`MAX_DIM`] coordinates.
    pub fn from_exponents(exps: &[u32]) -> Option<Self> {
        if exps.len() > MAX_DIM {
            return None;
        }
        let mut packed = 0u64;
        let mut degree = 0u32;
        for (axis, &e) in exps.iter().enumerate() {
            if e as u64 > MASK {
                return None;
            }
            packed |= (e as u64) << shift(axis);
            degree += e;
        }
        if degree > u16::MAX as u32 {
            return None;
        }
        Some(Self { degree: degree as u16, packed })
    }

    pub fn var(axis: usize) -> Self {
        debug_assert!(axis < MAX_DIM);
        Self { degree: 1, packed: 1 << shift(axis) }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    #[inline]
    pub fn exponent(&self, axis: usize) -> u32 {
        ((self.packed >> shift(axis)) & MASK) as u32
    }

    pub fn exponents(&self, dim: usize) -> Vec<u32> {
        (0..dim).map(|a| self.exponent(a)).collect()
    }

    /// Product of monomials. Panics if an exponent would overflow a byte,
    /// which needs total degree above 255.
    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        let degree = self.degree + other.degree;
        assert!(degree <= MASK as u16, "monomial degree {degree} overflows the packed exponent");
        Monomial { degree, packed: self.packed + other.packed }
    }

    /// Lowers the exponent of `axis` by `by`; `None` if it is too small.
    #[inline]
    pub fn lower(self, axis: usize, by: u32) -> Option<Monomial> {
        if self.exponent(axis) < by {
            return None;
        }
        Some(Monomial {
            degree: self.degree - by as u16,
            packed: self.packed - ((by as u64) << shift(axis)),
        })
    }

    #[inline]
    pub fn raise(self, axis: usize, by: u32) -> Monomial {
        self.mul(Monomial {
            degree: by as u16,
            packed: (by as u64) << shift(axis),
        })
    }

    /// Whether every coordinate at index `>= dim` has exponent zero.
    pub fn fits(&self, dim: usize) -> bool {
        dim >= MAX_DIM || self.packed & ((1u64 << shift(dim - 1)) - 1) == 0
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(a, xa)| xa.powi(self.exponent(a) as i32))
            .product()
    }

    /// Graded lexicographic comparison (same as `Ord`).
    pub fn grlex(&self, other: &Monomial) -> Ordering {
        self.cmp(other)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<u32> = (0..MAX_DIM).map(|a| self.exponent(a)).collect();
        write!(f, "x^{exps:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip() {
        let m = Monomial::from_exponents(&[2, 0, 1, 5]).unwrap();
        assert_eq!(m.exponents(4), vec![2, 0, 1, 5]);
        assert_eq!(m.degree(), 8);
        assert!(m.fits(4));
        assert!(!Monomial::var(4).fits(4));
    }

    #[test]
    fn graded_lex_order() {
        let x1sq = Monomial::from_exponents(&[2, 0, 0]).unwrap();
        let x1x2 = Monomial::from_exponents(&[1, 1, 0]).unwrap();
        let x2cube = Monomial::from_exponents(&[0, 3, 0]).unwrap();
        assert!(x1sq > x1x2);
        assert!(x2cube > x1sq);
    }

    #[test]
    fn lower_and_raise() {
        let m = Monomial::from_exponents(&[1, 2]).unwrap();
        assert_eq!(m.lower(1, 2).unwrap().exponents(2), vec![1, 0]);
        assert!(m.lower(0, 2).is_none());
        assert_eq!(m.raise(0, 3).exponents(2), vec![4, 2]);
    }
}
