//! Termwise inverse of the Laplacian on decaying terms.
//!
//! Solving `Delta U = r^sigma (log r)^i G_m` with the ansatz
//! `U = r^{sigma+2} sum_t c_t (log r)^t G_m` gives, coefficient by
//! coefficient,
//!
//! `D c_t + (t+1) N c_{t+1} + (t+2)(t+1) c_{t+2} = [t = i]`
//!
//! with `D = lambda_{sigma+2} - lambda_m` and `N = n + 2 sigma + 2`. When
//! `D = 0` (the exceptional case `sigma + n + m = 0`) the log degree rises by
//! one; the free coefficient `c_0` multiplies a harmonic function and is set
//! to zero.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expansion::{lambda, Accumulator, Expansion, Term, TermKey};
use crate::poly::Poly;
use crate::rational::{int, Rational};

/// `sigma + n + m = 0`: the right-hand side resonates with a harmonic
/// function and the solution gains a logarithm.
pub fn is_exceptional(sigma: i64, n: usize, m: usize) -> bool {
    sigma + n as i64 + m as i64 == 0
}

/// Upper triangular system for the log coefficients `c_0..c_{size-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularSystem {
    pub n: usize,
    pub sigma: i64,
    pub degree: usize,
    pub logpow: u32,
    pub diag: i64,
    pub nstar: i64,
    pub exceptional: bool,
}

impl TriangularSystem {
    pub fn new(n: usize, sigma: i64, logpow: u32, degree: usize) -> Result<Self> {
        if sigma > -2 {
            return Err(Error::NonDecaying { sigma });
        }
        let diag = lambda(sigma + 2, n) - lambda(degree as i64, n);
        let exceptional = is_exceptional(sigma, n, degree);
        debug_assert_eq!(exceptional, diag == 0);
        Ok(Self { n, sigma, degree, logpow, diag, nstar: n as i64 + 2 * sigma + 2, exceptional })
    }

    /// Number of unknowns, `i + 1`, or `i + 2` in the exceptional case.
    pub fn size(&self) -> usize {
        self.logpow as usize + 1 + usize::from(self.exceptional)
    }

    /// Dense matrix; row `t` is the equation for the `(log r)^t` coefficient
    /// of `Delta U` and column `s` the unknown `c_s`. In the exceptional case
    /// there is one more column than rows.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        let rows = self.logpow as usize + 1;
        let cols = self.size();
        let mut a = vec![vec![Rational::zero(); cols]; rows];
        for (t, row) in a.iter_mut().enumerate() {
            let ti = t as i64;
            if t < cols {
                row[t] = int(self.diag);
            }
            if t + 1 < cols {
                row[t + 1] = int((ti + 1) * self.nstar);
            }
            if t + 2 < cols {
                row[t + 2] = int((ti + 2) * (ti + 1));
            }
        }
        a
    }

    /// Back substitution for right-hand side `rhs` (length `logpow + 1`).
    /// In the exceptional case `c_0 = 0`.
    pub fn solve(&self, rhs: &[Rational]) -> Vec<Rational> {
        let rows = self.logpow as usize + 1;
        assert_eq!(rhs.len(), rows);
        let mut c = vec![Rational::zero(); self.size() + 2];
        let at = |c: &Vec<Rational>, s: usize| c[s].clone();
        for t in (0..rows).rev() {
            let ti = t as i64;
            let tail = int((ti + 2) * (ti + 1)) * at(&c, t + 2);
            if self.exceptional {
                c[t + 1] = (&rhs[t] - tail) / int((ti + 1) * self.nstar);
            } else {
                let mid = int((ti + 1) * self.nstar) * at(&c, t + 1);
                c[t] = (&rhs[t] - mid - tail) / int(self.diag);
            }
        }
        c.truncate(self.size());
        c
    }
}

/// Particular solution of `Delta U = r^sigma (log r)^i h / r^m` for the
/// group `key` holding the harmonic polynomial `h` (coefficient included).
pub fn solve_group(n: usize, key: TermKey, h: &Poly) -> Result<Expansion> {
    let sys = TriangularSystem::new(n, key.sigma, key.logpow, key.degree)?;
    let mut rhs = vec![Rational::zero(); key.logpow as usize + 1];
    rhs[key.logpow as usize] = int(1);
    let c = sys.solve(&rhs);
    let mut acc = Accumulator::new(n);
    for (t, ct) in c.iter().enumerate() {
        if !ct.is_zero() {
            acc.add_raw(TermKey::new(key.sigma + 2, t as u32, key.degree), h, ct);
        }
    }
    Ok(acc.finish())
}

/// Particular solution of `Delta U = t`.
pub fn solve_term(t: &Term) -> Result<Expansion> {
    solve_expansion(&t.to_expansion())
}

/// Termwise particular solution of `Delta U = rhs`.
pub fn solve_expansion(rhs: &Expansion) -> Result<Expansion> {
    let mut acc = Accumulator::new(rhs.dim());
    for (k, h) in rhs.groups() {
        let u = solve_group(rhs.dim(), *k, h)?;
        acc.add_expansion(&u, &int(1));
    }
    Ok(acc.finish())
}
