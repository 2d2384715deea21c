use num_traits::{One, Zero};

use super::{Accumulator, Expansion, TermKey};
use crate::error::{Error, Result};
use crate::rational::{frac, int, Rational};

/// `lambda_k = k (k + n - 2)`: `Delta (r^k G_m) = (lambda_k - lambda_m) r^{k-2} G_m`.
pub fn lambda(k: i64, n: usize) -> i64 {
    k * (k + n as i64 - 2)
}

/// Product of two expansions, keeping only `sigma >= -order`.
///
/// Every factor in this crate decays (`sigma <= 0`), so dropping a pair
/// whose combined `sigma` is already below the cutoff loses nothing that
/// could reappear through later multiplication.
pub fn exp_mul(a: &Expansion, b: &Expansion, order: i64) -> Result<Expansion> {
    a.check_dim(b)?;
    let mut acc = Accumulator::truncated(a.dim(), order);
    acc.add_product(a, b, &Rational::one());
    Ok(acc.finish())
}

/// Partial derivative along the zero-based `axis`.
pub fn exp_diff(a: &Expansion, axis: usize) -> Result<Expansion> {
    if axis >= a.dim() {
        return Err(Error::InvalidConfig(format!("axis {} out of range for n = {}", axis + 1, a.dim())));
    }
    let n = a.dim() as i64;
    let mut acc = Accumulator::new(a.dim());
    for (k, h) in a.groups() {
        let m = k.degree as i64;
        // d_a [r^{sigma-m} L^i h] = (sigma-m) r^{sigma-m-2} x_a L^i h
        //   + i r^{sigma-m-2} x_a L^{i-1} h + r^{sigma-m} L^i d_a h,
        // and x_a h = H + |x|^2 d_a h / (n + 2m - 2) with H harmonic.
        let dh = h.partial(axis);
        let mut upper = h.mul_var(axis);
        let split = if dh.is_zero() { Rational::zero() } else { frac(1, n + 2 * m - 2) };
        if !dh.is_zero() {
            upper.add_scaled(&dh.mul_radius_squared(), &-split.clone());
        }
        let alpha = int(k.sigma - m);
        let up = TermKey::new(k.sigma - 1, k.logpow, k.degree + 1);
        acc.add_harmonic(up, &upper.scale(&alpha));
        if k.degree > 0 {
            let down = TermKey::new(k.sigma - 1, k.logpow, k.degree - 1);
            acc.add_harmonic(down, &dh.scale(&(&alpha * &split + Rational::one())));
        }
        if k.logpow > 0 {
            let beta = int(k.logpow as i64);
            acc.add_harmonic(TermKey::new(k.sigma - 1, k.logpow - 1, k.degree + 1), &upper.scale(&beta));
            if k.degree > 0 {
                acc.add_harmonic(TermKey::new(k.sigma - 1, k.logpow - 1, k.degree - 1), &dh.scale(&(&beta * &split)));
            }
        }
    }
    Ok(acc.finish())
}

/// Euclidean Laplacian, termwise:
/// `Delta (r^s L^j G_m) = r^{s-2} [(lambda_s - lambda_m) L^j
///   + j (2s + n - 2) L^{j-1} + j (j-1) L^{j-2}]` with `L = log r`.
pub fn exp_laplacian(a: &Expansion) -> Expansion {
    let n = a.dim();
    let mut acc = Accumulator::new(n);
    for (k, h) in a.groups() {
        let s = k.sigma;
        let j = k.logpow as i64;
        let push = |acc: &mut Accumulator, logpow: i64, c: i64| {
            if c != 0 {
                acc.add_raw(TermKey::new(s - 2, logpow as u32, k.degree), h, &int(c));
            }
        };
        push(&mut acc, j, lambda(s, n) - lambda(k.degree as i64, n));
        if j >= 1 {
            push(&mut acc, j - 1, j * (2 * s + n as i64 - 2));
        }
        if j >= 2 {
            push(&mut acc, j - 2, j * (j - 1));
        }
    }
    acc.finish()
}

/// Sum of second partials `d_a d_a` computed through [`exp_diff`]; used to
/// cross-check [`exp_laplacian`].
pub fn laplacian_via_partials(a: &Expansion) -> Result<Expansion> {
    let mut out = Expansion::zero(a.dim());
    for axis in 0..a.dim() {
        let d = exp_diff(a, axis)?;
        out = out.add(&exp_diff(&d, axis)?);
    }
    Ok(out)
}
