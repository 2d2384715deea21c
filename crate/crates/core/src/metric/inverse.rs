use crate::error::{Error, Result};
use crate::expansion::{exp_mul, Expansion};

use super::ExpMatrix;

/// `w` with `(1 + v)(1 + w) = 1` up to `sigma < -order`, i.e. the geometric
/// series `sum_{k>=1} (-v)^k`.
pub fn reciprocal(v: &Expansion, order: i64) -> Result<Expansion> {
    if v.max_sigma().is_some_and(|s| s >= 0) {
        return Err(Error::ConstantTerm);
    }
    let minus_v = v.neg().truncate(order);
    let mut power = minus_v.clone();
    let mut out = Expansion::zero(v.dim());
    while !power.is_zero() {
        out = out.add(&power);
        power = exp_mul(&power, &minus_v, order)?;
    }
    Ok(out)
}

/// `V` with `(delta + U)(delta + V) = delta` up to `sigma < -order`, via the
/// Neumann series `sum_{k>=1} (-U)^k`.
pub fn metric_inverse(u: &ExpMatrix, order: i64) -> Result<ExpMatrix> {
    if u.max_sigma().is_some_and(|s| s >= 0) {
        return Err(Error::ConstantTerm);
    }
    let minus_u = u.neg().truncate(order);
    let symmetric = u.is_symmetric();
    let mut power = minus_u.clone();
    let mut out = ExpMatrix::zero(u.dim());
    while !power.is_zero() {
        out = out.add(&power);
        power = if symmetric { power.mul_symmetric(&minus_u, order) } else { power.mul(&minus_u, order) };
    }
    Ok(out)
}

fn laplace_det(g: &ExpMatrix, rows: &[usize], cols: &[usize], order: i64) -> Result<Expansion> {
    let n = g.dim();
    if rows.is_empty() {
        return Ok(Expansion::one(n));
    }
    let (r, rest) = (rows[0], &rows[1..]);
    let mut out = Expansion::zero(n);
    for (pos, &c) in cols.iter().enumerate() {
        let a = g.get(r, c);
        if a.is_zero() {
            continue;
        }
        let others: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace_det(g, rest, &others, order)?;
        let term = exp_mul(a, &minor, order)?;
        out = if pos % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    Ok(out)
}

/// Inverse through the adjugate, `g^{ij} = A^{ij} / det g`, with the
/// determinant written as `1 + c` and `1 / (1 + c)` expanded as a geometric
/// series. Independent of [`metric_inverse`] and much slower; meant as a
/// cross-check.
pub fn adjugate_inverse(u: &ExpMatrix, order: i64) -> Result<ExpMatrix> {
    if u.max_sigma().is_some_and(|s| s >= 0) {
        return Err(Error::ConstantTerm);
    }
    let n = u.dim();
    let g = ExpMatrix::from_fn(n, |i, j| {
        let e = u.get(i, j).truncate(order);
        if i == j { e.add(&Expansion::one(n)) } else { e }
    });
    let all: Vec<usize> = (0..n).collect();
    let det = laplace_det(&g, &all, &all, order)?;
    let inv_det = Expansion::one(n).add(&reciprocal(&det.sub(&Expansion::one(n)), order)?);
    let mut out = ExpMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            // A^{ij} is the (j, i) cofactor
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
            let mut cof = laplace_det(&g, &rows, &cols, order)?;
            if (i + j) % 2 == 1 {
                cof = cof.neg();
            }
            let mut entry = exp_mul(&cof, &inv_det, order)?;
            if i == j {
                entry = entry.sub(&Expansion::one(n));
            }
            out.set(i, j, entry);
        }
    }
    Ok(out)
}
