//! Christoffel symbols, the quadratic term `Q_ij` and the right-hand side of
//! the reduced equation `Delta_g g_ij = Q_ij(g, dg)` in harmonic coordinates,
//! all on truncated expansions.

use num_traits::One;
use rayon::prelude::*;

use crate::error::Result;
use crate::expansion::{exp_diff, Accumulator, Expansion};
use crate::rational::{frac, int, Rational};

use super::{metric_inverse, ExpMatrix};

/// `[d_0 M, ..., d_{n-1} M]` for a symmetric matrix `M`.
pub fn matrix_partials(m: &ExpMatrix) -> Vec<ExpMatrix> {
    (0..m.dim())
        .map(|a| ExpMatrix::symmetric_from_fn(m.dim(), |i, j| exp_diff(m.get(i, j), a).expect("axis in range")))
        .collect()
}

/// Rank-3 array of expansions indexed `[a][b][c]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<Expansion>,
}

impl Tensor3 {
    fn build(n: usize, f: impl Fn(usize, usize, usize) -> Expansion + Sync) -> Self {
        let data = (0..n * n * n).into_par_iter().map(|idx| f(idx / (n * n), (idx / n) % n, idx % n)).collect();
        Self { n, data }
    }

    /// Builds a tensor symmetric in its last two indices.
    fn build_sym(n: usize, f: impl Fn(usize, usize, usize) -> Expansion + Sync) -> Self {
        let triples: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|a| (0..n).flat_map(move |b| (b..n).map(move |c| (a, b, c)))).collect();
        let values: Vec<Expansion> = triples.par_iter().map(|&(a, b, c)| f(a, b, c)).collect();
        let mut data = vec![Expansion::zero(n); n * n * n];
        for ((a, b, c), e) in triples.into_iter().zip(values) {
            data[(a * n + c) * n + b] = e.clone();
            data[(a * n + b) * n + c] = e;
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Expansion {
        &self.data[(a * self.n + b) * self.n + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expansion::is_zero)
    }

    pub fn max_sigma(&self) -> Option<i64> {
        self.data.iter().filter_map(Expansion::max_sigma).max()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), &Expansion)> + '_ {
        let n = self.n;
        self.data.iter().enumerate().map(move |(idx, e)| ((idx / (n * n), (idx / n) % n, idx % n), e))
    }
}

/// Christoffel symbols of the first kind `L[m][p][r] = g_mk Gamma^k_pr`
/// and of the second kind `Gamma[k][p][r]`.
#[derive(Clone)]
pub struct Christoffel {
    pub first: Tensor3,
    pub second: Tensor3,
}

/// `L_{m,pr} = (d_r U_pm + d_p U_mr - d_m U_pr) / 2`.
pub fn christoffel_first(du: &[ExpMatrix]) -> Tensor3 {
    let n = du.len();
    let half = frac(1, 2);
    Tensor3::build_sym(n, |m, p, r| {
        let mut e = du[r].get(p, m).add(du[p].get(m, r));
        e = e.sub(du[m].get(p, r));
        e.scale(&half)
    })
}

/// `Gamma^k_pr = g^{km} L_{m,pr} = L_{k,pr} + V^{km} L_{m,pr}` with
/// `V = g^{-1} - delta`.
pub fn christoffel(v: &ExpMatrix, du: &[ExpMatrix], order: i64) -> Christoffel {
    let first = christoffel_first(du);
    let n = v.dim();
    let one = Rational::one();
    let second = Tensor3::build_sym(n, |k, p, r| {
        let mut acc = Accumulator::truncated(n, order);
        acc.add_expansion(first.get(k, p, r), &one);
        for m in 0..n {
            acc.add_product(v.get(k, m), first.get(m, p, r), &one);
        }
        acc.finish()
    });
    Christoffel { first, second }
}

/// `Q_ij = -g^{pq} g_lj d_p g_ik d_q g^{kl} - 2 g^{pq} g^{rs} L_{i,pr} L_{j,qs}`
/// with `L_{i,pr} = g_ik Gamma^k_pr`.
pub fn q_term(u: &ExpMatrix, v: &ExpMatrix, du: &[ExpMatrix], dv: &[ExpMatrix], first: &Tensor3, order: i64) -> ExpMatrix {
    let n = u.dim();
    let one = Rational::one();
    let minus_one = int(-1);

    // D[i][k][q] = g^{pq} d_p U_ik
    let d = Tensor3::build(n, |i, k, q| {
        let mut acc = Accumulator::truncated(n, order);
        acc.add_expansion(du[q].get(i, k), &one);
        for (p, dup) in du.iter().enumerate() {
            acc.add_product(v.get(p, q), dup.get(i, k), &one);
        }
        acc.finish()
    });
    // Y[i][l] = D[i][k][q] d_q V^{kl}
    let y = ExpMatrix::par_from_fn(n, |i, l| {
        let mut acc = Accumulator::truncated(n, order);
        for k in 0..n {
            for (q, dvq) in dv.iter().enumerate() {
                acc.add_product(d.get(i, k, q), dvq.get(k, l), &one);
            }
        }
        acc.finish()
    });
    // M[i][q][r] = g^{pq} L_{i,pr}
    let m = Tensor3::build(n, |i, q, r| {
        let mut acc = Accumulator::truncated(n, order);
        acc.add_expansion(first.get(i, q, r), &one);
        for p in 0..n {
            acc.add_product(v.get(p, q), first.get(i, p, r), &one);
        }
        acc.finish()
    });
    // N[i][q][s] = g^{rs} M[i][q][r]
    let nn = Tensor3::build(n, |i, q, s| {
        let mut acc = Accumulator::truncated(n, order);
        acc.add_expansion(m.get(i, q, s), &one);
        for r in 0..n {
            acc.add_product(v.get(r, s), m.get(i, q, r), &one);
        }
        acc.finish()
    });
    let minus_two = int(-2);
    ExpMatrix::par_from_fn(n, |i, j| {
        let mut acc = Accumulator::truncated(n, order);
        // Q1 = -(Y_ij + Y_il U_lj)
        acc.add_expansion(y.get(i, j), &minus_one);
        for l in 0..n {
            acc.add_product(y.get(i, l), u.get(l, j), &minus_one);
        }
        // Q2 = -2 N[i][q][s] L_{j,qs}
        for q in 0..n {
            for s in 0..n {
                acc.add_product(nn.get(i, q, s), first.get(j, q, s), &minus_two);
            }
        }
        acc.finish()
    })
}

/// Everything derived from `U` that the right-hand side needs.
pub struct Fields {
    pub u: ExpMatrix,
    pub v: ExpMatrix,
    pub du: Vec<ExpMatrix>,
    pub dv: Vec<ExpMatrix>,
    pub first: Tensor3,
    pub order: i64,
}

impl Fields {
    pub fn new(u: &ExpMatrix, order: i64) -> Result<Self> {
        let u = u.truncate(order);
        let v = metric_inverse(&u, order)?;
        let du = matrix_partials(&u);
        let dv = matrix_partials(&v);
        let first = christoffel_first(&du);
        Ok(Self { u, v, du, dv, first, order })
    }

    pub fn christoffel(&self) -> Christoffel {
        christoffel(&self.v, &self.du, self.order)
    }

    pub fn q_term(&self) -> ExpMatrix {
        q_term(&self.u, &self.v, &self.du, &self.dv, &self.first, self.order)
    }

    /// `RHS_ij = -V^{kl} d_k d_l U_ij + Q_ij`.
    pub fn rhs(&self) -> ExpMatrix {
        let n = self.u.dim();
        let q = self.q_term();
        let ddu: Vec<ExpMatrix> = (0..n * n)
            .map(|idx| {
                let (k, l) = (idx / n, idx % n);
                if k <= l {
                    ExpMatrix::symmetric_from_fn(n, |i, j| exp_diff(self.du[k].get(i, j), l).expect("axis in range"))
                } else {
                    ExpMatrix::zero(n)
                }
            })
            .collect();
        let one = Rational::one();
        let minus_one = int(-1);
        let minus_two = int(-2);
        ExpMatrix::par_from_fn(n, |i, j| {
            let mut acc = Accumulator::truncated(n, self.order);
            acc.add_expansion(q.get(i, j), &one);
            for k in 0..n {
                for l in k..n {
                    let c = if k == l { &minus_one } else { &minus_two };
                    acc.add_product(self.v.get(k, l), ddu[k * n + l].get(i, j), c);
                }
            }
            acc.finish()
        })
    }

    /// `sum_ij g^{ij} Gamma^k_ij` for each `k`.
    pub fn gauge(&self) -> Vec<Expansion> {
        let n = self.u.dim();
        let chr = self.christoffel();
        let one = Rational::one();
        (0..n)
            .into_par_iter()
            .map(|k| {
                let mut acc = Accumulator::truncated(n, self.order);
                for i in 0..n {
                    acc.add_expansion(chr.second.get(k, i, i), &one);
                    for j in 0..n {
                        acc.add_product(self.v.get(i, j), chr.second.get(k, i, j), &one);
                    }
                }
                acc.finish()
            })
            .collect()
    }
}

/// Right-hand side of the reduced equation, every product truncated at `order`.
pub fn rhs(u: &ExpMatrix, order: i64) -> Result<ExpMatrix> {
    Ok(Fields::new(u, order)?.rhs())
}

/// `exp_laplacian(U_ij) - RHS_ij`, truncated at `order + 2`.
pub fn symbolic_residual(u: &ExpMatrix, order: i64) -> Result<ExpMatrix> {
    let r = rhs(u, order + 2)?;
    let lap = u.map(crate::expansion::exp_laplacian);
    Ok(lap.sub(&r).truncate(order + 2))
}

/// Harmonic-gauge defect `sum_ij g^{ij} Gamma^k_ij`, truncated at `order + 1`.
pub fn gauge_residual(u: &ExpMatrix, order: i64) -> Result<Vec<Expansion>> {
    Ok(Fields::new(u, order + 1)?.gauge())
}
