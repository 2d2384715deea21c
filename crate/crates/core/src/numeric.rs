//! Floating-point evaluation of expansions and numeric checks of the
//! reduced Ricci-flat equation.

use nalgebra::{Cholesky, DMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{exp_diff, Expansion};
use crate::metric::ExpMatrix;
use crate::poly::Monomial;

/// Samples with magnitude below this count as zero.
pub const NOISE_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug)]
struct CompiledGroup {
    sigma: i32,
    logpow: i32,
    monomials: Vec<(Monomial, f64)>,
}

/// An expansion flattened for fast `f64` evaluation. Harmonic parts are
/// evaluated on the unit vector `x / r`, which keeps the monomials of
/// order one.
#[derive(Clone, Debug)]
pub struct Compiled {
    dim: usize,
    groups: Vec<CompiledGroup>,
}

impl Compiled {
    pub fn new(e: &Expansion) -> Self {
        let groups = e
            .groups()
            .map(|(k, p)| CompiledGroup {
                sigma: k.sigma as i32,
                logpow: k.logpow as i32,
                monomials: p.iter().map(|(m, c)| (*m, c.to_f64())).collect(),
            })
            .collect();
        Self { dim: e.dim(), groups }
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    /// `sum c r^sigma (log r)^i h(x / r)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        if self.groups.is_empty() {
            return 0.0;
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
        let log = r.ln();
        self.groups
            .iter()
            .map(|g| {
                let h: f64 = g.monomials.iter().map(|(m, c)| c * m.eval(&unit)).sum();
                h * r.powi(g.sigma) * log.powi(g.logpow)
            })
            .sum()
    }
}

/// Double-precision value of `a` at `x`.
pub fn numeric_eval(a: &Expansion, x: &[f64]) -> f64 {
    Compiled::new(a).eval(x)
}

/// Radii and directions at which a decaying quantity is sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub radii: Vec<f64>,
    /// Nonzero vectors, normalized when a point is formed.
    pub directions: Vec<Vec<f64>>,
    /// Finite-difference step as a fraction of the radius.
    pub fd_ratio: f64,
}

impl SamplePlan {
    pub const DEFAULT_FD_RATIO: f64 = 1e-3;

    /// Radii 10, 20, 40, 80; coordinate axes plus the all-ones diagonal.
    pub fn default_for(n: usize) -> Self {
        Self { radii: vec![10.0, 20.0, 40.0, 80.0], directions: Self::default_directions(n), fd_ratio: Self::DEFAULT_FD_RATIO }
    }

    pub fn default_directions(n: usize) -> Vec<Vec<f64>> {
        let mut dirs: Vec<Vec<f64>> = (0..n)
            .map(|a| {
                let mut v = vec![0.0; n];
                v[a] = 1.0;
                v
            })
            .collect();
        dirs.push(vec![1.0; n]);
        dirs
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.radii.len() < 3 {
            return Err(Error::InvalidPlan("at least 3 radii are required".into()));
        }
        if self.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidPlan("radii must be positive".into()));
        }
        if self.radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPlan("radii must be strictly increasing".into()));
        }
        if self.directions.is_empty() {
            return Err(Error::InvalidPlan("no directions".into()));
        }
        for d in &self.directions {
            if d.len() != n {
                return Err(Error::InvalidPlan(format!("direction of length {} in dimension {n}", d.len())));
            }
            if d.iter().all(|v| *v == 0.0) || d.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidPlan("directions must be finite and nonzero".into()));
            }
        }
        if !(self.fd_ratio.is_finite() && self.fd_ratio > 0.0) {
            return Err(Error::InvalidPlan("fd_ratio must be positive".into()));
        }
        Ok(())
    }

    /// The point at `radius` along direction `dir`.
    pub fn point(&self, dir: usize, radius: f64) -> Vec<f64> {
        let d = &self.directions[dir];
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        d.iter().map(|v| v * radius / norm).collect()
    }
}

/// Result of a decay-slope estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlopeOutcome {
    /// Largest per-direction least-squares slope and the direction attaining it.
    Slope { slope: f64, direction: usize },
    /// Every sample was below [`NOISE_FLOOR`].
    IdenticallyZero,
}

/// Least-squares slope of `log |v|` against `log r`.
pub fn fit_slope(radii: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slope from precomputed samples `samples[direction][radius]`.
pub fn slope_from_samples(radii: &[f64], samples: &[Vec<f64>]) -> Result<SlopeOutcome> {
    let mut best: Option<(f64, usize)> = None;
    for (dir, vals) in samples.iter().enumerate() {
        let zeros = vals.iter().filter(|v| v.abs() < NOISE_FLOOR).count();
        if zeros == vals.len() {
            continue;
        }
        if zeros > 0 {
            return Err(Error::BelowNoiseFloor { direction: dir });
        }
        let s = fit_slope(radii, vals);
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, dir));
        }
    }
    Ok(match best {
        Some((slope, direction)) => SlopeOutcome::Slope { slope, direction },
        None => SlopeOutcome::IdenticallyZero,
    })
}

/// Samples `f` over the plan and returns the worst (largest) slope.
pub fn decay_slope(f: impl Fn(&[f64]) -> f64, plan: &SamplePlan) -> Result<SlopeOutcome> {
    let samples: Vec<Vec<f64>> = (0..plan.directions.len())
        .map(|d| plan.radii.iter().map(|&r| f(&plan.point(d, r))).collect())
        .collect();
    slope_from_samples(&plan.radii, &samples)
}

/// Compiled `U`, `d_a U` and `d_k d_l U` for numeric checks of
/// `Delta_g g_ij - Q_ij`.
pub struct ProxyEvaluator {
    n: usize,
    u: Vec<Compiled>,
    du: Vec<Compiled>,
    ddu: Vec<Compiled>,
}

/// Relative disagreement between symbolic and finite-difference derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdCheck {
    pub first: f64,
    pub second: f64,
    pub tolerance: f64,
}

impl FdCheck {
    pub fn passed(&self) -> bool {
        self.first <= self.tolerance && self.second <= self.tolerance
    }
}

impl ProxyEvaluator {
    pub fn new(u: &ExpMatrix) -> Self {
        let n = u.dim();
        let mut cu = Vec::with_capacity(n * n);
        let mut cdu = Vec::with_capacity(n * n * n);
        let mut cddu = Vec::with_capacity(n * n * n * n);
        let diff = |e: &Expansion, a: usize| exp_diff(e, a).expect("axis in range");
        for (_, _, e) in u.iter() {
            cu.push(Compiled::new(e));
        }
        let first: Vec<Vec<Expansion>> = (0..n).map(|a| u.iter().map(|(_, _, e)| diff(e, a)).collect()).collect();
        for row in &first {
            for e in row {
                cdu.push(Compiled::new(e));
            }
        }
        for k in 0..n {
            for l in 0..n {
                for e in &first[k] {
                    cddu.push(Compiled::new(&diff(e, l)));
                }
            }
        }
        Self { n, u: cu, du: cdu, ddu: cddu }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// `g = delta + U` at `x`.
    pub fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| self.u[self.idx(i, j)].eval(x) + if i == j { 1.0 } else { 0.0 })
    }

    /// Symbolic first derivatives `[a][i][j]` evaluated at `x`.
    pub fn first_derivatives(&self, x: &[f64]) -> Vec<f64> {
        self.du.iter().map(|c| c.eval(x)).collect()
    }

    /// Symbolic second derivatives `[k][l][i][j]` evaluated at `x`.
    pub fn second_derivatives(&self, x: &[f64]) -> Vec<f64> {
        self.ddu.iter().map(|c| c.eval(x)).collect()
    }

    /// `Delta_g g_ij - Q_ij` at `x` (a proxy for `-2 Ric_ij`).
    pub fn residual(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.n;
        let g = self.metric(x);
        let chol = Cholesky::new(g.clone()).ok_or(Error::NotPositiveDefinite)?;
        let gi = chol.inverse();
        let dg = self.first_derivatives(x);
        let ddg = self.second_derivatives(x);
        let d1 = |a: usize, i: usize, j: usize| dg[(a * n + i) * n + j];
        let d2 = |k: usize, l: usize, i: usize, j: usize| ddg[((k * n + l) * n + i) * n + j];

        // d_q g^{kl} = -g^{ka} d_q g_ab g^{bl}
        let mut dgi = vec![0.0; n * n * n];
        for q in 0..n {
            let dq = DMatrix::from_fn(n, n, |a, b| d1(q, a, b));
            let m = -(&gi * dq * &gi);
            for k in 0..n {
                for l in 0..n {
                    dgi[(q * n + k) * n + l] = m[(k, l)];
                }
            }
        }
        // first-kind symbols L_{m,pr}
        let lsym = |m: usize, p: usize, r: usize| 0.5 * (d1(r, p, m) + d1(p, m, r) - d1(m, p, r));
        let mut first = vec![0.0; n * n * n];
        for m in 0..n {
            for p in 0..n {
                for r in 0..n {
                    first[(m * n + p) * n + r] = lsym(m, p, r);
                }
            }
        }
        // M[i][q][s] = g^{pq} g^{rs} L_{i,pr}
        let mut mm = vec![0.0; n * n * n];
        for i in 0..n {
            for q in 0..n {
                for s in 0..n {
                    let mut acc = 0.0;
                    for p in 0..n {
                        for r in 0..n {
                            acc += gi[(p, q)] * gi[(r, s)] * first[(i * n + p) * n + r];
                        }
                    }
                    mm[(i * n + q) * n + s] = acc;
                }
            }
        }
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut lap = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        lap += gi[(k, l)] * d2(k, l, i, j);
                    }
                }
                let mut q1 = 0.0;
                for p in 0..n {
                    for q in 0..n {
                        for k in 0..n {
                            for l in 0..n {
                                q1 += gi[(p, q)] * g[(l, j)] * d1(p, i, k) * dgi[(q * n + k) * n + l];
                            }
                        }
                    }
                }
                let mut q2 = 0.0;
                for q in 0..n {
                    for s in 0..n {
                        q2 += mm[(i * n + q) * n + s] * first[(j * n + q) * n + s];
                    }
                }
                out[(i, j)] = lap - (-q1 - 2.0 * q2);
            }
        }
        Ok(out)
    }

    /// `max_ij |Delta_g g_ij - Q_ij|`.
    pub fn proxy(&self, x: &[f64]) -> Result<f64> {
        Ok(self.residual(x)?.iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    /// Compares the symbolic derivatives with fourth-order central
    /// differences using step `h = ratio * |x|`. Errors are relative to the
    /// largest symbolic value of each derivative tensor; the tolerance is
    /// `10 ratio^2`.
    pub fn fd_check(&self, x: &[f64], ratio: f64) -> FdCheck {
        let n = self.n;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = ratio * r;
        let shifted = |moves: &[(usize, f64)]| {
            let mut y = x.to_vec();
            for &(a, t) in moves {
                y[a] += t * h;
            }
            y
        };
        let stencil = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
        let mut first_err = 0.0f64;
        let mut first_max = 0.0f64;
        let mut second_err = 0.0f64;
        let mut second_max = 0.0f64;
        let sym1 = self.first_derivatives(x);
        let sym2 = self.second_derivatives(x);
        for i in 0..n {
            for j in i..n {
                let f = &self.u[self.idx(i, j)];
                let f0 = f.eval(x);
                for a in 0..n {
                    let fd: f64 = stencil.iter().map(|(t, w)| w * f.eval(&shifted(&[(a, *t)]))).sum::<f64>() / (12.0 * h);
                    let s = sym1[(a * n + i) * n + j];
                    first_err = first_err.max((fd - s).abs());
                    first_max = first_max.max(s.abs());
                }
                for k in 0..n {
                    for l in k..n {
                        let fd = if k == l {
                            let w = [(-2.0, -1.0), (-1.0, 16.0), (1.0, 16.0), (2.0, -1.0)];
                            (w.iter().map(|(t, c)| c * f.eval(&shifted(&[(k, *t)]))).sum::<f64>() - 30.0 * f0) / (12.0 * h * h)
                        } else {
                            let mut acc = 0.0;
                            for (tk, wk) in &stencil {
                                for (tl, wl) in &stencil {
                                    acc += wk * wl * f.eval(&shifted(&[(k, *tk), (l, *tl)]));
                                }
                            }
                            acc / (144.0 * h * h)
                        };
                        let s = sym2[((k * n + l) * n + i) * n + j];
                        second_err = second_err.max((fd - s).abs());
                        second_max = second_max.max(s.abs());
                    }
                }
            }
        }
        let rel = |err: f64, max: f64| if max > 0.0 { err / max } else { err };
        FdCheck { first: rel(first_err, first_max), second: rel(second_err, second_max), tolerance: 10.0 * ratio * ratio }
    }
}

/// Residual entries at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRow {
    pub direction: usize,
    pub r: f64,
    /// Upper triangle `(i, j, value)`, zero-based.
    pub entries: Vec<(usize, usize, f64)>,
    pub proxy: f64,
}

/// Evaluates the residual over every `(direction, radius)` of the plan.
/// Points are evaluated in parallel; rows come back direction-major in
/// plan order.
pub fn sample_residuals(ev: &ProxyEvaluator, plan: &SamplePlan) -> Result<Vec<SampleRow>> {
    let points: Vec<(usize, f64)> =
        (0..plan.directions.len()).flat_map(|d| plan.radii.iter().map(move |&r| (d, r))).collect();
    points
        .par_iter()
        .map(|&(direction, r)| {
            let m = ev.residual(&plan.point(direction, r))?;
            let n = ev.dim();
            let entries: Vec<(usize, usize, f64)> =
                (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| (i, j, m[(i, j)])).collect();
            let proxy = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            Ok(SampleRow { direction, r, entries, proxy })
        })
        .collect()
}

/// Slope of the proxy column of [`sample_residuals`] output.
pub fn proxy_slope(plan: &SamplePlan, rows: &[SampleRow]) -> Result<SlopeOutcome> {
    let k = plan.radii.len();
    let samples: Vec<Vec<f64>> = rows.chunks(k).map(|c| c.iter().map(|row| row.proxy).collect()).collect();
    slope_from_samples(&plan.radii, &samples)
}

/// `max_ij |Delta_g g_ij - Q_ij|` at `x` with derivatives taken exactly.
pub fn numeric_ricci_proxy(u: &ExpMatrix, x: &[f64]) -> Result<f64> {
    ProxyEvaluator::new(u).proxy(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{HarmonicPoly, Poly};
    use crate::rational::int;

    #[test]
    fn eval_examples() {
        let a = Expansion::radial(5, int(1), -4, 0);
        let mut x = vec![0.0; 5];
        x[0] = 10.0;
        assert!((numeric_eval(&a, &x) - 1e-4).abs() < 1e-18);
        let b = Expansion::harmonic(-4, 0, &HarmonicPoly::new(Poly::var(5, 0), 1).unwrap());
        assert!((numeric_eval(&b, &x) - 1e-4).abs() < 1e-18);
        let y = [3.0, -7.0, 2.0, 5.0, 11.0];
        let s = numeric_eval(&a.add(&b), &y);
        assert!((s - numeric_eval(&a, &y) - numeric_eval(&b, &y)).abs() <= 1e-12 * s.abs());
    }

    #[test]
    fn slope_examples() {
        let plan = SamplePlan { radii: vec![10.0, 20.0, 40.0, 80.0], directions: SamplePlan::default_directions(4), fd_ratio: 1e-3 };
        let r = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
        match decay_slope(|x| r(x).powi(-4), &plan).unwrap() {
            SlopeOutcome::Slope { slope, .. } => assert!((slope + 4.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let wide = SamplePlan { radii: vec![10.0, 30.0, 100.0], ..plan.clone() };
        match decay_slope(|x| r(x).powi(-4) * r(x).ln(), &wide).unwrap() {
            // local slope is -4 + 1/log r, so the fit sits well above -4
            SlopeOutcome::Slope { slope, .. } => assert!((slope + 3.6997561287796845).abs() < 1e-9, "{slope}"),
            other => panic!("{other:?}"),
        }
        assert_eq!(decay_slope(|_| 0.0, &plan).unwrap(), SlopeOutcome::IdenticallyZero);
        assert!(matches!(
            decay_slope(|x| if r(x) < 30.0 { 1.0 } else { 0.0 }, &plan),
            Err(Error::BelowNoiseFloor { .. })
        ));
    }

    #[test]
    fn plan_validation() {
        let mut p = SamplePlan::default_for(4);
        assert!(p.validate(4).is_ok());
        assert!(p.validate(5).is_err());
        p.radii = vec![10.0, 5.0, 20.0];
        assert!(p.validate(4).is_err());
        p.radii = vec![10.0, 20.0];
        assert!(p.validate(4).is_err());
    }

    #[test]
    fn flat_proxy_is_zero() {
        let x = [10.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(numeric_ricci_proxy(&ExpMatrix::zero(5), &x).unwrap(), 0.0);
    }
}
