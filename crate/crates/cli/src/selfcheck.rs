//! Randomized consistency checks of the engine, seeded for reproducibility.

use alexpand::expansion::{exp_diff, exp_laplacian, exp_mul, laplacian_via_partials, membership_t, membership_ttilde};
use alexpand::kelvin::kelvin_expansion;
use alexpand::metric::{adjugate_inverse, metric_inverse};
use alexpand::poisson::solve_expansion;
use alexpand::poly::{harmonic_decompose, reassemble};
use alexpand::random::{random_homogeneous, random_member, random_state, random_t_key, random_term, random_ttilde_key};
use alexpand::Expansion;
use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn count<R: Rng>(rng: &mut R, trials: usize, mut f: impl FnMut(&mut R) -> Result<bool>) -> Result<usize> {
    let mut failures = 0;
    for _ in 0..trials {
        if !f(rng)? {
            failures += 1;
        }
    }
    Ok(failures)
}

fn members(e: &Expansion, n: usize) -> Result<bool> {
    for (k, _) in e.groups() {
        let found = if n == 4 { membership_ttilde(*k, n)?.is_some() } else { membership_t(*k, n)?.is_some() };
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs every check `trials` times with an RNG seeded from `seed`.
pub fn selfcheck(trials: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let failures = count(&mut rng, trials, |g| {
        let n = g.random_range(4..=6);
        let k = g.random_range(0..=8);
        let p = random_homogeneous(g, n, k, 8);
        let comps = harmonic_decompose(&p, k)?;
        Ok(reassemble(n, &comps) == p && comps.iter().all(|c| c.harmonic.poly().laplacian().is_zero()))
    })?;
    out.push(CheckResult { name: "harmonic_decomposition", trials, failures });

    let failures = count(&mut rng, trials, |g| {
        let n = g.random_range(4..=6);
        let exceptional = g.random_bool(0.3);
        let key = if n == 4 { random_ttilde_key(g, 4, exceptional) } else { random_t_key(g, n, 4) };
        let t = random_term(g, n, key);
        Ok(exp_laplacian(&solve_expansion(&t)?) == t)
    })?;
    out.push(CheckResult { name: "poisson_round_trip", trials, failures });

    let failures = count(&mut rng, trials, |g| {
        let n = g.random_range(4..=6);
        let a = random_member(g, n, 3);
        let b = random_member(g, n, 3);
        let axis = g.random_range(0..n);
        Ok(members(&exp_mul(&a, &b, 60)?, n)? && members(&exp_diff(&a, axis)?, n)?)
    })?;
    out.push(CheckResult { name: "closure", trials, failures });

    let failures = count(&mut rng, trials, |g| {
        let n = g.random_range(4..=6);
        let a = random_member(g, n, 3).add(&random_member(g, n, 3));
        Ok(exp_laplacian(&a) == laplacian_via_partials(&a)?)
    })?;
    out.push(CheckResult { name: "laplacian_consistency", trials, failures });

    let failures = count(&mut rng, trials, |g| {
        let n = g.random_range(5..=6);
        let a = random_member(g, n, 3);
        Ok(kelvin_expansion(&kelvin_expansion(&a)?)? == a)
    })?;
    out.push(CheckResult { name: "kelvin_involution", trials, failures });

    let inverse_trials = trials.div_ceil(10);
    let failures = count(&mut rng, inverse_trials, |g| {
        let n = g.random_range(4..=5);
        let order = g.random_range(n as i64..=10);
        let u = random_state(g, n, order);
        Ok(metric_inverse(&u, order)? == adjugate_inverse(&u, order)?)
    })?;
    out.push(CheckResult { name: "inverse_oracle", trials: inverse_trials, failures });

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let a = selfcheck(5, 42).unwrap();
        assert!(a.iter().all(CheckResult::passed));
        assert_eq!(a, selfcheck(5, 42).unwrap());
    }
}
