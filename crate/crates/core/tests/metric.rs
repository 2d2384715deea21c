mod common;

use alexpand::expansion::{exp_laplacian, exp_mul, membership_ttilde, product_witness_t};
use alexpand::metric::{
    adjugate_inverse, bootstrap_step, gauge_residual, metric_inverse, reciprocal, rhs, run_bootstrap,
    symbolic_residual, BootstrapOptions, BootstrapState, ExpMatrix, Fields, SeedData,
};
use alexpand::poly::{HarmonicPoly, Poly};
use alexpand::random::{random_harmonic, random_member, random_seeds, random_state};
use alexpand::rational::{frac, int};
use alexpand::{Error, Expansion};
use common::{harm, rng, x};

fn single_seed(n: usize) -> SeedData {
    let mut s = SeedData::new(n);
    s.insert(1, 0, 0, harm(x(n, 0).scale(&frac(3, 2)))).unwrap();
    s
}

fn run(n: usize, q: i64, seeds: &SeedData) -> ExpMatrix {
    run_bootstrap(n, q, seeds, &BootstrapOptions::default()).unwrap().0
}

fn leading(m: &ExpMatrix) -> Option<i64> {
    m.max_sigma()
}

#[test]
fn reciprocal_round_trip() {
    let mut g = rng(3);
    for n in [4, 5] {
        let v = random_member(&mut g, n, 2).add(&random_member(&mut g, n, 2));
        let w = reciprocal(&v, 12).unwrap();
        let one = Expansion::one(n);
        assert_eq!(exp_mul(&one.add(&v), &one.add(&w), 12).unwrap(), one);
    }
    assert!(matches!(reciprocal(&Expansion::radial(5, int(1), 1, 0), 8), Err(Error::ConstantTerm)));
}

#[test]
fn inverse_matches_adjugate_oracle() {
    let mut g = rng(17);
    for trial in 0..8 {
        let n = 4 + trial % 2;
        let order = 8 + (trial as i64 % 5);
        let u = random_state(&mut g, n, order);
        let v = metric_inverse(&u, order).unwrap();
        assert_eq!(v, adjugate_inverse(&u, order).unwrap(), "trial {trial}");
        assert!(v.is_symmetric());
    }
}

#[test]
fn christoffel_examples() {
    let n = 5;
    let flat = Fields::new(&ExpMatrix::zero(n), 10).unwrap();
    assert!(flat.christoffel().second.is_zero());

    let u = single_seed(n).metric_upto(4);
    let chr = Fields::new(&u, 12).unwrap().christoffel();
    let nonzero: Vec<_> = chr.second.iter().filter(|(_, e)| !e.is_zero()).collect();
    assert!(!nonzero.is_empty());
    assert!(nonzero.iter().all(|(_, e)| e.max_sigma() == Some(-5)));

    let mut g = rng(5);
    let u = random_state(&mut g, 4, 8);
    let chr = Fields::new(&u, 8).unwrap().christoffel();
    for k in 0..4 {
        for p in 0..4 {
            for r in 0..4 {
                assert_eq!(chr.second.get(k, p, r), chr.second.get(k, r, p));
            }
        }
    }
}

#[test]
fn q_term_and_rhs_examples() {
    let n = 5;
    assert!(Fields::new(&ExpMatrix::zero(n), 12).unwrap().q_term().is_zero());
    assert!(rhs(&ExpMatrix::zero(n), 12).unwrap().is_zero());

    let u = single_seed(n).metric_upto(4);
    let f = Fields::new(&u, 14).unwrap();
    assert_eq!(leading(&f.q_term()), Some(-10));
    assert_eq!(leading(&f.rhs()), Some(-10));

    let mut g = rng(9);
    let u = random_state(&mut g, 5, 10);
    let f = Fields::new(&u, 12).unwrap();
    assert!(f.q_term().is_symmetric());
    let r = f.rhs();
    assert!(r.is_symmetric());
    assert!(leading(&r).is_none_or(|s| s <= -2 * n as i64));
}

#[test]
fn rhs_of_seeded_state_is_a_product_of_members() {
    let n = 5;
    let mut g = rng(21);
    let seeds = random_seeds(&mut g, n, 1..=2, 3);
    let u = run(n, 8, &seeds);
    let r = rhs(&u, 14).unwrap();
    for (_, _, e) in r.upper() {
        for (k, _) in e.groups() {
            assert!(product_witness_t(*k, n).unwrap().is_some(), "{k:?}");
        }
    }
}

#[test]
fn flat_metric_is_a_fixed_point() {
    let seeds = SeedData::new(5);
    let s0 = BootstrapState::initial(5, 12, &seeds).unwrap();
    let s1 = bootstrap_step(&s0, &seeds, &BootstrapOptions::default()).unwrap();
    assert!(s1.metric.is_zero());
    assert_eq!(s1.certified, 8);
    assert!(symbolic_residual(&ExpMatrix::zero(5), 12).unwrap().is_zero());
    assert!(gauge_residual(&ExpMatrix::zero(5), 12).unwrap().iter().all(Expansion::is_zero));
}

#[test]
fn first_step_corrections_sit_at_minus_eight() {
    let n = 5;
    let seeds = single_seed(n);
    let s0 = BootstrapState::initial(n, 8, &seeds).unwrap();
    let s1 = bootstrap_step(&s0, &seeds, &BootstrapOptions::default()).unwrap();
    let correction = s1.metric.sub(&s0.metric);
    assert!(!correction.is_zero());
    for (_, _, e) in correction.upper() {
        assert!(e.groups().all(|(k, _)| k.sigma == -8));
    }
    assert!(symbolic_residual(&s1.metric, 8).unwrap().is_zero());
}

#[test]
fn target_n_minus_one_returns_level_one_seeds() {
    let n = 5;
    let mut g = rng(2);
    let seeds = random_seeds(&mut g, n, 1..=3, 2);
    assert_eq!(run(n, 4, &seeds), seeds.metric_upto(4));
    assert!(matches!(
        run_bootstrap(n, 3, &seeds, &BootstrapOptions::default()),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn every_stage_is_certified() {
    let n = 5;
    let mut g = rng(33);
    let seeds = random_seeds(&mut g, n, 1..=3, 2);
    let opts = BootstrapOptions::default();
    let mut state = BootstrapState::initial(n, 12, &seeds).unwrap();
    assert!(symbolic_residual(&state.metric, state.certified).unwrap().is_zero());
    while !state.is_done() {
        state = bootstrap_step(&state, &seeds, &opts).unwrap();
        assert!(symbolic_residual(&state.metric, state.certified).unwrap().is_zero(), "q = {}", state.certified);
    }
    assert_eq!(state.certified, 12);
}

#[test]
fn single_seed_run_passes_its_audit() {
    let n = 5;
    let (u, report) = run_bootstrap(n, 12, &single_seed(n), &BootstrapOptions::default()).unwrap();
    assert!(report.all_passed(), "{:?}", report.failed());
    let early = u.truncate(2 * n as i64 - 3);
    assert!(early.upper().all(|(_, _, e)| exp_laplacian(e).is_zero()));
    assert_eq!(u.max_logpow(), 0);
    assert!(report.stages.iter().all(|s| s.wall_ms.is_none()));
}

#[test]
fn mutation_is_detected_at_its_order() {
    let n = 5;
    let q = 8;
    let mut g = rng(41);
    let seeds = random_seeds(&mut g, n, 1..=2, 2);
    let u = run(n, q, &seeds);
    let mut checked = 0;
    for (i, j, e) in u.upper() {
        for (idx, t) in e.terms().iter().enumerate() {
            if exp_laplacian(&t.to_expansion()).is_zero() {
                continue;
            }
            let mut terms = e.terms();
            let c = terms[idx].coeff() * &frac(1001, 1000);
            terms[idx].set_coeff(c);
            let mut bad = u.clone();
            bad.set_symmetric(i, j, Expansion::from_terms(n, terms).unwrap());
            let res = symbolic_residual(&bad, q).unwrap();
            assert!(res.get(i, j).groups().any(|(k, _)| k.sigma == t.sigma() - 2), "({i}, {j}) {t}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn log_terms_appear_in_dimension_four() {
    let n = 4;
    let mut seeds = SeedData::new(n);
    for (i, j) in [(0, 0), (0, 1), (1, 1), (2, 3)] {
        seeds.insert(1, i, j, harm(&x(n, i) + &x(n, j))).unwrap();
    }
    seeds.insert(2, 0, 2, harm(&x(n, 0) * &x(n, 1))).unwrap();
    let (u, report) =
        run_bootstrap(n, 9, &seeds, &BootstrapOptions { max_logpow: Some(4), timing: false }).unwrap();
    assert!(u.max_logpow() >= 1);
    assert!(report.exceptional_solves > 0);
    assert!(!report.log_terms.is_empty());
    for (_, _, e) in u.upper() {
        assert!(e.groups().all(|(k, _)| membership_ttilde(*k, 4).unwrap().is_some()));
    }
    assert!(report.all_passed(), "{:?}", report.failed());
    let guard = run_bootstrap(n, 9, &seeds, &BootstrapOptions { max_logpow: Some(0), timing: false });
    assert!(matches!(guard, Err(Error::LogDepthExceeded { .. })));
}

#[test]
fn no_logs_in_dimension_six() {
    let n = 6;
    let mut g = rng(6);
    let seeds = random_seeds(&mut g, n, 1..=2, 2);
    let (u, report) = run_bootstrap(n, 10, &seeds, &BootstrapOptions::default()).unwrap();
    assert_eq!(u.max_logpow(), 0);
    assert_eq!(report.exceptional_solves, 0);
    assert!(report.all_passed(), "{:?}", report.failed());
}

// U_ij = d_i xi_j + d_j xi_i with xi_j = c_j r^{2-n} solves the linearized
// gauge condition, so the defect starts at quadratic order.
#[test]
fn gauge_seed_has_subleading_defect() {
    let n = 5;
    let c = [1, -2, 0, 3, 1];
    let mut seeds = SeedData::new(n);
    for i in 0..n {
        for j in i..n {
            let h = &x(n, i).scale(&int(c[j])) + &x(n, j).scale(&int(c[i]));
            if h.is_zero() {
                continue;
            }
            seeds.insert(1, i, j, harm(h.scale(&int(2 - n as i64)))).unwrap();
        }
    }
    let u = run(n, 8, &seeds);
    let gauge = gauge_residual(&u, 8).unwrap();
    assert!(gauge.iter().all(|e| e.max_sigma().is_none_or(|s| s < -(n as i64))));

    let generic = single_seed(n).metric_upto(4);
    let gauge = gauge_residual(&generic, 8).unwrap();
    assert!(gauge.iter().any(|e| e.max_sigma() == Some(-(n as i64))));
}

#[test]
fn seed_validation() {
    let mut s = SeedData::new(5);
    let xy = HarmonicPoly::new(&x(5, 0) * &x(5, 1), 2).unwrap();
    assert!(matches!(s.insert(1, 0, 1, xy), Err(Error::DegreeMismatch { .. })));
    assert!(HarmonicPoly::new(&x(5, 0) * &x(5, 0), 2).is_err());
    let mut g = rng(1);
    let h = random_harmonic(&mut g, 5, 1);
    assert!(s.insert(1, 0, 7, h).is_err());
    assert!(s.insert(0, 0, 0, HarmonicPoly::new(Poly::one(5), 0).unwrap()).is_err());
}
